import itertools
from functools import lru_cache

import pytest
from hypothesis import given, strategies as st

import denoiser as dn
from denoiser.errors import InvalidClassText
from denoiser.text import render_class_list


@lru_cache(maxsize=None)
def recursive_distance(a: str, b: str) -> int:
    """Oracle: direct recursion over all edit scripts."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        recursive_distance(a[1:], b[1:]) + (a[0] != b[0]),
        recursive_distance(a[1:], b) + 1,
        recursive_distance(a, b[1:]) + 1,
    )


class TestTokenize:
    def test_lowercases_and_splits_on_whitespace_runs(self):
        ct = dn.tokenize("Walking With A  Dog")
        assert ct.words == ("walking", "with", "a", "dog")

    def test_single_token(self):
        assert dn.tokenize("bird").words == ("bird",)

    def test_keeps_digits_and_punctuation_inside_tokens(self):
        ct = dn.tokenize("wal4ingm with a dog")
        assert ct.words == ("wal4ingm", "with", "a", "dog")

    @pytest.mark.parametrize("raw", ["", "   ", "\t\n"])
    def test_rejects_empty_input(self, raw):
        with pytest.raises(InvalidClassText):
            dn.tokenize(raw)

    def test_render_parse_round_trip(self):
        ct = dn.tokenize("baby  crawling\tfast", class_id=3)
        assert dn.tokenize(ct.render(), class_id=3) == ct

    def test_class_text_rejects_word_with_whitespace(self):
        with pytest.raises(InvalidClassText):
            dn.ClassText(0, ("two words",))

    def test_replace_word(self):
        ct = dn.tokenize("juggling balls")
        assert ct.replace_word(1, "ball").render() == "juggling ball"


class TestEditDistance:
    @pytest.mark.parametrize(
        "a,b,expected",
        [
            ("abc", "abc", 0),
            ("", "abc", 3),
            ("abc", "", 3),
            ("", "", 0),
        ],
    )
    def test_trivial_values(self, a, b, expected):
        assert dn.edit_distance(a, b) == expected

    def test_kitten_sitting_matches_recursion_oracle(self):
        assert recursive_distance("kitten", "sitting") == 3
        assert dn.edit_distance("kitten", "sitting") == 3

    def test_noisy_word_distance_matches_recursion_oracle(self):
        # one substitution plus one deletion
        assert recursive_distance("wal4ingm", "walking") == 2
        assert dn.edit_distance("wal4ingm", "walking") == 2

    def test_exhaustive_agreement_short_strings(self):
        strings = [
            "".join(t)
            for ln in range(0, 5)
            for t in itertools.product("ab", repeat=ln)
        ]
        for a in strings:
            for b in strings:
                assert dn.edit_distance(a, b) == recursive_distance(a, b)

    def test_unicode_scalar_values(self):
        assert dn.edit_distance("café", "cafe") == 1
        assert dn.edit_distance("世界", "世") == 1


words_strategy = st.text(alphabet="abcde", min_size=0, max_size=8)


@given(words_strategy, words_strategy)
def test_distance_is_symmetric_and_identity(a, b):
    d = dn.edit_distance(a, b)
    assert d == dn.edit_distance(b, a)
    assert (d == 0) == (a == b)


@given(words_strategy, words_strategy, words_strategy)
def test_triangle_inequality(a, b, c):
    assert dn.edit_distance(a, c) <= dn.edit_distance(a, b) + dn.edit_distance(b, c)


@given(words_strategy, words_strategy)
def test_length_bounds(a, b):
    d = dn.edit_distance(a, b)
    assert abs(len(a) - len(b)) <= d <= max(len(a), len(b), 0)


class TestClassListFiles:
    def test_read_skips_blanks_and_comments(self, tmp_path):
        f = tmp_path / "classes.txt"
        f.write_text("# header\n\nWalking with a dog\n\nbaby crawling\n# tail\n")
        texts = dn.read_class_list(f)
        assert [t.render() for t in texts] == ["walking with a dog", "baby crawling"]
        assert [t.class_id for t in texts] == [0, 1]

    def test_write_read_round_trip(self, tmp_path):
        texts = [dn.tokenize("bird", 0), dn.tokenize("juggling balls", 1)]
        f = tmp_path / "classes.txt"
        f.write_text(render_class_list(texts))
        assert dn.read_class_list(f) == texts
