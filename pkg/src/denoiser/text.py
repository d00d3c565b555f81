"""Class-text representation, tokenization and Levenshtein distance.

A class text is the short word sequence naming one class ("walking with
a dog"). Texts are normalized once at ingestion (NFC + lowercase) so that
edit distances are deterministic across platforms; tokens keep digits and
punctuation because those are legitimate character noise.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass
from pathlib import Path

from .errors import InvalidClassText


@dataclass(frozen=True)
class ClassText:
    """An ordered, non-empty sequence of lowercase word tokens."""

    class_id: int
    words: tuple[str, ...]

    def __post_init__(self):
        if not self.words:
            raise InvalidClassText("class text must contain at least one word")
        for w in self.words:
            if not w or any(ch.isspace() for ch in w):
                raise InvalidClassText(f"bad word token: {w!r}")

    @property
    def n_words(self) -> int:
        return len(self.words)

    def render(self) -> str:
        return " ".join(self.words)

    def replace_word(self, index: int, word: str) -> "ClassText":
        """New text with the word at 0-based ``index`` swapped out."""
        words = list(self.words)
        words[index] = word
        return ClassText(self.class_id, tuple(words))


@dataclass(frozen=True)
class WordCandidate:
    """A corpus word proposed as the correction of one noisy token."""

    word: str
    distance: int
    frequency: int


def normalize(raw: str) -> str:
    """NFC-normalize and lowercase; the single normalization used everywhere."""
    return unicodedata.normalize("NFC", raw).lower()


def tokenize(raw: str, class_id: int = 0) -> ClassText:
    """Split a raw description into a ClassText.

    Lowercases, splits on runs of whitespace, keeps punctuation and digits
    inside tokens. Raises InvalidClassText for empty/whitespace-only input.
    """
    words = normalize(raw).split()
    if not words:
        raise InvalidClassText(f"empty class description: {raw!r}")
    return ClassText(class_id, tuple(words))


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance with unit insert/delete/substitute costs.

    Two-row dynamic program over Unicode scalar values; no transpositions.
    """
    if a == b:
        return 0
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    if la > lb:
        a, b, la, lb = b, a, lb, la
    prev = list(range(la + 1))
    for i in range(1, lb + 1):
        cur = [i] + [0] * la
        cb = b[i - 1]
        for j in range(1, la + 1):
            cost = prev[j - 1]
            if a[j - 1] != cb:
                cost += 1
            up = prev[j] + 1
            if up < cost:
                cost = up
            left = cur[j - 1] + 1
            if left < cost:
                cost = left
            cur[j] = cost
        prev = cur
    return prev[la]


def read_class_list(path: str | Path) -> list[ClassText]:
    """Read a class-list file: one description per line, order is class_id.

    Blank lines and lines starting with '#' are ignored.
    """
    texts = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            stripped = line.strip()
            if not stripped or stripped.startswith("#"):
                continue
            texts.append(tokenize(stripped, class_id=len(texts)))
    return texts


def render_class_list(texts: list[ClassText]) -> str:
    return "".join(t.render() + "\n" for t in texts)
