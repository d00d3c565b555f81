import json

import numpy as np
import pytest

import denoiser as dn
from denoiser.errors import ConfigError, ShapeError
from denoiser.evaluate import CSV_COLUMNS, rows_to_csv, rows_to_json


def texts_from(*raws):
    return [dn.tokenize(raw, i) for i, raw in enumerate(raws)]


def tiny_world():
    clean = texts_from("bird", "board")
    provider = dn.LexiconEmbedder(seed=13, dimension=16)
    visuals = dn.generate_world(clean, provider, m=4, sigma=0.05, seed=2)
    corpus = dn.Corpus({"bird": 50, "board": 100, "cord": 5})
    return clean, provider, visuals, corpus


class TestTop1Accuracy:
    def test_all_correct(self):
        a = dn.Assignment((0, 1), (0, 1))
        assert dn.top1_accuracy(a, [0, 1]) == 100.0

    def test_none_correct(self):
        a = dn.Assignment((0, 1), (1, 0))
        assert dn.top1_accuracy(a, [0, 1]) == 0.0

    def test_mixed(self):
        a = dn.Assignment((0, 1, 2, 3), (0, 0, 2, 2))
        assert dn.top1_accuracy(a, [0, 1, 2, 3]) == 50.0

    def test_count_mismatch(self):
        with pytest.raises(ShapeError):
            dn.top1_accuracy(dn.Assignment((0,), (0,)), [0, 1])


class TestLabelAccuracy:
    def test_identical_lists(self):
        texts = texts_from("walking with a dog", "baby crawling")
        assert dn.label_accuracy(texts, texts) == 100.0

    def test_near_miss_counts_as_mismatch(self):
        pred = texts_from("juggling ball")
        truth = texts_from("juggling balls")
        assert dn.label_accuracy(pred, truth) == 0.0

    def test_half_right(self):
        pred = texts_from("bird", "juggling ball")
        truth = texts_from("bird", "juggling balls")
        assert dn.label_accuracy(pred, truth) == 50.0

    def test_casing_and_spacing_normalized_by_tokenizer(self):
        pred = [dn.tokenize("  Juggling   BALLS ", 0)]
        truth = [dn.tokenize("juggling balls", 0)]
        assert dn.label_accuracy(pred, truth) == 100.0

    def test_count_mismatch(self):
        with pytest.raises(ShapeError):
            dn.label_accuracy(texts_from("a"), texts_from("a", "b"))


class TestSemanticSimilarity:
    def test_identical_texts_score_100(self):
        provider = dn.LexiconEmbedder(seed=13, dimension=16)
        texts = texts_from("bird", "walking with a dog")
        assert dn.semantic_similarity(texts, texts, provider) == pytest.approx(100.0, abs=1e-4)

    def test_orthogonal_embeddings_score_zero(self):
        vecs = {"left": np.array([1.0, 0.0]), "right": np.array([0.0, 1.0])}
        provider = dn.StoreProvider(vecs, 2)
        assert dn.semantic_similarity(
            texts_from("left"), texts_from("right"), provider
        ) == pytest.approx(0.0, abs=1e-9)


class TestFrequencyBaseline:
    def test_in_corpus_words_unchanged(self):
        _, _, _, corpus = tiny_world()
        noisy = texts_from("bird board")
        assert dn.frequency_baseline(noisy, corpus) == noisy

    def test_frequency_wins_among_distance_ties(self):
        corpus = dn.Corpus({"bird": 50, "board": 100})
        out = dn.frequency_baseline(texts_from("boird"), corpus)
        assert out[0].render() == "board"

    def test_lexicographic_last_resort(self):
        corpus = dn.Corpus({"bat": 5, "cat": 5})
        out = dn.frequency_baseline(texts_from("hat"), corpus)
        assert out[0].render() == "bat"

    def test_every_word_gets_some_correction(self):
        _, _, _, corpus = tiny_world()
        out = dn.frequency_baseline(texts_from("zzzzzz qqq"), corpus)
        assert all(w in corpus.entries for w in out[0].words)


class TestReport:
    def test_full_report_fields(self):
        clean, provider, visuals, corpus = tiny_world()
        noisy = dn.perturb(clean, dn.NoiseSpec(p=0.3, kind="mixed", seed=1))
        denoised, _ = dn.run_denoiser(noisy, visuals, corpus, provider, dn.DecodeConfig(k=2))
        report = dn.build_report(denoised, clean, provider, visuals, noisy=noisy)
        data = report.to_dict()
        assert 0 <= data["label_acc"] <= 100
        assert 0 <= data["top1_after"] <= 100
        assert data["realized_noise_rate"] > 0
        assert len(data["per_class"]) == len(clean)
        assert {row["class_id"] for row in data["per_class"]} == {0, 1}

    def test_report_validates_against_shipped_schema(self):
        jsonschema = pytest.importorskip("jsonschema")
        from denoiser.corpus import default_lexicon_path

        schema_path = default_lexicon_path().parent.parent / "schemas" / "report.schema.json"
        schema = json.loads(schema_path.read_text())
        clean, provider, visuals, corpus = tiny_world()
        noisy = dn.perturb(clean, dn.NoiseSpec(p=0.3, kind="mixed", seed=1))
        denoised, _ = dn.run_denoiser(noisy, visuals, corpus, provider, dn.DecodeConfig(k=2))
        report = dn.build_report(denoised, clean, provider, visuals, noisy=noisy)
        jsonschema.validate(json.loads(report.to_json()), schema)


class TestSweep:
    def test_single_cell_matches_direct_run(self):
        clean, provider, visuals, corpus = tiny_world()
        grid = dn.SweepGrid(seeds=(9,), noise_kinds=("mixed",), rates=(0.3,), ks=(2,))
        rows = dn.sweep(clean, visuals, corpus, provider, grid)
        assert len(rows) == 1
        row = rows[0]

        noisy = dn.perturb(clean, dn.NoiseSpec(p=0.3, kind="mixed", seed=9))
        denoised, _ = dn.run_denoiser(noisy, visuals, corpus, provider, dn.DecodeConfig(k=2))
        truth = [s.true_class for s in visuals]
        assert row["label_acc"] == dn.label_accuracy(denoised, clean)
        assert row["top1_after"] == dn.top1_accuracy(
            dn.classify(visuals, denoised, provider), truth
        )
        assert row["realized_rate"] == dn.perturbation_rate(clean, noisy)

    def test_zero_rate_row_has_equal_before_after(self):
        clean, provider, visuals, corpus = tiny_world()
        grid = dn.SweepGrid(seeds=(5,), rates=(0.0,), ks=(2,))
        row = dn.sweep(clean, visuals, corpus, provider, grid)[0]
        assert row["top1_before"] == row["top1_after"]
        assert row["realized_rate"] == 0.0

    def test_grid_axes_multiply(self):
        clean, provider, visuals, corpus = tiny_world()
        grid = dn.SweepGrid(seeds=(1, 2), noise_kinds=("insert", "delete"), rates=(0.2,), ks=(2,))
        rows = dn.sweep(clean, visuals, corpus, provider, grid)
        assert len(rows) == 4
        assert [(r["world_seed"], r["noise_kind"]) for r in rows] == [
            (1, "insert"), (1, "delete"), (2, "insert"), (2, "delete"),
        ]

    def test_empty_axis_rejected(self):
        with pytest.raises(ConfigError):
            dn.SweepGrid(seeds=())

    def test_csv_layout_and_timing_scrub(self):
        clean, provider, visuals, corpus = tiny_world()
        grid = dn.SweepGrid(seeds=(1,), rates=(0.2,), ks=(2,))
        rows = dn.sweep(clean, visuals, corpus, provider, grid)
        assert rows[0]["wall_ms"] > 0  # measured in memory
        csv_text = rows_to_csv(rows)
        header, line = csv_text.strip().split("\n")
        assert header == ",".join(CSV_COLUMNS)
        assert line.endswith(",0")  # scrubbed for reproducibility
        with_timings = rows_to_csv(rows, include_timings=True)
        assert not with_timings.strip().split("\n")[1].endswith(",0")

    def test_outputs_reproducible_byte_for_byte(self):
        clean, provider, visuals, corpus = tiny_world()
        grid = dn.SweepGrid(seeds=(1, 2), rates=(0.2,), ks=(2,))
        a = dn.sweep(clean, visuals, corpus, provider, grid)
        b = dn.sweep(clean, visuals, corpus, provider, grid)
        assert rows_to_csv(a) == rows_to_csv(b)
        assert rows_to_json(a) == rows_to_json(b)
