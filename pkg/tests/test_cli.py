import json
from pathlib import Path

import pytest

import denoiser as dn
from denoiser.cli import main
from denoiser.text import render_class_list


CLASSES = "walking with a dog\nbaby crawling\njuggling balls\n"
CORPUS = (
    "walking\t30\nwith\t80\na\t90\ndog\t70\nbaby\t40\ncrawling\t20\n"
    "juggling\t10\nballs\t15\nball\t25\nbird\t50\nboard\t100\n"
)


@pytest.fixture
def classes_file(tmp_path):
    f = tmp_path / "classes.txt"
    f.write_text(CLASSES)
    return f


@pytest.fixture
def corpus_file(tmp_path):
    f = tmp_path / "corpus.tsv"
    f.write_text(CORPUS)
    return f


def gen_world(tmp_path, classes_file, sigma="0.1", extra=()):
    world = tmp_path / "world"
    rc = main(
        [
            "gen-world", "--classes", str(classes_file), "--out", str(world),
            "--samples-per-class", "5", "--sigma", sigma, "--dim", "32",
            "--embedder", "lexicon", "--seed", "4",
            *extra,
        ]
    )
    assert rc == 0
    return world


def read_bytes_map(root: Path) -> dict:
    return {p.name: p.read_bytes() for p in sorted(root.iterdir()) if p.is_file()}


class TestGenWorld:
    def test_writes_expected_files_and_counts(self, tmp_path, classes_file):
        world = gen_world(tmp_path, classes_file)
        assert (world / "classes.txt").read_text() == CLASSES.lower()
        records = (world / "visuals.jsonl").read_text().strip().split("\n")
        assert len(records) == 15  # 3 classes x 5 samples
        spec = json.loads((world / "provider.json").read_text())
        assert spec["embedder"] == "lexicon" and spec["dim"] == 32

    def test_rerun_is_byte_identical(self, tmp_path, classes_file):
        a = read_bytes_map(gen_world(tmp_path / "a", classes_file))
        b = read_bytes_map(gen_world(tmp_path / "b", classes_file))
        assert a == b

    def test_sigma_zero_visuals_equal_class_embeddings(self, tmp_path, classes_file):
        world = gen_world(tmp_path, classes_file, sigma="0")
        classes = dn.read_class_list(world / "classes.txt")
        provider = dn.LexiconEmbedder(seed=4, dimension=32)
        _, visuals = dn.load_embedding_store(world / "visuals.jsonl")
        for s in visuals:
            center = provider.encode_text(classes[s.true_class])
            assert s.vec.values == pytest.approx(center.values, abs=1e-12)

    def test_missing_classes_file_exits_2(self, tmp_path, capsys):
        rc = main(["gen-world", "--classes", str(tmp_path / "nope.txt"), "--out", str(tmp_path / "w")])
        assert rc == 2
        assert "error" in capsys.readouterr().err


class TestNoiseCommand:
    def test_zero_rate_reproduces_input_modulo_normalization(self, tmp_path, classes_file):
        out = tmp_path / "noisy.txt"
        rc = main(["noise", "--classes", str(classes_file), "--p", "0",
                   "--kind", "mixed", "--seed", "1", "--out", str(out)])
        assert rc == 0
        assert out.read_text() == CLASSES.lower()
        sidecar = json.loads((tmp_path / "noisy.txt.meta.json").read_text())
        assert sidecar["realized_rate"] == 0.0

    def test_seeded_run_is_frozen(self, tmp_path, classes_file):
        out = tmp_path / "noisy.txt"
        main(["noise", "--classes", str(classes_file), "--p", "0.2",
              "--kind", "mixed", "--seed", "42", "--out", str(out)])
        expected = dn.perturb(
            dn.read_class_list(classes_file), dn.NoiseSpec(p=0.2, kind="mixed", seed=42)
        )
        assert out.read_text() == render_class_list(expected)
        golden = Path(__file__).parent / "goldens" / "cli_noise_p20_seed42.txt"
        assert out.read_text() == golden.read_text()

    def test_rerun_is_byte_identical(self, tmp_path, classes_file):
        outs = []
        for name in ["a.txt", "b.txt"]:
            out = tmp_path / name
            main(["noise", "--classes", str(classes_file), "--p", "0.3",
                  "--kind", "insert", "--seed", "9", "--out", str(out)])
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_sidecar_tracks_realized_rate(self, tmp_path, classes_file):
        out = tmp_path / "noisy.txt"
        main(["noise", "--classes", str(classes_file), "--p", "0.3",
              "--kind", "substitute", "--seed", "3", "--out", str(out)])
        sidecar = json.loads((tmp_path / "noisy.txt.meta.json").read_text())
        assert 0 < sidecar["realized_rate"] < 1
        assert sidecar["spec"]["kind"] == "substitute"


class TestDenoiseCommand:
    def run_denoise(self, tmp_path, classes_file, corpus_file, extra=()):
        world = gen_world(tmp_path, classes_file)
        noisy = tmp_path / "noisy.txt"
        main(["noise", "--classes", str(classes_file), "--p", "0.1",
              "--kind", "mixed", "--seed", "42", "--out", str(noisy)])
        out = tmp_path / "run"
        rc = main(["denoise", "--noisy", str(noisy), "--corpus", str(corpus_file),
                   "--world", str(world), "--out", str(out), *extra])
        return rc, out

    def test_writes_all_outputs(self, tmp_path, classes_file, corpus_file):
        rc, out = self.run_denoise(tmp_path, classes_file, corpus_file)
        assert rc == 0
        assert (out / "denoised.txt").exists()
        trace = json.loads((out / "trace.json").read_text())
        assert trace["config"]["k"] == 10
        assert trace["config"]["schedule"] == "linear:0.01:1"
        report = json.loads((out / "report.json").read_text())
        assert report["label_acc"] is not None

    def test_missing_corpus_exits_2_without_outputs(self, tmp_path, classes_file, capsys):
        world = gen_world(tmp_path, classes_file)
        noisy = tmp_path / "noisy.txt"
        main(["noise", "--classes", str(classes_file), "--p", "0.1",
              "--kind", "mixed", "--seed", "1", "--out", str(noisy)])
        out = tmp_path / "run"
        rc = main(["denoise", "--noisy", str(noisy), "--corpus", str(tmp_path / "missing.tsv"),
                   "--world", str(world), "--out", str(out)])
        assert rc == 2
        assert not out.exists()

    def test_world_and_store_are_mutually_exclusive(self, tmp_path, classes_file, corpus_file):
        rc = main(["denoise", "--noisy", str(classes_file), "--corpus", str(corpus_file),
                   "--out", str(tmp_path / "x")])
        assert rc == 2

    def test_help_documents_default_settings(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["denoise", "--help"])
        assert exc.value.code == 0
        text = capsys.readouterr().out
        assert "linear:0.01:1" in text
        assert "default: 10" in text

    def test_intra_only_report_matches_sweep_cell(self, tmp_path, classes_file, corpus_file):
        world = gen_world(tmp_path, classes_file)
        noisy = tmp_path / "noisy.txt"
        main(["noise", "--classes", str(classes_file), "--p", "0.2",
              "--kind", "mixed", "--seed", "3", "--out", str(noisy)])
        out = tmp_path / "run"
        rc = main(["denoise", "--noisy", str(noisy), "--corpus", str(corpus_file),
                   "--world", str(world), "--weighting", "intra_only", "--k", "3",
                   "--out", str(out)])
        assert rc == 0
        report = json.loads((out / "report.json").read_text())

        grid = tmp_path / "grid.json"
        grid.write_text(json.dumps({
            "world": str(world), "corpus": str(corpus_file),
            "seeds": [3], "noise_kinds": ["mixed"], "rates": [0.2],
            "ks": [3], "weightings": ["intra_only"],
        }))
        sweep_out = tmp_path / "sweep"
        assert main(["sweep", "--grid", str(grid), "--out", str(sweep_out)]) == 0
        row = json.loads((sweep_out / "sweep.json").read_text())["rows"][0]
        assert row["label_acc"] == report["label_acc"]
        assert row["top1_after"] == report["top1_after"]
        assert row["semantic_similarity"] == report["semantic_similarity"]
        assert row["realized_rate"] == report["realized_noise_rate"]

    def test_store_mode_runs_when_store_covers_candidates(self, tmp_path, corpus_file):
        # one-class, one-word setup where every candidate text is stored
        import numpy as np

        rng = np.random.default_rng(0)
        texts = {}
        for word in ["bird", "board", "ball", "balls", "juggling", "walking",
                     "with", "a", "dog", "baby", "crawling", "boird"]:
            v = rng.standard_normal(8)
            texts[word] = v / np.linalg.norm(v)
        visuals = [
            dn.VisualSample(0, dn.EmbeddingVec(texts["bird"]), 0),
            dn.VisualSample(1, dn.EmbeddingVec(texts["bird"]), 0),
        ]
        store = tmp_path / "store.jsonl"
        dn.write_embedding_store(store, texts, visuals)
        noisy = tmp_path / "noisy.txt"
        noisy.write_text("boird\n")
        out = tmp_path / "run"
        rc = main(["denoise", "--noisy", str(noisy), "--corpus", str(corpus_file),
                   "--store", str(store), "--k", "2", "--out", str(out)])
        assert rc == 0
        assert (out / "denoised.txt").read_text() == "bird\n"
        assert not (out / "report.json").exists()  # no ground truth available


class TestEvalCommand:
    def test_perfect_prediction_scores_100(self, tmp_path, classes_file):
        world = gen_world(tmp_path, classes_file)
        report_path = tmp_path / "report.json"
        rc = main(["eval", "--pred", str(classes_file), "--truth", str(classes_file),
                   "--world", str(world), "--out", str(report_path)])
        assert rc == 0
        report = json.loads(report_path.read_text())
        assert report["label_acc"] == 100.0
        assert report["semantic_similarity"] == pytest.approx(100.0, abs=1e-4)

    def test_noisy_flag_fills_before_metrics(self, tmp_path, classes_file):
        world = gen_world(tmp_path, classes_file)
        noisy = tmp_path / "noisy.txt"
        main(["noise", "--classes", str(classes_file), "--p", "0.3",
              "--kind", "substitute", "--seed", "8", "--out", str(noisy)])
        report_path = tmp_path / "report.json"
        rc = main(["eval", "--pred", str(classes_file), "--truth", str(classes_file),
                   "--world", str(world), "--noisy", str(noisy), "--out", str(report_path)])
        assert rc == 0
        report = json.loads(report_path.read_text())
        assert report["top1_before"] is not None
        assert report["realized_noise_rate"] > 0

    def test_report_validates_against_schema_and_reruns_identically(self, tmp_path, classes_file):
        jsonschema = pytest.importorskip("jsonschema")
        world = gen_world(tmp_path, classes_file)
        outs = []
        for name in ["r1.json", "r2.json"]:
            path = tmp_path / name
            rc = main(["eval", "--pred", str(classes_file), "--truth", str(classes_file),
                       "--world", str(world), "--out", str(path)])
            assert rc == 0
            outs.append(path.read_bytes())
        assert outs[0] == outs[1]
        schema = json.loads(
            (Path(dn.__file__).parent / "schemas" / "report.schema.json").read_text()
        )
        jsonschema.validate(json.loads(outs[0]), schema)


class TestSweepCommand:
    def write_grid(self, tmp_path, world, corpus_file, **overrides):
        grid = {
            "world": str(world),
            "corpus": str(corpus_file),
            "seeds": [1],
            "noise_kinds": ["mixed"],
            "rates": [0.2],
            "ks": [2],
        }
        grid.update(overrides)
        path = tmp_path / "grid.json"
        path.write_text(json.dumps(grid))
        return path

    def test_single_cell_matches_direct_run(self, tmp_path, classes_file, corpus_file):
        world = gen_world(tmp_path, classes_file)
        grid = self.write_grid(tmp_path, world, corpus_file)
        out = tmp_path / "sweep"
        assert main(["sweep", "--grid", str(grid), "--out", str(out)]) == 0
        rows = json.loads((out / "sweep.json").read_text())["rows"]
        assert len(rows) == 1

        clean, provider, visuals = dn.cli.load_world(world)
        corpus = dn.load_corpus(corpus_file)
        noisy = dn.perturb(clean, dn.NoiseSpec(p=0.2, kind="mixed", seed=1))
        denoised, _ = dn.run_denoiser(noisy, visuals, corpus, provider, dn.DecodeConfig(k=2))
        assert rows[0]["label_acc"] == dn.label_accuracy(denoised, clean)

    def test_empty_grid_exits_2(self, tmp_path, classes_file, corpus_file):
        world = gen_world(tmp_path, classes_file)
        grid = self.write_grid(tmp_path, world, corpus_file, seeds=[])
        rc = main(["sweep", "--grid", str(grid), "--out", str(tmp_path / "s")])
        assert rc == 2

    def test_rerun_byte_identical(self, tmp_path, classes_file, corpus_file):
        world = gen_world(tmp_path, classes_file)
        grid = self.write_grid(tmp_path, world, corpus_file, seeds=[1, 2])
        maps = []
        for name in ["s1", "s2"]:
            out = tmp_path / name
            assert main(["sweep", "--grid", str(grid), "--out", str(out)]) == 0
            maps.append(read_bytes_map(out))
        assert maps[0] == maps[1]


class TestArgumentErrors:
    def test_unknown_flag_exits_2(self):
        with pytest.raises(SystemExit) as exc:
            main(["noise", "--frequency", "9"])
        assert exc.value.code == 2

    def test_version_flag(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        assert "denoiser" in capsys.readouterr().out
