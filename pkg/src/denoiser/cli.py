"""Command-line interface.

Subcommands: gen-world, noise, denoise, eval, sweep. Every command is
deterministic given its flags (all randomness flows from explicit
--seed values) and writes outputs atomically: files are staged next to
their destination and renamed only after all results are computed.

Exit codes: 0 all outputs written, 1 runtime error, 2 usage/config error.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from . import __version__
from .core import DecodeConfig, TemperatureSchedule, run_denoiser
from .corpus import Corpus, CorpusIndex, load_corpus
from .embedding import (
    EmbeddingProvider,
    LexiconEmbedder,
    TrigramEmbedder,
    VisualSample,
    load_embedding_store,
    generate_world,
)
from .errors import (
    ConfigError,
    CorpusParseError,
    DenoiserError,
    EmptyCorpus,
    InvalidClassText,
    ShapeError,
)
from .evaluate import SweepGrid, build_report, rows_to_csv, rows_to_json, sweep
from .noise import DEFAULT_ALPHABET, KINDS, NoiseSpec, perturb, perturbation_rate
from .text import ClassText, read_class_list, render_class_list

_USAGE_ERRORS = (
    ConfigError,
    CorpusParseError,
    EmptyCorpus,
    InvalidClassText,
    ShapeError,
    FileNotFoundError,
    IsADirectoryError,
    NotADirectoryError,
    json.JSONDecodeError,
)

# index pays off once a corpus is queried repeatedly; below this size the
# linear scan is already instant
_INDEX_THRESHOLD = 512


class _Staged:
    """Collects (path, text) pairs and renames them into place together."""

    def __init__(self):
        self.items: list[tuple[Path, str]] = []

    def add(self, path: str | Path, content: str) -> None:
        self.items.append((Path(path), content))

    def commit(self) -> None:
        staged = []
        try:
            for path, content in self.items:
                path.parent.mkdir(parents=True, exist_ok=True)
                fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
                with os.fdopen(fd, "w", encoding="utf-8") as fh:
                    fh.write(content)
                staged.append((tmp, path))
            for tmp, path in staged:
                os.replace(tmp, path)
        finally:
            for tmp, _ in staged:
                if os.path.exists(tmp):
                    try:
                        os.unlink(tmp)
                    except OSError:
                        pass


def _require_file(path: str, what: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise FileNotFoundError(f"{what} not found: {path}")
    return p


def _provider_from_spec(spec: dict) -> EmbeddingProvider:
    kind = spec.get("embedder")
    dim = int(spec.get("dim", 0))
    prefix = spec.get("prompt_prefix", "")
    suffix = spec.get("prompt_suffix", "")
    if kind == "lexicon":
        return LexiconEmbedder(int(spec["seed"]), dim, prefix, suffix)
    if kind == "trigram":
        return TrigramEmbedder(dim, prefix, suffix)
    raise ConfigError(f"unknown embedder {kind!r} in provider spec")


def load_world(world_dir: str | Path) -> tuple[list[ClassText], EmbeddingProvider, list[VisualSample]]:
    """Read a world directory written by gen-world."""
    world = Path(world_dir)
    classes = read_class_list(_require_file(world / "classes.txt", "world class list"))
    spec = json.loads(_require_file(world / "provider.json", "provider spec").read_text())
    provider = _provider_from_spec(spec)
    _, visuals = load_embedding_store(_require_file(world / "visuals.jsonl", "world visuals"))
    return classes, provider, visuals


def _corpus_source(corpus: Corpus) -> Corpus | CorpusIndex:
    return CorpusIndex(corpus) if corpus.size >= _INDEX_THRESHOLD else corpus


def cmd_gen_world(args) -> int:
    classes = read_class_list(_require_file(args.classes, "class list"))
    spec = {
        "embedder": args.embedder,
        "dim": args.dim,
        "seed": args.embedder_seed if args.embedder_seed is not None else args.seed,
        "prompt_prefix": args.prompt_prefix,
        "prompt_suffix": args.prompt_suffix,
    }
    provider = _provider_from_spec(spec)
    visuals = generate_world(classes, provider, args.samples_per_class, args.sigma, args.seed)

    out = Path(args.out)
    staged = _Staged()
    staged.add(out / "classes.txt", render_class_list(classes))
    staged.add(out / "provider.json", json.dumps(spec, indent=2, sort_keys=True) + "\n")

    buf = io.StringIO()
    for s in visuals:
        buf.write(
            json.dumps(
                {
                    "key": s.sample_id,
                    "kind": "visual",
                    "true_class": s.true_class,
                    "vec": list(map(float, s.vec.values)),
                }
            )
            + "\n"
        )
    staged.add(out / "visuals.jsonl", buf.getvalue())
    staged.commit()
    print(f"world written to {out}: {len(classes)} classes, {len(visuals)} visual samples")
    return 0


def cmd_noise(args) -> int:
    classes = read_class_list(_require_file(args.classes, "class list"))
    spec = NoiseSpec(p=args.p, kind=args.kind, seed=args.seed, alphabet=args.alphabet)
    noisy = perturb(classes, spec)
    realized = perturbation_rate(classes, noisy)

    staged = _Staged()
    staged.add(args.out, render_class_list(noisy))
    sidecar = {
        "spec": {"p": spec.p, "kind": spec.kind, "seed": spec.seed, "alphabet": spec.alphabet},
        "realized_rate": realized,
    }
    staged.add(str(args.out) + ".meta.json", json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    staged.commit()
    print(f"noisy class list written to {args.out} (realized rate {realized:.4f})")
    return 0


def _decode_config(args) -> DecodeConfig:
    return DecodeConfig(
        k=args.k,
        schedule=TemperatureSchedule.parse(args.schedule),
        passes=args.passes,
        weighting=args.weighting,
        similarity_scale=args.similarity_scale,
        max_visual_fraction=args.max_visual_fraction,
        mode=args.mode,
        subsample_seed=args.subsample_seed,
    )


def cmd_denoise(args) -> int:
    if bool(args.world) == bool(args.store):
        raise ConfigError("exactly one of --world or --store is required")
    corpus = load_corpus(_require_file(args.corpus, "corpus file"))
    truth = None
    if args.world:
        truth, provider, visuals = load_world(args.world)
    else:
        provider, visuals = load_embedding_store(_require_file(args.store, "embedding store"))
    noisy = read_class_list(_require_file(args.noisy, "noisy class list"))
    config = _decode_config(args)

    denoised, trace = run_denoiser(noisy, visuals, _corpus_source(corpus), provider, config)

    out = Path(args.out)
    staged = _Staged()
    staged.add(out / "denoised.txt", render_class_list(denoised))
    staged.add(out / "trace.json", json.dumps(trace, indent=2, sort_keys=True) + "\n")
    if truth is not None:
        report = build_report(
            denoised, truth, provider, visuals, noisy=noisy, config=config.describe()
        )
        staged.add(out / "report.json", report.to_json())
    staged.commit()
    print(f"denoised {len(denoised)} classes -> {out}")
    return 0


def cmd_eval(args) -> int:
    truth = read_class_list(_require_file(args.truth, "truth class list"))
    pred = read_class_list(_require_file(args.pred, "predicted class list"))
    _, provider, visuals = load_world(args.world)
    noisy = read_class_list(_require_file(args.noisy, "noisy class list")) if args.noisy else None
    report = build_report(pred, truth, provider, visuals, noisy=noisy)

    staged = _Staged()
    staged.add(args.out, report.to_json())
    staged.commit()
    print(
        "label_acc={} semantic_similarity={} top1_after={}".format(
            report.label_acc, report.semantic_similarity, report.top1_after
        )
    )
    return 0


def cmd_sweep(args) -> int:
    grid_raw = json.loads(_require_file(args.grid, "grid config").read_text())
    world_dir = grid_raw.get("world")
    if not world_dir:
        raise ConfigError("grid config must name a 'world' directory")
    clean, provider, visuals = load_world(world_dir)
    corpus_path = grid_raw.get("corpus")
    if corpus_path:
        corpus = load_corpus(_require_file(corpus_path, "corpus file"))
    else:
        from .corpus import load_default_corpus

        corpus = load_default_corpus()
    grid = SweepGrid.from_dict(grid_raw)

    rows = sweep(clean, visuals, _corpus_source(corpus), provider, grid)

    out = Path(args.out)
    staged = _Staged()
    staged.add(out / "sweep.csv", rows_to_csv(rows, include_timings=args.timings))
    staged.add(out / "sweep.json", rows_to_json(rows, grid_raw, include_timings=args.timings))
    staged.commit()
    print(f"{len(rows)} sweep rows -> {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="denoiser",
        description="Correct character-level noise in class-text labels "
        "using edit-distance proposals and visual-sample votes.",
    )
    parser.add_argument("--version", action="version", version=f"denoiser {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = {"formatter_class": argparse.ArgumentDefaultsHelpFormatter}

    p = sub.add_parser("gen-world", **fmt, help="generate a deterministic synthetic world")
    p.add_argument("--classes", required=True, help="clean class-list file")
    p.add_argument("--out", required=True, help="output world directory")
    p.add_argument("--samples-per-class", type=int, default=25)
    p.add_argument("--sigma", type=float, default=0.1, help="visual jitter scale")
    p.add_argument("--dim", type=int, default=64, help="embedding dimension")
    p.add_argument("--embedder", choices=("lexicon", "trigram"), default="lexicon")
    p.add_argument("--seed", type=int, default=0, help="world sampling seed")
    p.add_argument(
        "--embedder-seed", type=int, default=None,
        help="lexicon embedder seed (defaults to --seed)",
    )
    p.add_argument("--prompt-prefix", default="")
    p.add_argument("--prompt-suffix", default="")
    p.set_defaults(func=cmd_gen_world)

    p = sub.add_parser("noise", **fmt, help="contaminate a class list with character noise")
    p.add_argument("--classes", required=True)
    p.add_argument("--p", type=float, required=True, help="per-character noise rate")
    p.add_argument("--kind", choices=KINDS, default="mixed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--alphabet", default=DEFAULT_ALPHABET)
    p.add_argument("--out", required=True, help="noisy class-list file to write")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("denoise", **fmt, help="run the alternating denoising loop")
    p.add_argument("--noisy", required=True, help="noisy class-list file")
    p.add_argument("--corpus", required=True, help="word<TAB>frequency lexicon")
    p.add_argument("--world", help="world directory (synthetic benchmark mode)")
    p.add_argument("--store", help="embedding-store JSONL (ingested vectors)")
    p.add_argument("--k", type=int, default=10, help="proposal candidates per word")
    p.add_argument(
        "--schedule", default="linear:0.01:1",
        help="temperature schedule, 'linear:START:END' or 'constant:V'",
    )
    p.add_argument("--passes", type=int, default=1)
    p.add_argument(
        "--weighting", choices=("intra_only", "inter_only", "combined"), default="combined"
    )
    p.add_argument("--mode", choices=("class_text", "candidate_max"), default="class_text")
    p.add_argument("--similarity-scale", type=float, default=1.0)
    p.add_argument("--max-visual-fraction", type=float, default=1.0)
    p.add_argument("--subsample-seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("eval", **fmt, help="score predicted class texts against the truth")
    p.add_argument("--pred", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--noisy", help="optional noisy list for before-metrics")
    p.add_argument("--out", required=True, help="report JSON path")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("sweep", **fmt, help="run an experiment grid from a JSON config")
    p.add_argument("--grid", required=True, help="grid config JSON")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument(
        "--timings", action="store_true",
        help="emit measured wall_ms (breaks byte-reproducibility)",
    )
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _USAGE_ERRORS as exc:
        print(f"denoiser: error: {exc}", file=sys.stderr)
        return 2
    except DenoiserError as exc:
        print(f"denoiser: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
