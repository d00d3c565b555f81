"""Metrics, the text-only frequency baseline, and experiment sweeps.

Semantic similarity is measured in whatever embedding space the active
provider defines. With the synthetic providers that space is arbitrary:
the numbers quantify recovery inside this benchmark only and are not
comparable to similarities computed by any real vision-language model.
"""

from __future__ import annotations

import csv
import io
import json
import time
from dataclasses import dataclass
from itertools import product
from typing import Sequence

from .core import Assignment, DecodeConfig, TemperatureSchedule, classify, run_denoiser
from .corpus import Corpus, CorpusIndex
from .embedding import EmbeddingProvider, VisualSample, cosine_similarity
from .errors import ConfigError, ShapeError
from .noise import DEFAULT_ALPHABET, NoiseSpec, perturb, perturbation_rate
from .text import ClassText

CSV_COLUMNS = (
    "world_seed",
    "noise_kind",
    "p",
    "k",
    "schedule",
    "passes",
    "weighting",
    "top1_before",
    "top1_after",
    "label_acc",
    "semantic_similarity",
    "realized_rate",
    "wall_ms",
)


def top1_accuracy(assignment: Assignment, truth: Sequence[int]) -> float:
    """Percentage of samples whose hard label matches the ground truth."""
    if len(assignment.labels) != len(truth):
        raise ShapeError(f"{len(assignment.labels)} labels vs {len(truth)} truths")
    if not truth:
        return 0.0
    hits = sum(1 for got, want in zip(assignment.labels, truth) if got == want)
    return 100.0 * hits / len(truth)


def label_accuracy(pred: Sequence[ClassText], truth: Sequence[ClassText]) -> float:
    """Percentage of texts matching exactly (lowercased, single-spaced)."""
    if len(pred) != len(truth):
        raise ShapeError(f"{len(pred)} predictions vs {len(truth)} truths")
    hits = sum(1 for p, t in zip(pred, truth) if p.render() == t.render())
    return 100.0 * hits / len(truth)


def semantic_similarity(
    pred: Sequence[ClassText], truth: Sequence[ClassText], provider: EmbeddingProvider
) -> float:
    """Mean cosine between predicted and true text embeddings, x100."""
    if len(pred) != len(truth):
        raise ShapeError(f"{len(pred)} predictions vs {len(truth)} truths")
    total = sum(
        cosine_similarity(provider.encode_text(p), provider.encode_text(t))
        for p, t in zip(pred, truth)
    )
    return 100.0 * total / len(truth)


def frequency_baseline(
    noisy_texts: Sequence[ClassText], source: Corpus | CorpusIndex
) -> list[ClassText]:
    """Correct each word independently: nearest corpus word by edit
    distance, highest frequency among ties, then lexicographic. Uses no
    visual information."""
    corrected = []
    for text in noisy_texts:
        words = tuple(source.propose(w, 1).candidates[0].word for w in text.words)
        corrected.append(ClassText(text.class_id, words))
    return corrected


@dataclass
class Report:
    """One evaluation outcome; all accuracy fields are percentages."""

    top1_before: float | None
    top1_after: float | None
    label_acc: float | None
    semantic_similarity: float | None
    realized_noise_rate: float | None
    config: dict
    per_class: list[dict]

    def to_dict(self) -> dict:
        return {
            "top1_before": self.top1_before,
            "top1_after": self.top1_after,
            "label_acc": self.label_acc,
            "semantic_similarity": self.semantic_similarity,
            "realized_noise_rate": self.realized_noise_rate,
            "config": self.config,
            "per_class": self.per_class,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def build_report(
    pred: Sequence[ClassText],
    truth: Sequence[ClassText],
    provider: EmbeddingProvider,
    visuals: Sequence[VisualSample] = (),
    noisy: Sequence[ClassText] | None = None,
    config: dict | None = None,
) -> Report:
    """Assemble the full report; visual metrics are filled only when every
    sample carries a true class."""
    if len(pred) != len(truth):
        raise ShapeError(f"{len(pred)} predictions vs {len(truth)} truths")
    if noisy is not None and len(noisy) != len(truth):
        raise ShapeError(f"{len(noisy)} noisy texts vs {len(truth)} truths")
    per_class = []
    for p, t in zip(pred, truth):
        per_class.append(
            {
                "class_id": t.class_id,
                "truth": t.render(),
                "noisy": noisy[t.class_id].render() if noisy else None,
                "pred": p.render(),
                "exact_match": p.render() == t.render(),
                "cosine": cosine_similarity(
                    provider.encode_text(p), provider.encode_text(t)
                ),
            }
        )
    truth_ids = [s.true_class for s in visuals]
    have_truth = bool(visuals) and all(t is not None for t in truth_ids)
    top1_after = (
        top1_accuracy(classify(visuals, list(pred), provider), truth_ids) if have_truth else None
    )
    top1_before = (
        top1_accuracy(classify(visuals, list(noisy), provider), truth_ids)
        if have_truth and noisy is not None
        else None
    )
    realized = perturbation_rate(list(truth), list(noisy)) if noisy is not None else None
    return Report(
        top1_before=top1_before,
        top1_after=top1_after,
        label_acc=label_accuracy(pred, truth),
        semantic_similarity=semantic_similarity(pred, truth, provider),
        realized_noise_rate=realized,
        config=config or {},
        per_class=per_class,
    )


@dataclass(frozen=True)
class SweepGrid:
    """Cartesian experiment grid.

    ``seeds`` drive the per-row noise realization and land in the
    ``world_seed`` CSV column; the world itself (classes, embedder,
    samples) is fixed by the caller.
    """

    seeds: tuple[int, ...]
    noise_kinds: tuple[str, ...] = ("mixed",)
    rates: tuple[float, ...] = (0.1,)
    ks: tuple[int, ...] = (10,)
    weightings: tuple[str, ...] = ("combined",)
    schedules: tuple[str, ...] = ("linear:0.01:1",)
    passes: tuple[int, ...] = (1,)
    mode: str = "class_text"
    max_visual_fraction: float = 1.0
    similarity_scale: float = 1.0
    alphabet: str = DEFAULT_ALPHABET

    def __post_init__(self):
        for name in ("seeds", "noise_kinds", "rates", "ks", "weightings", "schedules", "passes"):
            if not getattr(self, name):
                raise ConfigError(f"sweep grid axis {name!r} is empty")

    @classmethod
    def from_dict(cls, raw: dict) -> "SweepGrid":
        def axis(key, default):
            value = raw.get(key, default)
            if not isinstance(value, (list, tuple)):
                value = [value]
            return tuple(value)

        return cls(
            seeds=axis("seeds", ()),
            noise_kinds=axis("noise_kinds", ("mixed",)),
            rates=axis("rates", (0.1,)),
            ks=axis("ks", (10,)),
            weightings=axis("weightings", ("combined",)),
            schedules=axis("schedules", ("linear:0.01:1",)),
            passes=axis("passes", (1,)),
            mode=raw.get("mode", "class_text"),
            max_visual_fraction=raw.get("max_visual_fraction", 1.0),
            similarity_scale=raw.get("similarity_scale", 1.0),
            alphabet=raw.get("alphabet", DEFAULT_ALPHABET),
        )


def sweep(
    clean: Sequence[ClassText],
    visuals: Sequence[VisualSample],
    source: Corpus | CorpusIndex,
    provider: EmbeddingProvider,
    grid: SweepGrid,
) -> list[dict]:
    """One row per grid cell, in deterministic nested-loop order."""
    truth_ids = [s.true_class for s in visuals]
    have_truth = bool(visuals) and all(t is not None for t in truth_ids)
    rows = []
    for seed, kind, rate, k, weighting, schedule, n_passes in product(
        grid.seeds, grid.noise_kinds, grid.rates, grid.ks, grid.weightings,
        grid.schedules, grid.passes,
    ):
        started = time.perf_counter()
        spec = NoiseSpec(p=rate, kind=kind, seed=seed, alphabet=grid.alphabet)
        noisy = perturb(list(clean), spec)
        config = DecodeConfig(
            k=k,
            schedule=TemperatureSchedule.parse(schedule),
            passes=n_passes,
            weighting=weighting,
            similarity_scale=grid.similarity_scale,
            max_visual_fraction=grid.max_visual_fraction,
            mode=grid.mode,
        )
        denoised, _ = run_denoiser(noisy, visuals, source, provider, config)
        top1_before = (
            top1_accuracy(classify(visuals, noisy, provider), truth_ids) if have_truth else None
        )
        top1_after = (
            top1_accuracy(classify(visuals, denoised, provider), truth_ids)
            if have_truth
            else None
        )
        rows.append(
            {
                "world_seed": seed,
                "noise_kind": kind,
                "p": rate,
                "k": k,
                "schedule": schedule,
                "passes": n_passes,
                "weighting": weighting,
                "top1_before": top1_before,
                "top1_after": top1_after,
                "label_acc": label_accuracy(denoised, clean),
                "semantic_similarity": semantic_similarity(denoised, clean, provider),
                "realized_rate": perturbation_rate(list(clean), noisy),
                "wall_ms": (time.perf_counter() - started) * 1000.0,
            }
        )
    return rows


def rows_to_csv(rows: Sequence[dict], include_timings: bool = False) -> str:
    """Render sweep rows as CSV text.

    Timings are volatile, so by default wall_ms is written as 0 and the
    measured values stay in the in-memory rows; pass include_timings=True
    to emit them (output is then not reproducible byte for byte).
    """
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        out = {col: row.get(col) for col in CSV_COLUMNS}
        if not include_timings:
            out["wall_ms"] = 0
        writer.writerow(out)
    return buf.getvalue()


def rows_to_json(rows: Sequence[dict], grid_echo: dict | None = None,
                 include_timings: bool = False) -> str:
    out_rows = []
    for row in rows:
        cleaned = dict(row)
        if not include_timings:
            cleaned["wall_ms"] = 0
        out_rows.append(cleaned)
    doc = {"grid": grid_echo or {}, "rows": out_rows}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
