"""Alternating discriminative/generative loop over noisy class texts.

One full run decodes labels word position by word position. At each step
the discriminative half assigns every visual sample to a class using the
current (partially decoded) texts; the generative half then picks, per
class, the best correction of the current word among the K edit-distance
proposals. Proposal quality is scored by two complementary weightings:

* text-only: softmax over negative edit distance, tempered by lambda —
  small lambda trusts spelling, large lambda flattens it;
* visual: each assigned sample votes with a softmax over its cosine
  similarity to the K full candidate texts, and the votes multiply.

Scores combine in log space. Every tie breaks toward the deterministic
proposal ordering (or the lowest class index), so runs are reproducible
bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

import numpy as np

from .corpus import Corpus, CorpusIndex, ProposalSet
from .embedding import EmbeddingProvider, VisualSample
from .errors import ConfigError, ShapeError
from .seeding import make_rng
from .text import ClassText, WordCandidate

WEIGHTINGS = ("intra_only", "inter_only", "combined")
ASSIGNMENT_MODES = ("class_text", "candidate_max")

_TRACE_CANDIDATE_CAP = 50


def _log_softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    shifted = x - x.max(axis=axis, keepdims=True)
    return shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))


def _softmax(x: np.ndarray, axis: int = -1) -> np.ndarray:
    return np.exp(_log_softmax(x, axis=axis))


@dataclass(frozen=True)
class TemperatureSchedule:
    """Lambda over the global decode-step counter."""

    kind: str
    start: float
    end: float

    def __post_init__(self):
        if self.kind not in ("constant", "linear"):
            raise ConfigError(f"unknown schedule kind {self.kind!r}")
        if self.start <= 0 or self.end <= 0:
            raise ConfigError("schedule temperatures must be > 0")
        if self.kind == "constant" and self.start != self.end:
            raise ConfigError("constant schedule requires start == end")

    @classmethod
    def constant(cls, value: float) -> "TemperatureSchedule":
        return cls("constant", value, value)

    @classmethod
    def linear(cls, start: float, end: float) -> "TemperatureSchedule":
        return cls("linear", start, end)

    @classmethod
    def parse(cls, text: str) -> "TemperatureSchedule":
        parts = text.split(":")
        try:
            if parts[0] == "constant" and len(parts) == 2:
                return cls.constant(float(parts[1]))
            if parts[0] == "linear" and len(parts) == 3:
                return cls.linear(float(parts[1]), float(parts[2]))
        except ValueError:
            pass
        raise ConfigError(
            f"bad schedule {text!r}; expected 'constant:V' or 'linear:START:END'"
        )

    def describe(self) -> str:
        if self.kind == "constant":
            return f"constant:{self.start:g}"
        return f"linear:{self.start:g}:{self.end:g}"

    def value(self, step: int, total_steps: int) -> float:
        """Temperature at 0-based ``step`` of ``total_steps``; interpolates
        from start at the first step to end at the last, single-step
        schedules use end."""
        if self.kind == "constant":
            return self.start
        if total_steps <= 1:
            return self.end
        frac = step / (total_steps - 1)
        return self.start + (self.end - self.start) * frac


@dataclass(frozen=True)
class DecodeConfig:
    k: int = 10
    schedule: TemperatureSchedule = field(
        default_factory=lambda: TemperatureSchedule.linear(0.01, 1.0)
    )
    passes: int = 1
    weighting: str = "combined"
    similarity_scale: float = 1.0
    max_visual_fraction: float = 1.0
    mode: str = "class_text"
    mean_log: bool = False
    frequency_prior: bool = False
    subsample_seed: int = 0

    def __post_init__(self):
        if self.k < 1:
            raise ConfigError(f"k must be >= 1, got {self.k}")
        if self.passes < 1:
            raise ConfigError(f"passes must be >= 1, got {self.passes}")
        if self.weighting not in WEIGHTINGS:
            raise ConfigError(f"weighting must be one of {WEIGHTINGS}, got {self.weighting!r}")
        if self.mode not in ASSIGNMENT_MODES:
            raise ConfigError(f"mode must be one of {ASSIGNMENT_MODES}, got {self.mode!r}")
        if not (0.0 < self.max_visual_fraction <= 1.0):
            raise ConfigError(
                f"max_visual_fraction must lie in (0, 1], got {self.max_visual_fraction}"
            )
        if not math.isfinite(self.similarity_scale):
            raise ConfigError("similarity_scale must be finite")

    def describe(self) -> dict:
        return {
            "k": self.k,
            "schedule": self.schedule.describe(),
            "passes": self.passes,
            "weighting": self.weighting,
            "similarity_scale": self.similarity_scale,
            "max_visual_fraction": self.max_visual_fraction,
            "mode": self.mode,
            "mean_log": self.mean_log,
            "frequency_prior": self.frequency_prior,
            "subsample_seed": self.subsample_seed,
        }


@dataclass(frozen=True)
class Assignment:
    """Hard per-sample class labels, aligned with the input sample order."""

    sample_ids: tuple[int, ...]
    labels: tuple[int, ...]
    mode: str = "class_text"

    def __post_init__(self):
        if len(self.sample_ids) != len(self.labels):
            raise ShapeError(
                f"{len(self.sample_ids)} sample ids vs {len(self.labels)} labels"
            )

    @cached_property
    def groups(self) -> dict[int, tuple[int, ...]]:
        """Class -> tuple of sample ids assigned to it."""
        grouped: dict[int, list[int]] = {}
        for sid, label in zip(self.sample_ids, self.labels):
            grouped.setdefault(label, []).append(sid)
        return {c: tuple(ids) for c, ids in grouped.items()}


@dataclass
class DecodeState:
    """Mutable view of one decoding step."""

    step: int                       # 1-based word position being decoded
    texts: list[ClassText]          # words < step decoded, >= step still noisy
    original_noisy: list[ClassText]
    lambda_now: float
    global_step: int = 0            # 0-based counter across passes


@dataclass(frozen=True)
class DecodeResult:
    chosen: WordCandidate
    proposals: ProposalSet
    log_scores: np.ndarray
    log_intra: np.ndarray | None
    log_inter: np.ndarray | None
    n_voters: int


def _visual_matrix(visuals: Sequence[VisualSample]) -> np.ndarray:
    if not visuals:
        return np.zeros((0, 1))
    return np.stack([s.vec.values for s in visuals])


def classify(
    visuals: Sequence[VisualSample],
    texts: Sequence[ClassText],
    provider: EmbeddingProvider,
    mode: str = "class_text",
) -> Assignment:
    """Assign each sample to the class text with the highest cosine
    similarity; exact ties go to the lowest class index."""
    if not texts:
        raise ConfigError("classify needs at least one class")
    ids = tuple(s.sample_id for s in visuals)
    if not visuals:
        return Assignment(ids, (), mode)
    class_matrix = provider.encode_matrix(texts)
    sims = _visual_matrix(visuals) @ class_matrix.T
    labels = tuple(int(texts[i].class_id) for i in sims.argmax(axis=1))
    return Assignment(ids, labels, mode)


def classify_candidate_max(
    visuals: Sequence[VisualSample],
    candidate_texts: Sequence[Sequence[ClassText]],
    provider: EmbeddingProvider,
) -> Assignment:
    """Assignment by the best within-class softmax vote over candidates.

    Per class the candidate similarities are softmax-normalized and the
    maximum taken; samples go to the argmax class (ties: lowest index).
    When every class carries exactly one candidate the softmax is the
    constant 1 and carries no signal, so this degenerates to plain
    ``classify`` on those texts.
    """
    if not candidate_texts:
        raise ConfigError("need at least one class")
    for c, cands in enumerate(candidate_texts):
        if not cands:
            raise ConfigError(f"class {c} has an empty candidate list")
    if all(len(cands) == 1 for cands in candidate_texts):
        return classify(
            visuals, [cands[0] for cands in candidate_texts], provider, mode="candidate_max"
        )
    ids = tuple(s.sample_id for s in visuals)
    if not visuals:
        return Assignment(ids, (), "candidate_max")
    vm = _visual_matrix(visuals)
    scores = np.empty((len(visuals), len(candidate_texts)))
    for c, cands in enumerate(candidate_texts):
        sims = vm @ provider.encode_matrix(cands).T
        best = sims.max(axis=1, keepdims=True)
        scores[:, c] = 1.0 / np.exp(sims - best).sum(axis=1)
    labels = tuple(int(i) for i in scores.argmax(axis=1))
    return Assignment(ids, labels, "candidate_max")


def intra_weight(candidates: Sequence[WordCandidate], lam: float) -> np.ndarray:
    """Candidate probabilities from edit distance alone: softmax(-d/lam)."""
    if lam <= 0:
        raise ConfigError(f"temperature must be > 0, got {lam}")
    if not candidates:
        raise ConfigError("need at least one candidate")
    distances = np.array([c.distance for c in candidates], dtype=np.float64)
    return _softmax(-distances / lam)


def inter_weight(
    sample: VisualSample,
    candidate_texts: Sequence[ClassText],
    provider: EmbeddingProvider,
    similarity_scale: float = 1.0,
) -> np.ndarray:
    """One sample's vote: softmax over scaled cosine similarity to each
    full candidate text."""
    if not candidate_texts:
        raise ConfigError("need at least one candidate text")
    sims = provider.encode_matrix(candidate_texts) @ sample.vec.values
    return _softmax(similarity_scale * sims)


def _subsample_voters(
    voter_positions: list[int], fraction: float, seed_parts: tuple[int, ...]
) -> list[int]:
    if fraction >= 1.0 or len(voter_positions) <= 1:
        return voter_positions
    keep = max(1, int(len(voter_positions) * fraction))
    rng = make_rng(*seed_parts)
    picked = rng.choice(len(voter_positions), size=keep, replace=False)
    return [voter_positions[i] for i in sorted(picked)]


def decode_word(
    class_id: int,
    state: DecodeState,
    assignment: Assignment,
    visuals: Sequence[VisualSample],
    source: Corpus | CorpusIndex,
    provider: EmbeddingProvider,
    config: DecodeConfig,
) -> DecodeResult:
    """Choose the best correction for the current word of one class.

    Proposals always come from the original noisy word. The text-only and
    visual log-weights are summed per the configured weighting; with no
    assigned samples the visual term drops out. Ties resolve to the
    earliest candidate in the proposal ordering.
    """
    position = state.step - 1
    text = state.texts[class_id]
    if position >= text.n_words:
        raise ConfigError(
            f"class {class_id} has {text.n_words} words, cannot decode word {state.step}"
        )
    noisy_word = state.original_noisy[class_id].words[position]
    proposals = source.propose(noisy_word, config.k)
    cands = proposals.candidates
    candidate_texts = [text.replace_word(position, c.word) for c in cands]

    log_scores = np.zeros(len(cands))
    log_intra = None
    if config.weighting in ("intra_only", "combined"):
        if state.lambda_now <= 0:
            raise ConfigError(f"temperature must be > 0, got {state.lambda_now}")
        distances = np.array([c.distance for c in cands], dtype=np.float64)
        log_intra = _log_softmax(-distances / state.lambda_now)
        log_scores = log_scores + log_intra

    log_inter = None
    n_voters = 0
    if config.weighting in ("inter_only", "combined"):
        id_to_pos = {s.sample_id: pos for pos, s in enumerate(visuals)}
        positions = [id_to_pos[sid] for sid in assignment.groups.get(class_id, ())]
        positions = _subsample_voters(
            positions,
            config.max_visual_fraction,
            (config.subsample_seed, class_id, state.global_step),
        )
        n_voters = len(positions)
        if n_voters:
            voter_matrix = np.stack([visuals[p].vec.values for p in positions])
            sims = voter_matrix @ provider.encode_matrix(candidate_texts).T
            per_voter = _log_softmax(config.similarity_scale * sims, axis=1)
            log_inter = per_voter.mean(axis=0) if config.mean_log else per_voter.sum(axis=0)
            log_scores = log_scores + log_inter

    if config.frequency_prior:
        freqs = np.array([c.frequency for c in cands], dtype=np.float64)
        log_scores = log_scores + np.log(freqs) - np.log(freqs.sum())

    chosen = int(np.argmax(log_scores))
    return DecodeResult(
        chosen=cands[chosen],
        proposals=proposals,
        log_scores=log_scores,
        log_intra=log_intra,
        log_inter=log_inter,
        n_voters=n_voters,
    )


def _candidate_grid(
    texts: list[ClassText],
    originals: list[ClassText],
    step: int,
    source: Corpus | CorpusIndex,
    k: int,
) -> list[list[ClassText]]:
    """Per-class candidate texts for the current step (classes already
    fully decoded keep their single current text)."""
    grid = []
    for text, orig in zip(texts, originals):
        if text.n_words < step:
            grid.append([text])
            continue
        proposals = source.propose(orig.words[step - 1], k)
        grid.append([text.replace_word(step - 1, c.word) for c in proposals.candidates])
    return grid


def _trace_class_entry(class_id: int, noisy_word: str, result: DecodeResult) -> dict:
    cands = result.proposals.candidates
    cap = _TRACE_CANDIDATE_CAP
    entry = {
        "class_id": class_id,
        "source_word": noisy_word,
        "chosen": result.chosen.word,
        "n_voters": result.n_voters,
        "candidates": [
            {
                "word": c.word,
                "distance": c.distance,
                "frequency": c.frequency,
                "log_score": float(result.log_scores[i]),
            }
            for i, c in enumerate(cands[:cap])
        ],
        "candidates_truncated": len(cands) > cap,
    }
    return entry


def run_denoiser(
    noisy_texts: Sequence[ClassText],
    visuals: Sequence[VisualSample],
    source: Corpus | CorpusIndex,
    provider: EmbeddingProvider,
    config: DecodeConfig | None = None,
) -> tuple[list[ClassText], dict]:
    """Full alternating loop; returns denoised texts plus a JSON-ready trace.

    Per pass and word position: classify samples against the current
    texts, set the temperature from the global step counter, decode the
    word for every class long enough to have one, then splice all chosen
    words in at once.
    """
    if not noisy_texts:
        raise ConfigError("need at least one class text")
    config = config or DecodeConfig()
    originals = list(noisy_texts)
    texts = list(noisy_texts)
    n_max = max(t.n_words for t in texts)
    total_steps = config.passes * n_max
    trace_steps = []
    global_step = 0
    for pass_no in range(1, config.passes + 1):
        for step in range(1, n_max + 1):
            lam = config.schedule.value(global_step, total_steps)
            if config.mode == "candidate_max":
                grid = _candidate_grid(texts, originals, step, source, config.k)
                assignment = classify_candidate_max(visuals, grid, provider)
            else:
                assignment = classify(visuals, texts, provider)
            state = DecodeState(
                step=step,
                texts=texts,
                original_noisy=originals,
                lambda_now=lam,
                global_step=global_step,
            )
            decisions: dict[int, DecodeResult] = {}
            for class_id, text in enumerate(texts):
                if text.n_words >= step:
                    decisions[class_id] = decode_word(
                        class_id, state, assignment, visuals, source, provider, config
                    )
            for class_id, result in decisions.items():
                texts[class_id] = texts[class_id].replace_word(step - 1, result.chosen.word)
            trace_steps.append(
                {
                    "pass": pass_no,
                    "word_index": step,
                    "global_step": global_step,
                    "lambda": lam,
                    "assignment_sizes": {
                        str(c): len(ids) for c, ids in sorted(assignment.groups.items())
                    },
                    "classes": [
                        _trace_class_entry(
                            c, originals[c].words[step - 1], decisions[c]
                        )
                        for c in sorted(decisions)
                    ],
                }
            )
            global_step += 1
    trace = {
        "n_classes": len(texts),
        "n_max": n_max,
        "total_steps": total_steps,
        "config": config.describe(),
        "steps": trace_steps,
        "final_texts": [t.render() for t in texts],
    }
    return texts, trace


def assignment_lower_bound(
    per_sample_posteriors: np.ndarray, q: np.ndarray
) -> float:
    """Jensen lower bound of the summed log-evidence under soft assignment q.

    ``per_sample_posteriors`` holds one row of non-negative joint values
    per sample; ``q`` rows must be probability vectors. Terms with
    q == 0 contribute zero by convention. Equality with the exact
    log-evidence holds when q is the row-normalized posterior.
    """
    p = np.asarray(per_sample_posteriors, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    if p.shape != q.shape or p.ndim != 2:
        raise ShapeError(f"shape mismatch: {p.shape} vs {q.shape}")
    if np.any(q < 0) or np.any(np.abs(q.sum(axis=1) - 1.0) > 1e-9):
        raise ShapeError("q rows must be probability vectors")
    if np.any(p < 0):
        raise ShapeError("joint values must be non-negative")
    mask = q > 0
    with np.errstate(divide="ignore"):
        log_ratio = np.where(mask, np.log(np.where(mask, p, 1.0)) - np.log(np.where(mask, q, 1.0)), 0.0)
    return float((q * log_ratio).sum())
