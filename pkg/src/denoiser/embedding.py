"""Embedding vectors, text-encoder providers and synthetic visual worlds.

Visual encoding never happens here: visual vectors are either ingested
from a JSONL store (exported from a real checkpoint) or synthesized
around class-text embeddings. Two deterministic text encoders ship with
the package:

* ``LexiconEmbedder`` — every distinct word gets an independent seeded
  Gaussian vector, so spelling-similar words land in unrelated places.
  This is the adversarial regime where a misspelled word has several
  plausible corrections that only visual votes can tell apart.
* ``TrigramEmbedder`` — hashed character trigrams, so spelling-similar
  words embed nearby.

All provider outputs are unit-norm. Hashing is BLAKE2b (see seeding.py),
never the process-randomized builtin ``hash``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import MissingEmbedding, ShapeError, StoreError
from .seeding import make_rng, stable_hash64
from .text import ClassText, tokenize

_NORM_TOL = 1e-6


@dataclass(frozen=True)
class EmbeddingVec:
    """Unit-norm dense vector; norm is checked at construction."""

    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size == 0:
            raise ShapeError(f"embedding must be a 1-d vector, got shape {vals.shape}")
        norm = float(np.linalg.norm(vals))
        if abs(norm - 1.0) > _NORM_TOL:
            raise ShapeError(f"embedding norm {norm} is not 1 within {_NORM_TOL}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    @classmethod
    def normalized(cls, values: Sequence[float] | np.ndarray) -> "EmbeddingVec":
        vals = np.asarray(values, dtype=np.float64)
        norm = float(np.linalg.norm(vals))
        if norm == 0.0:
            raise ShapeError("cannot normalize a zero vector")
        return cls(vals / norm)


@dataclass(frozen=True)
class VisualSample:
    sample_id: int
    vec: EmbeddingVec
    true_class: int | None = None


def cosine_similarity(a: EmbeddingVec, b: EmbeddingVec) -> float:
    """Dot product of unit vectors, clamped into [-1, 1]."""
    if a.dim != b.dim:
        raise ShapeError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return float(np.clip(np.dot(a.values, b.values), -1.0, 1.0))


class EmbeddingProvider:
    """Deterministic text encoder contract.

    ``prompt_prefix``/``prompt_suffix`` are optional word sequences glued
    around every text before encoding (the stand-in for hand-crafted
    prompt templates).
    """

    dimension: int

    def __init__(self, prompt_prefix: str = "", prompt_suffix: str = ""):
        self._prefix = tokenize(prompt_prefix).words if prompt_prefix.strip() else ()
        self._suffix = tokenize(prompt_suffix).words if prompt_suffix.strip() else ()

    def _prompted_words(self, text: ClassText) -> tuple[str, ...]:
        if not self._prefix and not self._suffix:
            return text.words
        return self._prefix + text.words + self._suffix

    def encode_text(self, text: ClassText) -> EmbeddingVec:
        raise NotImplementedError

    def encode_matrix(self, texts: Sequence[ClassText]) -> np.ndarray:
        """Row-stacked embeddings; the batched path decode relies on."""
        out = np.empty((len(texts), self.dimension), dtype=np.float64)
        for i, t in enumerate(texts):
            out[i] = self.encode_text(t).values
        return out


class LexiconEmbedder(EmbeddingProvider):
    """Seeded Gaussian vector per distinct word; text = normalized word sum.

    Word order is deliberately ignored (the sum commutes). Vectors for
    different words are independent, so edit-distance neighbors are no
    closer in this space than arbitrary words.
    """

    def __init__(self, seed: int, dimension: int,
                 prompt_prefix: str = "", prompt_suffix: str = ""):
        if dimension < 2:
            raise ShapeError(f"lexicon embedder needs dimension >= 2, got {dimension}")
        super().__init__(prompt_prefix, prompt_suffix)
        self.seed = int(seed)
        self.dimension = int(dimension)
        self._word_vecs: dict[str, np.ndarray] = {}

    def _word_vec(self, word: str) -> np.ndarray:
        vec = self._word_vecs.get(word)
        if vec is None:
            rng = make_rng(stable_hash64(self.seed, word))
            vec = rng.standard_normal(self.dimension)
            vec.setflags(write=False)
            self._word_vecs[word] = vec
        return vec

    def encode_text(self, text: ClassText) -> EmbeddingVec:
        total = np.zeros(self.dimension)
        for word in self._prompted_words(text):
            total += self._word_vec(word)
        return EmbeddingVec.normalized(total)


class TrigramEmbedder(EmbeddingProvider):
    """Character trigrams (with ^/$ boundary markers) hashed into buckets."""

    def __init__(self, dimension: int, prompt_prefix: str = "", prompt_suffix: str = ""):
        if dimension < 8:
            raise ShapeError(f"trigram embedder needs dimension >= 8, got {dimension}")
        super().__init__(prompt_prefix, prompt_suffix)
        self.dimension = int(dimension)
        self._word_counts: dict[str, np.ndarray] = {}

    def _word_count_vec(self, word: str) -> np.ndarray:
        vec = self._word_counts.get(word)
        if vec is None:
            vec = np.zeros(self.dimension)
            padded = f"^{word}$"
            for i in range(len(padded) - 2):
                bucket = stable_hash64(padded[i : i + 3]) % self.dimension
                vec[bucket] += 1.0
            vec.setflags(write=False)
            self._word_counts[word] = vec
        return vec

    def encode_text(self, text: ClassText) -> EmbeddingVec:
        total = np.zeros(self.dimension)
        for word in self._prompted_words(text):
            total += self._word_count_vec(word)
        return EmbeddingVec.normalized(total)


class StoreProvider(EmbeddingProvider):
    """Provider backed by explicit text -> vector records; total only
    over the stored texts, anything else raises MissingEmbedding."""

    def __init__(self, vectors: dict[str, np.ndarray], dimension: int):
        super().__init__()
        self.dimension = int(dimension)
        self._vectors = vectors

    def encode_text(self, text: ClassText) -> EmbeddingVec:
        key = text.render()
        vec = self._vectors.get(key)
        if vec is None:
            raise MissingEmbedding(f"store has no embedding for {key!r}")
        return EmbeddingVec(vec)

    @property
    def stored_texts(self) -> tuple[str, ...]:
        return tuple(self._vectors)


def load_embedding_store(path: str | Path) -> tuple[StoreProvider, list[VisualSample]]:
    """Read a JSONL store of text and visual records.

    Record shape: ``{"key": ..., "kind": "text"|"visual",
    "true_class": int|null, "vec": [...]}``. Vectors are re-normalized
    on load; mixed dimensions are an error.
    """
    texts: dict[str, np.ndarray] = {}
    visuals: list[VisualSample] = []
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = json.loads(line)
                kind = rec["kind"]
                key = rec["key"]
                vec = np.asarray(rec["vec"], dtype=np.float64)
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise StoreError(f"{path}:{line_no}: bad record ({exc})")
            if vec.ndim != 1 or vec.size == 0:
                raise StoreError(f"{path}:{line_no}: vec must be a non-empty list")
            if dim is None:
                dim = vec.size
            elif vec.size != dim:
                raise StoreError(
                    f"{path}:{line_no}: dimension {vec.size} != {dim} seen earlier"
                )
            norm = float(np.linalg.norm(vec))
            if norm == 0.0:
                raise StoreError(f"{path}:{line_no}: zero vector")
            unit = EmbeddingVec(vec / norm)
            if kind == "text":
                texts[str(key)] = unit.values
            elif kind == "visual":
                true_class = rec.get("true_class")
                visuals.append(
                    VisualSample(int(key), unit, None if true_class is None else int(true_class))
                )
            else:
                raise StoreError(f"{path}:{line_no}: unknown kind {kind!r}")
    if dim is None:
        raise StoreError(f"{path}: store is empty")
    return StoreProvider(texts, dim), visuals


def write_embedding_store(
    path: str | Path,
    text_vectors: dict[str, np.ndarray] | None = None,
    visuals: Sequence[VisualSample] = (),
) -> None:
    """Inverse of load_embedding_store; floats are emitted via repr so the
    round trip is exact."""
    lines = []
    for key, vec in (text_vectors or {}).items():
        lines.append(
            json.dumps(
                {"key": key, "kind": "text", "true_class": None, "vec": list(map(float, vec))}
            )
        )
    for sample in visuals:
        lines.append(
            json.dumps(
                {
                    "key": sample.sample_id,
                    "kind": "visual",
                    "true_class": sample.true_class,
                    "vec": list(map(float, sample.vec.values)),
                }
            )
        )
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def generate_world(
    classes: Sequence[ClassText],
    provider: EmbeddingProvider,
    m: int,
    sigma: float,
    seed: int,
) -> list[VisualSample]:
    """m synthetic visual samples per class, Gaussian-jittered around the
    class-text embedding and re-normalized. sample_id runs 0..C*m-1 in
    class order; true_class is recorded."""
    if m < 1:
        raise ShapeError(f"samples per class must be >= 1, got {m}")
    if sigma < 0 or not math.isfinite(sigma):
        raise ShapeError(f"sigma must be finite and >= 0, got {sigma}")
    rng = make_rng(seed)
    samples: list[VisualSample] = []
    for text in classes:
        center = provider.encode_text(text)
        for _ in range(m):
            g = rng.standard_normal(provider.dimension)
            if sigma == 0.0:
                vec = center
            else:
                vec = EmbeddingVec.normalized(center.values + sigma * g)
            samples.append(VisualSample(len(samples), vec, text.class_id))
    return samples
