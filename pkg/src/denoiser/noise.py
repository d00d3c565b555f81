"""Character-level contamination of class texts.

Each character of each word is independently hit with probability p;
the perturbation substitutes it, deletes it, or inserts a new character
behind it (``mixed`` picks one of the three uniformly). Word count and
word order are always preserved; a deletion that would empty a word is
skipped.

Determinism contract: texts are processed with one PCG64 generator per
class, seeded from (seed, class_id), in a fixed draw order — noise flag,
then operation choice (mixed only), then replacement/insertion pick.
Golden files rely on this exact sequence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import ConfigError, ShapeError
from .seeding import make_rng
from .text import ClassText, edit_distance

DEFAULT_ALPHABET = "abcdefghijklmnopqrstuvwxyz"

KINDS = ("substitute", "insert", "delete", "mixed")
_MIXED_OPS = ("substitute", "insert", "delete")


@dataclass(frozen=True)
class NoiseSpec:
    p: float
    kind: str = "mixed"
    seed: int = 0
    alphabet: str = DEFAULT_ALPHABET

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ConfigError(f"noise rate must lie in [0, 1], got {self.p}")
        if self.kind not in KINDS:
            raise ConfigError(f"unknown noise kind {self.kind!r}; expected one of {KINDS}")
        if not self.alphabet:
            raise ConfigError("alphabet must be non-empty")


def _perturb_word(word: str, spec: NoiseSpec, rng) -> str:
    out: list[str] = []
    last = len(word) - 1
    for i, ch in enumerate(word):
        if rng.random() >= spec.p:
            out.append(ch)
            continue
        op = spec.kind
        if op == "mixed":
            op = _MIXED_OPS[rng.integers(0, 3)]
        if op == "substitute":
            pool = [c for c in spec.alphabet if c != ch]
            if not pool:
                out.append(ch)  # nothing to substitute with
            else:
                out.append(pool[rng.integers(0, len(pool))])
        elif op == "insert":
            out.append(ch)
            out.append(spec.alphabet[rng.integers(0, len(spec.alphabet))])
        else:  # delete; keep the char if dropping it would empty the word
            if not out and i == last:
                out.append(ch)
    return "".join(out)


def perturb(texts: list[ClassText], spec: NoiseSpec) -> list[ClassText]:
    """Noisy copies of ``texts``; whitespace and word boundaries untouched."""
    noisy = []
    for text in texts:
        rng = make_rng(spec.seed, text.class_id)
        words = tuple(_perturb_word(w, spec, rng) for w in text.words)
        noisy.append(ClassText(text.class_id, words))
    return noisy


def perturbation_rate(clean: list[ClassText], noisy: list[ClassText]) -> float:
    """Realized per-character edit rate between parallel text lists."""
    if len(clean) != len(noisy):
        raise ShapeError(f"class counts differ: {len(clean)} vs {len(noisy)}")
    total_edits = 0
    total_chars = 0
    for c, n in zip(clean, noisy):
        if c.n_words != n.n_words:
            raise ShapeError(
                f"word counts differ for class {c.class_id}: {c.n_words} vs {n.n_words}"
            )
        for cw, nw in zip(c.words, n.words):
            total_edits += edit_distance(cw, nw)
            total_chars += len(cw)
    return total_edits / total_chars
