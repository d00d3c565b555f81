"""Word lexicon and K-nearest-by-edit-distance proposal search.

Two query paths exist and must return byte-identical results: a linear
scan over every corpus word (the reference) and a BK-tree index that
prunes subtrees with the triangle inequality. Candidates are ordered by
(distance asc, frequency desc, word asc), which makes every proposal
set fully deterministic.
"""

from __future__ import annotations

import gzip
import heapq
import importlib.resources
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from ._kernels import encode_word, pair_distance, scan_distances
from .errors import ConfigError, CorpusParseError, EmptyCorpus
from .text import WordCandidate, edit_distance, normalize


class Corpus:
    """Immutable word -> frequency lexicon.

    Words are NFC-normalized and lowercased at construction; duplicates
    merge by summing frequencies. The word table is sorted so that all
    downstream tie-breaking is reproducible.
    """

    def __init__(self, entries: Mapping[str, int]):
        merged: dict[str, int] = {}
        for raw_word, freq in entries.items():
            word = normalize(str(raw_word))
            if not word or any(ch.isspace() for ch in word):
                raise CorpusParseError(f"bad corpus word: {raw_word!r}", 0)
            freq = int(freq)
            if freq < 1:
                raise CorpusParseError(f"non-positive frequency for {word!r}", 0)
            merged[word] = merged.get(word, 0) + freq
        if not merged:
            raise EmptyCorpus("corpus contains no words")
        self.words: tuple[str, ...] = tuple(sorted(merged))
        self.frequencies: np.ndarray = np.array([merged[w] for w in self.words], dtype=np.int64)
        self.entries: dict[str, int] = {w: int(f) for w, f in zip(self.words, self.frequencies)}
        # padded code-point matrix for the batch distance kernel
        lengths = np.array([len(w) for w in self.words], dtype=np.int64)
        matrix = np.zeros((len(self.words), max(1, int(lengths.max()))), dtype=np.uint32)
        for row, word in enumerate(self.words):
            matrix[row, : len(word)] = [ord(c) for c in word]
        self._lengths = lengths
        self._matrix = matrix

    @property
    def size(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.entries

    def propose(self, word: str, k: int) -> "ProposalSet":
        return propose(self, word, k)


@dataclass(frozen=True)
class ProposalSet:
    """The k corpus words nearest to one noisy source word."""

    source_word: str
    candidates: tuple[WordCandidate, ...]

    @property
    def words(self) -> tuple[str, ...]:
        return tuple(c.word for c in self.candidates)


def _select(corpus: Corpus, source: str, distances: np.ndarray, k: int) -> ProposalSet:
    """Pick the k best ids under (distance, -frequency, word) and wrap them."""
    # stable sorts + lexicographically pre-sorted word table make the final
    # tie-break (word ascending) come out of the residual input order
    order = np.lexsort((-corpus.frequencies, distances))
    top = order[: min(k, corpus.size)]
    cands = tuple(
        WordCandidate(corpus.words[i], int(distances[i]), int(corpus.frequencies[i]))
        for i in top
    )
    return ProposalSet(source, cands)


def propose(corpus: Corpus, word: str, k: int) -> ProposalSet:
    """K nearest corpus words to ``word`` by full linear scan."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    source = normalize(word)
    distances = scan_distances(encode_word(source), corpus._matrix, corpus._lengths)
    return _select(corpus, source, distances, k)


def propose_bruteforce(corpus: Corpus, word: str, k: int) -> ProposalSet:
    """Plain per-word loop over ``edit_distance``; slow reference path."""
    if k < 1:
        raise ConfigError(f"k must be >= 1, got {k}")
    source = normalize(word)
    distances = np.array([edit_distance(w, source) for w in corpus.words], dtype=np.int64)
    return _select(corpus, source, distances, k)


class CorpusIndex:
    """BK-tree over the corpus word table.

    ``propose`` answers are byte-identical to the linear scan; the tree
    only skips subtrees that the triangle inequality proves irrelevant.
    Queries are cached by (word, k). The tree itself is immutable once
    built; concurrent queries may at worst recompute a cache entry.
    """

    def __init__(self, corpus: Corpus):
        self.corpus = corpus
        self._enc = [encode_word(w) for w in corpus.words]
        self._children: list[dict[int, int]] = [{} for _ in corpus.words]
        self._root = 0
        for wid in range(1, corpus.size):
            node = self._root
            arr = self._enc[wid]
            while True:
                d = pair_distance(arr, self._enc[node])
                child = self._children[node].get(d)
                if child is None:
                    self._children[node][d] = wid
                    break
                node = child
        self._cache: dict[tuple[str, int], ProposalSet] = {}

    def propose(self, word: str, k: int) -> ProposalSet:
        if k < 1:
            raise ConfigError(f"k must be >= 1, got {k}")
        source = normalize(word)
        key = (source, k)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        result = self._search(source, k)
        self._cache[key] = result
        return result

    def _search(self, source: str, k: int) -> ProposalSet:
        corpus = self.corpus
        query = encode_word(source)
        k_eff = min(k, corpus.size)
        worst: list[int] = []  # max-heap (negated) of the k_eff smallest distances
        tau = np.inf
        found_ids: list[int] = []
        found_d: list[int] = []
        stack = [self._root]
        while stack:
            node = stack.pop()
            d = pair_distance(query, self._enc[node])
            if d <= tau:
                found_ids.append(node)
                found_d.append(d)
                if len(worst) < k_eff:
                    heapq.heappush(worst, -d)
                    if len(worst) == k_eff:
                        tau = -worst[0]
                elif d < -worst[0]:
                    heapq.heapreplace(worst, -d)
                    tau = -worst[0]
            for edge, child in self._children[node].items():
                if abs(d - edge) <= tau:
                    stack.append(child)
        tau_final = -worst[0] if len(worst) == k_eff else np.inf
        keep = [(d, i) for d, i in zip(found_d, found_ids) if d <= tau_final]
        keep.sort(key=lambda pair: (pair[0], -corpus.frequencies[pair[1]], pair[1]))
        cands = tuple(
            WordCandidate(corpus.words[i], int(d), int(corpus.frequencies[i]))
            for d, i in keep[:k_eff]
        )
        return ProposalSet(source, cands)


def build_index(corpus: Corpus) -> CorpusIndex:
    return CorpusIndex(corpus)


def _parse_lines(lines: Iterable[str]) -> dict[str, int]:
    entries: dict[str, int] = {}
    for line_no, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        fields = stripped.split("\t")
        if len(fields) == 1:
            word, freq = fields[0], 1
        elif len(fields) == 2:
            word = fields[0]
            try:
                freq = int(fields[1])
            except ValueError:
                raise CorpusParseError(f"frequency is not an integer: {fields[1]!r}", line_no)
        else:
            raise CorpusParseError(f"expected 'word<TAB>frequency', got {stripped!r}", line_no)
        word = normalize(word)
        if not word or any(ch.isspace() for ch in word):
            raise CorpusParseError(f"bad word field: {fields[0]!r}", line_no)
        if freq < 1:
            raise CorpusParseError(f"non-positive frequency: {freq}", line_no)
        entries[word] = entries.get(word, 0) + freq
    return entries


def load_corpus(path: str | Path) -> Corpus:
    """Read a ``word<TAB>frequency`` lexicon file (gzipped if *.gz)."""
    path = Path(path)
    opener = gzip.open if path.suffix == ".gz" else open
    with opener(path, "rt", encoding="utf-8") as fh:
        entries = _parse_lines(fh)
    if not entries:
        raise EmptyCorpus(f"no corpus entries in {path}")
    return Corpus(entries)


def default_lexicon_path() -> Path:
    """Path of the packaged English lexicon (70317 words with frequencies)."""
    return Path(str(importlib.resources.files("denoiser").joinpath("data/english_words.tsv.gz")))


def load_default_corpus() -> Corpus:
    return load_corpus(default_lexicon_path())
