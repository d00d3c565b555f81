"""Accelerated Levenshtein kernels used by the corpus index.

When numba is importable the kernels are JIT-compiled (and disk-cached);
otherwise pure-Python equivalents are used. Either way the values are
plain Levenshtein distances, contractually identical to
``text.edit_distance`` — tests enforce the equivalence.
"""

from __future__ import annotations

import numpy as np


def encode_word(word: str) -> np.ndarray:
    """Word as an array of Unicode code points."""
    return np.array([ord(c) for c in word], dtype=np.uint32)


def _pair_distance_py(a, b):
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(la + 1))
    for i in range(1, lb + 1):
        cur = [i] + [0] * la
        cb = b[i - 1]
        for j in range(1, la + 1):
            cost = prev[j - 1] + (1 if a[j - 1] != cb else 0)
            up = prev[j] + 1
            left = cur[j - 1] + 1
            cur[j] = min(cost, up, left)
        prev = cur
    return prev[la]


def _scan_distances_py(query, matrix, lengths, out):
    q = list(query)
    for r in range(matrix.shape[0]):
        w = list(matrix[r, : lengths[r]])
        out[r] = _pair_distance_py(w, q)


try:  # pragma: no cover - exercised implicitly on numba machines
    from numba import njit

    @njit(cache=True)
    def _pair_distance_nb(a, b):  # pragma: no cover - compiled
        la, lb = a.shape[0], b.shape[0]
        if la == 0:
            return lb
        if lb == 0:
            return la
        prev = np.empty(la + 1, dtype=np.int64)
        cur = np.empty(la + 1, dtype=np.int64)
        for j in range(la + 1):
            prev[j] = j
        for i in range(1, lb + 1):
            cur[0] = i
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
            prev, cur = cur, prev
        return prev[la]

    @njit(cache=True)
    def _scan_distances_nb(query, matrix, lengths, out):  # pragma: no cover
        lq = query.shape[0]
        maxlen = matrix.shape[1]
        prev = np.empty(maxlen + 1, dtype=np.int64)
        cur = np.empty(maxlen + 1, dtype=np.int64)
        for r in range(matrix.shape[0]):
            lw = lengths[r]
            if lq == 0:
                out[r] = lw
                continue
            if lw == 0:
                out[r] = lq
                continue
            for j in range(lw + 1):
                prev[j] = j
            for i in range(1, lq + 1):
                cur[0] = i
                cq = query[i - 1]
                for j in range(1, lw + 1):
                    cost = prev[j - 1]
                    if matrix[r, j - 1] != cq:
                        cost += 1
                    up = prev[j] + 1
                    if up < cost:
                        cost = up
                    left = cur[j - 1] + 1
                    if left < cost:
                        cost = left
                    cur[j] = cost
                for j in range(lw + 1):
                    prev[j] = cur[j]
            out[r] = prev[lw]

    def pair_distance(a: np.ndarray, b: np.ndarray) -> int:
        return int(_pair_distance_nb(a, b))

    def scan_distances(query: np.ndarray, matrix: np.ndarray, lengths: np.ndarray) -> np.ndarray:
        out = np.empty(matrix.shape[0], dtype=np.int64)
        _scan_distances_nb(query, matrix, lengths, out)
        return out

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    def pair_distance(a: np.ndarray, b: np.ndarray) -> int:
        return _pair_distance_py(list(a), list(b))

    def scan_distances(query: np.ndarray, matrix: np.ndarray, lengths: np.ndarray) -> np.ndarray:
        out = np.empty(matrix.shape[0], dtype=np.int64)
        _scan_distances_py(query, matrix, lengths, out)
        return out

    HAVE_NUMBA = False
