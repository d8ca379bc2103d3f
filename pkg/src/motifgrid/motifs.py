"""Exact counts of the eight feed-forward motifs via matrix products and
binomial coefficients over mask rows, columns and products.

Masks up to ``DENSE_LIMIT`` entries are multiplied as dense float64 arrays
(BLAS; exact because every partial sum is an integer far below 2**53),
larger ones as int64 CSR matrices. Totals are returned as Python ints.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import sparse

from .masks import MaskStack, require_valid, sparsity_profile

DENSE_LIMIT = 65536  # rows * cols above which masks go sparse


class MotifKind(str, enum.Enum):
    CHAIN2 = "Chain2"
    CONVERGING2 = "Converging2"
    DIVERGING2 = "Diverging2"
    CHAIN3 = "Chain3"
    CONVERGING3 = "Converging3"
    DIVERGING3 = "Diverging3"
    BIFAN = "BiFan"
    BIPARALLEL = "BiParallel"

    def __str__(self):
        return self.value


MOTIFS = tuple(MotifKind)


@dataclass
class MotifCensus:
    counts: dict[MotifKind, int]
    label: str = ""
    sparsity: str = ""

    def __post_init__(self):
        self.counts = {MotifKind(k): int(v) for k, v in self.counts.items()}
        if set(self.counts) != set(MOTIFS):
            raise ValueError("census must hold exactly the eight motif kinds")
        if any(v < 0 for v in self.counts.values()):
            raise ValueError("motif counts are non-negative")

    def __getitem__(self, kind):
        return self.counts[MotifKind(kind)]

    def as_row(self) -> dict:
        return {"label": self.label, "sparsity": self.sparsity, **{k.value: self.counts[k] for k in MOTIFS}}


def _matrix(mask: np.ndarray):
    if mask.size > DENSE_LIMIT:
        return sparse.csr_array(mask.astype(np.int64))
    return mask.astype(np.float64)


def _entries(mat) -> np.ndarray:
    """Stored values of a dense or sparse matrix as int64 (zeros may be omitted)."""
    vals = mat.data if sparse.issparse(mat) else np.ravel(mat)
    if vals.dtype.kind == "f":
        return np.rint(vals).astype(np.int64)
    return vals


def _total(mat) -> int:
    return int(_entries(mat).sum())


def _comb_sum(values: np.ndarray, k: int) -> int:
    """Sum of C(v, k) over ``values`` (non-negative ints)."""
    v = np.asarray(values, dtype=np.int64)
    v = v[v >= k]
    if v.size == 0:
        return 0
    if k == 2:
        return int((v * (v - 1) // 2).sum())
    if k == 3:
        return int((v * (v - 1) * (v - 2) // 6).sum())
    raise ValueError(k)


@lru_cache(maxsize=64)
def _upper(n: int):
    return np.triu_indices(n, k=1)


class _Prepared:
    """Per-stack matrix cache shared by the counting routines."""

    def __init__(self, stack: MaskStack):
        require_valid(stack)
        self.stack = stack
        self.mats = [_matrix(m) for m in stack.masks]
        self._pairs: dict[int, object] = {}

    def pair_product(self, i: int):
        if i not in self._pairs:
            self._pairs[i] = self.mats[i] @ self.mats[i + 1]
        return self._pairs[i]


def _prep(stack) -> _Prepared:
    return stack if isinstance(stack, _Prepared) else _Prepared(stack)


def count_chain2(stack) -> int:
    """Length-2 directed paths: element sum of each consecutive mask product."""
    p = _prep(stack)
    return sum(_total(p.pair_product(i)) for i in range(len(p.mats) - 1))


def count_chain3(stack) -> int:
    p = _prep(stack)
    return sum(_total(p.pair_product(i) @ p.mats[i + 2]) for i in range(len(p.mats) - 2))


def count_converging2(stack) -> int:
    p = _prep(stack)
    return sum(_comb_sum(m.sum(axis=0), 2) for m in p.stack.masks)


def count_diverging2(stack) -> int:
    p = _prep(stack)
    return sum(_comb_sum(m.sum(axis=1), 2) for m in p.stack.masks)


def count_converging3(stack) -> int:
    p = _prep(stack)
    return sum(_comb_sum(m.sum(axis=0), 3) for m in p.stack.masks)


def count_diverging3(stack) -> int:
    p = _prep(stack)
    return sum(_comb_sum(m.sum(axis=1), 3) for m in p.stack.masks)


def count_bifan(stack) -> int:
    """Complete 2x2 bipartite sub-graphs within each mask.

    Row dot products give the number of shared targets ``d`` of every source
    pair; each unordered pair of distinct rows contributes C(d, 2).
    """
    p = _prep(stack)
    total = 0
    for mat in p.mats:
        gram = mat @ mat.T
        if sparse.issparse(gram):
            upper = sparse.triu(gram, k=1, format="coo")
            total += _comb_sum(_entries(upper), 2)
        else:
            total += _comb_sum(_entries(gram[_upper(gram.shape[0])]), 2)
    return total


def count_biparallel(stack) -> int:
    """Source-to-target diamonds through two distinct intermediates.

    Entry ``(s, t)`` of a consecutive mask product is the number of
    intermediates joining ``s`` to ``t``; each entry contributes C(entry, 2).
    """
    p = _prep(stack)
    return sum(_comb_sum(_entries(p.pair_product(i)), 2) for i in range(len(p.mats) - 1))


COUNTERS = {
    MotifKind.CHAIN2: count_chain2,
    MotifKind.CONVERGING2: count_converging2,
    MotifKind.DIVERGING2: count_diverging2,
    MotifKind.CHAIN3: count_chain3,
    MotifKind.CONVERGING3: count_converging3,
    MotifKind.DIVERGING3: count_diverging3,
    MotifKind.BIFAN: count_bifan,
    MotifKind.BIPARALLEL: count_biparallel,
}


def count(stack: MaskStack, kind) -> int:
    return COUNTERS[MotifKind(kind)](stack)


def count_all(stack: MaskStack, sparsity: str | None = None) -> MotifCensus:
    """Census of all eight motifs. ``sparsity`` defaults to the stack's
    global sparsity formatted to four decimals."""
    p = _Prepared(stack)
    if sparsity is None:
        sparsity = f"{sparsity_profile(stack).global_sparsity:.4f}"
    return MotifCensus({k: fn(p) for k, fn in COUNTERS.items()}, stack.label, sparsity)


def closed_form_full(dims) -> dict[MotifKind, int]:
    """Counts for the fully connected network with the given layer sizes."""
    from math import comb

    pairs = list(zip(dims[:-1], dims[1:]))
    return {
        MotifKind.CHAIN2: sum(dims[i] * dims[i + 1] * dims[i + 2] for i in range(len(dims) - 2)),
        MotifKind.CHAIN3: sum(dims[i] * dims[i + 1] * dims[i + 2] * dims[i + 3] for i in range(len(dims) - 3)),
        MotifKind.CONVERGING2: sum(c * comb(r, 2) for r, c in pairs),
        MotifKind.DIVERGING2: sum(r * comb(c, 2) for r, c in pairs),
        MotifKind.CONVERGING3: sum(c * comb(r, 3) for r, c in pairs),
        MotifKind.DIVERGING3: sum(r * comb(c, 3) for r, c in pairs),
        MotifKind.BIFAN: sum(comb(r, 2) * comb(c, 2) for r, c in pairs),
        MotifKind.BIPARALLEL: sum(dims[i] * dims[i + 2] * comb(dims[i + 1], 2) for i in range(len(dims) - 2)),
    }
