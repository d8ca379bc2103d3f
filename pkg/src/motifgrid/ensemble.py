"""Random null networks with the same layer sizes and per-layer edge counts.

Sample ``k`` of a null spec is drawn from its own generator, seeded from
``(seed, k)`` through :class:`numpy.random.SeedSequence` spawn keys, so any
sample can be regenerated in isolation and the ensemble does not depend on
generation order or worker count.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .masks import MaskStack, sparsity_profile
from .motifs import MotifCensus, count_all


class NullSpecError(ValueError):
    pass


@dataclass(frozen=True)
class NullSpec:
    layer_dims: tuple[int, ...]
    per_layer_edges: tuple[int, ...]
    seed: int = 0
    sample_count: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "layer_dims", tuple(int(d) for d in self.layer_dims))
        object.__setattr__(self, "per_layer_edges", tuple(int(e) for e in self.per_layer_edges))
        dims, edges = self.layer_dims, self.per_layer_edges
        if len(dims) < 2 or len(edges) != len(dims) - 1:
            raise NullSpecError(f"need {len(dims) - 1} edge counts for dims {dims}, got {len(edges)}")
        if any(d < 1 for d in dims):
            raise NullSpecError(f"layer sizes must be positive: {dims}")
        for i, e in enumerate(edges):
            if not 0 <= e <= dims[i] * dims[i + 1]:
                raise NullSpecError(f"mask {i}: {e} edges do not fit a {dims[i]}x{dims[i + 1]} grid")
        if self.sample_count < 2:
            raise NullSpecError("sample_count must be at least 2")
        if not 0 <= self.seed < 2**64:
            raise NullSpecError("seed must be a 64-bit unsigned integer")


def null_spec_of(stack: MaskStack, seed: int = 0, sample_count: int = 1000) -> NullSpec:
    prof = sparsity_profile(stack)
    return NullSpec(tuple(stack.layer_dims), tuple(prof.per_layer_edges), seed, sample_count)


def sample_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(index,))))


def _rejection_sample(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """``k`` distinct integers from ``range(n)``, uniformly; efficient for k <= n/2."""
    picked = np.empty(0, dtype=np.int64)
    while picked.size < k:
        need = k - picked.size
        draws = np.concatenate([picked, rng.integers(0, n, size=need + need // 4 + 4)])
        _, first = np.unique(draws, return_index=True)
        picked = draws[np.sort(first)][:k]
    return picked


def sample_positions(rng: np.random.Generator, n: int, k: int) -> np.ndarray:
    """Sorted uniform ``k``-subset of ``range(n)``.

    Sparse draws use rejection directly; dense draws reject on the (smaller)
    complement instead.
    """
    if k < 0 or k > n:
        raise NullSpecError(f"cannot place {k} edges in {n} slots")
    if 2 * k <= n:
        return np.sort(_rejection_sample(rng, n, k))
    keep = np.ones(n, dtype=bool)
    keep[_rejection_sample(rng, n, n - k)] = False
    return np.flatnonzero(keep)


def generate(spec: NullSpec, index: int) -> MaskStack:
    if not 0 <= index < spec.sample_count:
        raise IndexError(f"sample index {index} outside [0, {spec.sample_count})")
    rng = sample_rng(spec.seed, index)
    masks = []
    for i, e in enumerate(spec.per_layer_edges):
        rows, cols = spec.layer_dims[i], spec.layer_dims[i + 1]
        m = np.zeros(rows * cols, dtype=np.int64)
        m[sample_positions(rng, rows * cols, e)] = 1
        masks.append(m.reshape(rows, cols))
    return MaskStack(masks, f"null-{spec.seed}-{index}")


def _census_range(args) -> list[MotifCensus]:
    spec, start, stop = args
    return [count_all(generate(spec, k), sparsity="") for k in range(start, stop)]


def census_batch(spec: NullSpec, jobs: int = 1) -> list[MotifCensus]:
    """Censuses of every null sample, in index order regardless of ``jobs``."""
    n = spec.sample_count
    if jobs <= 1:
        return _census_range((spec, 0, n))
    chunk = -(-n // (jobs * 4))
    tasks = [(spec, s, min(s + chunk, n)) for s in range(0, n, chunk)]
    out: list[MotifCensus] = []
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for part in pool.map(_census_range, tasks):
            out.extend(part)
    return out
