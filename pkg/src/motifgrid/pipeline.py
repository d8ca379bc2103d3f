"""Clean -> count -> null ensemble -> z-score for single networks."""

from __future__ import annotations

import zlib

import numpy as np

from .ensemble import census_batch, null_spec_of
from .masks import MaskStack, clean_dead
from .motifs import MotifCensus, count_all
from .significance import ZScoreReport, zscore


def network_seed(root_seed: int, label: str) -> int:
    """64-bit null-ensemble seed for one network, derived from the root seed
    and the network label so results do not depend on processing order."""
    state = np.random.SeedSequence(root_seed, spawn_key=(zlib.crc32(label.encode()),)).generate_state(2, np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def prepare(stack: MaskStack, cleanup: str = "forward") -> tuple[MaskStack, int]:
    if cleanup == "off":
        return stack, 0
    return clean_dead(stack, cleanup)


def analyze(stack: MaskStack, root_seed: int, nulls: int = 1000, sparsity: str | None = None,
            jobs: int = 1) -> tuple[MotifCensus, ZScoreReport]:
    """Census and z-scores of an already cleaned stack."""
    census = count_all(stack, sparsity)
    spec = null_spec_of(stack, network_seed(root_seed, stack.label), nulls)
    return census, zscore(census, census_batch(spec, jobs=jobs))
