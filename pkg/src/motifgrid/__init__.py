"""Motif statistics for layered sparse networks.

Binary connectivity masks go in; counts of eight small motifs, z-scores
against an edge-preserving random ensemble, and distributions of those
z-scores across sparsity levels come out.
"""

from .ensemble import NullSpec, census_batch, generate, null_spec_of
from .masks import MaskError, MaskStack, clean_dead, load, save, sparsity_profile, validate
from .motifs import MOTIFS, MotifCensus, MotifKind, count, count_all
from .significance import DistributionSummary, ZScoreReport, summarize, zscore

__version__ = "0.1.0"

__all__ = [
    "MOTIFS", "DistributionSummary", "MaskError", "MaskStack", "MotifCensus", "MotifKind", "NullSpec",
    "ZScoreReport", "census_batch", "clean_dead", "count", "count_all", "generate", "load",
    "null_spec_of", "save", "sparsity_profile", "summarize", "validate", "zscore",
]
