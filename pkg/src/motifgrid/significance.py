"""Z-scores of motif counts against a null ensemble, and their aggregation
across network collections and sparsity levels."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .motifs import MOTIFS, MotifCensus, MotifKind

QUANTILES = (("p5", 5), ("p25", 25), ("median", 50), ("p75", 75), ("p95", 95))
COMPONENTS = ("n_real", "random_mean", "random_std")


@dataclass(frozen=True)
class MotifStats:
    n_real: int
    random_mean: float
    random_std: float
    z: float | None

    @property
    def degenerate(self) -> bool:
        return self.z is None


@dataclass
class ZScoreReport:
    stats: dict[MotifKind, MotifStats]
    sample_count: int
    label: str = ""
    sparsity: str = ""

    def __getitem__(self, kind) -> MotifStats:
        return self.stats[MotifKind(kind)]

    def rows(self) -> list[dict]:
        out = []
        for kind in MOTIFS:
            s = self.stats[kind]
            out.append(
                {
                    "label": self.label,
                    "sparsity": self.sparsity,
                    "motif": kind.value,
                    "n_real": s.n_real,
                    "random_mean": s.random_mean,
                    "random_std": s.random_std,
                    "z": s.z,
                    "degenerate": s.degenerate,
                    "samples": self.sample_count,
                }
            )
        return out


def _moments(values: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Exact mean and population variance of integer counts."""
    n = len(values)
    s = sum(values)
    sq = sum(v * v for v in values)
    return Fraction(s, n), Fraction(n * sq - s * s, n * n)


def zscore(census: MotifCensus, null_censuses: Sequence[MotifCensus]) -> ZScoreReport:
    if len(null_censuses) < 2:
        raise ValueError("z-scores need at least two null samples")
    stats = {}
    for kind in MOTIFS:
        real = census.counts[kind]
        mean, var = _moments([c.counts[kind] for c in null_censuses])
        std = math.sqrt(var)
        # the difference is taken exactly so huge counts keep their spread
        z = None if var == 0 else float(real - mean) / std
        stats[kind] = MotifStats(real, float(mean), std, z)
    return ZScoreReport(stats, len(null_censuses), census.label, census.sparsity)


def _tag_key(tag: str):
    try:
        return (0, float(tag), tag)
    except ValueError:
        return (1, 0.0, tag)


def group_by_sparsity(reports: Sequence[ZScoreReport]) -> dict[str, list[ZScoreReport]]:
    groups: dict[str, list[ZScoreReport]] = {}
    for r in reports:
        groups.setdefault(r.sparsity, []).append(r)
    return {k: groups[k] for k in sorted(groups, key=_tag_key)}


@dataclass
class SummaryRow:
    motif: MotifKind
    sparsity: str
    n: int
    n_degenerate: int
    min: float | None = None
    p5: float | None = None
    p25: float | None = None
    median: float | None = None
    p75: float | None = None
    p95: float | None = None
    max: float | None = None
    mean: float | None = None
    std: float | None = None

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["motif"] = self.motif.value
        return d


@dataclass
class DistributionSummary:
    rows: list[SummaryRow] = field(default_factory=list)

    def get(self, motif, sparsity: str) -> SummaryRow:
        motif = MotifKind(motif)
        for row in self.rows:
            if row.motif is motif and row.sparsity == sparsity:
                return row
        raise KeyError((motif, sparsity))

    @property
    def levels(self) -> list[str]:
        seen = []
        for row in self.rows:
            if row.sparsity not in seen:
                seen.append(row.sparsity)
        return seen


def describe(values: Sequence[float]) -> dict:
    """Linear-interpolated percentiles plus mean and population std."""
    v = np.sort(np.asarray(values, dtype=float))
    out = {"min": float(v[0]), "max": float(v[-1]), "mean": float(v.mean()), "std": float(v.std())}
    for name, q in QUANTILES:
        out[name] = float(np.percentile(v, q, method="linear"))
    return out


def summarize(reports: Sequence[ZScoreReport]) -> DistributionSummary:
    """Per (motif, sparsity tag) distribution of z across the collection.

    Degenerate entries are counted but excluded from the statistics; a group
    with no usable z has its statistics left as ``None``.
    """
    if not reports:
        raise ValueError("nothing to summarize")
    summary = DistributionSummary()
    for tag, group in group_by_sparsity(reports).items():
        for kind in MOTIFS:
            zs = [r.stats[kind].z for r in group if r.stats[kind].z is not None]
            row = SummaryRow(kind, tag, len(group), len(group) - len(zs))
            if zs:
                for k, v in describe(zs).items():
                    setattr(row, k, v)
            summary.rows.append(row)
    return summary


def component_tables(reports: Sequence[ZScoreReport]) -> dict[str, list[dict]]:
    """The three ingredients of each z-score as label x motif tables:
    real counts, null means and null standard deviations."""
    if not reports:
        raise ValueError("no reports")
    tables: dict[str, list[dict]] = {name: [] for name in COMPONENTS}
    for r in reports:
        for name in COMPONENTS:
            row = {"label": r.label, "sparsity": r.sparsity}
            row.update({k.value: getattr(r.stats[k], name) for k in MOTIFS})
            tables[name].append(row)
    return tables


def z_from_components(n_real: float, random_mean: float, random_std: float) -> float | None:
    if random_std == 0:
        return None
    return (n_real - random_mean) / random_std
