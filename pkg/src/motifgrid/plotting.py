"""Matplotlib figures for z-score reports, written next to the tabular output."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .motifs import MOTIFS  # noqa: E402
from .significance import COMPONENTS, DistributionSummary, ZScoreReport, group_by_sparsity  # noqa: E402

STYLE = {
    "axes": dict(labelsize=8, titlesize=9, linewidth=0.6),
    "font": dict(family="sans-serif", size=8),
    "xtick": dict(labelsize=7),
    "ytick": dict(labelsize=7),
    "lines": dict(linewidth=1.0),
    "savefig": dict(dpi=150, bbox="tight"),
}

COMPONENT_TITLES = {
    "n_real": "count in network",
    "random_mean": "mean count in null ensemble",
    "random_std": "std of count in null ensemble",
}


def apply_style():
    for group, values in STYLE.items():
        matplotlib.rc(group, **values)


def _grid(n=len(MOTIFS), ncols=4):
    nrows = -(-n // ncols)
    fig, axes = plt.subplots(nrows, ncols, figsize=(2.2 * ncols, 1.9 * nrows), squeeze=False)
    return fig, axes.ravel()


def zscore_violins(reports: Sequence[ZScoreReport], level: str, path: Path) -> Path:
    """Distribution of z per motif across networks at one sparsity level."""
    apply_style()
    group = [r for r in reports if r.sparsity == level]
    data, names = [], []
    for kind in MOTIFS:
        zs = [r.stats[kind].z for r in group if r.stats[kind].z is not None]
        if zs:
            data.append(zs)
            names.append(kind.value)
    fig, ax = plt.subplots(figsize=(7, 3))
    if data:
        ax.violinplot(data, showmedians=True)
        ax.set_xticks(range(1, len(names) + 1), names, rotation=30)
    ax.axhline(0, color="0.5", lw=0.6, ls="--")
    ax.set_ylabel("z-score")
    ax.set_title(f"z across {len(group)} networks at sparsity {level}")
    fig.savefig(path)
    plt.close(fig)
    return path


def zscore_vs_sparsity(summary: DistributionSummary, path: Path) -> Path:
    """One panel per motif: median z with 25-75 and 5-95 percentile bands."""
    apply_style()
    fig, axes = _grid()
    for ax, kind in zip(axes, MOTIFS):
        rows = [r for r in summary.rows if r.motif is kind and r.median is not None]
        x = np.array([float(r.sparsity) for r in rows])
        if rows:
            ax.fill_between(x, [r.p5 for r in rows], [r.p95 for r in rows], alpha=0.2, lw=0)
            ax.fill_between(x, [r.p25 for r in rows], [r.p75 for r in rows], alpha=0.35, lw=0)
            ax.plot(x, [r.median for r in rows], marker="o", ms=2)
        ax.axhline(0, color="0.5", lw=0.5, ls="--")
        ax.set_title(kind.value)
        ax.set_xlabel("sparsity")
    axes[0].set_ylabel("z-score")
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def components_vs_sparsity(reports: Sequence[ZScoreReport], component: str, path: Path) -> Path:
    if component not in COMPONENTS:
        raise ValueError(component)
    apply_style()
    groups = group_by_sparsity(reports)
    fig, axes = _grid()
    for ax, kind in zip(axes, MOTIFS):
        xs, ys = [], []
        for tag, group in groups.items():
            try:
                x = float(tag)
            except ValueError:
                continue
            for r in group:
                xs.append(x)
                ys.append(getattr(r.stats[kind], component))
        ax.scatter(xs, ys, s=4, alpha=0.5)
        ax.set_title(kind.value)
        ax.set_xlabel("sparsity")
        if ys and min(ys) > 0:
            ax.set_yscale("log")
    fig.suptitle(COMPONENT_TITLES[component])
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
    return path


def render_all(reports, summary, out: Path, ext: str = "png") -> list[Path]:
    out.mkdir(parents=True, exist_ok=True)
    paths = [zscore_vs_sparsity(summary, out / f"zscore_vs_sparsity.{ext}")]
    levels = summary.levels
    if levels:
        paths.append(zscore_violins(reports, levels[-1], out / f"zscore_top_level.{ext}"))
    for name in COMPONENTS:
        paths.append(components_vs_sparsity(reports, name, out / f"{name}_vs_sparsity.{ext}"))
    return paths
