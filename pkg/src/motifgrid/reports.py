"""CSV and JSON serialization of censuses, z-score reports and summaries.

Floats are written with ``repr`` so every value reads back bit-for-bit.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Iterable, Sequence

from .motifs import MOTIFS, MotifCensus
from .significance import COMPONENTS, DistributionSummary, ZScoreReport, component_tables

ZSCORE_FIELDS = ["label", "sparsity", "motif", "n_real", "random_mean", "random_std", "z", "degenerate", "samples"]
SUMMARY_FIELDS = ["motif", "sparsity", "n", "n_degenerate", "min", "p5", "p25", "median", "p75", "p95", "max", "mean", "std"]
CENSUS_FIELDS = ["label", "sparsity"] + [k.value for k in MOTIFS]


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def to_csv(rows: Iterable[dict], fields: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([_cell(row.get(f)) for f in fields])
    return buf.getvalue()


def to_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


# -- census -------------------------------------------------------------------


def census_rows(censuses: Sequence[MotifCensus]) -> list[dict]:
    return [c.as_row() for c in censuses]


def census_json(censuses: Sequence[MotifCensus]) -> dict:
    return {
        "networks": [
            {"label": c.label, "sparsity": c.sparsity, "counts": {k.value: c.counts[k] for k in MOTIFS}}
            for c in censuses
        ]
    }


def census_json_rows(doc: dict) -> list[dict]:
    return [{"label": n["label"], "sparsity": n["sparsity"], **n["counts"]} for n in doc["networks"]]


# -- z-scores -------------------------------------------------------------------


def zscore_rows(reports: Sequence[ZScoreReport]) -> list[dict]:
    return [row for r in reports for row in r.rows()]


def zscore_json(reports: Sequence[ZScoreReport]) -> dict:
    networks = []
    for r in reports:
        motifs = {}
        for kind in MOTIFS:
            s = r.stats[kind]
            motifs[kind.value] = {
                "n_real": s.n_real,
                "random_mean": s.random_mean,
                "random_std": s.random_std,
                "z": s.z,
                "degenerate": s.degenerate,
            }
        networks.append({"label": r.label, "sparsity": r.sparsity, "samples": r.sample_count, "motifs": motifs})
    return {"networks": networks}


def zscore_json_rows(doc: dict) -> list[dict]:
    """Flatten a :func:`zscore_json` document into :func:`zscore_rows` form."""
    rows = []
    for net in doc["networks"]:
        for motif, s in net["motifs"].items():
            rows.append({"label": net["label"], "sparsity": net["sparsity"], "motif": motif, **s,
                         "samples": net["samples"]})
    return rows


def summary_rows(summary: DistributionSummary) -> list[dict]:
    return [row.as_dict() for row in summary.rows]


def plot_series(summary: DistributionSummary) -> list[dict]:
    """Per-motif series with x = sparsity level and y = z quantiles."""
    rows = []
    for row in summary.rows:
        try:
            x = float(row.sparsity)
        except ValueError:
            continue
        rows.append({"motif": row.motif.value, "x": x, **{k: getattr(row, k) for k in
                     ("p5", "p25", "median", "p75", "p95", "mean")}})
    return rows


PLOT_FIELDS = ["motif", "x", "p5", "p25", "median", "p75", "p95", "mean"]


# -- writers --------------------------------------------------------------------


def write_census(out: Path, censuses, fmt: str) -> list[Path]:
    if fmt == "json":
        path = out / "census.json"
        path.write_text(to_json(census_json(censuses)))
    else:
        path = out / "census.csv"
        path.write_text(to_csv(census_rows(censuses), CENSUS_FIELDS))
    return [path]


def write_zscores(out: Path, reports, fmt: str) -> list[Path]:
    """Z table plus the three component tables."""
    paths = []
    tables = component_tables(reports)
    if fmt == "json":
        doc = zscore_json(reports)
        paths.append(out / "zscores.json")
        paths[-1].write_text(to_json(doc))
        for name in COMPONENTS:
            paths.append(out / f"{name}.json")
            paths[-1].write_text(to_json(tables[name]))
    else:
        paths.append(out / "zscores.csv")
        paths[-1].write_text(to_csv(zscore_rows(reports), ZSCORE_FIELDS))
        for name in COMPONENTS:
            paths.append(out / f"{name}.csv")
            paths[-1].write_text(to_csv(tables[name], CENSUS_FIELDS))
    return paths


def write_summary(out: Path, summary: DistributionSummary, fmt: str) -> list[Path]:
    paths = []
    if fmt == "json":
        paths.append(out / "summary.json")
        paths[-1].write_text(to_json(summary_rows(summary)))
    else:
        paths.append(out / "summary.csv")
        paths[-1].write_text(to_csv(summary_rows(summary), SUMMARY_FIELDS))
    paths.append(out / "plotdata.csv")
    paths[-1].write_text(to_csv(plot_series(summary), PLOT_FIELDS))
    return paths


def read_csv(path) -> list[dict]:
    with Path(path).open(newline="") as fh:
        return list(csv.DictReader(fh))


def read_csv_text(text: str) -> list[dict]:
    return list(csv.DictReader(io.StringIO(text)))
