"""Command-line entry point: ``motifgrid <command> ...``.

Exit codes: 0 success, 1 when any input file failed, 2 for configuration errors.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import masks as mk
from . import reports
from .ensemble import generate, null_spec_of
from .masks import MaskError, MaskFormatError
from .motifs import MOTIFS, count_all
from .oracle import OracleBudgetError, enumerate_all
from .pipeline import analyze, network_seed, prepare
from .significance import summarize
from .trainer import DEFAULT_ARCH, DEFAULT_LEVELS, PruneSchedule, sweep

log = logging.getLogger("motifgrid")

VISIBLE = ("clean", "census", "randgen", "zscore", "sweep")


class ConfigError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get("MOTIFGRID_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"MOTIFGRID_SEED must be an integer, got {raw!r}")


def _load_inputs(paths):
    """Yield ``(path, stack, tag, error)`` for every input file."""
    for p in paths:
        p = Path(p)
        if not p.exists():
            yield p, None, None, "no such file or directory"
            continue
        for f, tag in mk.iter_collection(p):
            try:
                yield f, mk.load(f), tag, None
            except (OSError, MaskError, MaskFormatError) as exc:
                yield f, None, None, str(exc)


def _outdir(args) -> Path | None:
    if args.out is None:
        return None
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _emit(text: str, out: Path | None, name: str):
    if out is None:
        sys.stdout.write(text)
    else:
        (out / name).write_text(text)


def cmd_clean(args) -> int:
    out = _outdir(args)
    if out is None:
        raise ConfigError("clean needs --out")
    failed = 0
    rows = []
    for f, stack, tag, err in _load_inputs(args.inputs):
        if err:
            print(f"{f}: {err}", file=sys.stderr)
            failed += 1
            continue
        before = mk.sparsity_profile(stack).total_edges
        cleaned, removed = mk.clean_dead(stack, args.cleanup)
        mk.save(cleaned, out / f.name)
        rows.append({"label": stack.label, "file": f.name, "edges_before": before, "removed": removed,
                     "edges_after": before - removed})
    (out / "removal_log.csv").write_text(
        reports.to_csv(rows, ["label", "file", "edges_before", "removed", "edges_after"]))
    return 1 if failed else 0


def cmd_census(args) -> int:
    out = _outdir(args)
    failed = 0
    censuses = []
    for f, stack, tag, err in _load_inputs(args.inputs):
        if err:
            print(f"{f}: {err}", file=sys.stderr)
            failed += 1
            continue
        stack, _ = prepare(stack, args.cleanup)
        censuses.append(count_all(stack, tag))
    if args.format == "json":
        _emit(reports.to_json(reports.census_json(censuses)), out, "census.json")
    else:
        _emit(reports.to_csv(reports.census_rows(censuses), reports.CENSUS_FIELDS), out, "census.csv")
    return 1 if failed else 0


def cmd_randgen(args) -> int:
    out = _outdir(args)
    if out is None:
        raise ConfigError("randgen needs --out")
    failed = 0
    for f, stack, tag, err in _load_inputs(args.inputs):
        if err:
            print(f"{f}: {err}", file=sys.stderr)
            failed += 1
            continue
        stack, _ = prepare(stack, args.cleanup)
        _dump_nulls(stack, args.seed, args.nulls, out / stack.label)
    return 1 if failed else 0


def _dump_nulls(stack, seed, nulls, directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    spec = null_spec_of(stack, network_seed(seed, stack.label), nulls)
    rows = []
    for k in range(spec.sample_count):
        name = f"null-{k:05d}.mask"
        null = generate(spec, k)
        mk.save(null, directory / name)
        rows.append({"label": null.label, "file": name, "sparsity": ""})
    mk.write_manifest(directory, rows)


def cmd_zscore(args) -> int:
    out = _outdir(args)
    failed = 0
    results = []
    for f, stack, tag, err in _load_inputs(args.inputs):
        if err:
            print(f"{f}: {err}", file=sys.stderr)
            failed += 1
            continue
        stack, _ = prepare(stack, args.cleanup)
        _, report = analyze(stack, args.seed, args.nulls, tag, args.jobs)
        results.append(report)
        if args.dump_nulls:
            _dump_nulls(stack, args.seed, args.nulls, Path(args.dump_nulls) / stack.label)
    if not results:
        return 1
    if out is None:
        if args.format == "json":
            sys.stdout.write(reports.to_json(reports.zscore_json(results)))
        else:
            sys.stdout.write(reports.to_csv(reports.zscore_rows(results), reports.ZSCORE_FIELDS))
    else:
        reports.write_zscores(out, results, args.format)
        if args.plots:
            from .plotting import render_all

            render_all(results, summarize(results), out / "figures")
    return 1 if failed else 0


def cmd_sweep(args) -> int:
    out = _outdir(args) or Path("sweep-out")
    out.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    schedule = PruneSchedule(tuple(args.levels), per_layer=args.per_layer)
    # cleanup of snapshots happens below so the raw masks stay available
    snaps = sweep(args.population, schedule, args.seed, args.arch, jobs=args.jobs, cleanup="off")
    log.info("trained %d snapshots in %.1fs", len(snaps), time.perf_counter() - t0)

    snapdir = out / "snapshots"
    snapdir.mkdir(exist_ok=True)
    manifest, results, censuses = [], [], []
    for s in snaps:
        stack, removed = prepare(s.raw, args.cleanup)
        name = f"{s.raw.label}.mask"
        mk.save(stack, snapdir / name)
        manifest.append({"label": s.raw.label, "file": name, "sparsity": s.tag, "network_id": s.network_id,
                         "level": s.level, "global_sparsity": s.global_sparsity, "removed": removed,
                         "final_train_mse": s.train_mse, "final_val_mse": s.val_mse})
        census, report = analyze(stack, args.seed, args.nulls, s.tag, args.jobs)
        censuses.append(census)
        results.append(report)
    mk.write_manifest(snapdir, manifest)
    log.info("z-scores done at %.1fs", time.perf_counter() - t0)

    summary = summarize(results)
    reports.write_census(out, censuses, args.format)
    reports.write_zscores(out, results, args.format)
    reports.write_summary(out, summary, args.format)
    if args.plots:
        from .plotting import render_all

        render_all(results, summary, out / "figures")
    top = summary.levels[-1]
    for kind in MOTIFS:
        row = summary.get(kind, top)
        med = "n/a" if row.median is None else f"{row.median:+.2f}"
        log.info("%-12s median z at %s: %s", kind.value, top, med)
    return 0


def cmd_oracle(args) -> int:
    failed = 0
    rows = []
    for f, stack, tag, err in _load_inputs(args.inputs):
        if err:
            print(f"{f}: {err}", file=sys.stderr)
            failed += 1
            continue
        stack, _ = prepare(stack, args.cleanup)
        try:
            counts = enumerate_all(stack, args.budget)
        except OracleBudgetError as exc:
            print(f"{f}: {exc}", file=sys.stderr)
            failed += 1
            continue
        if tag is None:
            tag = f"{mk.sparsity_profile(stack).global_sparsity:.4f}"
        rows.append({"label": stack.label, "sparsity": tag, **{k.value: v for k, v in counts.items()}})
    sys.stdout.write(reports.to_csv(rows, reports.CENSUS_FIELDS))
    return 1 if failed else 0


def _int_list(text):
    return [int(x) for x in text.split(",") if x]


def _float_list(text):
    return [float(x) for x in text.split(",") if x]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="motifgrid", description="Motif statistics of layered sparse networks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(VISIBLE) + "}", required=True)

    def common(p, cleanup_default="forward", cleanup_choices=("forward", "both", "off")):
        p.add_argument("--out", help="output directory (stdout when omitted, where supported)")
        p.add_argument("--cleanup", choices=cleanup_choices, default=cleanup_default)

    def nulls(p):
        p.add_argument("--nulls", type=int, default=1000, help="null networks per input (default 1000)")
        p.add_argument("--seed", type=int, default=None, help="root seed (default $MOTIFGRID_SEED or 0)")
        p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("clean", help="remove dead connections")
    p.add_argument("inputs", nargs="+")
    common(p, cleanup_choices=("forward", "both"))
    p.set_defaults(func=cmd_clean)

    p = sub.add_parser("census", help="count the eight motifs")
    p.add_argument("inputs", nargs="+")
    common(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("randgen", help="write null networks as mask files")
    p.add_argument("inputs", nargs="+")
    common(p)
    nulls(p)
    p.set_defaults(func=cmd_randgen)

    p = sub.add_parser("zscore", help="motif z-scores against a null ensemble")
    p.add_argument("inputs", nargs="+")
    common(p)
    nulls(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--dump-nulls", metavar="DIR", help="also write every null network")
    p.add_argument("--plots", action="store_true", help="render figures into OUT/figures")
    p.set_defaults(func=cmd_zscore)

    p = sub.add_parser("sweep", help="train, prune and analyse a population of toy networks")
    common(p, cleanup_choices=("forward", "both", "off"))
    nulls(p)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--population", type=int, default=20)
    p.add_argument("--levels", type=_float_list, default=list(DEFAULT_LEVELS))
    p.add_argument("--arch", type=_int_list, default=list(DEFAULT_ARCH))
    p.add_argument("--per-layer", action="store_true", help="prune each layer separately instead of globally")
    p.add_argument("--no-plots", dest="plots", action="store_false")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle")
    p.add_argument("inputs", nargs="+")
    common(p, cleanup_default="off")
    p.add_argument("--budget", type=int, default=10**8)
    p.set_defaults(func=cmd_oracle)
    return parser


def _check(args):
    if hasattr(args, "seed"):
        if args.seed is None:
            args.seed = _default_seed()
        if not 0 <= args.seed < 2**64:
            raise ConfigError("seed must fit in 64 unsigned bits")
    if getattr(args, "nulls", 2) < 2:
        raise ConfigError("--nulls must be at least 2")
    if getattr(args, "jobs", 1) < 1:
        raise ConfigError("--jobs must be at least 1")
    if args.command == "sweep":
        if args.population < 1:
            raise ConfigError("--population must be positive")
        if len(args.arch) < 2:
            raise ConfigError("--arch needs at least two layer sizes")
        try:
            PruneSchedule(tuple(args.levels))
        except ValueError as exc:
            raise ConfigError(str(exc))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose or args.command == "sweep" else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        _check(args)
        return args.func(args)
    except ConfigError as exc:
        print(f"motifgrid: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
