"""Command-line front end: run scenarios, sweep parameter grids, run checks.

    outreg run   [--scenario s.scn] [--out DIR] [--mode M] [--step H] [--tend T]
    outreg sweep --grid "sigma=0.1,0.5,1,2;c2=-2,0,2" [--scenario s.scn]
                 [--out DIR] [--jobs N]
    outreg check [--seed N]

`run` writes log.csv, metrics.json and three SVG plots (four in adaptive
mode) into --out.  `sweep` writes one summary.csv row per grid point; rows
appear in grid order regardless of worker completion order.  `check`
executes the acceptance suite and prints one PASS/FAIL line per criterion.

Exit codes: 0 success, 2 config or grid error, 3 divergence (also: any
failed sweep point), 4 I/O error.  `check` exits 1 when criteria fail.
Runs are deterministic; --seed only feeds the random draws inside check.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from itertools import product, repeat

from . import svgplot
from .scenario import (
    ScenarioConfig,
    ScenarioError,
    load_scenario,
    with_overrides,
)
from .simulate import DivergenceError, SimLog, metrics, run

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DIVERGED = 3
EXIT_IO = 4

GRID_KEYS = ("c1", "c2", "c3", "sigma", "x0", "v0")

_SUMMARY_METRICS = ("diverged", "diverged_at", "trailing_sup_e",
                    "trailing_err_a11", "trailing_err_a21",
                    "trailing_err_a23", "max_abs_u", "settling_time")


class GridError(ValueError):
    pass


def _load_cfg(args) -> ScenarioConfig:
    if args.scenario:
        cfg = load_scenario(args.scenario)
    else:
        cfg = ScenarioConfig()
    over = {}
    if getattr(args, "mode", None):
        over["mode"] = args.mode
    if getattr(args, "step", None) is not None:
        over["h"] = args.step
    if getattr(args, "tend", None) is not None:
        over["t_end"] = args.tend
    if over:
        cfg = with_overrides(cfg, **over)
    return cfg


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _write_run_outputs(outdir: str, log: SimLog, report: dict, adaptive: bool):
    os.makedirs(outdir, exist_ok=True)
    _write(os.path.join(outdir, "log.csv"), log.to_csv())
    _write(os.path.join(outdir, "metrics.json"),
           json.dumps(report, indent=2, sort_keys=True) + "\n")
    _write(os.path.join(outdir, "plot_trajectory.svg"), svgplot.trajectory_svg(log))
    _write(os.path.join(outdir, "plot_error.svg"), svgplot.error_svg(log))
    _write(os.path.join(outdir, "plot_estimates.svg"), svgplot.estimates_svg(log))
    if adaptive:
        _write(os.path.join(outdir, "plot_khat.svg"), svgplot.khat_svg(log))


def cmd_run(args) -> int:
    cfg = _load_cfg(args)
    adaptive = cfg.mode == "adaptive"
    try:
        log = run(cfg)
        diverged_at = None
    except DivergenceError as exc:
        log = exc.partial
        diverged_at = exc.time
    report = metrics(log, cfg, diverged_at=diverged_at)
    _write_run_outputs(args.out, log, report, adaptive)
    if diverged_at is not None:
        print("run diverged at t = %g; partial outputs written to %s"
              % (diverged_at, args.out), file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


def parse_grid(spec: str):
    """'sigma=0.1,0.5;x0=1:-1,0:0' -> ordered [(name, [values])]."""
    axes = []
    names = set()
    for part in (spec or "").split(";"):
        part = part.strip()
        if not part:
            continue
        name, eq, vals = part.partition("=")
        name = name.strip()
        if not eq:
            raise GridError("grid axis %r has no values" % part)
        if name not in GRID_KEYS:
            raise GridError("unknown grid key %r (allowed: %s)"
                            % (name, ", ".join(GRID_KEYS)))
        if name in names:
            raise GridError("duplicate grid key %r" % name)
        names.add(name)
        items = []
        for tok in vals.split(","):
            tok = tok.strip()
            if not tok:
                raise GridError("%s: empty value" % name)
            try:
                if name in ("x0", "v0"):
                    a, sep, b = tok.partition(":")
                    if not sep:
                        raise ValueError
                    items.append((float(a), float(b)))
                else:
                    items.append(float(tok))
            except ValueError:
                raise GridError("%s: bad value %r%s"
                                % (name, tok,
                                   " (vector axes use a:b pairs)"
                                   if name in ("x0", "v0") else ""))
        axes.append((name, items))
    if not axes:
        raise GridError("no grid points")
    return axes


def _grid_points(axes):
    names = [n for n, _ in axes]
    for combo in product(*(vals for _, vals in axes)):
        yield dict(zip(names, combo))


def _sweep_worker(base: ScenarioConfig, overrides: dict) -> dict:
    cfg = with_overrides(base, **overrides)
    try:
        log = run(cfg)
        return metrics(log, cfg)
    except DivergenceError as exc:
        return metrics(exc.partial, cfg, diverged_at=exc.time)


def _summary_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    if isinstance(v, tuple):
        return ":".join("%.10g" % x for x in v)
    if isinstance(v, float):
        return "%.10g" % v
    return str(v)


def cmd_sweep(args) -> int:
    base = _load_cfg(args)
    axes = parse_grid(args.grid)
    points = list(_grid_points(axes))
    jobs = args.jobs if args.jobs else min(4, os.cpu_count() or 1)
    if jobs == 1:
        results = [_sweep_worker(base, p) for p in points]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_sweep_worker, repeat(base), points))
    names = [n for n, _ in axes]
    lines = [",".join(names + list(_SUMMARY_METRICS))]
    any_diverged = False
    for point, rep in zip(points, results):
        any_diverged = any_diverged or rep["diverged"]
        cells = [_summary_cell(point[n]) for n in names]
        cells += [_summary_cell(rep[k]) for k in _SUMMARY_METRICS]
        lines.append(",".join(cells))
    os.makedirs(args.out, exist_ok=True)
    _write(os.path.join(args.out, "summary.csv"), "\n".join(lines) + "\n")
    if any_diverged:
        print("one or more sweep points diverged; see %s"
              % os.path.join(args.out, "summary.csv"), file=sys.stderr)
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_check(args) -> int:
    from .acceptance import run_all

    results = run_all(seed=args.seed)
    failed = 0
    for i, (name, passed, detail, seconds) in enumerate(results, 1):
        status = "PASS" if passed else "FAIL"
        if not passed:
            failed += 1
        print("[%2d/%d] %s  %-28s (%5.2f s)  %s"
              % (i, len(results), status, name, seconds, detail))
    print("%d/%d criteria passed" % (len(results) - failed, len(results)))
    return 0 if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="outreg",
                                 description="Closed-loop output-regulation benchmark runner")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", help="scenario file (omit for the stock benchmark)")
        p.add_argument("--out", default="out", help="output directory (default: out)")
        p.add_argument("--mode", choices=("nonadaptive", "adaptive", "open_loop"),
                       help="override the scenario's mode")
        p.add_argument("--step", type=float, help="override integration step h")
        p.add_argument("--tend", type=float, help="override simulation horizon")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for check's random draws (runs are deterministic)")

    pr = sub.add_parser("run", help="integrate one scenario, write log/metrics/plots")
    common(pr)
    ps = sub.add_parser("sweep", help="run a parameter grid, write summary.csv")
    common(ps)
    ps.add_argument("--grid", required=True,
                    help="e.g. 'sigma=0.1,0.5,1,2;c2=-2,0,2'; x0/v0 take a:b pairs")
    ps.add_argument("--jobs", type=int, help="worker processes (default: up to 4)")
    pc = sub.add_parser("check", help="run the acceptance criteria and report")
    pc.add_argument("--seed", type=int, default=0)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return cmd_run(args)
        if args.command == "sweep":
            return cmd_sweep(args)
        return cmd_check(args)
    except (ScenarioError, GridError) as exc:
        print("config error:\n%s" % exc, file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print("i/o error: %s" % exc, file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
