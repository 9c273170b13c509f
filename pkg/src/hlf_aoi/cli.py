"""Command-line front end: analyze, simulate, fit, sweep.

All numbers a command prints or writes are reproducible from the config
file plus the seed on the command line (or the master seed printed when
no seed is given).  Output goes to --out as CSV or JSON; probabilities
are written with 12 significant digits.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import aoi
from .config import ConfigError, RunConfig, load_config
from .latency import (TARGET_KEY, consensus_latency_samples, fit_gamma_mle,
                      ks_distance, read_latency_samples, run_pipeline,
                      write_latency_csv)
from .specfun import ConvergenceError, DomainError

__all__ = ["main", "cmd_analyze", "cmd_simulate", "cmd_fit", "cmd_sweep"]

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4

_ANALYZE_HEADER = ["zeta", "v", "tx_latency", "consensus_budget", "prob_series",
                   "prob_quadrature", "prob_mc", "mc_std_error", "flag"]
_SWEEP_HEADER = ["zeta", "tx_latency", "probability", "method"]


def _fmt(value: object) -> str:
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def _emit(rows: list[dict], header: list[str], out: str | None, fmt: str) -> None:
    """Write rows as CSV (one header line) or a JSON array of objects."""
    if fmt == "csv":
        lines = [",".join(header)]
        lines += [",".join(_fmt(row[col]) for col in header) for row in rows]
        text = "\n".join(lines) + "\n"
    else:
        coerced = [
            {col: (float(_fmt(row[col])) if isinstance(row[col], float) else row[col])
             for col in header}
            for row in rows
        ]
        text = json.dumps(coerced, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text, encoding="utf-8")


def _parse_grid(text: str, name: str) -> list[float]:
    """Parse 'start:stop:step' (inclusive of stop up to rounding) or 'a,b,c'."""
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError("expected start:stop:step")
            start, stop, step = (float(p) for p in parts)
            if step <= 0.0:
                raise ValueError("step must be positive")
            count = int(math.floor((stop - start) / step + 1e-9)) + 1
            return [start + i * step for i in range(max(count, 0))]
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError as exc:
        raise ConfigError(f"--{name} {text!r}: {exc}") from exc


def _row_seed(master: int, index: int) -> int:
    return int(np.random.SeedSequence([master, index]).generate_state(1)[0])


def _resolve_seed(args: argparse.Namespace, config: RunConfig) -> int:
    if args.seed is not None:
        return args.seed
    master = config.seeds[0]
    print(f"master seed: {master}", file=sys.stderr)
    return master


def cmd_analyze(config: RunConfig, zeta_grid: list[float], v_grid: list[float],
                seed: int, mc_cycles: int, out: str | None, fmt: str) -> int:
    """Violation probability per (zeta, v): closed form, quadrature, Monte Carlo."""
    fits = config.require_fits()
    rows: list[dict] = []
    index = 0
    for zeta in zeta_grid:
        if zeta not in fits:
            raise ConfigError(f"{config.source}: no [fits] entry for target STP {zeta}")
        model = aoi.model_for_stp(config.network, fits[zeta], zeta)
        for v in v_grid:
            query = aoi.AoiQuery(target_aoi=v)
            budget = query.consensus_budget(model)
            row = {"zeta": zeta, "v": v, "tx_latency": model.tx_latency,
                   "consensus_budget": budget}
            if budget <= 0.0:
                row.update(prob_series=1.0, prob_quadrature=1.0, prob_mc=1.0,
                           mc_std_error=0.0, flag="boundary")
            else:
                quad = aoi.violation_probability_quadrature(model, query)
                try:
                    series = aoi.violation_probability_series(model, query,
                                                              config.policy)
                    flag = ""
                except ConvergenceError:
                    series = quad
                    flag = "series_fallback"
                mc = aoi.violation_probability_mc(model, query, cycles=mc_cycles,
                                                  seed=_row_seed(seed, index))
                row.update(prob_series=series, prob_quadrature=quad,
                           prob_mc=mc.violation_fraction,
                           mc_std_error=mc.std_error, flag=flag)
            rows.append(row)
            index += 1
    _emit(rows, _ANALYZE_HEADER, out, fmt)
    return EXIT_OK


def cmd_simulate(config: RunConfig, duration: float, seed: int,
                 out: str | None) -> int:
    """Run the commit pipeline, write the transaction CSV, fit the target key."""
    pipeline = config.require_pipeline()
    records = run_pipeline(pipeline, duration, seed)
    out_path = "latency.csv" if out is None else out
    write_latency_csv(records, out_path)
    samples = consensus_latency_samples(records, key=TARGET_KEY)
    params = fit_gamma_mle(samples)
    ks = ks_distance(samples, params)
    print(f"wrote {len(records)} transactions to {out_path}")
    print(f"target-key valid samples: {len(samples)}")
    print(f"alpha = {params.shape:.12g}")
    print(f"beta = {params.rate:.12g}")
    print(f"ks_distance = {ks:.12g}")
    return EXIT_OK


def cmd_fit(samples_path: str, key: int | None) -> int:
    """Fit a Gamma distribution to a latency CSV and print diagnostics."""
    samples = read_latency_samples(samples_path, key=key)
    params = fit_gamma_mle(samples)
    ks = ks_distance(samples, params)
    print(f"samples = {len(samples)}")
    print(f"alpha = {params.shape:.12g}")
    print(f"beta = {params.rate:.12g}")
    print(f"ks_distance = {ks:.12g}")
    return EXIT_OK


def cmd_sweep(config: RunConfig, v: float, zeta_grid: list[float] | None,
              out: str | None, fmt: str) -> int:
    """Violation probability across target STPs at one target AoI."""
    fits = config.require_fits()
    grid = sorted(fits) if zeta_grid is None else zeta_grid
    rows_raw, zeta_star = aoi.sweep_target_stp(config.network, fits, v,
                                               grid=grid, policy=config.policy)
    probs = [row[2] for row in rows_raw]
    if max(probs) - min(probs) < 1e-6:
        print("warning: low contrast across the sweep; the argmin is weakly "
              "determined", file=sys.stderr)
    rows = [{"zeta": z, "tx_latency": y, "probability": p, "method": m}
            for (z, y, p, m) in rows_raw]
    _emit(rows, _SWEEP_HEADER, out, fmt)
    print(f"zeta_star = {_fmt(zeta_star)}", file=sys.stderr)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hlf-aoi",
        description="Age-of-information analysis for ledger-backed monitoring "
                    "networks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", metavar="PATH", default=None,
                       help="TOML config file (default: packaged defaults)")
        p.add_argument("--seed", type=int, default=None, metavar="N",
                       help="seed for randomized steps (default: config master seed)")
        p.add_argument("--out", metavar="PATH", default=None,
                       help="output file (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"), default=None,
                       help="output format (default: from config)")

    p = sub.add_parser("analyze", help="violation probability over a (zeta, v) grid")
    common(p)
    p.add_argument("--zeta-grid", metavar="GRID", default=None,
                   help="comma list or start:stop:step (default: fitted zetas)")
    p.add_argument("--v-grid", metavar="GRID", default="2:8:0.5",
                   help="target AoI grid, start:stop:step or comma list")
    p.add_argument("--mc-cycles", type=int, default=20000, metavar="N",
                   help="Monte Carlo cycles per grid point")

    p = sub.add_parser("simulate", help="run the commit pipeline and fit the result")
    common(p)
    p.add_argument("--duration", type=float, default=2000.0, metavar="SECONDS",
                   help="simulated horizon")

    p = sub.add_parser("fit", help="fit a Gamma distribution to a latency CSV")
    p.add_argument("samples", metavar="PATH", help="single-column or 4-column CSV")
    p.add_argument("--key", type=int, default=None, metavar="N",
                   help="restrict 4-column input to one key")

    p = sub.add_parser("sweep", help="violation probability across target STPs")
    common(p)
    p.add_argument("--v", type=float, required=True, metavar="SECONDS",
                   help="target AoI")
    p.add_argument("--zeta-grid", metavar="GRID", default=None,
                   help="comma list or start:stop:step (default: fitted zetas)")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "fit":
            return cmd_fit(args.samples, args.key)
        config = load_config(args.config)
        fmt = args.format if args.format is not None else config.output_format
        if args.command == "analyze":
            seed = _resolve_seed(args, config)
            zetas = (sorted(config.require_fits()) if args.zeta_grid is None
                     else _parse_grid(args.zeta_grid, "zeta-grid"))
            vs = _parse_grid(args.v_grid, "v-grid")
            return cmd_analyze(config, zetas, vs, seed, args.mc_cycles,
                               args.out, fmt)
        if args.command == "simulate":
            seed = _resolve_seed(args, config)
            return cmd_simulate(config, args.duration, seed, args.out)
        if args.command == "sweep":
            zetas = (None if args.zeta_grid is None
                     else _parse_grid(args.zeta_grid, "zeta-grid"))
            return cmd_sweep(config, args.v, zetas, args.out, fmt)
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except DomainError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
