"""Command-line entry point: simulate sweeps, inspect allocations, selftest."""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from . import selftest as selftest_mod
from .allocation import closed_form_candidates, select_allocation
from .channel import (effective_csit_quality, load_config,
                      sample_large_scale, substream)
from .harness import ALL_SCHEMES, SweepSpec, emit_csv, run_sweep
from .search import default_grid


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rsma-maxmin",
        description="Max-min fair RSMA allocation and SDMA benchmarking "
                    "for overloaded MIMO downlink",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run an SNR sweep and write CSV")
    sim.add_argument("--config", required=True, help="JSON scenario file")
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--seed", type=int, default=None)
    sim.add_argument("--snr-min", type=float, default=0.0)
    sim.add_argument("--snr-max", type=float, default=40.0)
    sim.add_argument("--snr-step", type=float, default=5.0)
    sim.add_argument("--schemes", default="rsma_proposed,sdma_zf_grouping,sdma_mrt",
                     help="comma-separated list; empty string for header-only output")
    sim.add_argument("--realizations", type=int, default=None)
    sim.add_argument("--grid-profile", choices=("paper", "fine"), default="paper")

    alloc = sub.add_parser("allocate", help="print the selected closed-form candidate")
    alloc.add_argument("--config", required=True)
    alloc.add_argument("--snr", type=float, required=True, help="min-gain user SNR in dB")

    sub.add_parser("selftest", help="run the built-in invariant suite")
    return parser


def _cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    realizations = args.realizations if args.realizations is not None else cfg.realizations
    schemes = tuple(s for s in args.schemes.split(",") if s)
    for s in schemes:
        if s not in ALL_SCHEMES and s != "sdma_scheduled":
            print(f"error: unknown scheme {s!r}", file=sys.stderr)
            return 2
    grid = None
    if "rsma_exhaustive" in schemes:
        grid = default_grid(cfg, fineness=2 if args.grid_profile == "fine" else 1)
    sweep = SweepSpec(snr_min_db=args.snr_min, snr_max_db=args.snr_max,
                      snr_step_db=args.snr_step, schemes=schemes,
                      realizations=realizations, grid=grid)
    rows = run_sweep(cfg, sweep)
    try:
        emit_csv(rows, args.out)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


def _cmd_allocate(args) -> int:
    cfg = load_config(args.config)
    if isinstance(cfg.large_scale, tuple):
        v = np.asarray(cfg.large_scale)
        v_min = float(v.min())
    else:
        v = sample_large_scale(cfg, substream(cfg.seed, 0))
        v_min = cfg.v_min
    power = 10.0 ** (args.snr / 10.0) / v_min
    eps_sq = effective_csit_quality(cfg, power)
    cand = select_allocation(closed_form_candidates(cfg, power, v, eps_sq))
    print(json.dumps({
        "snr_db": args.snr,
        "power": power,
        "eps_sq": eps_sq,
        "scheme": cand.scheme,
        "n": cand.index,
        "t": cand.t,
        "beta": cand.beta,
        "predicted_rate": cand.predicted_rate,
    }, sort_keys=True))
    return 0


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "simulate":
        return _cmd_simulate(args)
    if args.command == "allocate":
        return _cmd_allocate(args)
    if args.command == "selftest":
        return selftest_mod.run()
    return 2


if __name__ == "__main__":
    sys.exit(main())
