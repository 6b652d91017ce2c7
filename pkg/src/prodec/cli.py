"""Command-line interface.

Subcommands: ``codes`` (fixture table), ``simulate`` (BER sweep from a
config file), ``de`` (density-evolution trajectories and thresholds),
``lut`` (generate a combining table), ``pack-demo`` (message packing
overhead report).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .channel import snr_to_sigma
from .de import build_lut, de_gldpc, de_scc_emulate, threshold_search, transfer_table
from .fixtures import get_code, get_scc_code, pc_rate, scc_rate
from .sim import fixture_table, load_config, run_sweep, write_csv, write_records
from .softcore import packing_overhead


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="prodec",
        description="Product/staircase code BER laboratory")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("codes", help="list the code fixtures and their rates")

    p_sim = sub.add_parser("simulate", help="run a seeded BER sweep")
    p_sim.add_argument("--config", required=True, help="sweep config file")
    p_sim.add_argument("--out", required=True, help="output prefix")
    p_sim.add_argument("--workers", type=int, default=None,
                       help="override the config worker count")

    p_de = sub.add_parser("de", help="density-evolution trajectory or threshold")
    p_de.add_argument("--code", default="C2")
    p_de.add_argument("--structure", choices=("pc", "scc"), default="pc")
    p_de.add_argument("-m", "--modulation-m", type=int, default=1)
    p_de.add_argument("--snr-db", type=float, default=None)
    p_de.add_argument("--iters", type=int, default=50)
    p_de.add_argument("--window", type=int, default=7)
    p_de.add_argument("--threshold", action="store_true",
                      help="bisect for the convergence threshold")
    p_de.add_argument("--target", type=float, default=1e-5)
    p_de.add_argument("--samples", type=int, default=10_000)
    p_de.add_argument("--out", default=None, help="trajectory CSV path")

    p_lut = sub.add_parser("lut", help="generate a combining table via DE")
    p_lut.add_argument("--code", default="C2")
    p_lut.add_argument("--structure", choices=("pc", "scc"), default="pc")
    p_lut.add_argument("-m", "--modulation-m", type=int, default=1)
    p_lut.add_argument("--snr-db", type=float, required=True)
    p_lut.add_argument("--iters", type=int, default=10)
    p_lut.add_argument("--window", type=int, default=7)
    p_lut.add_argument("--samples", type=int, default=10_000)
    p_lut.add_argument("--out", required=True)

    p_pack = sub.add_parser("pack-demo", help="message packing overhead report")
    p_pack.add_argument("--code", default=None,
                        help="fixture id (default: report all)")

    try:
        args = parser.parse_args(argv)
        return _dispatch(args)
    except (ValueError, KeyError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    if args.command == "codes":
        print(fixture_table())
        return 0
    if args.command == "simulate":
        cfg = load_config(args.config)
        if args.workers is not None:
            from dataclasses import replace
            cfg = replace(cfg, workers=args.workers)
        records = run_sweep(
            cfg, progress=lambda r: print(
                f"snr {r.snr_db:6.2f} dB  ber {r.ber:.3e}  "
                f"({r.bit_errors}/{r.bits}){' ' + r.flag if r.flag else ''}"))
        with open(f"{args.out}.csv", "w") as fh:
            write_csv(records, fh)
        with open(f"{args.out}_records.txt", "w") as fh:
            write_records(records, cfg, fh)
        print(f"wrote {args.out}.csv and {args.out}_records.txt")
        return 0
    if args.command == "de":
        return _cmd_de(args)
    if args.command == "lut":
        code = get_code(args.code) if args.structure == "pc" else get_scc_code(args.code)
        rate = float(pc_rate(code)) if args.structure == "pc" else float(scc_rate(code))
        sigma = snr_to_sigma(args.snr_db, rate, 2 * args.modulation_m)
        ensemble = "gldpc" if args.structure == "pc" else "scgldpc"
        lut = build_lut(code, sigma, 1 << args.modulation_m, iters=args.iters,
                        samples=args.samples, ensemble=ensemble,
                        window_size=args.window, code_id=args.code)
        lut.save(args.out)
        print(f"wrote {args.out} ({lut.iterations} iterations, "
              f"sigma {sigma:.4f})")
        return 0
    if args.command == "pack-demo":
        ids = [args.code] if args.code else ["C1", "C2", "C3"]
        print("component message packing: flag bit + n payload bits")
        for cid in ids:
            n = get_code(cid).n
            print(f"  {cid}: n={n}, packed {n + 1} bits, "
                  f"overhead {100 * packing_overhead(n):.2f}%")
        return 0
    raise ValueError(f"unknown command {args.command!r}")


def _cmd_de(args) -> int:
    code = get_code(args.code) if args.structure == "pc" else get_scc_code(args.code)
    rate = float(pc_rate(code)) if args.structure == "pc" else float(scc_rate(code))
    table = transfer_table(code, samples_per_point=args.samples)
    kind = "gldpc" if args.structure == "pc" else "scgldpc"
    if args.threshold:
        th = threshold_search(kind, code, 1 << args.modulation_m, rate,
                              target=args.target, table=table,
                              window_size=args.window)
        print(f"{args.code} {args.structure} DE threshold: {th:.3f} dB "
              f"(target residual {args.target:g})")
        return 0
    if args.snr_db is None:
        raise ValueError("need --snr-db for a trajectory (or pass --threshold)")
    sigma = snr_to_sigma(args.snr_db, rate, 2 * args.modulation_m)
    rows = []
    if kind == "gldpc":
        res = de_gldpc(code, sigma, 1 << args.modulation_m, args.iters, table=table)
        rows = [(0, i, x) for i, x in enumerate(res.trajectory)]
        final = res.trajectory[-1]
    else:
        res = de_scc_emulate(code, sigma, 1 << args.modulation_m,
                             window_size=args.window, target=args.target,
                             table=table)
        rows = [(pos + 1, -1, x) for pos, x in enumerate(res.emitted)]
        final = float(np.max(res.emitted))
    print(f"{args.code} {args.structure} at {args.snr_db} dB "
          f"(sigma {sigma:.4f}): residual {final:.3e}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write("position,iteration,x\n")
            for pos, it, x in rows:
                fh.write(f"{pos},{it},{x!r}\n")
        print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
