"""Command-line front end.

Subcommands map one-to-one onto the library layers: channel generation,
direction enumeration, alignment verification, the Monte Carlo sweep,
the minimum-distance probe, and DoF-region queries.  Every command
exits 0 on success and prints a single ``error: ...`` line on stderr
otherwise; all randomness is funneled through explicit --seed flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import harness
from .channel import PROFILES, ChannelConfig, generate_channel, load_channel, save_channel
from .diophantine import MODES, ProbeConfig, fit_distance_exponent, min_distance
from .directions import (
    build_closure_map,
    enumerate_interference_directions,
    enumerate_transmit_directions,
    verify_alignment,
)
from .dofregion import (
    direction_counts,
    dof_gap,
    region_report,
    region_vertices_2d,
    stream_plan,
    symmetric_point,
    total_dof,
)
from .errors import SizeLimitError


def _cmd_gen_channel(args) -> int:
    cfg = ChannelConfig(K=args.K, M=args.M, N=args.N, seed=args.seed,
                        profile=args.profile)
    H = generate_channel(cfg)
    save_channel(H, args.out)
    print(f"wrote {args.K}-user {args.N}x{args.M} channel (profile={args.profile}, "
          f"seed={args.seed}) to {args.out}")
    return 0


def _table_payload(table) -> dict:
    return {
        "kind": table.kind,
        "K": table.K, "M": table.M, "N": table.N, "n": table.n,
        "count": len(table),
        "dim": table.dim,
        "exponents": table.exponents.tolist(),
        "values": table.values.tolist() if table.values is not None else None,
    }


def _cmd_directions(args) -> int:
    H = load_channel(args.channel)
    T = enumerate_transmit_directions(H.K, H.M, H.N, args.n, H=H)
    Tp = enumerate_interference_directions(H.K, H.M, H.N, args.n, H=H)
    print(f"level n={args.n}: {len(T)} transmit directions, "
          f"{len(Tp)} interference directions over {T.dim} cross-link exponents")
    if args.dump:
        Path(args.dump).write_text(json.dumps(
            {"transmit": _table_payload(T), "interference": _table_payload(Tp)},
            indent=2) + "\n")
        print(f"dumped tables to {args.dump}")
    return 0


def _cmd_align_check(args) -> int:
    H = load_channel(args.channel)
    T = enumerate_transmit_directions(H.K, H.M, H.N, args.n, H=H)
    Tp = enumerate_interference_directions(H.K, H.M, H.N, args.n, H=H)
    report = verify_alignment(T, Tp, H, tol=args.tol)
    print(f"checked {report.pairs_checked} coefficient-direction products: "
          f"{report.exact_failures} exponent mismatches, "
          f"{report.float_failures} numeric mismatches "
          f"(max relative deviation {report.max_rel_dev:.3e}, tol {report.tol:g})")
    return 0 if report.ok else 1


def _cmd_simulate(args) -> int:
    cfg = harness.ExperimentConfig.from_json(args.config)
    if args.out:
        cfg = dataclasses.replace(cfg, output=args.out)
    if cfg.output is None:
        raise ValueError("no output path: set \"output\" in the config or pass --out")
    summary = harness.run_experiment(cfg, workers=args.workers)
    rows = len(cfg.p_grid_db) * cfg.trials * cfg.channel.K
    print(f"run {summary.run_id}: {rows} trial rows -> {cfg.output}")
    for i, p_db in enumerate(summary.p_grid_db):
        ser = ", ".join(f"rx{j}={summary.ser[i, j]:.4f}"
                        for j in range(summary.ser.shape[1]))
        print(f"  P={p_db:g} dB  Q={summary.q_values[i]}  SER {ser}")
    slopes = ", ".join(f"{s:.4f}" for s in summary.slopes)
    predicted = ", ".join(f"{s:.4f}" for s in summary.predicted_slopes)
    print(f"rate slopes per user: [{slopes}] (design prediction [{predicted}])")
    return 0


def _cmd_min_distance(args) -> int:
    H = load_channel(args.channel)
    probe = ProbeConfig(q_values=tuple(args.Q), eps=args.eps, mode=args.mode,
                        budget=args.budget)
    A, D, Dp = harness.probe_matrix(H, args.n, args.receiver, kind=args.matrix)
    records = []
    for q in probe.q_values:
        rec = min_distance(A, q, mode=probe.mode, budget=probe.budget,
                           seed=np.random.SeedSequence(args.seed, spawn_key=(q,)))
        records.append(rec)
        tag = "exact" if rec.exact else "upper-bound"
        print(f"Q={q}: d_min={rec.d_min:.6e} ({tag}) at q={list(rec.q_min)}"
              + ("  [degenerate]" if rec.degenerate else ""))
    if len({r.Q for r in records}) >= 3 and all(r.exact for r in records) \
            and not any(r.degenerate for r in records):
        fit = fit_distance_exponent(records, direction_total=D + Dp)
        print(f"fitted decay: d_min ~ {fit.beta_hat:.4e} * Q^{fit.slope:.3f} "
              f"(reference slope {fit.reference_slope:g}: "
              f"{'respected' if fit.above_reference else 'violated'})")
    if args.out:
        lines = [harness.PROBE_CSV_HEADER]
        for rec in records:
            lines.append(
                f"{H.seed},{args.receiver},{args.matrix},{A.shape[1]},{H.K},{H.M},"
                f"{H.N},{args.n},{D},{Dp},{rec.Q},{probe.mode},{rec.d_min!r},"
                f"{' '.join(str(v) for v in rec.q_min)},{int(rec.degenerate)}")
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote {len(records)} records to {args.out}")
    return 0


def _parse_point(text: str) -> tuple[str, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if len(parts) < 2:
        raise ValueError(f"need at least two comma-separated DoF values, got {text!r}")
    return tuple(str(Fraction(p)) for p in parts)


def _cmd_dof(args) -> int:
    K, M, N = args.K, args.M, args.N
    if args.point:
        point = tuple(Fraction(p) for p in _parse_point(args.point))
        report = region_report(point, M, N)
        label = "inside" if report["member"] else "outside"
        print(f"point ({', '.join(str(d) for d in point)}) is {label} "
              f"the {K}-user region for M={M}, N={N}")
        for row in report["constraints"]:
            mark = "=" if row["binding"] else ("<" if row["satisfied"] else ">")
            print(f"  user {row['user']}: {row['lhs']} {mark} {row['rhs']}")
    else:
        point, total = symmetric_point(K, M, N)
        print(f"symmetric point: d_k = {point[0]} per user, total {total} "
              f"(= {float(total):g})")
    if args.plan:
        plan = stream_plan(point, M)
        realized = plan.dof_point(M)
        print(f"stream plan: rho={plan.rho}, streams per antenna {list(plan.dbar)} "
              f"(realizes {', '.join(str(d) for d in realized)})")
    if args.n:
        D, Dp = direction_counts(K, M, N, args.n)
        value = total_dof(K, N, args.n, M)
        gap = dof_gap(K, N, args.n, M)
        print(f"direction level n={args.n}: D={D}, D'={Dp}, "
              f"total DoF {float(value):.6f} (limit {K * N / 2:g}, gap {float(gap):.3e})")
    if args.series:
        levels = sorted({int(v) for v in args.series.split(",") if v.strip()})
        if not levels or levels[0] < 1:
            raise ValueError(f"series levels must be positive integers, got {args.series!r}")
        rows = ["n,total_dof,limit"]
        for level in levels:
            rows.append(f"{level},{float(total_dof(K, N, level, M))!r},{K * N / 2!r}")
        if args.series_out:
            Path(args.series_out).write_text("\n".join(rows) + "\n")
            print(f"wrote {len(levels)}-point convergence series to {args.series_out}")
        else:
            print("\n".join(rows))
    if args.region_out:
        payload = {"K": K, "M": M, "N": N}
        if K == 2:
            payload["vertices"] = [[float(x), float(y)]
                                   for x, y in region_vertices_2d(M, N)]
            payload["vertices_exact"] = [[str(x), str(y)]
                                         for x, y in region_vertices_2d(M, N)]
        payload["constraints"] = [
            f"{M}*d{k} + {N}*max_other <= {M * N}" for k in range(K)]
        Path(args.region_out).write_text(json.dumps(payload, indent=2) + "\n")
        print(f"wrote region geometry to {args.region_out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="realign",
        description="Interference-alignment link simulator: monomial signal "
                    "directions, joint-antenna ML decoding, DoF accounting.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-channel", help="sample a channel realization to JSON")
    p.add_argument("--K", type=int, required=True, help="number of users")
    p.add_argument("--M", type=int, required=True, help="transmit antennas per user")
    p.add_argument("--N", type=int, required=True, help="receive antennas per user")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--profile", choices=PROFILES, default="bounded-uniform")
    p.add_argument("--out", required=True, help="output JSON path")
    p.set_defaults(func=_cmd_gen_channel)

    p = sub.add_parser("directions", help="enumerate signal direction tables")
    p.add_argument("--channel", required=True, help="channel JSON path")
    p.add_argument("--n", type=int, required=True, help="direction level")
    p.add_argument("--dump", help="write tables (exponents + values) to JSON")
    p.set_defaults(func=_cmd_directions)

    p = sub.add_parser("align-check",
                       help="verify interference products land in the shared table")
    p.add_argument("--channel", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=_cmd_align_check)

    p = sub.add_parser("simulate", help="run a Monte Carlo power sweep")
    p.add_argument("--config", required=True, help="experiment config JSON")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="override the config's output CSV path")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("min-distance",
                       help="minimum-distance probe on a stored channel")
    p.add_argument("--channel", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--Q", type=int, nargs="+", required=True,
                   help="symbol bounds to sweep")
    p.add_argument("--mode", choices=MODES, default="exhaustive")
    p.add_argument("--matrix", choices=("decode", "raw"), default="decode")
    p.add_argument("--receiver", type=int, default=0)
    p.add_argument("--budget", type=int, default=100_000,
                   help="draw count for random-sample mode")
    p.add_argument("--eps", type=float, default=0.1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write records as CSV")
    p.set_defaults(func=_cmd_min_distance)

    p = sub.add_parser("dof", help="DoF region queries and convergence series")
    p.add_argument("--K", type=int, required=True)
    p.add_argument("--M", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--point", help="comma-separated per-user DoF (fractions allowed)")
    p.add_argument("--n", type=int, help="evaluate the total-DoF formula at this level")
    p.add_argument("--plan", action="store_true",
                   help="print the stream plan realizing the point")
    p.add_argument("--series", help="comma-separated levels for a convergence series")
    p.add_argument("--series-out", help="write the series as CSV")
    p.add_argument("--region-out", help="write region vertices/constraints as JSON")
    p.set_defaults(func=_cmd_dof)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, ArithmeticError, OSError, SizeLimitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
