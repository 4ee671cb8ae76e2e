"""Command-line front end.

Exit codes: 0 on success (all verdicts pass), 1 when a verification verdict
fails, 2 on invalid input or usage. All randomness derives from --seed:
pairing replicate r uses xoshiro256** stream (seed, r) and auxiliary draws
use PCG64 seeded with (seed, purpose tag); rerunning a command with the same
configuration and seed reproduces the output byte for byte once timestamps
are disabled.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from pathlib import Path

from . import __version__, experiments, surrogate
from .degrees import (
    family_from_spec,
    parse_bipartite_source,
    parse_degree_source,
    validate_bipartite,
)
from .errors import ConfModelError
from .experiments import ExperimentReport
from .sampler import collision_stats, sample_bipartite_pairing, sample_pairing, write_edge_list

USAGE_ERROR = 2
VERDICT_FAILURE = 1


def _int_list(text: str) -> list[int]:
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="confmodel",
        description="Configuration-model sampling and simplicity-probability analytics",
    )
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--threads", type=int, default=None, help="worker thread count")
    parser.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument(
        "--no-timestamp", action="store_true", help="omit the timestamp header field"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_predict = sub.add_parser("predict", help="closed-form simplicity prediction")
    p_predict.add_argument("--degrees", type=str, default=None)
    p_predict.add_argument("--s", type=str, default=None, help="bipartite left degrees (JSON)")
    p_predict.add_argument("--t", type=str, default=None, help="bipartite right degrees (JSON)")

    p_sample = sub.add_parser("sample", help="sample pairings and report collision counts")
    p_sample.add_argument("--degrees", type=str, default=None)
    p_sample.add_argument("--bipartite", action="store_true")
    p_sample.add_argument("--s", type=str, default=None)
    p_sample.add_argument("--t", type=str, default=None)
    p_sample.add_argument("-r", "--replicates", type=int, default=1)
    p_sample.add_argument("--edges-dir", type=str, default=None, help="write one edge list per replicate")

    p_verify = sub.add_parser("verify", help="run a verification study")
    v_sub = p_verify.add_subparsers(dest="study", required=True)

    v_oracle = v_sub.add_parser("oracle", help="Monte Carlo vs exhaustive enumeration")
    v_oracle.add_argument("--max-n", type=int, default=10, dest="max_total")
    v_oracle.add_argument("-r", "--replicates", type=int, default=10**6)

    v_gap = v_sub.add_parser("moment-gap", help="moment-gap scaling study")
    v_gap.add_argument("--family", type=str, required=True)
    v_gap.add_argument("--sizes", type=_int_list, required=True)
    v_gap.add_argument("-m", "--orders", type=_int_list, default=[1, 2, 3])
    v_gap.add_argument("-r", "--replicates", type=int, default=10**6)
    v_gap.add_argument("--slope-bound", type=float, default=-0.4)
    v_gap.add_argument("--factor-bound", type=float, default=3.0)

    v_tv = v_sub.add_parser("tv", help="total variation distance study")
    v_tv.add_argument("--family", type=str, required=True)
    v_tv.add_argument("--sizes", type=_int_list, required=True)
    v_tv.add_argument("-r", "--replicates", type=int, default=10**6)

    v_dich = v_sub.add_parser("dichotomy", help="bounded vs unbounded family sweep")
    v_dich.add_argument("--bounded", type=str, default="regular:d=3")
    v_dich.add_argument("--bounded-sizes", type=_int_list, default=[100, 1000, 10000])
    v_dich.add_argument("--unbounded", type=str, default="heavy_block:gamma=0.6,k=2")
    v_dich.add_argument("--unbounded-sizes", type=_int_list, default=[1000, 10000])
    v_dich.add_argument("-r", "--replicates", type=int, default=10**5)
    v_dich.add_argument("--floor", type=float, default=None)
    v_dich.add_argument("--ceiling", type=float, default=0.01)

    v_split = v_sub.add_parser("split", help="vertex-splitting comparison")
    v_split.add_argument("--degrees", type=str, required=True)
    v_split.add_argument("--bound-factor", type=float, default=2.0)
    v_split.add_argument("-r", "--replicates", type=int, default=10**5)

    v_bip = v_sub.add_parser("bipartite", help="bipartite condition diagnostics")
    v_bip.add_argument("--family", type=str, default=None)
    v_bip.add_argument("--s", type=str, default=None)
    v_bip.add_argument("--t", type=str, default=None)
    v_bip.add_argument("--m-max", type=int, default=3)
    v_bip.add_argument("-r", "--replicates", type=int, default=10**4)

    return parser


def _header(args: argparse.Namespace) -> dict:
    header = {
        "version": __version__,
        "seed": args.seed,
        "rng": (
            "pairing replicates: xoshiro256** stream per (seed, replicate index); "
            "auxiliary draws: PCG64(SeedSequence([seed, purpose tag]))"
        ),
        "argv": sys.argv[1:],
    }
    if not args.no_timestamp:
        header["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    return header


def _emit(args: argparse.Namespace, payload: dict, csv_rows: list[dict] | None = None) -> None:
    if args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=["kind", "name", "value", "std_error", "ci_low", "ci_high", "detail"]
        )
        writer.writeheader()
        for row in csv_rows:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_report(args: argparse.Namespace, report: ExperimentReport) -> int:
    payload = {"header": _header(args), "report": report.to_dict()}
    _emit(args, payload, report.csv_rows())
    return 0 if report.all_passed else VERDICT_FAILURE


def cmd_predict(args: argparse.Namespace) -> int:
    if args.s is not None or args.t is not None:
        if args.s is None or args.t is None:
            raise ValueError("bipartite prediction needs both --s and --t")
        bp = validate_bipartite(json.loads(args.s), json.loads(args.t))
        model = surrogate.build(bp)
        payload = {
            "header": _header(args),
            "total_half_edges": bp.total,
            "pair_rate_sq_sum": model.sum_pair_rate_sq,
            "prob_simple_asymptotic": surrogate.prob_simple_asymptotic(model),
        }
    else:
        if args.degrees is None:
            raise ValueError("predict needs --degrees or --s/--t")
        ds = parse_degree_source(args.degrees)
        model = surrogate.build(ds)
        payload = {
            "header": _header(args),
            "total_half_edges": ds.total,
            "sum_d2_over_N": ds.density_ratio(),
            "sum_loop_rate": model.sum_loop_rate,
            "prob_simple_asymptotic": surrogate.prob_simple_asymptotic(model),
        }
    _emit(args, payload)
    return 0


def cmd_sample(args: argparse.Namespace) -> int:
    bipartite = args.bipartite or (args.s is not None)
    if bipartite:
        if args.s is None or args.t is None:
            raise ValueError("bipartite sampling needs --s and --t")
        bp = validate_bipartite(json.loads(args.s), json.loads(args.t))
    else:
        if args.degrees is None:
            raise ValueError("sample needs --degrees (or --s/--t with --bipartite)")
        ds = parse_degree_source(args.degrees)
    edges_dir = Path(args.edges_dir) if args.edges_dir else None
    if edges_dir:
        edges_dir.mkdir(parents=True, exist_ok=True)
    rows = []
    for r in range(args.replicates):
        rng = experiments.derive_seed(args.seed, experiments.TAG_Z, r)
        pairing = (
            sample_bipartite_pairing(bp, rng) if bipartite else sample_pairing(ds, rng)
        )
        stats = collision_stats(pairing)
        rows.append(
            {
                "replicate": r,
                "z": stats.z,
                "loops": sum(stats.loop_counts.values()),
                "parallel_pairs": stats.y_total,
                "simple": stats.simple,
            }
        )
        if edges_dir:
            write_edge_list(pairing, edges_dir / f"edges_{r:06d}.csv")
    payload = {"header": _header(args), "replicates": rows}
    csv_rows = [
        {
            "kind": "replicate",
            "name": str(row["replicate"]),
            "value": row["z"],
            "std_error": "",
            "ci_low": "",
            "ci_high": "",
            "detail": f"simple={row['simple']} loops={row['loops']} pairs={row['parallel_pairs']}",
        }
        for row in rows
    ]
    _emit(args, payload, csv_rows)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    if args.study == "oracle":
        report = experiments.oracle_study(
            max_total=args.max_total, replicates=args.replicates, seed=args.seed
        )
    elif args.study == "moment-gap":
        report = experiments.moment_gap_study(
            family_from_spec(args.family),
            orders=args.orders,
            sizes=args.sizes,
            replicates=args.replicates,
            seed=args.seed,
            slope_bound=args.slope_bound,
            factor_bound=args.factor_bound,
        )
    elif args.study == "tv":
        report = experiments.tv_study(
            family_from_spec(args.family),
            sizes=args.sizes,
            replicates=args.replicates,
            seed=args.seed,
        )
    elif args.study == "dichotomy":
        report = experiments.dichotomy_sweep(
            [
                (family_from_spec(args.bounded), args.bounded_sizes),
                (family_from_spec(args.unbounded), args.unbounded_sizes),
            ],
            replicates=args.replicates,
            seed=args.seed,
            bounded_floor=args.floor,
            unbounded_ceiling=args.ceiling,
        )
    elif args.study == "split":
        report = experiments.splitting_comparison(
            parse_degree_source(args.degrees),
            bound_factor=args.bound_factor,
            replicates=args.replicates,
            seed=args.seed,
        )
    elif args.study == "bipartite":
        if args.family:
            bp = parse_bipartite_source(args.family)
        elif args.s and args.t:
            bp = validate_bipartite(json.loads(args.s), json.loads(args.t))
        else:
            raise ValueError("bipartite verify needs --family or --s/--t")
        report = experiments.bipartite_conditions(
            bp, m_max=args.m_max, replicates=args.replicates, seed=args.seed
        )
    else:  # pragma: no cover - argparse enforces choices
        raise ValueError(f"unknown study {args.study!r}")
    return _emit_report(args, report)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.threads is None:
        env = os.environ.get("CONFMODEL_THREADS")
        args.threads = int(env) if env else None
    if args.threads is not None:
        import numba

        numba.set_num_threads(max(1, args.threads))
    try:
        if args.command == "predict":
            return cmd_predict(args)
        if args.command == "sample":
            return cmd_sample(args)
        if args.command == "verify":
            return cmd_verify(args)
        raise ValueError(f"unknown command {args.command!r}")
    except (ConfModelError, ValueError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
