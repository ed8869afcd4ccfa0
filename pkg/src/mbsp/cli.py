"""Command-line entry point: generate, check, heuristic, solve, bench."""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import os
import sys
import time

from . import instances as INST
from . import solver as BC
from .ggmz import StableSetParams, ggmz
from .grasp import GraspParams, grasp
from .graph import is_balanced
from .spanning import TreeStrategy


def _default_seed(args):
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("MBSP_SEED")
    return int(env) if env else 0


def cmd_generate(args):
    seed = _default_seed(args)
    if args.group == 1:
        if args.ratio is None:
            raise SystemExit("group 1 requires --ratio")
        spec = INST.RandomSpec(args.n, args.d, seed, neg_ratio=args.ratio)
    else:
        if args.parallel is None:
            raise SystemExit("group 2 requires --parallel")
        spec = INST.RandomSpec(args.n, args.d, seed, parallel_frac=args.parallel)
    g = INST.generate(spec)
    if args.out:
        INST.write(g, args.out)
    else:
        sys.stdout.write(INST.format_instance(g))
    return 0


def cmd_check(args):
    g = INST.read(args.instance)
    w = is_balanced(g)
    if w is None:
        print("unbalanced")
        return 1
    print("balanced W={%s}" % ",".join(str(v + 1) for v in sorted(w)))
    return 0


def cmd_heuristic(args):
    g = INST.read(args.instance)
    seed = _default_seed(args)
    t0 = time.monotonic()
    if args.method == "ggmz":
        params = StableSetParams(time_limit_seconds=args.time_limit, seed=seed)
        p = ggmz(g, TreeStrategy.from_token(args.tree), params)
    else:
        params = GraspParams(
            max_iterations=args.iterations, time_limit_seconds=args.time_limit, seed=seed
        )
        p = grasp(g, params)
    elapsed = time.monotonic() - t0
    print(
        json.dumps(
            {
                "method": args.method,
                "value": p.size(),
                "v1": sorted(v + 1 for v in p.v1),
                "v2": sorted(v + 1 for v in p.v2),
                "time_s": round(elapsed, 3),
            }
        )
    )
    return 0


def _result_json(res, elapsed):
    lb = res.lower_bound
    gap = None
    if res.status != "optimal" and lb > 0:
        gap = 100.0 * (res.upper_bound - lb) / lb
    return {
        "lb": lb,
        "ub": res.upper_bound,
        "gap_pct": gap,
        "status": res.status,
        "nodes": res.stats["nodes"],
        "time_s": round(elapsed, 3),
        "cuts": res.stats["cuts_by_kind"],
    }


def cmd_solve(args):
    g = INST.read(args.instance)
    params = BC.SolveParams(
        time_limit_seconds=args.time_limit,
        max_cut_rounds=args.max_rounds,
        max_cuts_per_round=args.max_cuts,
        branching=args.branching,
        seed=_default_seed(args),
    )
    t0 = time.monotonic()
    res = BC.solve(g, params)
    print(json.dumps(_result_json(res, time.monotonic() - t0)))
    return 0


# ---------------------------------------------------------------------------
# bench harness

CSV_HEADER = "instance,n,m,m_minus,m_plus,m_parallel,method,time_s,status,lb,ub,gap_pct,nodes"


def _bench_one(task):
    path, method, tree, branching, time_limit, iterations, seed = task
    g = INST.read(path)
    n_par = len(g.e_parallel)
    base = {
        "instance": os.path.basename(path),
        "n": g.n,
        "m": g.m,
        "m_minus": len(g.e_minus) - n_par,
        "m_plus": len(g.e_plus) - n_par,
        "m_parallel": n_par,
        "method": method,
        "group": 2 if n_par else 1,
    }
    t0 = time.monotonic()
    if method == "ggmz":
        p = ggmz(g, TreeStrategy.from_token(tree), StableSetParams(time_limit_seconds=time_limit, seed=seed))
        base.update(status="heuristic", lb=p.size(), ub="", gap_pct="", nodes="")
    elif method == "grasp":
        p = grasp(g, GraspParams(max_iterations=iterations, time_limit_seconds=time_limit, seed=seed))
        base.update(status="heuristic", lb=p.size(), ub="", gap_pct="", nodes="")
    else:
        try:
            res = BC.solve(
                g,
                BC.SolveParams(time_limit_seconds=time_limit, branching=branching, seed=seed),
            )
        except Exception as exc:  # numerical failure recorded, bench continues
            base.update(status=f"error:{type(exc).__name__}", lb="", ub="", gap_pct="", nodes="")
            base["time_s"] = time.monotonic() - t0
            return base
        gap = ""
        if res.status != "optimal" and res.lower_bound > 0:
            gap = f"{100.0 * (res.upper_bound - res.lower_bound) / res.lower_bound:.2f}"
        ub = f"{res.upper_bound:.4f}".rstrip("0").rstrip(".")
        base.update(status=res.status, lb=res.lower_bound, ub=ub, gap_pct=gap, nodes=res.stats["nodes"])
    base["time_s"] = time.monotonic() - t0
    return base


def _aggregate(rows, omit_times=False):
    """Per-(group, n, method) cells: avg time over solved '(k)', avg gap over
    unsolved, '-' when nothing solved."""
    cells = {}
    for r in rows:
        key = (r["group"], r["n"], r["method"])
        cells.setdefault(key, []).append(r)
    lines = ["group,n,method,avg_time_solved,avg_gap_unsolved"]
    for key in sorted(cells):
        group, n, method = key
        bucket = cells[key]
        solved = [r for r in bucket if r["status"] in ("optimal", "heuristic")]
        unsolved = [r for r in bucket if r["status"] == "time_limit"]
        if not solved:
            time_cell = "-"
        elif omit_times:
            time_cell = f"({len(solved)})"
        else:
            times = [r["time_s"] for r in solved]
            time_cell = f"{sum(times) / len(times):.2f}({len(solved)})"
        gaps = [float(r["gap_pct"]) for r in unsolved if r["gap_pct"] != ""]
        gap_cell = f"{sum(gaps) / len(gaps):.2f}" if gaps else "-"
        lines.append(f"{group},{n},{method},{time_cell},{gap_cell}")
    return lines


def cmd_bench(args):
    seed = _default_seed(args)
    paths = sorted(
        os.path.join(args.dir, f) for f in os.listdir(args.dir) if not f.startswith(".")
    )
    if not paths:
        raise SystemExit(f"no instances in {args.dir}")
    methods = args.method
    tasks = [
        (path, method, args.tree, args.branching, args.time_limit, args.iterations, seed)
        for path in paths
        for method in methods
    ]
    if args.workers > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(_bench_one, tasks))
    else:
        rows = [_bench_one(t) for t in tasks]

    out_lines = [CSV_HEADER]
    for r in rows:
        time_cell = "" if args.omit_times else f"{r['time_s']:.2f}"
        out_lines.append(
            ",".join(
                str(r[k]) if k != "time_s" else time_cell
                for k in [
                    "instance",
                    "n",
                    "m",
                    "m_minus",
                    "m_plus",
                    "m_parallel",
                    "method",
                    "time_s",
                    "status",
                    "lb",
                    "ub",
                    "gap_pct",
                    "nodes",
                ]
            )
        )
    out_lines.append("")
    out_lines.extend(_aggregate(rows, omit_times=args.omit_times))
    text = "\n".join(out_lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="mbsp", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a random instance")
    p.add_argument("--group", type=int, choices=(1, 2), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=float, required=True)
    p.add_argument("--ratio", type=float, help="group 1: |E-|/|E+|")
    p.add_argument("--parallel", type=float, help="group 2: parallel fraction of |E|")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("check", help="test balance of an instance file")
    p.add_argument("instance")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("heuristic", help="run a heuristic")
    p.add_argument("instance")
    p.add_argument("--method", choices=("ggmz", "grasp"), required=True)
    p.add_argument("--tree", default="bfs", help="ggmz spanning strategy")
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--time-limit", type=float, default=300.0)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_heuristic)

    p = sub.add_parser("solve", help="exact branch-and-cut")
    p.add_argument("instance")
    p.add_argument("--time-limit", type=float, default=3600.0)
    p.add_argument("--branching", choices=("cycle", "standard"), default="cycle")
    p.add_argument("--max-rounds", type=int, default=10)
    p.add_argument("--max-cuts", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run methods over an instance directory")
    p.add_argument("--dir", required=True)
    p.add_argument(
        "--method",
        action="append",
        choices=("ggmz", "grasp", "bc"),
        help="repeatable; default bc",
    )
    p.add_argument("--tree", default="bfs")
    p.add_argument("--branching", choices=("cycle", "standard"), default="cycle")
    p.add_argument("--iterations", type=int, default=100)
    p.add_argument("--time-limit", type=float, default=3600.0)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--omit-times", action="store_true", help="blank time cells for byte-reproducible output")
    p.add_argument("--out", help="CSV path (stdout if omitted)")
    p.set_defaults(func=cmd_bench)
    return parser


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "method", None) is None and args.command == "bench":
        args.method = ["bc"]
    return args.func(args)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
