"""Command-line driver: solve, decompose, generate, verify, oracle, bench.

Exit codes: 0 success, 1 infeasible / budget exceeded / failed verification,
2 usage or parse error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from .decomposition import TDParseError, dump_td, heuristic_td, load_td, validate_td
from .gadgets import (
    construct_lb_instance, construct_mwc_lb, construct_nmc_lb, gen_grid_instance,
)
from .graph import Problem, edge_key
from .io import InstanceParseError, dump_instance, load_instance, one_indexed, read_sidecar, write_sidecar
from .oracle import TooLarge, brute_solve, exact_solve, solution_is_valid
from .solve import ResultRecord, solve_instance

PROBLEMS = [p.value for p in Problem]
SOURCE_VARIANT = {
    "sfvs": "permutation-independent-set", "soct": "permutation-independent-set",
    "ect": "permutation-independent-set", "nmc": "independent-set", "mwc": "permutation-clique",
}


class UsageError(Exception):
    pass


def _read_instance(args) -> tuple:
    path = Path(args.graph)
    text = path.read_text()
    budget = getattr(args, "budget", None)
    if budget is None:
        side = read_sidecar(path)
        if side is not None:
            budget = side.get("budget")
    return load_instance(text, problem=args.problem, budget=budget), path


def _emit(args, text: str):
    if getattr(args, "output", None):
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _record_exit(rec: ResultRecord) -> int:
    return 0 if rec.status == "optimal" else 1


def _write_record(args, rec: ResultRecord):
    timing = getattr(args, "timing", False)
    _emit(args, rec.to_json(timing) if args.json else rec.to_text(timing))


def cmd_solve(args) -> int:
    inst, _ = _read_instance(args)
    td = load_td(Path(args.td).read_text()) if args.td else None
    rec = solve_instance(inst, td, threads=args.threads)
    _write_record(args, rec)
    return _record_exit(rec)


def cmd_decompose(args) -> int:
    inst, _ = _read_instance(args)
    td = heuristic_td(inst, args.criterion)
    _emit(args, dump_td(td, inst.n))
    print(f"width {td.width}", file=sys.stderr)
    return 0


def cmd_generate(args) -> int:
    problem = args.problem
    if problem not in SOURCE_VARIANT:
        raise UsageError(f"no generator for {problem}")
    H = gen_grid_instance(args.k, args.edges, SOURCE_VARIANT[problem], args.seed, args.plant)
    if problem == "nmc":
        gen = construct_nmc_lb(H)
    elif problem == "mwc":
        gen = construct_mwc_lb(H, expand=not args.weighted)
    else:
        gen = construct_lb_instance(problem, H)
    out = Path(args.output)
    header = (f"generated {problem} k={args.k} edges={args.edges} seed={args.seed}",)
    out.write_text(dump_instance(gen.instance, header))
    witness_name = None
    if gen.witness_pd is not None and not args.no_witness:
        wpath = out.with_name(out.name + ".td")
        wpath.write_text(dump_td(gen.witness_pd, gen.instance.n))
        witness_name = wpath.name
    write_sidecar(out, gen, witness_name)
    print(f"n {gen.instance.n} budget {gen.budget}", file=sys.stderr)
    return 0


def _parse_deletion(text: str, edges: bool):
    out = set()
    for tok in text.replace(",", " ").split():
        if edges:
            u, v = tok.split("-")
            out.add(edge_key(int(u) - 1, int(v) - 1))
        else:
            out.add(int(tok) - 1)
    return out


def cmd_verify(args) -> int:
    inst, _ = _read_instance(args)
    if args.td:
        td = load_td(Path(args.td).read_text())
        rep = validate_td(inst, td)
        if rep:
            print(f"valid decomposition, width {td.width}")
            return 0
        print(f"invalid decomposition: {rep.message}")
        return 1
    if args.solution is None:
        raise UsageError("verify needs --td or --solution")
    text = Path(args.solution).read_text() if args.solution and Path(args.solution).is_file() else args.solution
    deletion = _parse_deletion(text, inst.problem.is_edge_problem)
    if not solution_is_valid(inst, deletion):
        print("invalid solution: the problem predicate fails after deletion")
        return 1
    if inst.problem.is_edge_problem:
        weight = sum(inst.ew(*e) for e in deletion)
    else:
        weight = sum(inst.weight[v] for v in deletion)
    if inst.budget is not None and weight > inst.budget:
        print(f"valid solution of weight {weight} exceeds budget {inst.budget}")
        return 1
    print(f"valid solution of weight {weight}")
    return 0


def cmd_oracle(args) -> int:
    inst, _ = _read_instance(args)
    t0 = time.perf_counter()
    res = exact_solve(inst) if args.exact else brute_solve(inst)
    if res.optimum_weight is None:
        status = "infeasible"
    elif inst.budget is not None and res.optimum_weight > inst.budget:
        status = "budget-exceeded"
    else:
        status = "optimal"
    rec = ResultRecord(inst.problem.value, status, res.optimum_weight,
                       one_indexed(res.deletion_set) if res.deletion_set is not None else None,
                       inst.budget, None,
                       {"solver": "exact" if args.exact else "brute", "wall_time": time.perf_counter() - t0})
    _write_record(args, rec)
    return _record_exit(rec)


def cmd_bench(args) -> int:
    files = sorted(p for p in Path(args.dir).iterdir() if p.suffix == ".grl")
    if not files:
        raise UsageError(f"no instance files in {args.dir}")
    rows = ["file,n,m,width,status,optimum,seconds"]
    for f in files:
        inst = load_instance(f.read_text(), problem=args.problem)
        t0 = time.perf_counter()
        rec = solve_instance(inst, threads=args.threads)
        dt = time.perf_counter() - t0
        rows.append(f"{f.name},{inst.n},{inst.m},{rec.decomposition_width_used},{rec.status},"
                    f"{rec.optimum_weight},{dt:.3f}")
    _emit(args, "\n".join(rows) + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="twdel", description="Exact treewidth-based deletion solvers")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, problem_required=True):
        p.add_argument("--problem", choices=PROBLEMS, required=problem_required)
        p.add_argument("--graph", required=True, help="instance file")
        p.add_argument("--budget", type=int, default=None)

    p = sub.add_parser("solve", help="solve an instance exactly")
    common(p)
    p.add_argument("--td", help="PACE .td decomposition of the instance")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.add_argument("--timing", action="store_true", help="include wall time in the record")
    p.add_argument("--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("decompose", help="write a heuristic tree decomposition")
    common(p, problem_required=False)
    p.add_argument("--criterion", choices=["best", "min-fill", "min-degree"], default="best")
    p.add_argument("--output")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("generate", help="write a lower-bound instance with its sidecar")
    p.add_argument("--problem", choices=sorted(SOURCE_VARIANT), required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--plant", action="store_true")
    p.add_argument("--weighted", action="store_true", help="keep multiway cut edge weights unexpanded")
    p.add_argument("--no-witness", action="store_true")
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("verify", help="check a decomposition or a claimed solution")
    common(p, problem_required=False)
    p.add_argument("--td")
    p.add_argument("--solution", help="file or literal list of 1-indexed vertices (u-v for edges)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force (or integer programming) optimum")
    common(p)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--json", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="timing table over a directory of instances")
    p.add_argument("--dir", required=True)
    p.add_argument("--problem", choices=PROBLEMS, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_bench)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    if getattr(args, "problem", None) is None and args.command in ("decompose", "verify"):
        args.problem = "sfvs"
    try:
        return args.func(args)
    except (InstanceParseError, TDParseError, UsageError, FileNotFoundError, TooLarge, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
