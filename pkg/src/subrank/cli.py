"""Command-line front end.

Exit codes: 0 success, 2 bad parameters or invalid document, 3 audit failure,
4 instance too large for brute force.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from . import analysis, generators, serialize, solvers
from .errors import SubrankError, TooLarge
from .instance import Instance, cover_times, prefix_values

EXIT_OK, EXIT_INPUT, EXIT_AUDIT, EXIT_TOO_LARGE = 0, 2, 3, 4

COMPARE_COLUMNS = [
    "name", "m", "n", "aru_cost", "greedy_cost", "reference_cost",
    "aru_ratio", "greedy_ratio", "greedy_over_aru", "epsilon_hat", "gamma", "four_gamma", "within_bound",
]


class _BruteTooLarge(Exception):
    pass


def _brute(inst: Instance, limit: int):
    try:
        return solvers.brute_force_optimal(inst, limit=limit)
    except TooLarge as exc:
        raise _BruteTooLarge(str(exc)) from exc


def _parse_sets(text: str) -> list[list[int]]:
    # "1,2;2,3;3" -> [[1, 2], [2, 3], [3]]; an empty group is an empty set
    return [[int(x) for x in grp.split(",") if x.strip()] for grp in text.split(";")]


def _parse_floats(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x.strip()]


def _set_cover_input(args) -> generators.SetCoverInput:
    if args.input:
        raw = json.loads(Path(args.input).read_text())
        return generators.SetCoverInput(int(raw["universe_size"]), tuple(raw["sets"]))
    if args.universe_size is None or args.sets is None:
        raise SubrankError("need --universe-size and --sets, or --input")
    return generators.SetCoverInput(args.universe_size, tuple(_parse_sets(args.sets)))


def _generate(args) -> Instance:
    kind, tol = args.family, args.tolerance
    if kind == "set-cover":
        return generators.from_set_cover(_set_cover_input(args), tol=tol)
    if kind == "msc":
        return generators.min_sum_set_cover(_set_cover_input(args), tol=tol)
    if kind == "greedy-trap":
        return generators.greedy_trap(args.n, tol=tol)
    if kind == "multi-intent":
        rows = [_parse_floats(r) for r in args.values.split(";")]
        nu = _parse_floats(args.nu)
        weights = _parse_floats(args.weights) if args.weights else [1.0] * len(rows)
        return generators.multiple_intents(rows, nu, weights, tol=tol)
    if kind == "random":
        return generators.random_instance(
            args.m, args.n, args.random_family, args.density, args.seed, universe_size=args.universe_size, tol=tol
        )
    raise SubrankError(f"unknown generator {kind!r}")


def cmd_generate(args) -> int:
    inst = _generate(args)
    text = serialize.dumps_instance(inst)
    if args.output:
        Path(args.output).write_text(text, newline="\n")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _audit(inst: Instance, order, trace=None) -> dict:
    eps, gamma = analysis.gamma_certificate(inst)
    out: dict = {"epsilon_hat": eps, "gamma": gamma}
    ok = True
    if trace is not None:
        diag = analysis.run_diagnostics(inst, trace)
        widths = analysis.width_bound(diag, gamma)
        out["cost_identities"] = {"alg_cost": diag.alg_cost, "sum_R": diag.cost_via_r, "sum_Lambda_Q": diag.cost_via_lambda}
        if trace.kind == "aru":
            pot = analysis.audit_potential_sums(trace, gamma)
            out["potential_sums"] = list(pot.sums)
            out["potential_sums_ok"] = pot.ok
            out["width_bound_ok"] = all(widths)
            ok = ok and pot.ok and all(widths)
        chains = analysis.prefix_chains(trace)
    else:
        pv = prefix_values(inst, order)
        times = cover_times(inst, order).cover_times
        chains = [row[:c] for row, c in zip(pv, times)]
    chain_ok = all(analysis.audit_chain_sum(ch).ok for ch in chains)
    out["chain_sums_ok"] = chain_ok
    out["ok"] = ok and chain_ok
    return out


def cmd_solve(args) -> int:
    inst = serialize.read_instance(args.instance, tol=args.tolerance)
    trace = None
    if args.algorithm == "aru":
        trace = solvers.adaptive_residual_updates(inst)
        ordering = trace.ordering
    elif args.algorithm == "greedy":
        trace = solvers.cumulative_greedy(inst)
        ordering = trace.ordering
    else:
        ordering, _ = _brute(inst, args.limit)
    report = cover_times(inst, ordering)
    out = {
        "algorithm": args.algorithm,
        "ordering": list(ordering.order),
        "cover_times": list(report.cover_times),
        "total_cost": report.total_cost,
    }
    if args.trace:
        if trace is None:
            raise SubrankError("--trace needs a trace-producing algorithm (aru or greedy)")
        Path(args.trace).write_text(serialize.dumps_trace(trace), newline="\n")
    code = EXIT_OK
    if args.audit:
        out["audit"] = _audit(inst, ordering, trace)
        if not out["audit"]["ok"]:
            code = EXIT_AUDIT
    sys.stdout.write(serialize.dumps(out))
    return code


def cmd_analyze(args) -> int:
    inst = serialize.read_instance(args.instance, tol=args.tolerance)
    trace = solvers.adaptive_residual_updates(inst)
    diag = analysis.run_diagnostics(inst, trace)
    if args.reference == "brute":
        ref, _ = _brute(inst, args.limit)
        cert = analysis.approximation_report(inst, trace, "brute-force", brute_limit=args.limit)
    else:
        ref = trace.ordering
        cert = analysis.approximation_report(inst, trace, None)
    opt_hist, alg_hist = analysis.export_histograms(inst, ref, trace)
    if args.diagnostics_csv:
        Path(args.diagnostics_csv).write_text(diag.to_csv(), newline="\n")
    if args.histogram_csv:
        Path(args.histogram_csv).write_text(alg_hist.to_csv(), newline="\n")
    if args.reference_histogram_csv:
        Path(args.reference_histogram_csv).write_text(opt_hist.to_csv(), newline="\n")
    out = {
        "diagnostics": diag.to_dict(),
        "certificate": cert.to_dict(),
        "reference_histogram": opt_hist.to_dict(),
        "algorithm_histogram": alg_hist.to_dict(),
    }
    sys.stdout.write(serialize.dumps(out))
    return EXIT_OK if cert.ok else EXIT_AUDIT


def _suite_params(text: str) -> tuple[str, dict]:
    kind, _, rest = text.partition(":")
    params = {}
    if kind == "greedy-trap":
        params["n"] = [int(x) for x in rest.split(",") if x.strip()]
    else:
        for item in filter(None, rest.split(",")):
            key, _, val = item.partition("=")
            params[key.strip()] = val.strip()
    return kind, params


def expand_suite(text: str) -> list[tuple[str, Instance]]:
    """Instances named by a suite spec.

    greedy-trap:4,100,400
    random:count=100,max_m=7,max_n=4,family=mixed,seed=0
    msc:count=20,universe=6,sets=5,seed=0
    """
    kind, p = _suite_params(text)
    out = []
    if kind == "greedy-trap":
        for n in p["n"]:
            out.append((f"greedy-trap-n{n:07d}", generators.greedy_trap(n)))
    elif kind == "random":
        count, seed = int(p.get("count", 10)), int(p.get("seed", 0))
        max_m, max_n = int(p.get("max_m", 7)), int(p.get("max_n", 4))
        family = p.get("family", "mixed")
        density = float(p.get("density", 0.5))
        rng = np.random.default_rng(seed)
        for k in range(count):
            m = int(rng.integers(2, max_m + 1))
            n = int(rng.integers(1, max_n + 1))
            fam = ("modular", "coverage")[k % 2] if family == "mixed" else family
            out.append((f"random-{k:05d}", generators.random_instance(m, n, fam, density, seed * 100003 + k)))
    elif kind == "msc":
        count, seed = int(p.get("count", 10)), int(p.get("seed", 0))
        universe, n_sets = int(p.get("universe", 6)), int(p.get("sets", 5))
        for k in range(count):
            sc = generators.random_set_cover_input(universe, n_sets, seed * 100003 + k)
            out.append((f"msc-{k:05d}", generators.min_sum_set_cover(sc)))
    else:
        raise SubrankError(f"unknown suite kind {kind!r}")
    return out


def compare_rows(named: list[tuple[str, Instance]], reference: str, limit: int) -> list[dict]:
    rows = []
    for name, inst in sorted(named, key=lambda x: x[0]):
        aru = solvers.adaptive_residual_updates(inst).total_cost
        greedy = solvers.cumulative_greedy(inst).total_cost
        eps, gamma = analysis.gamma_certificate(inst)
        row = {
            "name": name, "m": inst.m, "n": inst.n, "aru_cost": aru, "greedy_cost": greedy,
            "reference_cost": "", "aru_ratio": "", "greedy_ratio": "",
            "greedy_over_aru": greedy / aru, "epsilon_hat": eps, "gamma": gamma, "four_gamma": 4 * gamma,
            "within_bound": "",
        }
        if reference == "brute":
            _, opt = _brute(inst, limit)
            row.update(
                reference_cost=opt, aru_ratio=aru / opt, greedy_ratio=greedy / opt,
                within_bound=aru <= 4 * gamma * opt + analysis.BOUND_ATOL,
            )
        rows.append(row)
    return rows


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=COMPARE_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})
    return buf.getvalue()


def cmd_compare(args) -> int:
    named = [(Path(p).stem, serialize.read_instance(p, tol=args.tolerance)) for p in args.instances]
    for spec in args.suite or []:
        named.extend(expand_suite(spec))
    if not named:
        raise SubrankError("empty suite: give instance paths or --suite")
    rows = compare_rows(named, args.reference, args.limit)
    text = rows_to_csv(rows)
    if args.csv:
        Path(args.csv).write_text(text, newline="\n")
    sys.stdout.write(text)
    if any(r["within_bound"] is False for r in rows):
        return EXIT_AUDIT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="subrank", description="Ranking with submodular valuations.")
    parser.add_argument("--tolerance", type=float, help="threshold slack (overrides SUBRANK_TOLERANCE)")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write an instance document")
    gen.add_argument("family", choices=["set-cover", "greedy-trap", "msc", "multi-intent", "random"])
    gen.add_argument("-o", "--output")
    gen.add_argument("--n", type=int, help="greedy-trap size / random function count")
    gen.add_argument("--m", type=int, help="random element count")
    gen.add_argument("--family", dest="random_family", choices=["modular", "coverage"], default="modular")
    gen.add_argument("--density", type=float, default=0.5)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--universe-size", type=int)
    gen.add_argument("--sets", help='set family as "1,2;2,3;3"')
    gen.add_argument("--input", help="JSON file with universe_size and sets")
    gen.add_argument("--values", help='multi-intent rows as "0.5,0.5,0;1,0,0"')
    gen.add_argument("--nu", help="multi-intent row values")
    gen.add_argument("--weights", help="comma-separated function weights")
    gen.set_defaults(func=cmd_generate)

    solve = sub.add_parser("solve", help="order an instance and report its cost")
    solve.add_argument("instance")
    solve.add_argument("--algorithm", choices=["aru", "greedy", "brute"], default="aru")
    solve.add_argument("--trace", help="write the run trace as JSON")
    solve.add_argument("--audit", action="store_true")
    solve.add_argument("--limit", type=int, default=9, help="brute-force size limit")
    solve.set_defaults(func=cmd_solve)

    ana = sub.add_parser("analyze", help="diagnostics, certificate and histograms of an ARU run")
    ana.add_argument("instance")
    ana.add_argument("--reference", choices=["brute", "none"], default="none")
    ana.add_argument("--limit", type=int, default=9)
    ana.add_argument("--diagnostics-csv")
    ana.add_argument("--histogram-csv")
    ana.add_argument("--reference-histogram-csv")
    ana.set_defaults(func=cmd_analyze)

    cmp_ = sub.add_parser("compare", help="ARU vs greedy (vs optimum) over instances")
    cmp_.add_argument("instances", nargs="*")
    cmp_.add_argument("--suite", action="append")
    cmp_.add_argument("--reference", choices=["brute", "none"], default="none")
    cmp_.add_argument("--limit", type=int, default=9)
    cmp_.add_argument("--csv")
    cmp_.set_defaults(func=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _BruteTooLarge as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_TOO_LARGE
    except (SubrankError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
