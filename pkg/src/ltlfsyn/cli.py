"""Command-line front end: synth, sat, translate, verify and bench."""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .context import SolverContext, UndeclaredPropositionError
from .engine import REALIZABLE, UNREALIZABLE, EngineOptions, synthesize
from .formula import FormulaStore, propositions, to_nnf
from .game import solve_backward
from .instance import MEALY, MOORE, InstanceError, load_instance
from .parser import LTLfSyntaxError, parse
from .strategy import StrategyFormatError, dumps, loads, verify
from .tdfa import DEFAULT_STATE_BUDGET, BudgetExceeded, build_tdfa, export_dot

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_BUDGET = 2
EXIT_INCONSISTENT = 3

INPUT_ERRORS = (OSError, LTLfSyntaxError, InstanceError, StrategyFormatError, UndeclaredPropositionError)


def _flag(text: str) -> bool:
    if text not in ("0", "1"):
        raise argparse.ArgumentTypeError("expected 0 or 1")
    return text == "1"


def _read_formula(path: str, store: FormulaStore):
    return to_nnf(parse(Path(path).read_text(), store))


def _variables(arg: str | None, f) -> list[str]:
    if arg is None:
        return propositions(f)
    names = [v.strip() for v in arg.split(",") if v.strip()]
    return names


def cmd_synth(args) -> int:
    store = FormulaStore()
    spec = load_instance(args.formula, args.part, args.type, store)
    opts = EngineOptions(model_guided=args.m, entailment=args.e, budget=args.budget, strict=args.strict_prop_equiv)
    start = time.monotonic()
    if args.backward:
        res = solve_backward(spec, strict=args.strict_prop_equiv, budget=args.budget)
        status = REALIZABLE if res.realizable else UNREALIZABLE
        strategy = res.strategy or res.counter_strategy
        stats = {"status": status, "states_expanded": res.arena.n_states, "sccs": 0, "sat_calls": 0,
                 "entailment_calls": 0, "time_ms": round((time.monotonic() - start) * 1000.0, 3)}
    else:
        verdict = synthesize(spec, opts)
        status = verdict.status
        strategy = verdict.strategy or verdict.counter_strategy
        stats = verdict.stats.as_dict(status)
    print(status.upper())
    if args.strategy_out and strategy is not None:
        Path(args.strategy_out).write_text(dumps(strategy))
    if args.stats:
        Path(args.stats).write_text(json.dumps(stats, indent=2) + "\n")
    return EXIT_OK


def cmd_sat(args) -> int:
    store = FormulaStore()
    f = _read_formula(args.formula, store)
    ctx = SolverContext(_variables(args.vars, f), store=store)
    ctx.sat.budget = args.budget
    print(ctx.sat.min_model(f))
    return EXIT_OK


def cmd_translate(args) -> int:
    store = FormulaStore()
    f = _read_formula(args.formula, store)
    ctx = SolverContext(_variables(args.vars, f), store=store, strict=args.strict_prop_equiv)
    A = build_tdfa(f, context=ctx, budget=args.budget)
    sys.stdout.write(export_dot(A))
    print(f"states: {len(A.states)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    text = Path(args.strategy).read_text()
    head = text.split(None, 3)
    system_type = head[2] if len(head) >= 3 and head[0] == "strategy" else MOORE
    if system_type not in (MOORE, MEALY):
        raise StrategyFormatError(f"unknown system type {system_type!r}")
    store = FormulaStore()
    spec = load_instance(args.formula, args.part, system_type, store)
    st = loads(text, spec)
    report = verify(spec, st)
    if report.ok:
        print("PASS")
    else:
        print("FAIL")
        print(report.message)
    return EXIT_OK


def _bench_one(job) -> dict:
    name, formula_path, part_path, label, m, e, system_type, timeout, budget = job
    store = FormulaStore()
    spec = load_instance(formula_path, part_path, system_type, store)
    opts = EngineOptions(model_guided=m, entailment=e, budget=budget, timeout=timeout, extract_strategy=False)
    start = time.monotonic()
    row = {"instance": name, "options": label, "status": "", "states_expanded": "", "sat_calls": "",
           "time_ms": "", "timeout": 0}
    try:
        v = synthesize(spec, opts)
    except BudgetExceeded:
        row["timeout"] = 1
        row["time_ms"] = round((time.monotonic() - start) * 1000.0, 3)
        return row
    row.update(status=v.status, states_expanded=v.stats.states_expanded, sat_calls=v.stats.sat_calls,
               time_ms=round(v.stats.time_ms, 3))
    return row


def cmd_bench(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        raise OSError(f"not a directory: {root}")
    configs = [(True, True)]
    if args.matrix:
        configs = [(m, e) for m in (False, True) for e in (False, True)]
    jobs = []
    for formula_path in sorted(root.glob("*.ltlf")):
        part_path = formula_path.with_suffix(".part")
        if not part_path.exists():
            raise OSError(f"missing partition file for {formula_path.name}")
        for m, e in configs:
            label = f"m{int(m)}e{int(e)}"
            jobs.append((formula_path.stem, str(formula_path), str(part_path), label, m, e,
                         args.type, args.timeout, args.budget))
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_bench_one, jobs))
    else:
        rows = [_bench_one(j) for j in jobs]
    fields = ["instance", "options", "status", "states_expanded", "sat_calls", "time_ms", "timeout"]
    writer = csv.DictWriter(sys.stdout, fieldnames=fields, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    seen: dict[str, set[str]] = {}
    for row in rows:
        if row["status"]:
            seen.setdefault(row["instance"], set()).add(row["status"])
    bad = sorted(name for name, statuses in seen.items() if len(statuses) > 1)
    if bad:
        print(f"fatal: option sets disagree on {', '.join(bad)}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ltlfsyn", description="LTLf realizability checking and synthesis")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formula=True):
        if formula:
            sp.add_argument("--formula", required=True, help="file holding one LTLf formula")
        sp.add_argument("--budget", type=int, default=DEFAULT_STATE_BUDGET, help="state budget")

    s = sub.add_parser("synth", help="decide realizability and optionally emit a strategy")
    common(s)
    s.add_argument("--part", required=True, help="partition file with .inputs/.outputs lines")
    s.add_argument("--type", choices=(MOORE, MEALY), default=MOORE)
    s.add_argument("-m", type=_flag, default=True, metavar="0|1", help="model-guided edge selection")
    s.add_argument("-e", type=_flag, default=True, metavar="0|1", help="state entailment checks")
    s.add_argument("--backward", action="store_true", help="use the explicit backward fixed point")
    s.add_argument("--strategy-out", metavar="PATH")
    s.add_argument("--stats", metavar="PATH")
    s.add_argument("--strict-prop-equiv", action="store_true",
                   help="treat p and !p as unrelated atoms when merging states")
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("sat", help="satisfiability with a minimum-length model")
    common(s)
    s.add_argument("--vars", help="comma separated proposition list")
    s.set_defaults(func=cmd_sat)

    s = sub.add_parser("translate", help="explicit automaton in DOT")
    common(s)
    s.add_argument("--vars", help="comma separated proposition list")
    s.add_argument("--strict-prop-equiv", action="store_true")
    s.set_defaults(func=cmd_translate)

    s = sub.add_parser("verify", help="check a strategy file")
    common(s)
    s.add_argument("--part", required=True)
    s.add_argument("--strategy", required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", help="run every .ltlf/.part pair in a directory")
    common(s, formula=False)
    s.add_argument("--dir", required=True)
    s.add_argument("--timeout", type=float, default=None, metavar="SECS")
    s.add_argument("--matrix", action="store_true", help="run all four -m/-e combinations")
    s.add_argument("--type", choices=(MOORE, MEALY), default=MOORE)
    s.add_argument("--jobs", type=int, default=1, help="worker processes")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
