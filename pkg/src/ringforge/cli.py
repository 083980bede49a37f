"""Command-line front end: ``ringforge {gen,solve,validate,render,ground,bench}``."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from pathlib import Path

from . import __version__
from .pddl import PDDLSemanticError, PDDLSyntaxError, Task, applicable_actions, parse_domain, parse_problem, write_problem
from .planfod import (BudgetExhausted, PlanFormatError, ProvenUnsolvable, SearchBudget, Solved,
                      read_plan, solve_bfs, solve_gbfs, write_plan)
from .planfond import (CLOSURE_MODES, PolicyFormatError, execution_tree, read_policy, solve_strong,
                       write_policy)
from .proof import DisplayMap, export_dot, render_proof, validate_plan, validate_policy
from .ringdomain import BUILTINS, FOD, FOND, builtin_problem, domain_file_text, DomainOptions, generate_domain

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_UNSOLVABLE = 10
EXIT_BUDGET = 11
EXIT_INVALID = 12

log = logging.getLogger("ringforge")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _env_number(name, cast, default):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise CliError(f"{name} must be a number, got {raw!r}") from None


def budget_from(args) -> SearchBudget:
    states = args.budget_states or _env_number("RINGFORGE_BUDGET_STATES", int, 1_000_000)
    seconds = args.budget_seconds or _env_number("RINGFORGE_BUDGET_SECONDS", float, 120.0)
    try:
        return SearchBudget(states, seconds)
    except ValueError as exc:
        raise CliError(str(exc)) from None


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def load_task(inputs, display_path=None):
    """(task, display map, builtin key or None) from a builtin key or domain + problem files."""
    try:
        if len(inputs) == 1:
            key = inputs[0]
            if key not in BUILTINS:
                raise CliError(f"unknown builtin problem {key!r} (known: {', '.join(BUILTINS)})")
            problem, options, display, _ = builtin_problem(key)
            task = Task(generate_domain(options), problem)
        elif len(inputs) == 2:
            key = None
            domain = parse_domain(_read(inputs[0]))
            task = Task(domain, parse_problem(_read(inputs[1]), domain))
            display = DisplayMap()
        else:
            raise CliError("expected a builtin key or DOMAIN PROBLEM paths")
        if display_path:
            display = DisplayMap.loads(_read(display_path))
    except (PDDLSyntaxError, PDDLSemanticError, ValueError) as exc:
        if isinstance(exc, CliError):
            raise
        raise CliError(f"cannot load task: {exc}") from None
    return task, display, key


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
        print(out)
    else:
        sys.stdout.write(text)


def _stats(result) -> None:
    for line in result.stats.lines():
        print(line, file=sys.stderr)


def cmd_gen(args) -> int:
    outdir = Path(args.out or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    if args.key:
        if args.key not in BUILTINS:
            raise CliError(f"unknown builtin problem {args.key!r} (known: {', '.join(BUILTINS)})")
        problem, options, display, _ = builtin_problem(args.key, args.variant)
        (outdir / "problem.pddl").write_text(write_problem(problem), encoding="utf-8")
        (outdir / "display.map").write_text(display.dumps(), encoding="utf-8")
        written += ["problem.pddl", "display.map"]
    else:
        subset = tuple(a.strip() for a in args.actions.split(",")) if args.actions else None
        try:
            options = DomainOptions(args.variant or FOD, args.allow_zero_prod, subset)
        except ValueError as exc:
            raise CliError(str(exc)) from None
    (outdir / "domain.pddl").write_text(domain_file_text(options), encoding="utf-8")
    written.insert(0, "domain.pddl")
    for name in written:
        print(outdir / name)
    return EXIT_OK


def _default_solver(task, key) -> str:
    if key is not None:
        return BUILTINS[key].solver
    return "bfs" if task.deterministic else "fond"


def run_solver(task, solver, closure, budget):
    if solver in ("bfs", "gbfs") and not task.deterministic:
        raise CliError(f"{solver} needs a deterministic task; use --solver fond")
    if solver == "bfs":
        return solve_bfs(task, budget)
    if solver == "gbfs":
        return solve_gbfs(task, budget)
    return solve_strong(task, closure, budget)


def cmd_solve(args) -> int:
    task, _, key = load_task(args.task, args.display)
    solver = args.solver or _default_solver(task, key)
    result = run_solver(task, solver, args.closure, budget_from(args))
    _stats(result)
    if isinstance(result, Solved):
        if solver == "fond":
            text = write_policy(result.policy, task)
        else:
            text = write_plan(result.plan)
        _emit(text, args.out)
        return EXIT_OK
    if isinstance(result, ProvenUnsolvable):
        print("result=proven-unsolvable", file=sys.stderr)
        return EXIT_UNSOLVABLE
    print("result=budget-exhausted", file=sys.stderr)
    return EXIT_BUDGET


def _load_artifact(args, task):
    """Plan or policy from --plan / --policy; a policy file is recognised by its blocks."""
    path = args.plan or args.policy
    if path is None:
        raise CliError("give --plan FILE or --policy FILE")
    text = _read(path)
    try:
        if args.policy or "state:" in text:
            policy = read_policy(text, task)
            if args.closure:
                policy.closure_mode = args.closure
            return policy
        return read_plan(text, task)
    except (PlanFormatError, PolicyFormatError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _validate(obj, task):
    if hasattr(obj, "entries"):
        return validate_policy(task, obj, obj.closure_mode)
    return validate_plan(task, obj)


def cmd_validate(args) -> int:
    task, _, _ = load_task(args.task)
    obj = _load_artifact(args, task)
    report = _validate(obj, task)
    print("\n".join(report.lines()))
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_render(args) -> int:
    task, display, _ = load_task(args.task, args.display)
    obj = _load_artifact(args, task)
    report = _validate(obj, task)
    if not report.ok:
        log.warning("input does not validate; rendering anyway")
    if args.dot:
        if not hasattr(obj, "entries"):
            from .planfond import policy_from_plan
            obj = policy_from_plan(obj, task)
        text = export_dot(execution_tree(obj, task), display, task.problem.name)
    else:
        text = render_proof(obj, task, display, unicode=args.unicode, raw_atoms=args.raw_atoms,
                            validated=report.ok).text()
    _emit(text, args.out)
    return EXIT_OK


def cmd_ground(args) -> int:
    task, _, _ = load_task(args.task)
    actions = applicable_actions(task.init, task)
    shown = actions if args.limit is None else actions[:args.limit]
    for a in shown:
        print(a)
    print(f"; applicable in the initial state: {len(actions)}", file=sys.stderr)
    return EXIT_OK


BENCH_FIELDS = ("problem", "solver", "result", "cost", "expected_cost", "valid",
                "expanded", "generated", "seconds")


def bench_rows(keys, budget, closure="by-contradiction"):
    for key in keys:
        entry = BUILTINS[key]
        problem, options, _, expected = builtin_problem(key)
        task = Task(generate_domain(options), problem)
        result = run_solver(task, entry.solver, closure, budget)
        row = {"problem": key, "solver": entry.solver, "expected_cost": expected or "",
               "expanded": result.stats.expanded, "generated": result.stats.generated,
               "seconds": round(result.stats.seconds, 3), "cost": "", "valid": ""}
        if isinstance(result, Solved):
            row["result"] = "solved"
            row["valid"] = _validate(result.solution, task).ok
            row["cost"] = len(result.solution) if entry.solver != "fond" else ""
        elif isinstance(result, ProvenUnsolvable):
            row["result"] = "unsolvable"
        else:
            row["result"] = "budget-exhausted"
        yield row


def bench_figure(rows, path) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    names = [r["problem"] for r in rows]
    seconds = [r["seconds"] for r in rows]
    colors = ["tab:green" if r["result"] == "solved" else "tab:red" for r in rows]
    fig, ax = plt.subplots(figsize=(7, 0.45 * len(rows) + 1.2))
    ax.barh(names, seconds, color=colors)
    ax.invert_yaxis()
    ax.set_xlabel("wall time (s)")
    for y, r in enumerate(rows):
        label = f"{r['result']}" + (f", cost {r['cost']}" if r["cost"] != "" else "")
        ax.text(r["seconds"], y, " " + label, va="center", fontsize=8)
    ax.set_xlim(0, max(seconds + [1]) * 1.6)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_bench(args) -> int:
    keys = args.problems or [k for k, b in BUILTINS.items() if b.desk_scale or args.all]
    for k in keys:
        if k not in BUILTINS:
            raise CliError(f"unknown builtin problem {k!r}")
    rows = []
    for row in bench_rows(keys, budget_from(args), args.closure or "by-contradiction"):
        rows.append(row)
        print(f"{row['problem']}: {row['result']} ({row['seconds']} s)", file=sys.stderr)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=BENCH_FIELDS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    _emit(buf.getvalue(), args.out)
    figure = args.figure or (str(Path(args.out).with_suffix(".png")) if args.out else None)
    if figure:
        bench_figure(rows, figure)
        print(figure)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ringforge", description="Prove ring-theory facts by planning.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def task_args(sp):
        sp.add_argument("task", nargs="+", metavar="TASK",
                        help="builtin problem key, or DOMAIN PROBLEM paths")

    def budget_args(sp):
        sp.add_argument("--budget-states", type=int, metavar="N")
        sp.add_argument("--budget-seconds", type=float, metavar="S")

    g = sub.add_parser("gen", help="write domain, problem and display map files")
    g.add_argument("key", nargs="?", help="builtin problem key (omit to write only a domain)")
    g.add_argument("--variant", choices=(FOD, FOND))
    g.add_argument("--allow-zero-prod", action="store_true")
    g.add_argument("--actions", help="comma-separated action subset (domain only)")
    g.add_argument("--out", metavar="DIR")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("solve", help="search for a plan or policy")
    task_args(s)
    s.add_argument("--solver", choices=("bfs", "gbfs", "fond"))
    s.add_argument("--closure", choices=CLOSURE_MODES, default="by-contradiction")
    s.add_argument("--display", metavar="PATH")
    s.add_argument("--out", metavar="PATH")
    budget_args(s)
    s.set_defaults(func=cmd_solve)

    for name, func, helptext in (("validate", cmd_validate, "check a plan or policy"),
                                 ("render", cmd_render, "render a proof or DOT graph")):
        v = sub.add_parser(name, help=helptext)
        task_args(v)
        v.add_argument("--plan", metavar="PATH")
        v.add_argument("--policy", metavar="PATH")
        v.add_argument("--closure", choices=CLOSURE_MODES)
        if name == "render":
            v.add_argument("--display", metavar="PATH")
            v.add_argument("--dot", action="store_true")
            v.add_argument("--unicode", action="store_true")
            v.add_argument("--raw-atoms", action="store_true")
            v.add_argument("--out", metavar="PATH")
        v.set_defaults(func=func)

    gr = sub.add_parser("ground", help="list the actions applicable in the initial state")
    task_args(gr)
    gr.add_argument("--limit", type=int)
    gr.set_defaults(func=cmd_ground)

    b = sub.add_parser("bench", help="run the builtin problems and tabulate the outcomes")
    b.add_argument("problems", nargs="*")
    b.add_argument("--all", action="store_true", help="include problems beyond desk scale")
    b.add_argument("--closure", choices=CLOSURE_MODES)
    b.add_argument("--out", metavar="CSV")
    b.add_argument("--figure", metavar="PNG")
    budget_args(b)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="ringforge: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"ringforge: error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
