"""Independent plan and policy checker.

Deliberately shares no code with the solvers' successor generator: effects
are evaluated by walking the schema's effect tree under a parameter binding,
so a disagreement between the two is a bug in one of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..pddl.model import CONTRADICTION, Conjunction, Literal, OneOf, When

INAPPLICABLE = "inapplicable"
GOAL_UNSATISFIED = "goal-unsatisfied"
DEAD_END = "dead-end"
CYCLE = "cycle"
CONTRADICTION_DELETED = "contradiction-deleted"


@dataclass
class ValidationReport:
    failures: list = field(default_factory=list)  # (where, reason)
    statistics: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, where, reason):
        self.failures.append((where, reason))

    def lines(self) -> list[str]:
        out = [f"valid={'yes' if self.ok else 'no'}"]
        for k, v in self.statistics.items():
            if isinstance(v, dict):
                v = " ".join(f"{a}:{b}" for a, b in v.items())
            out.append(f"{k}={v}")
        out += [f"failure: {where}: {reason}" for where, reason in self.failures]
        return out


def _ground(atom, binding):
    return (atom[0],) + tuple(binding.get(t, t) for t in atom[1:])


def _holds(literals, state, binding) -> bool:
    for lit in literals:
        if (_ground(lit.atom, binding) in state) == lit.negated:
            return False
    return True


def _collect(effect, state, binding, choice, adds, dels):
    """Accumulate the changes of one effect tree node; ``choice`` picks the oneof branch."""
    if isinstance(effect, Literal):
        (dels if effect.negated else adds).add(_ground(effect.atom, binding))
    elif isinstance(effect, When):
        if _holds(effect.condition, state, binding):
            for lit in effect.body:
                _collect(lit, state, binding, choice, adds, dels)
    elif isinstance(effect, OneOf):
        _collect(effect.branches[choice], state, binding, choice, adds, dels)
    elif isinstance(effect, Conjunction):
        for item in effect.items:
            _collect(item, state, binding, choice, adds, dels)
    else:
        raise TypeError(f"unexpected effect node {effect!r}")


def branch_count(schema) -> int:
    for item in schema.effect.items:
        if isinstance(item, OneOf):
            return len(item.branches)
    return 1


def simulate(state, schema, args, choice=0):
    """(applicable, successor) for one ground step; successor is None if inapplicable."""
    binding = dict(zip(schema.params, args))
    if not _holds(schema.precondition, state, binding):
        return False, None
    adds, dels = set(), set()
    _collect(schema.effect, state, binding, choice, adds, dels)
    return True, frozenset((set(state) - dels) | adds)


def goal_holds(task, state) -> bool:
    return all((lit.atom in state) != lit.negated for lit in task.problem.goal)


def validate_plan(task, plan) -> ValidationReport:
    report = ValidationReport()
    track = "contradiction" in task.domain.predicates
    state = frozenset(task.problem.init)
    steps = getattr(plan, "steps", plan)
    for i, step in enumerate(steps, start=1):
        schema = task.domain.action(step.name)
        if branch_count(schema) != 1:
            report.fail(f"step {i} {step}", "non-deterministic action in a plan")
            break
        ok, nxt = simulate(state, schema, step.args)
        if not ok:
            report.fail(f"step {i} {step}", INAPPLICABLE)
            break
        if track and CONTRADICTION in state and CONTRADICTION not in nxt:
            report.fail(f"step {i} {step}", CONTRADICTION_DELETED)
        state = nxt
    else:
        if not goal_holds(task, state):
            report.fail(f"after step {len(steps)}", GOAL_UNSATISFIED)
    report.statistics = {"steps": len(steps)}
    return report


def validate_policy(task, policy, closure_mode=None) -> ValidationReport:
    """Unfold the policy from the initial state and check every leaf.

    Leaves are goal states, and in ``by-contradiction`` mode states holding
    ``(contradiction)``. Any other unmapped state is a dead end.
    """
    mode = closure_mode or policy.closure_mode
    report = ValidationReport()
    census = {"GoalReached": 0, "ClosedByContradiction": 0, "DeadEnd": 0, "Cycle": 0}
    counts = {"nodes": 0, "depth": 0}

    def where(path):
        return "node " + ("/".join(path) if path else "root")

    def visit(state, path, on_path):
        counts["nodes"] += 1
        counts["depth"] = max(counts["depth"], len(path))
        if goal_holds(task, state):
            census["GoalReached"] += 1
            return
        if CONTRADICTION in state and mode == "by-contradiction":
            census["ClosedByContradiction"] += 1
            return
        if state in on_path:
            census["Cycle"] += 1
            report.fail(where(path), CYCLE)
            return
        action = policy.entries.get(state)
        if action is None:
            if CONTRADICTION in state:
                census["ClosedByContradiction"] += 1
                report.fail(where(path), GOAL_UNSATISFIED)
            else:
                census["DeadEnd"] += 1
                report.fail(where(path), DEAD_END)
            return
        schema = task.domain.action(action.name)
        n = branch_count(schema)
        on_path.add(state)
        for k in range(n):
            ok, nxt = simulate(state, schema, action.args, k)
            label = path + [f"{action}#{k}"]
            if not ok:
                report.fail(where(label), INAPPLICABLE)
                break
            if CONTRADICTION in state and CONTRADICTION not in nxt:
                report.fail(where(label), CONTRADICTION_DELETED)
            visit(nxt, label, on_path)
        on_path.discard(state)

    visit(frozenset(task.problem.init), [], set())
    report.statistics = {**counts, "census": {k: v for k, v in census.items() if v}}
    return report
