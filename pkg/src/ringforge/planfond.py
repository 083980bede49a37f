"""Strong acyclic policies for tasks with ``oneof`` effects.

Depth-first AND-OR search: a state is solved when some action has every
outcome solved. In ``by-contradiction`` mode a state holding
``(contradiction)`` is a closed case and counts as solved.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass, field
from typing import Optional

from .pddl import CONTRADICTION, GroundAction, Task, applicable_actions, apply
from .pddl.model import format_state
from .planfod import BudgetExhausted, ProvenUnsolvable, SearchBudget, Solved, Statistics
from .relax import INF, h_add, relaxed_costs

STRICT = "strict"
BY_CONTRADICTION = "by-contradiction"
CLOSURE_MODES = (STRICT, BY_CONTRADICTION)

GOAL_REACHED = "GoalReached"
CLOSED = "ClosedByContradiction"
DEAD_END = "DeadEnd"
CYCLE = "Cycle"


@dataclass
class Policy:
    entries: dict  # state -> GroundAction
    init_state: frozenset
    closure_mode: str = BY_CONTRADICTION

    def __len__(self):
        return len(self.entries)

    def get(self, state) -> Optional[GroundAction]:
        return self.entries.get(state)

    def without(self, state) -> "Policy":
        entries = dict(self.entries)
        del entries[state]
        return Policy(entries, self.init_state, self.closure_mode)


@dataclass
class TreeNode:
    state: frozenset
    action: Optional[GroundAction] = None
    children: list = field(default_factory=list)  # (outcome index, TreeNode)
    tag: Optional[str] = None  # set on leaves

    @property
    def is_leaf(self) -> bool:
        return self.tag is not None


@dataclass
class ExecutionTree:
    root: TreeNode

    def nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(c for _, c in reversed(node.children))

    def leaves(self):
        return [n for n in self.nodes() if n.is_leaf]

    def census(self) -> dict:
        out = {GOAL_REACHED: 0, CLOSED: 0, DEAD_END: 0, CYCLE: 0}
        for leaf in self.leaves():
            out[leaf.tag] += 1
        return {k: v for k, v in out.items() if v or k in (GOAL_REACHED, CLOSED)}

    @property
    def size(self) -> int:
        return sum(1 for _ in self.nodes())

    def branch_nodes(self):
        return [n for n in self.nodes() if len(n.children) > 1]

    def depth(self) -> int:
        def d(node):
            return 0 if not node.children else 1 + max(d(c) for _, c in node.children)
        return d(self.root)


def is_closed_leaf(state, task: Task, closure_mode: str) -> bool:
    return task.is_goal(state) or (closure_mode == BY_CONTRADICTION and CONTRADICTION in state)


def execution_tree(policy: Policy, task: Task) -> ExecutionTree:
    """Unfold every outcome of every policy action from the initial state."""

    def build(state, path):
        node = TreeNode(state)
        if task.is_goal(state):
            node.tag = GOAL_REACHED
        elif CONTRADICTION in state:
            node.tag = CLOSED
        elif state in path:
            node.tag = CYCLE
        elif state not in policy.entries:
            node.tag = DEAD_END
        else:
            action = policy.entries[state]
            node.action = action
            if not action.is_applicable(state):
                node.tag = DEAD_END
                return node
            path = path | {state}
            for i in range(len(action.outcomes)):
                node.children.append((i, build(apply(state, action, i, check=False), path)))
        return node

    return ExecutionTree(build(policy.init_state, frozenset()))


class _OutOfBudget(Exception):
    pass


class _Solver:
    def __init__(self, task: Task, mode: str, budget: SearchBudget):
        if mode not in CLOSURE_MODES:
            raise ValueError(f"unknown closure mode {mode!r}")
        self.task = task
        self.mode = mode
        self.budget = budget
        self.stats = Statistics(generated=1)
        self.start = time.perf_counter()
        self.entries: dict = {}
        self.solved: set = set()
        self.failed: set = set()
        # Negative goal atoms that no action deletes: once present, the goal is lost.
        self.forbidden = tuple(a for a in task.negative_goal
                               if a[0] in task.undeletable_predicates)
        self.has_contradiction = "contradiction" in task.domain.predicates
        self._exclude = self._make_exclude() if mode == STRICT and self.forbidden else None

    def _make_exclude(self):
        """Ground actions with an outcome that certainly adds a forbidden atom.

        Only conditions over static predicates are decided, against the
        initial state; anything else is kept (the relaxation stays an
        over-approximation).
        """
        task = self.task
        static = task.static_predicates
        init = task.init
        forbidden_preds = {a[0] for a in self.forbidden}
        risky = {}
        for schema in task.domain.actions:
            checks = []
            for o in schema.outcomes:
                if any(a[0] in forbidden_preds for a in o.adds):
                    checks.append(())
                for w in o.whens:
                    if any(l.atom[0] in forbidden_preds and not l.negated for l in w.body) \
                            and all(l.atom[0] in static for l in w.condition):
                        checks.append(w.condition)
            if checks:
                risky[schema.name] = checks
        forbidden = set(self.forbidden)

        def exclude(schema, args):
            conds = risky.get(schema.name)
            if not conds:
                return False
            b = dict(zip(schema.params, args))
            for cond in conds:
                if not cond:
                    for o in schema.outcomes:
                        for a in o.adds:
                            if (a[0],) + tuple(b.get(t, t) for t in a[1:]) in forbidden:
                                return True
                    continue
                if all((((l.atom[0],) + tuple(b.get(t, t) for t in l.atom[1:])) in init)
                       != l.negated for l in cond):
                    return True
            return False

        return exclude

    def _check_budget(self):
        if (self.stats.expanded >= self.budget.max_expanded_states
                or time.perf_counter() - self.start >= self.budget.max_wall_seconds):
            raise _OutOfBudget

    def leaf(self, state) -> bool:
        return is_closed_leaf(state, self.task, self.mode)

    def lost(self, state) -> bool:
        return any(a in state for a in self.forbidden) and not self.leaf(state)

    def dead(self, state) -> bool:
        """Sound dead-end test on the all-outcomes delete relaxation."""
        if self.lost(state):
            return True
        if h_add(state, self.task, self._exclude) < INF:
            return False
        if self.mode == BY_CONTRADICTION and self.has_contradiction:
            c = relaxed_costs(state, self.task, [CONTRADICTION], mode="any")
            return c[CONTRADICTION] == INF
        return True

    def score(self, state) -> float:
        if self.leaf(state):
            return 0
        if self.lost(state):
            return INF
        return h_add(state, self.task, self._exclude)

    def solve(self, state, path: dict) -> tuple[bool, float]:
        """(solved, shallowest depth of an on-path state the failure depends on).

        ``path`` maps the states on the current path to their depth. A
        failure whose cycle pruning only involved the state itself or its
        descendants does not depend on how the state was reached, so it is
        cached like any other failure.
        """
        if self.leaf(state) or state in self.solved:
            return True, INF
        if state in self.failed:
            return False, INF
        self._check_budget()
        self.stats.expanded += 1
        if self.dead(state):
            self.failed.add(state)
            return False, INF
        depth = len(path)
        path[state] = depth
        low = INF
        candidates = []
        for action in applicable_actions(state, self.task):
            outs = [apply(state, action, i, check=False) for i in range(len(action.outcomes))]
            self.stats.generated += len(outs)
            hits = [path[o] for o in outs if o in path]
            if hits:
                low = min(low, *hits)
                continue
            if time.perf_counter() - self.start >= self.budget.max_wall_seconds:
                raise _OutOfBudget
            value = max(self.score(o) for o in outs)
            if value == INF:
                continue
            candidates.append((value, action.key(), action, outs))
        candidates.sort(key=lambda c: (c[0], c[1]))
        self.stats.peak_frontier = max(self.stats.peak_frontier, len(candidates))
        for _, _, action, outs in candidates:
            ok = True
            for o in outs:
                solved, child_low = self.solve(o, path)
                low = min(low, child_low)
                if not solved:
                    ok = False
                    break
            if ok:
                del path[state]
                self.entries[state] = action
                self.solved.add(state)
                return True, INF
        del path[state]
        if low >= depth:
            self.failed.add(state)
            return False, INF
        return False, low


def _reachable(entries: dict, init, task: Task, mode: str) -> dict:
    keep = {}
    stack = [init]
    while stack:
        s = stack.pop()
        if s in keep or is_closed_leaf(s, task, mode) or s not in entries:
            continue
        keep[s] = entries[s]
        a = entries[s]
        stack.extend(apply(s, a, i, check=False) for i in range(len(a.outcomes)))
    return keep


def solve_strong(task: Task, closure_mode: str = BY_CONTRADICTION,
                 budget: SearchBudget = SearchBudget()):
    """Search for a strong acyclic policy; returns Solved(policy), ProvenUnsolvable
    or BudgetExhausted."""
    solver = _Solver(task, closure_mode, budget)
    limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(limit, 20000))
    try:
        ok, _ = solver.solve(task.init, {})
    except _OutOfBudget:
        solver.stats.seconds = time.perf_counter() - solver.start
        return BudgetExhausted(solver.stats)
    finally:
        sys.setrecursionlimit(limit)
    solver.stats.seconds = time.perf_counter() - solver.start
    if not ok:
        return ProvenUnsolvable(solver.stats)
    entries = _reachable(solver.entries, task.init, task, closure_mode)
    return Solved(Policy(entries, task.init, closure_mode), solver.stats)


def policy_order(policy: Policy, task: Task) -> list:
    """Policy states in breadth-first order from the initial state."""
    order, seen, frontier = [], set(), [policy.init_state]
    while frontier:
        nxt = []
        for s in frontier:
            if s in seen or s not in policy.entries:
                continue
            seen.add(s)
            order.append(s)
            a = policy.entries[s]
            nxt.extend(apply(s, a, i, check=False) for i in range(len(a.outcomes)))
        frontier = nxt
    order.extend(sorted((s for s in policy.entries if s not in seen), key=format_state))
    return order


def write_policy(policy: Policy, task: Task) -> str:
    out = [f"; policy closure={policy.closure_mode} entries={len(policy)}"]
    for state in policy_order(policy, task):
        out.append(f"state: {format_state(state)}")
        out.append(f"action: {policy.entries[state]}")
        out.append("")
    return "\n".join(out)


class PolicyFormatError(ValueError):
    pass


def _parse_atoms(text: str) -> frozenset:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise PolicyFormatError("state must be written as {(atom ...) ...}")
    atoms = set()
    for chunk in text[1:-1].split(")"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if not chunk.startswith("("):
            raise PolicyFormatError(f"bad atom near {chunk!r}")
        atoms.add(tuple(sys.intern(t) for t in chunk[1:].lower().split()))
    return frozenset(atoms)


def read_policy(text: str, task: Task) -> Policy:
    mode = BY_CONTRADICTION
    entries = {}
    state = None
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith(";"):
            if "closure=" in line:
                mode = line.split("closure=", 1)[1].split()[0]
            continue
        if not line:
            continue
        if line.startswith("state:"):
            state = _parse_atoms(line[len("state:"):])
        elif line.startswith("action:"):
            if state is None:
                raise PolicyFormatError(f"line {n}: action without a state")
            body = line[len("action:"):].strip()
            if not (body.startswith("(") and body.endswith(")")):
                raise PolicyFormatError(f"line {n}: expected (name arg ...)")
            name, *args = body[1:-1].lower().split()
            try:
                schema = task.domain.action(name)
            except KeyError:
                raise PolicyFormatError(f"line {n}: unknown action {name!r}") from None
            if len(args) != len(schema.params):
                raise PolicyFormatError(f"line {n}: wrong arity for {name}")
            entries[state] = GroundAction(schema, tuple(args))
            state = None
        else:
            raise PolicyFormatError(f"line {n}: unexpected {line!r}")
    if mode not in CLOSURE_MODES:
        raise PolicyFormatError(f"unknown closure mode {mode!r}")
    return Policy(entries, task.init, mode)


def policy_from_plan(plan, task: Task) -> Policy:
    """A deterministic plan in map form."""
    entries, state = {}, task.init
    for a in plan.steps:
        entries[state] = a
        state = apply(state, a, 0)
    return Policy(entries, task.init, STRICT)
