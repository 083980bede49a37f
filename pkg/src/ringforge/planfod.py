"""Deterministic solvers: optimal breadth-first search and greedy best-first
search on the additive delete-relaxation heuristic."""

from __future__ import annotations

import heapq
import itertools
import time
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .pddl import GroundAction, Task, apply, applicable_actions
from .relax import INF, h_add

__all__ = [
    "BudgetExhausted", "Plan", "ProvenUnsolvable", "SearchBudget", "Solved",
    "Statistics", "h_add", "read_plan", "solve_bfs", "solve_gbfs", "write_plan",
]


class NondeterministicTask(ValueError):
    pass


@dataclass(frozen=True)
class SearchBudget:
    max_expanded_states: int = 1_000_000
    max_wall_seconds: float = 120.0

    def __post_init__(self):
        if self.max_expanded_states <= 0 or self.max_wall_seconds <= 0:
            raise ValueError("budget limits must be positive")


@dataclass
class Statistics:
    expanded: int = 0
    generated: int = 0
    duplicates: int = 0
    peak_frontier: int = 0
    seconds: float = 0.0

    def lines(self) -> list[str]:
        return [f"{k}={v if k != 'seconds' else round(v, 3)}" for k, v in vars(self).items()]


@dataclass(frozen=True)
class Plan:
    steps: tuple[GroundAction, ...]

    @property
    def cost(self) -> int:
        return len(self.steps)

    def __len__(self):
        return len(self.steps)

    def text(self) -> str:
        return write_plan(self)


@dataclass
class Solved:
    """A plan (deterministic solvers) or a policy (the FOND solver)."""

    solution: object
    stats: Statistics = field(default_factory=Statistics)

    @property
    def plan(self):
        return self.solution

    @property
    def policy(self):
        return self.solution


@dataclass
class ProvenUnsolvable:
    stats: Statistics = field(default_factory=Statistics)


@dataclass
class BudgetExhausted:
    stats: Statistics = field(default_factory=Statistics)


def write_plan(plan: Plan) -> str:
    lines = [str(a) for a in plan.steps]
    lines.append(f"; cost = {plan.cost} (unit cost)")
    return "\n".join(lines) + "\n"


class PlanFormatError(ValueError):
    pass


def read_plan(text: str, task: Task) -> Plan:
    """Parse ``(name arg ...)`` lines; ``;`` starts a comment."""
    steps = []
    for n, raw in enumerate(text.splitlines(), start=1):
        line = raw.split(";", 1)[0].strip().lower()
        if not line:
            continue
        if not (line.startswith("(") and line.endswith(")")):
            raise PlanFormatError(f"line {n}: expected '(action arg ...)'")
        name, *args = line[1:-1].split()
        try:
            schema = task.domain.action(name)
        except KeyError:
            raise PlanFormatError(f"line {n}: unknown action {name!r}") from None
        if len(args) != len(schema.params):
            raise PlanFormatError(f"line {n}: {name} takes {len(schema.params)} arguments")
        for a in args:
            if a not in task.objects:
                raise PlanFormatError(f"line {n}: unknown object {a!r}")
        steps.append(GroundAction(schema, tuple(args)))
    return Plan(tuple(steps))


def _require_deterministic(task: Task):
    if not task.deterministic:
        raise NondeterministicTask("task has oneof effects; use the FOND solver")


def _extract(parents, state) -> Plan:
    steps = []
    while parents[state] is not None:
        state, action = parents[state]
        steps.append(action)
    return Plan(tuple(reversed(steps)))


def _over(budget: SearchBudget, stats: Statistics, start: float) -> bool:
    return (stats.expanded >= budget.max_expanded_states
            or time.perf_counter() - start >= budget.max_wall_seconds)


def solve_bfs(task: Task, budget: SearchBudget = SearchBudget()):
    """Breadth-first search with duplicate detection; plans are shortest."""
    _require_deterministic(task)
    start = time.perf_counter()
    stats = Statistics(generated=1)  # the initial state counts as generated
    init = task.init
    parents = {init: None}
    if task.is_goal(init):
        stats.seconds = time.perf_counter() - start
        return Solved(Plan(()), stats)
    queue = deque([init])
    while queue:
        if _over(budget, stats, start):
            stats.seconds = time.perf_counter() - start
            return BudgetExhausted(stats)
        state = queue.popleft()
        stats.expanded += 1
        for action in applicable_actions(state, task):
            succ = apply(state, action, 0, check=False)
            stats.generated += 1
            if succ in parents:
                stats.duplicates += 1
                continue
            parents[succ] = (state, action)
            if task.is_goal(succ):
                stats.seconds = time.perf_counter() - start
                return Solved(_extract(parents, succ), stats)
            queue.append(succ)
        stats.peak_frontier = max(stats.peak_frontier, len(queue))
    stats.seconds = time.perf_counter() - start
    return ProvenUnsolvable(stats)


def solve_gbfs(task: Task, budget: SearchBudget = SearchBudget()):
    """Greedy best-first search on h_add, FIFO among equal values.

    States with infinite heuristic are dead ends (the relaxation is an
    over-approximation) and are dropped, so an emptied open list proves the
    task unsolvable.
    """
    _require_deterministic(task)
    start = time.perf_counter()
    stats = Statistics(generated=1)  # the initial state counts as generated
    init = task.init
    parents = {init: None}
    if task.is_goal(init):
        stats.seconds = time.perf_counter() - start
        return Solved(Plan(()), stats)
    h0 = h_add(init, task)
    if h0 == INF:
        stats.seconds = time.perf_counter() - start
        return ProvenUnsolvable(stats)
    tie = itertools.count()
    heap = [(h0, next(tie), init)]
    while heap:
        if _over(budget, stats, start):
            stats.seconds = time.perf_counter() - start
            return BudgetExhausted(stats)
        _, _, state = heapq.heappop(heap)
        stats.expanded += 1
        for action in applicable_actions(state, task):
            succ = apply(state, action, 0, check=False)
            stats.generated += 1
            if succ in parents:
                stats.duplicates += 1
                continue
            parents[succ] = (state, action)
            if task.is_goal(succ):
                stats.seconds = time.perf_counter() - start
                return Solved(_extract(parents, succ), stats)
            if time.perf_counter() - start >= budget.max_wall_seconds:
                stats.seconds = time.perf_counter() - start
                return BudgetExhausted(stats)
            h = h_add(succ, task)
            if h == INF:
                continue
            heapq.heappush(heap, (h, next(tie), succ))
        stats.peak_frontier = max(stats.peak_frontier, len(heap))
    stats.seconds = time.perf_counter() - start
    return ProvenUnsolvable(stats)
