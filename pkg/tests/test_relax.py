import math

import pytest
from hypothesis import given, strategies as st

from ringforge.pddl import CONTRADICTION, Task, parse_domain, parse_problem
from ringforge.planfod import ProvenUnsolvable, SearchBudget, Solved, solve_bfs
from ringforge.relax import INF, h_add, relaxed_costs
from conftest import task_for
from oracles import ground_h_add, random_task, reachable_states

PINNED = {
    "zero-sum": 2,
    "unique-additive-inverse": 7,
    "a-times-zero": 5,
    "neg-one-times-a": 7,
    "neg-one-times-a-undeclared": 5,
    "zero-diff-implies-equal": 4,
    "cancellation-law": 10,
}


@pytest.mark.parametrize("key, value", sorted(PINNED.items()))
def test_pinned_initial_values(key, value):
    task, _ = task_for(key)
    assert h_add(task.init, task) == value


@pytest.mark.parametrize("key", ["zero-sum", "unique-additive-inverse", "zero-diff-implies-equal"])
def test_lifted_matches_ground_oracle_on_builtins(key):
    task, _ = task_for(key)
    assert h_add(task.init, task) == ground_h_add(task.init, task)


def test_goal_state_scores_zero(uai):
    task, _ = uai
    assert h_add(task.init | {("equal", "b1", "b2")}, task) == 0


def test_unreachable_predicate_is_infinite():
    d = parse_domain("(define (domain d) (:predicates (p ?x) (q ?x))"
                     " (:action a :parameters (?x) :precondition (p ?x) :effect (and (p ?x))))")
    p = parse_problem("(define (problem p) (:domain d) (:objects o) (:init (p o)) (:goal (and (q o))))", d)
    task = Task(d, p)
    assert h_add(task.init, task) == INF
    assert isinstance(solve_bfs(task), ProvenUnsolvable)


def test_negative_goals_contribute_nothing():
    task, _ = task_for("cancellation-law")
    with_neg = h_add(task.init, task)
    costs = relaxed_costs(task.init, task, task.positive_goal)
    assert with_neg == sum(costs.values())


def test_any_mode_returns_the_cheapest_target():
    task, _ = task_for("cancellation-law")
    targets = [("equal", "b", "c"), CONTRADICTION]
    every = relaxed_costs(task.init, task, targets)
    first = relaxed_costs(task.init, task, targets, mode="any")
    best = min(every.values())
    assert min(first.values()) == best
    assert all(first[t] in (every[t], INF) for t in targets)


def test_exclusion_removes_supporters():
    task, _ = task_for("cancellation-law")
    blocked = relaxed_costs(task.init, task, [CONTRADICTION],
                            exclude=lambda schema, args: schema.name in ("set-zero", "integraldom-axiom"))
    assert blocked[CONTRADICTION] == INF
    assert relaxed_costs(task.init, task, [CONTRADICTION])[CONTRADICTION] < INF


@given(st.integers(0, 10**6), st.booleans())
def test_lifted_matches_ground_oracle(seed, fond):
    task = random_task(seed, fond)
    states, _ = reachable_states(task, 40)
    for state in sorted(states, key=sorted)[:10]:
        assert h_add(state, task) == ground_h_add(state, task)


@given(st.integers(0, 10**6))
def test_infinite_heuristic_means_no_plan(seed):
    task = random_task(seed, max_objects=3)
    if h_add(task.init, task) == INF:
        result = solve_bfs(task, SearchBudget(20_000, 30))
        assert isinstance(result, ProvenUnsolvable)
