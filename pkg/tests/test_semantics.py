import itertools
import random

import pytest
from hypothesis import given, strategies as st

from ringforge.pddl import (CONTRADICTION, GroundAction, InapplicableAction, Task, applicable_actions,
                            apply, outcome_count, parse_domain, parse_problem)
from ringforge.pddl.model import effect_changes
from ringforge.ringdomain import FOD, FOND, DomainOptions, generate_domain
from conftest import task_for
from oracles import brute_applicable, brute_apply, random_task, reachable_states


def ground(task, name, *args):
    return GroundAction(task.domain.action(name), args)


def test_free_parameter_enumerates_universe():
    d = generate_domain(DomainOptions(FOD, False, ("set-equal-to-self",)))
    p = parse_problem("(define (problem p) (:domain commutative-ring) (:objects z a)"
                      " (:init (iszero z)) (:goal (and)))", d)
    acts = applicable_actions(Task(d, p).init, Task(d, p))
    assert [str(a) for a in acts] == ["(set-equal-to-self a)", "(set-equal-to-self z)"]


def test_commutative_addition_not_applicable_at_init(uai):
    task, _ = uai
    schema = task.domain.action("commutative-addition-axiom")
    lazy = {a.args for a in applicable_actions(task.init, task) if a.name == schema.name}
    objects = sorted(task.objects)
    brute = set()
    for args in itertools.product(objects, repeat=4):
        if GroundAction(schema, args).is_applicable(task.init):
            brute.add(args)
    assert lazy == brute == set()
    after = apply(task.init, ground(task, "swap-sum", "zero", "a", "b1"))
    found = {a.args for a in applicable_actions(after, task) if a.name == schema.name}
    assert ("zero", "zero", "a", "b1") in found


def test_integraldom_needs_product_and_zero():
    task, _ = task_for("cancellation-law")
    names = {a.name for a in applicable_actions(task.init, task)}
    assert "integraldom-axiom" not in names
    state = task.init | {("iszero", "abminc")}
    acts = [a for a in applicable_actions(state, task) if a.name == "integraldom-axiom"]
    assert [a.args for a in acts] == [("abminc", "a", "bminc")]


def test_apply_adds_reflexive_equality(uai):
    task, _ = uai
    step = ground(task, "set-equal-to-self", "b1")
    after = apply(task.init, step)
    assert after == task.init | {("equal", "b1", "b1")}
    assert apply(after, step) == after


def test_integraldom_first_branch_closes_by_contradiction():
    task, _ = task_for("cancellation-law")
    state = task.init | {("iszero", "abminc")}
    step = ground(task, "integraldom-axiom", "abminc", "a", "bminc")
    after = apply(state, step, 0)
    assert after - state == {("iszero", "a"), ("iszero", "bminc"), CONTRADICTION}
    third = apply(state, step, 2)
    assert CONTRADICTION not in third and ("iszero", "bminc") in third


def test_outcome_counts():
    fond = generate_domain(DomainOptions(FOND))
    assert outcome_count(fond.action("integraldom-axiom")) == 3
    assert outcome_count(fond.action("commutative-addition-axiom")) == 1
    assert all(outcome_count(a) == 1 for a in generate_domain(DomainOptions(FOD)).actions)


def test_apply_errors(uai):
    task, _ = uai
    with pytest.raises(InapplicableAction):
        apply(task.init, ground(task, "swap-equal", "a", "b1"))
    with pytest.raises(IndexError):
        apply(task.init, ground(task, "set-equal-to-self", "a"), 1)


MINI = parse_domain("""(define (domain m) (:predicates (p) (q) (r))
  (:action chain :parameters () :precondition () :effect (and (p) (when (p) (q))))
  (:action both :parameters () :precondition () :effect (and (r) (not (r)) (not (p))))
  (:action guarded :parameters () :precondition (and (not (q))) :effect (and (q))))""")


def _mini(init):
    p = parse_problem(f"(define (problem x) (:domain m) (:objects) (:init {init}) (:goal (and)))", MINI)
    return Task(MINI, p)


def test_conditions_read_the_pre_state():
    task = _mini("")
    after = apply(task.init, GroundAction(MINI.action("chain"), ()))
    assert after == {("p",)}
    assert apply(after, GroundAction(MINI.action("chain"), ())) == {("p",), ("q",)}


def test_add_wins_over_delete():
    task = _mini("(p)")
    after = apply(task.init, GroundAction(MINI.action("both"), ()))
    assert after == {("r",)}


def test_negative_precondition():
    assert [a.name for a in applicable_actions(_mini("").init, _mini(""))] == ["both", "chain", "guarded"]
    assert "guarded" not in [a.name for a in applicable_actions(_mini("(q)").init, _mini("(q)"))]


@given(st.integers(0, 10**6), st.booleans())
def test_lazy_join_matches_brute_force(seed, fond):
    task = random_task(seed, fond)
    states, _ = reachable_states(task, 60)
    for state in sorted(states, key=sorted)[:15]:
        lazy = [(a.name, a.args) for a in applicable_actions(state, task)]
        assert lazy == brute_applicable(state, task)


@given(st.integers(0, 10**6))
def test_frame_property(seed):
    task = random_task(seed, fond=True)
    rng = random.Random(seed)
    state = task.init
    for _ in range(6):
        acts = applicable_actions(state, task)
        if not acts:
            break
        action = rng.choice(acts)
        k = rng.randrange(outcome_count(action))
        nxt = apply(state, action, k)
        mentioned = {l.atom for l in effect_changes(action.effect)}
        assert nxt ^ state <= mentioned
        assert nxt == brute_apply(state, action.schema, action.args, k)
        state = nxt


def test_applicable_actions_is_deterministic():
    task, _ = task_for("neg-one-times-a")
    first = applicable_actions(task.init, task)
    assert first == applicable_actions(task.init, task)
    assert first == sorted(first)


OPTIONS = [DomainOptions(v, z, s) for v in (FOD, FOND) for z in (False, True) for s in (None,)]


@pytest.mark.parametrize("options", OPTIONS)
def test_contradiction_never_deleted_statically(options):
    for schema in generate_domain(options).actions:
        for lit in effect_changes(schema.effect):
            assert not (lit.negated and lit.atom == CONTRADICTION), schema.name


@given(st.integers(0, 10**6))
def test_contradiction_persists_on_random_walks(seed):
    task, _ = task_for("cancellation-law")
    rng = random.Random(seed)
    state = task.init | {("iszero", "abminc"), ("equal", "a", "z")}
    if seed % 2:
        state |= {CONTRADICTION}
    for _ in range(8):
        action = rng.choice(applicable_actions(state, task))
        nxt = apply(state, action, rng.randrange(outcome_count(action)))
        if CONTRADICTION in state:
            assert CONTRADICTION in nxt
        state = nxt
