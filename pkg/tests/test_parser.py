import random

import pytest
from hypothesis import given, strategies as st

from ringforge.pddl import (Literal, OneOf, PDDLSemanticError, PDDLSyntaxError, Task, When,
                            parse_domain, parse_problem, write_domain, write_problem)
from ringforge.ringdomain import FOD, FOND, KNOWN_ACTIONS, DomainOptions, builtin_problem, generate_domain
from oracles import random_domain_text, random_problem_text

COMMUTATIVE = """
(:action commutative-addition-axiom
    :parameters (?aPLUSb ?bPLUSa ?a ?b)
    :precondition (and
        (issum ?aPLUSb ?a ?b)
        (issum ?bPLUSa ?b ?a))
    :effect (and (equal ?aPLUSb ?bPLUSa)))
"""

INTEGRALDOM = """
(:action integraldom-axiom
    :parameters (?ab ?a ?b)
    :precondition (and
        (isprod ?ab ?a ?b)
        (iszero ?ab))
    :effect (oneof
        (and
            (when (assume-nonzero ?a) (contradiction))
            (iszero ?a)
            (when (assume-nonzero ?b) (contradiction))
            (iszero ?b))
        (and
            (when (assume-nonzero ?a) (contradiction))
            (iszero ?a)
            (when (assume-zero ?b) (contradiction))
            (not (iszero ?b)))
        (and
            (when (assume-zero ?a) (contradiction))
            (not (iszero ?a))
            (when (assume-nonzero ?b) (contradiction))
            (iszero ?b))))
"""


def domain(*actions, predicates="(equal ?a ?b) (issum ?a ?b ?c)"):
    return parse_domain(f"(define (domain d) (:predicates {predicates}) {' '.join(actions)})")


def test_commutative_addition_block():
    schema = domain(COMMUTATIVE).action("commutative-addition-axiom")
    assert schema.params == ("?aplusb", "?bplusa", "?a", "?b")
    assert len(schema.precondition) == 2
    assert schema.outcomes[0].adds == (("equal", "?aplusb", "?bplusa"),)
    assert schema.deterministic


def test_empty_domain():
    d = parse_domain("(define (domain empty) (:predicates) )")
    assert d.name == "empty" and d.actions == () and d.predicates == {}


def test_integraldom_block_infers_predicates():
    d = domain(INTEGRALDOM, predicates="(isprod ?ab ?a ?b) (iszero ?z)")
    schema = d.action("integraldom-axiom")
    assert len(schema.params) == 3
    (oneof,) = schema.effect.items
    assert isinstance(oneof, OneOf) and len(oneof.branches) == 3
    for branch in oneof.branches:
        assert sum(isinstance(i, When) for i in branch.items) == 2
    assert d.arity("assume-nonzero") == 1 and d.arity("contradiction") == 0


def test_requirements_recorded():
    d = parse_domain("(define (domain d) (:requirements :strips :typing) (:predicates (p)))")
    assert ":strips" in d.requirements


@pytest.mark.parametrize("body, message", [
    ("(:action a :parameters (?x) :precondition (p ?x) :effect (and (p ?y)))", "undeclared variable"),
    ("(:action a :parameters (?x) :precondition (p ?y) :effect (and (p ?x)))", "undeclared variable"),
    ("(:action a :parameters (?x) :precondition (p ?x) :effect (and (p ?x ?x)))", "arity conflict"),
    ("(:action a :parameters (?x ?x) :effect (p ?x))", "duplicate parameter"),
])
def test_semantic_errors(body, message):
    with pytest.raises(PDDLSemanticError, match=message):
        parse_domain(f"(define (domain d) (:predicates (p ?a)) {body})")


@pytest.mark.parametrize("effect, message", [
    ("(oneof (and (p ?x)) (and (oneof (p ?x) (q))))", "nested oneof"),
    ("(and (oneof (p ?x) (q)) (oneof (p ?x) (q)))", "more than one oneof"),
    ("(when (q) (oneof (p ?x) (q)))", "inside a conditional body"),
    ("(when (q) (when (q) (p ?x)))", "inside a conditional body"),
    ("(forall (?y) (p ?y))", "not supported"),
])
def test_effect_structure_errors(effect, message):
    with pytest.raises(PDDLSyntaxError, match=message):
        parse_domain(f"(define (domain d) (:predicates (p ?a) (q)) "
                     f"(:action a :parameters (?x) :effect {effect}))")


def test_syntax_error_position():
    with pytest.raises(PDDLSyntaxError) as info:
        parse_domain("(define (domain d)\n  (:predicates (p ?a))\n  (:action a :parameters (?x - obj)))")
    assert info.value.line == 3


def test_typed_parameters_rejected():
    with pytest.raises(PDDLSyntaxError, match="typed"):
        parse_domain("(define (domain d) (:action a :parameters (?x - obj) :effect (p ?x)))")


UAI_DOMAIN = domain(COMMUTATIVE, predicates="(equal ?a ?b) (issum ?a ?b ?c) (iszero ?z)")


def test_problem_init_and_goal():
    p = parse_problem("""(define (problem uai) (:domain d) (:objects a b1 b2 zero)
        (:init (iszero zero) (issum zero a b1) (issum zero a b2))
        (:goal (and (equal b1 b2))))""", UAI_DOMAIN)
    assert p.objects == ("a", "b1", "b2", "zero")
    assert p.init == {("iszero", "zero"), ("issum", "zero", "a", "b1"), ("issum", "zero", "a", "b2")}
    assert p.goal == (Literal(("equal", "b1", "b2")),)


def test_hyphenated_sum_is_a_distinct_unknown_predicate():
    with pytest.raises(PDDLSemanticError, match="unknown predicate 'is-sum'"):
        parse_problem("(define (problem p) (:domain d) (:objects zero a b1)"
                      " (:init (is-sum zero a b1)) (:goal (and)))", UAI_DOMAIN)


def test_empty_goal_is_vacuous():
    p = parse_problem("(define (problem p) (:domain d) (:objects a) (:init) (:goal (and)))", UAI_DOMAIN)
    task = Task(UAI_DOMAIN, p)
    assert task.is_goal(frozenset()) and task.is_goal(task.init)


def test_negative_goal_literal():
    d = domain(predicates="(equal ?a ?b) (contradiction)")
    p = parse_problem("(define (problem p) (:domain d) (:objects b c)"
                      " (:init) (:goal (and (equal b c) (not (contradiction)))))", d)
    task = Task(d, p)
    assert task.positive_goal == (("equal", "b", "c"),)
    assert task.negative_goal == (("contradiction",),)


@pytest.mark.parametrize("problem, message", [
    ("(:objects a) (:init (equal a ?x)) (:goal (and))", "non-ground"),
    ("(:objects a) (:init (equal a b)) (:goal (and))", "not declared"),
    ("(:objects a) (:init) (:goal (and (equal a zz)))", "not declared"),
    ("(:objects a) (:init (foo a)) (:goal (and))", "unknown predicate"),
])
def test_problem_errors(problem, message):
    with pytest.raises((PDDLSemanticError, PDDLSyntaxError), match=message):
        parse_problem(f"(define (problem p) (:domain d) {problem})", UAI_DOMAIN)


def test_problem_domain_name_must_match():
    with pytest.raises(PDDLSemanticError, match="names domain"):
        parse_problem("(define (problem p) (:domain other) (:objects a) (:init) (:goal (and)))",
                      UAI_DOMAIN)


OPTION_SETS = [DomainOptions(FOD), DomainOptions(FOND), DomainOptions(FOD, True),
               DomainOptions(FOND, False, ("integraldom-axiom", "set-zero")),
               DomainOptions(FOD, False, ("set-equal-to-self",))]


@pytest.mark.parametrize("options", OPTION_SETS)
def test_generated_domains_round_trip(options):
    d = generate_domain(options)
    again = parse_domain(write_domain(d))
    assert again == d
    assert write_domain(again) == write_domain(d)


@pytest.mark.parametrize("key", ["unique-additive-inverse", "a-times-zero", "cancellation-law"])
def test_builtin_problems_round_trip(key):
    problem, options, _, _ = builtin_problem(key)
    d = generate_domain(options)
    assert parse_problem(write_problem(problem), d) == problem


@given(st.integers(0, 10**6), st.booleans())
def test_random_domains_round_trip(seed, fond):
    rng = random.Random(seed)
    d = parse_domain(random_domain_text(rng, fond))
    assert parse_domain(write_domain(d)) == d
    p = parse_problem(random_problem_text(rng, 3), d)
    assert parse_problem(write_problem(p), d) == p


def test_all_known_actions_parse():
    assert {a.name for a in generate_domain(DomainOptions(FOND)).actions} == set(KNOWN_ACTIONS)
