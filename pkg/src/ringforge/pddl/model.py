"""Immutable data model for the PDDL subset.

Atoms are plain tuples ``(predicate, arg, ...)`` of interned lowercase
strings; schema variables keep their leading ``?``. A state is a
``frozenset`` of ground atoms, so equal atom sets compare and hash equal.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple, Union

Atom = tuple
State = frozenset

CONTRADICTION = ("contradiction",)


def intern_atom(pred: str, args) -> Atom:
    return (sys.intern(pred),) + tuple(sys.intern(a) for a in args)


def is_var(term: str) -> bool:
    return term.startswith("?")


def is_ground(atom: Atom) -> bool:
    return not any(is_var(t) for t in atom[1:])


def format_atom(atom: Atom) -> str:
    return "(" + " ".join(atom) + ")"


def format_state(state) -> str:
    return "{" + " ".join(format_atom(a) for a in sorted(state)) + "}"


class Literal(NamedTuple):
    atom: Atom
    negated: bool = False

    def __str__(self):
        text = format_atom(self.atom)
        return f"(not {text})" if self.negated else text


@dataclass(frozen=True)
class When:
    condition: tuple[Literal, ...]
    body: tuple[Literal, ...]


@dataclass(frozen=True)
class OneOf:
    branches: tuple["Conjunction", ...]


@dataclass(frozen=True)
class Conjunction:
    items: tuple[Union[Literal, When, OneOf, "Conjunction"], ...] = ()


Effect = Union[Literal, When, OneOf, Conjunction]


class Outcome(NamedTuple):
    """One flattened effect branch: unconditional adds/deletes plus conditionals."""

    adds: tuple[Atom, ...]
    dels: tuple[Atom, ...]
    whens: tuple[When, ...]


def _flatten(effect: Effect, adds: list, dels: list, whens: list) -> None:
    if isinstance(effect, Literal):
        (dels if effect.negated else adds).append(effect.atom)
    elif isinstance(effect, When):
        whens.append(effect)
    elif isinstance(effect, Conjunction):
        for item in effect.items:
            _flatten(item, adds, dels, whens)
    else:
        raise TypeError("oneof may only appear at the top of an effect")


def effect_outcomes(effect: Conjunction) -> tuple[Outcome, ...]:
    """Expand a (possibly oneof-rooted) effect into its outcome branches.

    Items of the top conjunction that sit outside the ``oneof`` are shared by
    every branch.
    """
    shared = Conjunction(tuple(i for i in effect.items if not isinstance(i, OneOf)))
    oneofs = [i for i in effect.items if isinstance(i, OneOf)]
    if len(oneofs) > 1:
        raise ValueError("at most one oneof per effect")
    branches = oneofs[0].branches if oneofs else (Conjunction(),)
    out = []
    for branch in branches:
        adds, dels, whens = [], [], []
        _flatten(shared, adds, dels, whens)
        _flatten(branch, adds, dels, whens)
        out.append(Outcome(tuple(adds), tuple(dels), tuple(whens)))
    return tuple(out)


def effect_literals(effect: Effect):
    """Yield every literal in an effect tree, conditions included."""
    if isinstance(effect, Literal):
        yield effect
    elif isinstance(effect, When):
        yield from effect.condition
        yield from effect.body
    elif isinstance(effect, OneOf):
        for b in effect.branches:
            yield from effect_literals(b)
    else:
        for item in effect.items:
            yield from effect_literals(item)


def effect_changes(effect: Effect):
    """Yield the literals an effect can add or delete (conditions excluded)."""
    if isinstance(effect, Literal):
        yield effect
    elif isinstance(effect, When):
        yield from effect.body
    elif isinstance(effect, OneOf):
        for b in effect.branches:
            yield from effect_changes(b)
    else:
        for item in effect.items:
            yield from effect_changes(item)


@dataclass(frozen=True)
class ActionSchema:
    name: str
    params: tuple[str, ...]
    precondition: tuple[Literal, ...]
    effect: Conjunction
    cost: int = 1

    @cached_property
    def outcomes(self) -> tuple[Outcome, ...]:
        return effect_outcomes(self.effect)

    @property
    def deterministic(self) -> bool:
        return len(self.outcomes) == 1 and not any(
            isinstance(i, OneOf) for i in self.effect.items
        )

    @cached_property
    def positive_pre(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.precondition if not l.negated)

    @cached_property
    def negative_pre(self) -> tuple[Atom, ...]:
        return tuple(l.atom for l in self.precondition if l.negated)


@dataclass(frozen=True)
class DomainModel:
    name: str
    predicates: dict  # name -> tuple of parameter names (len = arity)
    actions: tuple[ActionSchema, ...]
    requirements: tuple[str, ...] = ()

    def arity(self, pred: str) -> int:
        return len(self.predicates[pred])

    def action(self, name: str) -> ActionSchema:
        for a in self.actions:
            if a.name == name:
                return a
        raise KeyError(name)

    @property
    def deterministic(self) -> bool:
        return all(a.deterministic for a in self.actions)


@dataclass(frozen=True)
class ProblemModel:
    name: str
    domain_name: str
    objects: tuple[str, ...]
    init: frozenset
    goal: tuple[Literal, ...]


@dataclass(frozen=True)
class Task:
    domain: DomainModel
    problem: ProblemModel

    def __post_init__(self):
        if self.problem.domain_name != self.domain.name:
            raise ValueError(
                f"problem is for domain {self.problem.domain_name!r}, "
                f"not {self.domain.name!r}"
            )

    @cached_property
    def static_predicates(self) -> frozenset:
        changed = {
            lit.atom[0] for a in self.domain.actions for lit in effect_changes(a.effect)
        }
        return frozenset(p for p in self.domain.predicates if p not in changed)

    @cached_property
    def undeletable_predicates(self) -> frozenset:
        """Predicates that no action ever deletes."""
        deleted = {
            lit.atom[0]
            for a in self.domain.actions
            for lit in effect_changes(a.effect)
            if lit.negated
        }
        return frozenset(p for p in self.domain.predicates if p not in deleted)

    @property
    def objects(self) -> tuple[str, ...]:
        return self.problem.objects

    @cached_property
    def init(self) -> State:
        return frozenset(self.problem.init)

    @cached_property
    def positive_goal(self) -> tuple[Atom, ...]:
        return tuple(dict.fromkeys(l.atom for l in self.problem.goal if not l.negated))

    @cached_property
    def negative_goal(self) -> tuple[Atom, ...]:
        return tuple(dict.fromkeys(l.atom for l in self.problem.goal if l.negated))

    @property
    def deterministic(self) -> bool:
        return self.domain.deterministic

    def is_goal(self, state) -> bool:
        return all(a in state for a in self.positive_goal) and not any(
            a in state for a in self.negative_goal
        )
