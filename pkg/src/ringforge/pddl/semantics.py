"""State-transition semantics with lazy grounding.

Applicable ground actions are found by joining an action's positive
preconditions against the atoms of the state, seeding from the most
selective literal, instead of enumerating every parameter binding.
"""

from __future__ import annotations

import itertools
from functools import cached_property

from .model import (
    CONTRADICTION,
    ActionSchema,
    Atom,
    Conjunction,
    Literal,
    OneOf,
    State,
    Task,
    When,
    format_atom,
    is_var,
)


class InapplicableAction(ValueError):
    pass


class FactIndex:
    """Hash indexes over a growing set of ground atoms.

    ``lookup(pred, positions, values)`` returns the atoms of ``pred`` whose
    arguments at ``positions`` equal ``values``. Indexes for a position
    pattern are built on first use and maintained by ``add``.
    """

    def __init__(self, atoms=()):
        self.by_pred: dict[str, list[Atom]] = {}
        self._idx: dict[tuple, dict] = {}
        for a in atoms:
            self.add(a)

    def add(self, atom: Atom) -> None:
        self.by_pred.setdefault(atom[0], []).append(atom)
        for (pred, positions), table in self._idx.items():
            if pred == atom[0]:
                key = tuple(atom[p] for p in positions)
                table.setdefault(key, []).append(atom)

    def count(self, pred: str) -> int:
        return len(self.by_pred.get(pred, ()))

    def table(self, pred: str, positions: tuple) -> dict:
        """The hash table for one position pattern, built on first use."""
        table = self._idx.get((pred, positions))
        if table is None:
            table = {}
            for atom in self.by_pred.get(pred, ()):
                table.setdefault(tuple(atom[p] for p in positions), []).append(atom)
            self._idx[(pred, positions)] = table
        return table

    def lookup(self, pred: str, positions: tuple, values: tuple) -> list:
        if not positions:
            return self.by_pred.get(pred, [])
        return self.table(pred, positions).get(values, ())


def join_order(literals, index: FactIndex, bound=()) -> list:
    """Greedy join order: the most selective literal first, then the literal
    with the fewest unbound variables (ties broken by candidate count)."""
    remaining = list(literals)
    known = set(bound)
    order = []
    while remaining:
        if not order and not known:
            best = min(remaining, key=lambda lit: (index.count(lit[0]), lit))
        else:
            best = min(remaining, key=lambda lit: (
                len({t for t in lit[1:] if is_var(t) and t not in known}),
                index.count(lit[0]), lit))
        remaining.remove(best)
        order.append(best)
        known.update(t for t in best[1:] if is_var(t))
    return order


def _plan(order, bound=()) -> list:
    """Precompute, per literal, which positions are bound when it is reached."""
    known = set(bound)
    steps = []
    for lit in order:
        positions, sources, checks, binds = [], [], [], []
        seen_here = {}
        for i, t in enumerate(lit[1:], start=1):
            if not is_var(t):
                positions.append(i)
                sources.append((False, t))
            elif t in known:
                positions.append(i)
                sources.append((True, t))
            elif t in seen_here:
                checks.append((i, seen_here[t]))
            else:
                seen_here[t] = i
                binds.append((t, i))
        steps.append((lit[0], tuple(positions), tuple(sources), tuple(checks), tuple(binds)))
        known.update(seen_here)
    return steps


def join(steps, index: FactIndex, binding: dict):
    """Yield (binding, matched atoms) for every consistent assignment."""
    yield from _join(steps, 0, index, binding, [])


def _join(steps, k, index, binding, matched):
    if k == len(steps):
        yield binding, matched
        return
    pred, positions, sources, checks, binds = steps[k]
    values = tuple(binding[v] if is_v else v for is_v, v in sources)
    for atom in index.lookup(pred, positions, values):
        if any(atom[i] != atom[j] for i, j in checks):
            continue
        b = dict(binding)
        for v, i in binds:
            b[v] = atom[i]
        matched.append(atom)
        yield from _join(steps, k + 1, index, b, matched)
        matched.pop()


def substitute(atom: Atom, binding: dict) -> Atom:
    return (atom[0],) + tuple(binding.get(t, t) for t in atom[1:])


class GroundAction:
    """An action schema with every parameter bound to an object."""

    __slots__ = ("schema", "args", "__dict__")

    def __init__(self, schema: ActionSchema, args: tuple):
        if len(args) != len(schema.params):
            raise ValueError(f"{schema.name} takes {len(schema.params)} arguments")
        self.schema = schema
        self.args = tuple(args)

    @property
    def name(self) -> str:
        return self.schema.name

    @cached_property
    def binding(self) -> dict:
        return dict(zip(self.schema.params, self.args))

    @cached_property
    def precondition(self) -> tuple[Literal, ...]:
        b = self.binding
        return tuple(Literal(substitute(l.atom, b), l.negated) for l in self.schema.precondition)

    @cached_property
    def effect(self) -> Conjunction:
        return _ground_effect(self.schema.effect, self.binding)

    @cached_property
    def outcomes(self):
        b = self.binding
        out = []
        for o in self.schema.outcomes:
            out.append((
                tuple(substitute(a, b) for a in o.adds),
                tuple(substitute(a, b) for a in o.dels),
                tuple(
                    (
                        tuple(substitute(l.atom, b) for l in w.condition if not l.negated),
                        tuple(substitute(l.atom, b) for l in w.condition if l.negated),
                        tuple(substitute(l.atom, b) for l in w.body if not l.negated),
                        tuple(substitute(l.atom, b) for l in w.body if l.negated),
                    )
                    for w in o.whens
                ),
            ))
        return tuple(out)

    def is_applicable(self, state) -> bool:
        return all((l.atom in state) != l.negated for l in self.precondition)

    def key(self):
        return (self.schema.name, self.args)

    def __eq__(self, other):
        return isinstance(other, GroundAction) and self.key() == other.key()

    def __lt__(self, other):
        return self.key() < other.key()

    def __hash__(self):
        return hash(self.key())

    def __str__(self):
        return format_atom((self.schema.name,) + self.args)

    __repr__ = __str__


def _ground_effect(eff, b):
    if isinstance(eff, Literal):
        return Literal(substitute(eff.atom, b), eff.negated)
    if isinstance(eff, When):
        return When(
            tuple(_ground_effect(l, b) for l in eff.condition),
            tuple(_ground_effect(l, b) for l in eff.body),
        )
    if isinstance(eff, OneOf):
        return OneOf(tuple(_ground_effect(x, b) for x in eff.branches))
    return Conjunction(tuple(_ground_effect(x, b) for x in eff.items))


def schema_bindings(schema: ActionSchema, index: FactIndex, objects) -> set:
    """Argument tuples of ``schema`` whose positive preconditions hold in ``index``."""
    pos = schema.positive_pre
    steps = _plan(join_order(pos, index))
    found = set()
    covered = {t for a in pos for t in a[1:] if is_var(t)}
    free = [p for p in schema.params if p not in covered]
    for binding, _ in join(steps, index, {}):
        if free:
            for combo in itertools.product(objects, repeat=len(free)):
                b = dict(binding)
                b.update(zip(free, combo))
                found.add(tuple(b[p] for p in schema.params))
        else:
            found.add(tuple(binding[p] for p in schema.params))
    return found


def applicable_actions(state: State, task: Task) -> list[GroundAction]:
    index = FactIndex(state)
    objects = sorted(task.objects)
    out = []
    for schema in sorted(task.domain.actions, key=lambda a: a.name):
        neg = schema.negative_pre
        params = schema.params
        for args in sorted(schema_bindings(schema, index, objects)):
            if neg:
                b = dict(zip(params, args))
                if any(substitute(a, b) in state for a in neg):
                    continue
            out.append(GroundAction(schema, args))
    return out


def outcome_count(action) -> int:
    schema = action.schema if isinstance(action, GroundAction) else action
    return len(schema.outcomes)


def apply(state: State, action: GroundAction, outcome_index: int = 0, check: bool = True) -> State:
    """Successor of ``state`` under one outcome of ``action``.

    Conditional effects are evaluated against the input state; when the same
    atom is both added and deleted, the add wins.
    """
    outcomes = action.outcomes
    if not 0 <= outcome_index < len(outcomes):
        raise IndexError(f"{action} has {len(outcomes)} outcome(s), not index {outcome_index}")
    if check and not action.is_applicable(state):
        raise InapplicableAction(f"{action} is not applicable")
    adds, dels, whens = outcomes[outcome_index]
    add = set(adds)
    delete = set(dels)
    for cpos, cneg, wadd, wdel in whens:
        if all(a in state for a in cpos) and not any(a in state for a in cneg):
            add.update(wadd)
            delete.update(wdel)
    if not delete and add.issubset(state):
        return state
    return frozenset((state - delete) | add)


def successors(state: State, task: Task):
    """Yield (action, [outcome states]) for each applicable action."""
    for action in applicable_actions(state, task):
        yield action, [apply(state, action, i, check=False) for i in range(len(action.outcomes))]


def ground_all(task: Task, limit: int | None = None):
    """Exhaustively ground every schema over the object universe (diagnostic only).

    Yields at most ``limit`` ground actions, ignoring preconditions.
    """
    objects = sorted(task.objects)
    n = 0
    for schema in sorted(task.domain.actions, key=lambda a: a.name):
        for args in itertools.product(objects, repeat=len(schema.params)):
            if limit is not None and n >= limit:
                return
            yield GroundAction(schema, args)
            n += 1


def contradiction_in(state) -> bool:
    return CONTRADICTION in state
