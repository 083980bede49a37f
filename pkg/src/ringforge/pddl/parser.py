"""Parse the PDDL subset: STRIPS with negative literals, ``when`` and one
top-level ``oneof``. Untyped; ``:requirements`` is recorded and ignored."""

from __future__ import annotations

import re

from .model import (
    ActionSchema,
    Conjunction,
    DomainModel,
    Literal,
    OneOf,
    ProblemModel,
    When,
    effect_literals,
    intern_atom,
    is_var,
)
from .sexpr import PDDLSyntaxError, read, where

_NAME = re.compile(r"^[a-z][a-z0-9_-]*$")


class PDDLSemanticError(ValueError):
    pass


def _fail(msg, expr=None):
    line, col = where(expr) if expr is not None else (0, 0)
    raise PDDLSyntaxError(msg, line, col)


def _name(tok, expr, what="name") -> str:
    if not isinstance(tok, str) or not _NAME.match(tok):
        _fail(f"bad {what} {tok!r}", expr)
    return tok


def _var(tok, expr) -> str:
    if not isinstance(tok, str) or not tok.startswith("?") or not _NAME.match(tok[1:]):
        _fail(f"bad variable {tok!r}", expr)
    return tok


def _header(expr, kind):
    if not isinstance(expr, list) or len(expr) < 2 or expr[0] != "define":
        _fail("expected (define ...)", expr)
    head = expr[1]
    if not isinstance(head, list) or len(head) != 2 or head[0] != kind:
        _fail(f"expected ({kind} <name>)", head)
    return _name(head[1], head), expr[2:]


class _Arity:
    def __init__(self, declared: dict):
        self.table = dict(declared)

    def check(self, atom, expr, infer=True):
        pred, n = atom[0], len(atom) - 1
        if pred not in self.table:
            if not infer:
                raise PDDLSemanticError(f"unknown predicate {pred!r}")
            self.table[pred] = tuple(f"?x{i}" for i in range(n))
        elif len(self.table[pred]) != n:
            line, col = where(expr)
            raise PDDLSemanticError(
                f"arity conflict for {pred!r}: {len(self.table[pred])} vs {n}"
                + (f" (line {line}, column {col})" if line else "")
            )


def _atom(expr) -> tuple:
    if not isinstance(expr, list) or not expr:
        _fail("expected an atom", expr)
    pred = _name(expr[0], expr, "predicate")
    args = []
    for t in expr[1:]:
        if not isinstance(t, str):
            _fail("nested term in atom", expr)
        args.append(_var(t, expr) if t.startswith("?") else _name(t, expr, "object"))
    return intern_atom(pred, args)


def _literal(expr) -> Literal:
    if isinstance(expr, list) and expr and expr[0] == "not":
        if len(expr) != 2:
            _fail("(not ...) takes one atom", expr)
        return Literal(_atom(expr[1]), True)
    return Literal(_atom(expr))


def _conjunction(expr) -> list:
    """A literal, ``(and ...)`` or ``()``, as a list of sub-expressions."""
    if isinstance(expr, list) and not expr:
        return []
    if isinstance(expr, list) and expr[0] == "and":
        return list(expr[1:])
    return [expr]


def _literals(expr) -> tuple[Literal, ...]:
    out = []
    for item in _conjunction(expr):
        if isinstance(item, list) and item and item[0] == "and":
            out.extend(_literals(item))
        else:
            out.append(_literal(item))
    return tuple(out)


def _effect(expr, top: bool) -> Conjunction:
    items = []
    for item in _conjunction(expr):
        if isinstance(item, list) and item and item[0] == "oneof":
            if not top:
                _fail("nested oneof", item)
            branches = tuple(_effect(b, top=False) for b in item[1:])
            if not branches:
                _fail("empty oneof", item)
            items.append(OneOf(branches))
        elif isinstance(item, list) and item and item[0] == "when":
            if len(item) != 3:
                _fail("(when <condition> <effect>) expected", item)
            body = _conjunction(item[2])
            for b in body:
                if isinstance(b, list) and b and b[0] in ("when", "oneof", "and"):
                    _fail(f"{b[0]} inside a conditional body", b)
            items.append(When(_literals(item[1]), tuple(_literal(b) for b in body)))
        elif isinstance(item, list) and item and item[0] == "and":
            items.extend(_effect(item, top=False).items)
        elif isinstance(item, list) and item and item[0] in ("forall", "exists"):
            _fail(f"{item[0]} is not supported", item)
        else:
            items.append(_literal(item))
    if top and sum(isinstance(i, OneOf) for i in items) > 1:
        _fail("more than one oneof in an effect", expr)
    return Conjunction(tuple(items))


def _action(expr, arity: _Arity) -> ActionSchema:
    name = _name(expr[1] if len(expr) > 1 else None, expr, "action name")
    fields = {}
    rest = expr[2:]
    if len(rest) % 2:
        _fail(f"action {name}: unpaired keyword", expr)
    for key, val in zip(rest[::2], rest[1::2]):
        if key not in (":parameters", ":precondition", ":effect"):
            _fail(f"action {name}: unknown field {key!r}", expr)
        fields[key] = val
    raw_params = fields.get(":parameters", [])
    if not isinstance(raw_params, list):
        _fail(f"action {name}: bad parameter list", expr)
    if "-" in raw_params:
        _fail("typed parameters are not supported", expr)
    params = tuple(_var(p, expr) for p in raw_params)
    if len(set(params)) != len(params):
        raise PDDLSemanticError(f"action {name}: duplicate parameter")
    pre = _literals(fields.get(":precondition", []))
    eff = _effect(fields.get(":effect", []), top=True)
    known = set(params)
    for lit in pre:
        arity.check(lit.atom, expr)
        for t in lit.atom[1:]:
            if is_var(t) and t not in known:
                raise PDDLSemanticError(f"action {name}: undeclared variable {t} in precondition")
    for lit in effect_literals(eff):
        arity.check(lit.atom, expr)
        for t in lit.atom[1:]:
            if is_var(t) and t not in known:
                raise PDDLSemanticError(f"action {name}: undeclared variable {t} in effect")
    return ActionSchema(name, params, pre, eff)


def parse_domain(text: str) -> DomainModel:
    name, sections = _header(read(text), "domain")
    declared = {}
    requirements = ()
    action_exprs = []
    for sec in sections:
        if not isinstance(sec, list) or not sec:
            _fail("expected a domain section", sec)
        key = sec[0]
        if key == ":requirements":
            requirements = tuple(sec[1:])
        elif key == ":predicates":
            for p in sec[1:]:
                if not isinstance(p, list) or not p:
                    _fail("bad predicate declaration", p)
                pname = _name(p[0], p, "predicate")
                params = tuple(_var(v, p) for v in p[1:])
                if pname in declared and len(declared[pname]) != len(params):
                    raise PDDLSemanticError(f"arity conflict for {pname!r}")
                declared[pname] = params
        elif key == ":action":
            action_exprs.append(sec)
        elif key in (":types", ":constants", ":functions", ":derived"):
            _fail(f"{key} is not supported", sec)
        else:
            _fail(f"unknown domain section {key!r}", sec)
    arity = _Arity(declared)
    actions = tuple(_action(a, arity) for a in action_exprs)
    names = [a.name for a in actions]
    if len(set(names)) != len(names):
        raise PDDLSemanticError("duplicate action name")
    return DomainModel(name, arity.table, actions, requirements)


def parse_problem(text: str, domain: DomainModel) -> ProblemModel:
    name, sections = _header(read(text), "problem")
    domain_name = None
    objects: list[str] = []
    init = set()
    goal: tuple[Literal, ...] = ()
    arity = _Arity(domain.predicates)
    for sec in sections:
        if not isinstance(sec, list) or not sec:
            _fail("expected a problem section", sec)
        key = sec[0]
        if key == ":domain":
            domain_name = _name(sec[1], sec)
        elif key == ":requirements":
            pass
        elif key == ":objects":
            if "-" in sec[1:]:
                _fail("typed objects are not supported", sec)
            for o in sec[1:]:
                o = _name(o, sec, "object")
                if o not in objects:
                    objects.append(o)
        elif key == ":init":
            for item in sec[1:]:
                atom = _atom(item)
                if any(is_var(t) for t in atom[1:]):
                    raise PDDLSemanticError(f"non-ground init atom {atom}")
                arity.check(atom, item, infer=False)
                init.add(atom)
        elif key == ":goal":
            if len(sec) != 2:
                _fail("(:goal <formula>) expected", sec)
            goal = _literals(sec[1])
            for lit in goal:
                if any(is_var(t) for t in lit.atom[1:]):
                    raise PDDLSemanticError(f"non-ground goal atom {lit.atom}")
                arity.check(lit.atom, sec, infer=False)
        else:
            _fail(f"unknown problem section {key!r}", sec)
    if domain_name is None:
        _fail("missing (:domain ...)")
    if domain_name != domain.name:
        raise PDDLSemanticError(f"problem names domain {domain_name!r}, not {domain.name!r}")
    known = set(objects)
    for atom in list(init) + [l.atom for l in goal]:
        for t in atom[1:]:
            if t not in known:
                raise PDDLSemanticError(f"object {t!r} used but not declared")
    return ProblemModel(name, domain_name, tuple(objects), frozenset(init), goal)
