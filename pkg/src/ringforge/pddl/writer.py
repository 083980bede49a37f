"""Serialize models back to PDDL text in the same surface syntax we read."""

from __future__ import annotations

from .model import Conjunction, DomainModel, Literal, OneOf, ProblemModel, When, format_atom


def _lits(lits, indent: str) -> str:
    if not lits:
        return "()"
    if len(lits) == 1:
        return str(lits[0])
    inner = ("\n" + indent + "    ").join(str(l) for l in lits)
    return f"(and\n{indent}    {inner})"


def _effect(eff, indent: str) -> str:
    if isinstance(eff, Literal):
        return str(eff)
    if isinstance(eff, When):
        cond = _lits(list(eff.condition), indent + "    ")
        body = _lits(list(eff.body), indent + "    ")
        return f"(when\n{indent}    {cond}\n{indent}    {body})"
    if isinstance(eff, OneOf):
        parts = ("\n" + indent + "    ").join(_effect(b, indent + "    ") for b in eff.branches)
        return f"(oneof\n{indent}    {parts})"
    assert isinstance(eff, Conjunction)
    if not eff.items:
        return "(and)"
    parts = ("\n" + indent + "    ").join(_effect(i, indent + "    ") for i in eff.items)
    return f"(and\n{indent}    {parts})"


def _top_effect(eff: Conjunction, indent: str) -> str:
    if len(eff.items) == 1 and isinstance(eff.items[0], OneOf):
        return _effect(eff.items[0], indent)
    return _effect(eff, indent)


def write_domain(domain: DomainModel) -> str:
    out = [f"(define (domain {domain.name})"]
    if domain.requirements:
        out.append(f"  (:requirements {' '.join(domain.requirements)})")
    out.append("  (:predicates")
    for pred, params in domain.predicates.items():
        out.append("    " + format_atom((pred,) + tuple(params)))
    out.append("  )")
    for a in domain.actions:
        out.append("")
        out.append(f"  (:action {a.name}")
        out.append(f"      :parameters ({' '.join(a.params)})")
        out.append(f"      :precondition {_lits(list(a.precondition), '      ')}")
        out.append(f"      :effect {_top_effect(a.effect, '      ')})")
    out.append(")")
    return "\n".join(out) + "\n"


def write_problem(problem: ProblemModel) -> str:
    out = [
        f"(define (problem {problem.name})",
        f"  (:domain {problem.domain_name})",
        f"  (:objects {' '.join(problem.objects)})",
        "  (:init",
    ]
    for atom in sorted(problem.init):
        out.append("    " + format_atom(atom))
    out.append("  )")
    goal = list(problem.goal)
    inner = " ".join(str(l) for l in goal)
    out.append(f"  (:goal (and {inner}))" if goal else "  (:goal (and))")
    out.append(")")
    return "\n".join(out) + "\n"
