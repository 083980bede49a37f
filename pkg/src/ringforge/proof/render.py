"""Render plans and policies as step-by-step proofs in display algebra."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

from ..pddl.model import CONTRADICTION, format_atom
from .display import DisplayMap

ASCII_ARROW = "=>"
UNICODE_ARROW = "⟹"


@lru_cache(maxsize=None)
def _shipped() -> str:
    return resources.files(__package__).joinpath("templates.json").read_text(encoding="utf-8")


def load_templates(path: Optional[str] = None) -> dict:
    """The shipped template table, optionally overlaid with a user JSON file."""
    table = json.loads(_shipped())
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            extra = json.load(fh)
        for section in ("actions", "facts"):
            table[section].update(extra.get(section, {}))
    return table


@dataclass
class ProofLine:
    action: str
    consequence: str
    depth: int = 0


@dataclass
class CaseMarker:
    label: str
    depth: int = 0


@dataclass
class Note:
    text: str
    depth: int = 0


@dataclass
class ProofDocument:
    header: list
    items: list = field(default_factory=list)
    footer: str = ""
    unicode: bool = False
    fallbacks: int = 0

    @property
    def lines(self) -> list[ProofLine]:
        return [i for i in self.items if isinstance(i, ProofLine)]

    @property
    def cases(self) -> list[CaseMarker]:
        return [i for i in self.items if isinstance(i, CaseMarker)]

    def text(self) -> str:
        arrow = UNICODE_ARROW if self.unicode else ASCII_ARROW
        out = list(self.header)
        for item in self.items:
            pad = "  " * item.depth
            if isinstance(item, ProofLine):
                out.append(f"{pad}{item.action}  {arrow} {item.consequence}")
            elif isinstance(item, CaseMarker):
                out.append(f"{pad}{item.label}")
            else:
                out.append(f"{pad}; {item.text}")
        if self.footer:
            out.append(self.footer)
        text = "\n".join(out) + "\n"
        return text.replace(" != ", " ≠ ") if self.unicode else text


def _tautology(text: str) -> bool:
    if " = " not in text or text.count(" = ") != 1:
        return False
    left, right = (side.replace(" ", "") for side in text.split(" = "))
    strip = lambda t: t[1:-1] if t.startswith("(") and t.endswith(")") else t
    return strip(left) == strip(right)


class Renderer:
    def __init__(self, task, display: Optional[DisplayMap] = None, raw_atoms: bool = False,
                 templates: Optional[dict] = None, arrow: str = ASCII_ARROW):
        self.arrow = arrow
        self.task = task
        self.display = display if display is not None else DisplayMap()
        self.raw = raw_atoms
        self.templates = templates or load_templates()
        self.fallbacks = 0

    def show(self, name: str) -> str:
        return self.display.show(name)

    def fact(self, atom) -> Optional[str]:
        pattern = self.templates["facts"].get(atom[0])
        if pattern is None:
            return None if atom[0] == "allowzeroprod" else format_atom(atom)
        return pattern.format(*(self.show(t) for t in atom[1:]))

    def goal_literal(self, lit) -> str:
        text = self.fact(lit.atom) or format_atom(lit.atom)
        return f"not {text}" if lit.negated else text

    def header(self, banner: bool) -> list[str]:
        problem = self.task.problem
        given = []
        for atom in sorted(problem.init):
            text = self.fact(atom)
            if text and text not in given and not _tautology(text):
                given.append(text)
        out = []
        if banner:
            out.append("; WARNING: this input did not validate; the proof below is unchecked")
        out.append(f"; theorem {problem.name}")
        out.append("; given: " + ("; ".join(given) if given else "nothing"))
        out.append("; prove: " + " and ".join(self.goal_literal(g) for g in problem.goal))
        return out

    def consequence(self, action, outcome: int, before, after) -> str:
        if self.raw:
            added = sorted(after - before)
            removed = sorted(before - after)
            parts = [f"+{format_atom(a)}" for a in added] + [f"-{format_atom(a)}" for a in removed]
            text = " ".join(parts) or "no change"
        else:
            pattern = self.templates["actions"].get(action.name)
            if isinstance(pattern, list):
                pattern = pattern[outcome] if outcome < len(pattern) else None
            if pattern is None:
                self.fallbacks += 1
                text = str(action) if len(action.schema.outcomes) == 1 else f"{action} outcome {outcome}"
            else:
                values = {p.lstrip("?"): self.show(a) for p, a in zip(action.schema.params, action.args)}
                text = pattern.format(**values)
        if CONTRADICTION in after and CONTRADICTION not in before:
            text += f" {self.arrow} " + self.contradiction_reason(before, after)
        return text

    def contradiction_reason(self, before, after) -> str:
        reasons = []
        for atom in sorted(before):
            if atom[0] == "assumenonzero" and ("iszero", atom[1]) in after:
                reasons.append(f"assumed {self.show(atom[1])} nonzero")
            elif atom[0] == "assumezero" and ("iszero", atom[1]) not in after:
                reasons.append(f"assumed {self.show(atom[1])} zero")
        return "contradiction" + (f" ({', '.join(reasons)})" if reasons else "")


def _simulate_plan(task, plan):
    from ..pddl import apply

    state = task.init
    for step in plan.steps:
        nxt = apply(state, step, 0, check=False)
        yield step, state, nxt
        state = nxt


def render_proof(obj, task, display: Optional[DisplayMap] = None, *, unicode: bool = False,
                 raw_atoms: bool = False, validated: bool = True,
                 templates: Optional[dict] = None) -> ProofDocument:
    """Render a Plan, a Policy or an ExecutionTree.

    Policies are unfolded into their execution tree; every branching action
    opens one ``Case k:`` section per outcome.
    """
    from ..planfond import CYCLE, DEAD_END, ExecutionTree, Policy, execution_tree

    r = Renderer(task, display, raw_atoms, templates, UNICODE_ARROW if unicode else ASCII_ARROW)
    doc = ProofDocument(r.header(not validated), unicode=unicode)
    if isinstance(obj, Policy):
        obj = execution_tree(obj, task)
    if isinstance(obj, ExecutionTree):
        census = {}

        def walk(node, depth, prefix):
            while True:
                if node.is_leaf:
                    census[node.tag] = census.get(node.tag, 0) + 1
                    if node.tag in (DEAD_END, CYCLE):
                        doc.items.append(Note(f"open branch ({node.tag})", depth))
                    return
                if len(node.children) == 1:
                    idx, child = node.children[0]
                    doc.items.append(ProofLine(str(node.action),
                                               r.consequence(node.action, idx, node.state, child.state),
                                               depth))
                    node = child
                    continue
                for k, (idx, child) in enumerate(node.children, start=1):
                    label = f"{prefix}{k}"
                    doc.items.append(CaseMarker(f"Case {label}:", depth))
                    doc.items.append(ProofLine(str(node.action),
                                               r.consequence(node.action, idx, node.state, child.state),
                                               depth + 1))
                    walk(child, depth + 1, label + ".")
                return

        walk(obj.root, 0, "")
        summary = " ".join(f"{k}={v}" for k, v in sorted(census.items()))
        doc.footer = f"; cases closed: {summary}"
    else:
        for step, before, after in _simulate_plan(task, obj):
            doc.items.append(ProofLine(str(step), r.consequence(step, 0, before, after)))
        doc.footer = f"; cost = {len(obj.steps)} (unit cost)"
    doc.fallbacks = r.fallbacks
    return doc
