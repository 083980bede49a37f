"""DOT export of policy execution trees, and a small DOT reader for checking it."""

from __future__ import annotations

import re
from typing import Optional

from .display import DisplayMap
from .render import _tautology

SALIENT = ("equal", "iszero", "contradiction")

LEAF_STYLE = {
    "GoalReached": 'shape=doublecircle, color="darkgreen"',
    "ClosedByContradiction": 'shape=box, style=filled, fillcolor="lightgrey"',
    "DeadEnd": 'shape=octagon, color="red"',
    "Cycle": 'shape=diamond, color="orange"',
}


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n") + '"'


def _fact(atom, display: DisplayMap) -> str:
    if atom[0] == "equal":
        return f"{display.show(atom[1])} = {display.show(atom[2])}"
    if atom[0] == "iszero":
        return f"{display.show(atom[1])} = 0"
    return "contradiction"


def export_dot(tree, display: Optional[DisplayMap] = None, name: str = "policy") -> str:
    """Nodes show the salient atoms a step added (all of them at the root)."""
    display = display if display is not None else DisplayMap()
    out = [f"digraph {quote(name)} {{", "  rankdir=TB;", '  node [fontname="Helvetica"];']
    edges = []
    counter = 0

    def visit(node, parent_state):
        nonlocal counter
        ident = f"n{counter}"
        counter += 1
        atoms = sorted(a for a in node.state if a[0] in SALIENT
                       and (parent_state is None or a not in parent_state))
        facts = [f for f in (_fact(a, display) for a in atoms) if not _tautology(f)]
        label = "\n".join(facts) or "(no new facts)"
        if node.tag:
            label += f"\n[{node.tag}]"
        style = LEAF_STYLE.get(node.tag, "shape=ellipse")
        out.append(f"  {ident} [label={quote(label)}, {style}];")
        for idx, child in node.children:
            child_id = visit(child, node.state)
            edges.append(f"  {ident} -> {child_id} [label={quote(f'{node.action.name} #{idx}')}];")
        return ident

    visit(tree.root, None)
    out.extend(edges)
    out.append("}")
    return "\n".join(out) + "\n"


class DotSyntaxError(ValueError):
    pass


_TOKEN = re.compile(r'\s*(?:(->|--)|([{}\[\];,=])|("(?:[^"\\]|\\.)*")|([A-Za-z_0-9.]+)|(//[^\n]*|#[^\n]*))', re.S)


def _tokens(text: str):
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            return
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise DotSyntaxError(f"unexpected character at offset {pos}: {text[pos]!r}")
        pos = m.end()
        edge, sym, string, ident, comment = m.groups()
        if comment:
            continue
        if string is not None:
            yield ("id", re.sub(r"\\(.)", lambda g: "\n" if g.group(1) == "n" else g.group(1), string[1:-1]))
        elif ident is not None:
            yield ("id", ident)
        else:
            yield ("sym", edge or sym)


def read_dot(text: str) -> dict:
    """Parse the subset of DOT that ``export_dot`` emits.

    Returns ``{"name", "nodes": {id: attrs}, "edges": [(src, dst, attrs)]}``.
    """
    toks = list(_tokens(text))
    i = 0

    def peek():
        return toks[i] if i < len(toks) else ("eof", None)

    def take(kind=None, value=None):
        nonlocal i
        tok = peek()
        if (kind and tok[0] != kind) or (value and tok[1] != value):
            raise DotSyntaxError(f"expected {value or kind}, got {tok[1]!r}")
        i += 1
        return tok[1]

    def attrs():
        out = {}
        if peek() == ("sym", "["):
            take()
            while peek() != ("sym", "]"):
                key = take("id")
                take("sym", "=")
                out[key] = take("id")
                if peek() in (("sym", ","), ("sym", ";")):
                    take()
            take("sym", "]")
        return out

    if take("id") != "digraph":
        raise DotSyntaxError("only digraphs are supported")
    name = take("id") if peek()[0] == "id" else ""
    take("sym", "{")
    nodes, edges = {}, []
    while peek() != ("sym", "}"):
        first = take("id")
        if peek() == ("sym", "="):
            take()
            take("id")
        elif peek() == ("sym", "->"):
            take()
            second = take("id")
            edges.append((first, second, attrs()))
            nodes.setdefault(first, {})
            nodes.setdefault(second, {})
        elif peek() == ("sym", "--"):
            raise DotSyntaxError("undirected edge in a digraph")
        else:
            a = attrs()
            if first not in ("node", "edge", "graph"):
                nodes.setdefault(first, {}).update(a)
        if peek() == ("sym", ";"):
            take()
    take("sym", "}")
    if i != len(toks):
        raise DotSyntaxError("trailing input after the graph")
    return {"name": name, "nodes": nodes, "edges": edges}
