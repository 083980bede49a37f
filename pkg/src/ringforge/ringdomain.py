"""Generator for the commutative-ring domains and the builtin benchmark problems.

Each action is written as PDDL text and the assembled domain is run through
the parser, so generated models and generated files can never disagree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .pddl import DomainModel, Literal, ProblemModel, parse_domain, write_domain
from .proof.display import DisplayMap

FOD = "fod"
FOND = "fond"

PREDICATES = """
    (equal ?a ?b)
    (issum ?a ?b ?c)
    (iszero ?z)
    (isprod ?ab ?a ?b)
    (isadditiveinverse ?a ?addinva)
    (ismultidentity ?i)
    (assumenonzero ?a)
    (assumezero ?a)
    (undeclared ?a)
    (allowzeroprod)
    (contradiction)"""

# name -> (parameters, precondition, effect); FOND-only additions live below.
_ACTIONS = {
    # SECTION 0: AXIOMS
    "addition-axiom": (
        "?c ?a ?b", "(undeclared ?c)",
        "(and (issum ?c ?a ?b) (not (undeclared ?c)))"),
    "multiplication-axiom": (
        "?c ?a ?b", "(undeclared ?c)",
        "(and (isprod ?c ?a ?b) (not (undeclared ?c)))"),
    "associative-addition-axiom": (
        "?s1 ?s2 ?xy ?yz ?x ?y ?z",
        "(and (issum ?xy ?x ?y) (issum ?yz ?y ?z) (issum ?s1 ?xy ?z) (issum ?s2 ?x ?yz))",
        "(and (equal ?s1 ?s2))"),
    "zero-axiom": (
        "?s ?a ?z", "(and (iszero ?z) (issum ?s ?a ?z))",
        "(and (equal ?s ?a))"),
    "additive-inverse-axiom": (
        "?z ?a ?mina", "(and (iszero ?z) (isadditiveinverse ?a ?mina))",
        "(and (issum ?z ?a ?mina))"),
    "commutative-addition-axiom": (
        "?aplusb ?bplusa ?a ?b", "(and (issum ?aplusb ?a ?b) (issum ?bplusa ?b ?a))",
        "(and (equal ?aplusb ?bplusa))"),
    "associative-multiplication-axiom": (
        "?p1 ?p2 ?xy ?yz ?x ?y ?z",
        "(and (isprod ?xy ?x ?y) (isprod ?yz ?y ?z) (isprod ?p1 ?xy ?z) (isprod ?p2 ?x ?yz))",
        "(and (equal ?p1 ?p2))"),
    "multiplicative-identity-axiom": (
        "?a ?i", "(ismultidentity ?i)",
        "(and (isprod ?a ?a ?i))"),
    "distributivity-axiom-v1": (
        "?p ?s ?bc ?ab ?ac ?a ?b ?c",
        "(and (issum ?bc ?b ?c) (isprod ?p ?a ?bc) (isprod ?ab ?a ?b) (isprod ?ac ?a ?c)"
        " (issum ?s ?ab ?ac))",
        "(and (equal ?p ?s))"),
    "distributivity-axiom-v2": (
        "?p ?s ?aplusb ?ac ?bc ?a ?b ?c",
        "(and (issum ?aplusb ?a ?b) (isprod ?p ?aplusb ?c) (isprod ?ac ?a ?c) (isprod ?bc ?b ?c)"
        " (issum ?s ?ac ?bc))",
        "(and (equal ?s ?p))"),
    # SECTION 1: EQUALITY
    "swap-equal": ("?a ?b", "(equal ?a ?b)", "(and (equal ?b ?a))"),
    "set-equal-to-self": ("?a", "()", "(and (equal ?a ?a))"),
    "set-equal-by-transitivity": (
        "?a ?b ?c", "(and (equal ?a ?b) (equal ?b ?c))", "(and (equal ?a ?c))"),
    # SECTION 2: ZEROS
    "add-zero": ("?s ?a ?z", "(and (iszero ?z) (equal ?s ?a))", "(and (issum ?s ?a ?z))"),
    "set-zero": ("?a ?z", "(and (iszero ?z) (equal ?a ?z))", "(and (iszero ?a))"),
    "set-zero-prod": (
        "?p ?a ?z", "(and (allowzeroprod) (iszero ?z) (isprod ?p ?z ?a))",
        "(and (iszero ?p) (equal ?p ?z))"),
    # SECTION 3: SUMS
    "set-sum": ("?s ?x ?a ?b", "(and (equal ?s ?x) (issum ?x ?a ?b))", "(and (issum ?s ?a ?b))"),
    "replace-sum": (
        "?s ?a ?b ?a2", "(and (issum ?s ?a ?b) (equal ?a ?a2))", "(and (issum ?s ?a2 ?b))"),
    "swap-sum": ("?s ?a ?b", "(issum ?s ?a ?b)", "(and (issum ?s ?b ?a))"),
    "set-equal-by-sum": (
        "?s1 ?s2 ?a ?b", "(and (issum ?s1 ?a ?b) (issum ?s2 ?a ?b))", "(and (equal ?s1 ?s2))"),
    "add-element-to-both-sides-of-equality": (
        "?s1 ?s2 ?a ?b ?c", "(and (equal ?a ?b) (issum ?s1 ?a ?c) (issum ?s2 ?b ?c))",
        "(and (equal ?s1 ?s2))"),
    # SECTION 4: PRODUCTS
    "set-prod": ("?p ?x ?a ?b", "(and (equal ?p ?x) (isprod ?x ?a ?b))", "(and (isprod ?p ?a ?b))"),
    "replace-prod": (
        "?p ?a ?b ?a2", "(and (isprod ?p ?a ?b) (equal ?a ?a2))", "(and (isprod ?p ?a2 ?b))"),
    "swap-prod": ("?p ?a ?b", "(isprod ?p ?a ?b)", "(and (isprod ?p ?b ?a))"),
    "set-equal-by-prod": (
        "?p1 ?p2 ?a ?b", "(and (isprod ?p1 ?a ?b) (isprod ?p2 ?a ?b))", "(and (equal ?p1 ?p2))"),
    "multipy-element-both-sides-of-equality": (
        "?p1 ?p2 ?a ?b ?c", "(and (equal ?a ?b) (isprod ?p1 ?a ?c) (isprod ?p2 ?b ?c))",
        "(and (equal ?p1 ?p2))"),
    # SECTION 5: INVERSES
    "reduce-additive-inverse": (
        "?x ?c ?s ?b ?minc",
        "(and (issum ?x ?c ?s) (issum ?s ?b ?minc) (isadditiveinverse ?minc ?c))",
        "(and (equal ?x ?b))"),
    "factor-out-neg": (
        "?p ?minp ?a ?b ?mina",
        "(and (isprod ?p ?a ?b) (isadditiveinverse ?a ?mina) (isprod ?minp ?mina ?b))",
        "(and (isadditiveinverse ?p ?minp))"),
}

SECTIONS = {
    0: ("AXIOMS", list(_ACTIONS)[0:10]),
    1: ("EQUALITY", list(_ACTIONS)[10:13]),
    2: ("ZEROS", list(_ACTIONS)[13:16]),
    3: ("SUMS", list(_ACTIONS)[16:21]),
    4: ("PRODUCTS", list(_ACTIONS)[21:26]),
    5: ("INVERSES", list(_ACTIONS)[26:28]),
}

FOD_ACTIONS = tuple(_ACTIONS)

_FOND_SET_ZERO = (
    "?a ?z", "(and (iszero ?z) (equal ?a ?z))",
    "(and (iszero ?a) (when (assumenonzero ?a) (contradiction)))")

_INTEGRALDOM = (
    "?ab ?a ?b",
    "(and (isprod ?ab ?a ?b) (iszero ?ab))",
    """(oneof
        (and (when (assumenonzero ?a) (contradiction)) (iszero ?a)
             (when (assumenonzero ?b) (contradiction)) (iszero ?b))
        (and (when (assumenonzero ?a) (contradiction)) (iszero ?a)
             (when (assumezero ?b) (contradiction)) (not (iszero ?b)))
        (and (when (assumezero ?a) (contradiction)) (not (iszero ?a))
             (when (assumenonzero ?b) (contradiction)) (iszero ?b)))""")

KNOWN_ACTIONS = FOD_ACTIONS + ("integraldom-axiom",)

# The nine actions the reduced cancellation-law proof uses.
CANCELLATION_ACTIONS = (
    "set-equal-to-self",
    "distributivity-axiom-v1",
    "additive-inverse-axiom",
    "add-element-to-both-sides-of-equality",
    "set-zero",
    "integraldom-axiom",
    "add-zero",
    "reduce-additive-inverse",
    "swap-equal",
)


@dataclass(frozen=True)
class DomainOptions:
    variant: str = FOD
    allow_zero_prod: bool = False
    action_subset: Optional[tuple[str, ...]] = None

    def __post_init__(self):
        if self.variant not in (FOD, FOND):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.action_subset is not None:
            allowed = KNOWN_ACTIONS if self.variant == FOND else FOD_ACTIONS
            for name in self.action_subset:
                if name not in allowed:
                    raise ValueError(f"unknown action {name!r} for the {self.variant} variant")

    @property
    def domain_name(self) -> str:
        return "commutative-ring" if self.variant == FOD else "integral-domain"


def domain_text(options: DomainOptions) -> str:
    actions = dict(_ACTIONS)
    if options.variant == FOND:
        actions["set-zero"] = _FOND_SET_ZERO
        actions["integraldom-axiom"] = _INTEGRALDOM
    names = list(actions)
    if options.action_subset is not None:
        wanted = set(options.action_subset)
        names = [n for n in names if n in wanted]
    reqs = ":strips :negative-preconditions"
    if options.variant == FOND:
        reqs += " :conditional-effects :non-deterministic"
    out = [f"(define (domain {options.domain_name})", f"  (:requirements {reqs})",
           f"  (:predicates{PREDICATES})"]
    for name in names:
        params, pre, eff = actions[name]
        out.append(f"  (:action {name}\n    :parameters ({params})\n"
                   f"    :precondition {pre}\n    :effect {eff})")
    out.append(")")
    return "\n".join(out) + "\n"


def generate_domain(options: DomainOptions = DomainOptions()) -> DomainModel:
    return parse_domain(domain_text(options))


# Element roles are tuples: (kind, *other element names).
ROLES = {
    "zero": 0, "product-of": 2, "sum-of": 2, "additive-inverse-of": 1,
    "multiplicative-identity": 0, "undeclared": 0, "assumed-nonzero": 0,
    "assumed-zero": 0, "equal-to": 1,
}
_NON_STRUCTURAL = {"undeclared", "assumed-nonzero", "assumed-zero"}


@dataclass(frozen=True)
class RingElementDecl:
    name: str
    display: str
    facts: tuple = ()

    def __post_init__(self):
        if not self.display:
            raise ValueError(f"element {self.name!r} needs a display expression")
        for role in self.facts:
            if role[0] not in ROLES or len(role) - 1 != ROLES[role[0]]:
                raise ValueError(f"bad role {role!r} for {self.name!r}")
        kinds = {r[0] for r in self.facts}
        if "undeclared" in kinds and kinds - _NON_STRUCTURAL:
            raise ValueError(f"undeclared element {self.name!r} cannot carry structural facts")


def el(name: str, display: Optional[str] = None, *facts) -> RingElementDecl:
    return RingElementDecl(name, display or name, tuple(tuple(f) if isinstance(f, (list, tuple)) else (f,) for f in facts))


def build_problem(elements, goal, options: DomainOptions = DomainOptions(),
                  name: str = "conjecture") -> tuple[ProblemModel, DisplayMap]:
    names = [e.name for e in elements]
    if len(set(names)) != len(names):
        raise ValueError("duplicate element names")
    known = set(names)
    undeclared = {e.name for e in elements if any(r[0] == "undeclared" for r in e.facts)}
    init = set()
    for e in elements:
        for kind, *refs in e.facts:
            for r in refs:
                if r not in known:
                    raise ValueError(f"{e.name!r} refers to unknown element {r!r}")
                if r in undeclared:
                    raise ValueError(f"{e.name!r} refers to undeclared element {r!r}")
            n = e.name
            if kind == "zero":
                init.add(("iszero", n))
            elif kind == "product-of":
                init.add(("isprod", n, refs[0], refs[1]))
            elif kind == "sum-of":
                init.add(("issum", n, refs[0], refs[1]))
            elif kind == "additive-inverse-of":
                init.add(("isadditiveinverse", refs[0], n))
                init.add(("isadditiveinverse", n, refs[0]))
            elif kind == "multiplicative-identity":
                init.add(("ismultidentity", n))
            elif kind == "undeclared":
                init.add(("undeclared", n))
            elif kind == "assumed-nonzero":
                init.add(("assumenonzero", n))
            elif kind == "assumed-zero":
                init.add(("assumezero", n))
            elif kind == "equal-to":
                init.add(("equal", n, refs[0]))
    if options.allow_zero_prod:
        init.add(("allowzeroprod",))
    vocab = {"equal": 2, "issum": 3, "iszero": 1, "isprod": 3, "isadditiveinverse": 2,
             "ismultidentity": 1, "assumenonzero": 1, "assumezero": 1, "undeclared": 1,
             "allowzeroprod": 0, "contradiction": 0}
    goal = tuple(g if isinstance(g, Literal) else Literal(tuple(g)) for g in goal)
    for lit in goal:
        if vocab.get(lit.atom[0]) != len(lit.atom) - 1:
            raise ValueError(f"goal literal {lit} is not in the ring vocabulary")
        for t in lit.atom[1:]:
            if t not in known:
                raise ValueError(f"goal refers to undeclared element {t!r}")
    problem = ProblemModel(name, options.domain_name, tuple(names), frozenset(init), goal)
    return problem, DisplayMap((e.name, e.display) for e in elements)


@dataclass(frozen=True)
class BuiltinProblem:
    key: str
    options: DomainOptions
    elements: tuple
    goal: tuple
    expected_cost: Optional[int] = None
    note: str = ""
    solver: str = "gbfs"
    desk_scale: bool = True


NOT_CONTRADICTION = Literal(("contradiction",), True)

_NEG_ONE_ELEMENTS = (
    el("zero", "0", "zero"),
    el("one", "1", "multiplicative-identity"),
    el("a", "a"),
    el("mina", "(-a)", ("additive-inverse-of", "a")),
    el("minone", "(-1)", ("additive-inverse-of", "one")),
    el("itimesa", "(1 * a)", ("product-of", "one", "a")),
    el("minonetimesa", "(-1 * a)", ("product-of", "minone", "a"),
       ("additive-inverse-of", "itimesa")),
    el("zerotimesa", "(0 * a)", ("product-of", "zero", "a")),
)

_CANCELLATION_ELEMENTS = (
    el("z", "0", "zero"),
    el("a", "a", "assumed-nonzero"),
    el("b", "b"),
    el("c", "c"),
    el("ab", "(a * b)", ("product-of", "a", "b"), ("equal-to", "ac")),
    el("ac", "(a * c)", ("product-of", "a", "c")),
    el("minc", "(-c)", ("additive-inverse-of", "c")),
    el("bminc", "(b - c)", ("sum-of", "b", "minc")),
    el("abminc", "(a * (b - c))", ("product-of", "a", "bminc")),
    el("minac", "(-(a * c))", ("product-of", "a", "minc"), ("additive-inverse-of", "ac")),
    el("abminac", "((a * b) - (a * c))", ("sum-of", "ab", "minac")),
)

BUILTINS = {b.key: b for b in (
    BuiltinProblem(
        "zero-sum", DomainOptions(),
        (el("zero", "0", "zero"),),
        (Literal(("issum", "zero", "zero", "zero")),),
        note="0 = 0 + 0", solver="bfs"),
    BuiltinProblem(
        "unique-additive-inverse", DomainOptions(),
        (el("a", "a"), el("b1", "b1"), el("b2", "b2"),
         el("zero", "0", "zero", ("sum-of", "a", "b1"), ("sum-of", "a", "b2"))),
        (Literal(("equal", "b1", "b2")),),
        expected_cost=7, note="if a + b1 = 0 and a + b2 = 0 then b1 = b2", solver="bfs"),
    BuiltinProblem(
        "a-times-zero", DomainOptions(),
        (el("z", "0", "zero"), el("a", "a"), el("mina", "(-a)"),
         el("az", "(a * 0)", ("product-of", "a", "z")),
         el("minaz", "(-(a * 0))", ("product-of", "mina", "z"), ("additive-inverse-of", "az")),
         el("x", "x", "undeclared")),
        (Literal(("equal", "az", "z")),),
        expected_cost=9, note="a * 0 = 0 (one undeclared element)"),
    BuiltinProblem(
        "neg-one-times-a", DomainOptions(allow_zero_prod=True),
        _NEG_ONE_ELEMENTS + (
            el("sumofprods", "((1 * a) + (-1 * a))", ("sum-of", "itimesa", "minonetimesa")),),
        (Literal(("equal", "minonetimesa", "mina")),),
        expected_cost=14, note="-1 * a = -a"),
    BuiltinProblem(
        "neg-one-times-a-undeclared", DomainOptions(allow_zero_prod=True),
        _NEG_ONE_ELEMENTS + (el("x", "x", "undeclared"),),
        (Literal(("equal", "minonetimesa", "mina")),),
        note="-1 * a = -a with (1 * a) + (-1 * a) left undeclared", desk_scale=False),
    BuiltinProblem(
        "zero-diff-implies-equal", DomainOptions(),
        (el("zero", "0", "zero", ("sum-of", "a", "minb")), el("a", "a"), el("b", "b"),
         el("minb", "(-b)", ("additive-inverse-of", "b"))),
        (Literal(("equal", "a", "b")),),
        note="if 0 = a - b then a = b", solver="bfs"),
    BuiltinProblem(
        "cancellation-law", DomainOptions(FOND, action_subset=CANCELLATION_ACTIONS),
        _CANCELLATION_ELEMENTS,
        (Literal(("equal", "b", "c")), NOT_CONTRADICTION),
        note="ab = ac and a != 0 imply b = c (integral domain, reduced action set)",
        solver="fond"),
    BuiltinProblem(
        "cancellation-law-full", DomainOptions(FOND),
        _CANCELLATION_ELEMENTS,
        (Literal(("equal", "b", "c")), NOT_CONTRADICTION),
        note="cancellation law with every action available", solver="fond", desk_scale=False),
)}


def with_variant(options: DomainOptions, variant: Optional[str]) -> DomainOptions:
    if variant is None or variant == options.variant:
        return options
    subset = options.action_subset
    if subset is not None and variant == FOD:
        subset = tuple(a for a in subset if a in FOD_ACTIONS)
    return DomainOptions(variant, options.allow_zero_prod, subset)


def builtin_problem(key: str, variant: Optional[str] = None):
    """Return (problem, options, display map, expected cost or None)."""
    try:
        entry = BUILTINS[key]
    except KeyError:
        raise KeyError(f"unknown builtin problem {key!r}; known: {', '.join(BUILTINS)}") from None
    options = with_variant(entry.options, variant)
    problem, display = build_problem(entry.elements, entry.goal, options, entry.key)
    return problem, options, display, entry.expected_cost


def builtin_task(key: str, variant: Optional[str] = None):
    """Convenience: the builtin as a (Task, DisplayMap) pair."""
    from .pddl import Task

    problem, options, display, _ = builtin_problem(key, variant)
    return Task(generate_domain(options), problem), display


def domain_file_text(options: DomainOptions) -> str:
    return write_domain(generate_domain(options))
