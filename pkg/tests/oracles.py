"""Random mini-tasks and brute-force reference implementations.

Nothing here calls the lazy-join code: bindings are enumerated exhaustively
and effects are applied from the flattened outcome lists.
"""

from __future__ import annotations

import itertools
import math
import random

from ringforge.pddl import Task, parse_domain, parse_problem

PREDICATES = {"p": 1, "q": 2, "r": 1, "s": 2, "flag": 0, "contradiction": 0}


def _atom(rng, params):
    pred = rng.choice(sorted(PREDICATES))
    return (pred,) + tuple(rng.choice(params) for _ in range(PREDICATES[pred]))


def _text(atom):
    return "(" + " ".join(atom) + ")"


def random_domain_text(rng: random.Random, fond: bool = False, max_schemas: int = 4) -> str:
    actions = []
    for k in range(rng.randint(1, max_schemas)):
        params = [f"?v{i}" for i in range(rng.randint(1, 3))]
        pre = []
        for _ in range(rng.randint(0, 3)):
            lit = _text(_atom(rng, params))
            pre.append(f"(not {lit})" if rng.random() < 0.2 else lit)

        def effect_items():
            items = []
            for _ in range(rng.randint(1, 3)):
                atom = _atom(rng, params)
                lit = _text(atom)
                # contradiction is permanent, as in the ring domains
                negate = rng.random() < 0.25 and atom[0] != "contradiction"
                items.append(f"(not {lit})" if negate else lit)
            if rng.random() < 0.3:
                cond = _text(_atom(rng, params))
                if rng.random() < 0.3:
                    cond = f"(not {cond})"
                items.append(f"(when {cond} {_text(_atom(rng, params))})")
            return items

        shared = effect_items()
        if fond and rng.random() < 0.5:
            branches = " ".join("(and " + " ".join(effect_items()) + ")"
                                for _ in range(rng.randint(2, 3)))
            effect = "(and " + " ".join(shared) + f" (oneof {branches}))"
        else:
            effect = "(and " + " ".join(shared) + ")"
        actions.append(
            f"(:action act{k} :parameters ({' '.join(params)})"
            f" :precondition (and {' '.join(pre)}) :effect {effect})")
    preds = " ".join("(" + " ".join([p] + [f"?x{i}" for i in range(n)]) + ")"
                     for p, n in sorted(PREDICATES.items()))
    return f"(define (domain mini) (:predicates {preds}) {' '.join(actions)})"


def random_problem_text(rng: random.Random, n_objects: int = 3) -> str:
    objects = [f"o{i}" for i in range(n_objects)]
    init = {_atom(rng, objects) for _ in range(rng.randint(0, 5))}
    goal = {_atom(rng, objects) for _ in range(rng.randint(1, 2))}
    return (f"(define (problem mini-p) (:domain mini) (:objects {' '.join(objects)})"
            f" (:init {' '.join(_text(a) for a in sorted(init))})"
            f" (:goal (and {' '.join(_text(a) for a in sorted(goal))})))")


def random_task(seed: int, fond: bool = False, max_objects: int = 4, max_schemas: int = 4) -> Task:
    rng = random.Random(seed)
    domain = parse_domain(random_domain_text(rng, fond, max_schemas))
    problem = parse_problem(random_problem_text(rng, rng.randint(1, max_objects)), domain)
    return Task(domain, problem)


def _sub(atom, b):
    return (atom[0],) + tuple(b.get(t, t) for t in atom[1:])


def brute_applicable(state, task):
    """Sorted (schema name, args) pairs by exhaustive binding enumeration."""
    objects = sorted(task.objects)
    out = []
    for schema in task.domain.actions:
        for args in itertools.product(objects, repeat=len(schema.params)):
            b = dict(zip(schema.params, args))
            if all((_sub(l.atom, b) in state) != l.negated for l in schema.precondition):
                out.append((schema.name, args))
    return sorted(out)


def brute_apply(state, schema, args, k=0):
    b = dict(zip(schema.params, args))
    o = schema.outcomes[k]
    add = {_sub(a, b) for a in o.adds}
    dels = {_sub(a, b) for a in o.dels}
    for w in o.whens:
        if all((_sub(l.atom, b) in state) != l.negated for l in w.condition):
            for l in w.body:
                (dels if l.negated else add).add(_sub(l.atom, b))
    return frozenset((set(state) - dels) | add)


def brute_successors(state, task):
    for name, args in brute_applicable(state, task):
        schema = task.domain.action(name)
        yield (name, args), brute_apply(state, schema, args)


def iddfs_optimum(task, max_depth: int):
    """Shortest plan length by iterative deepening, or None if none within ``max_depth``."""
    init = task.init

    def dfs(state, depth, path):
        if task.is_goal(state):
            return True
        if depth == 0:
            return False
        for _, succ in brute_successors(state, task):
            if succ in path:
                continue
            path.add(succ)
            found = dfs(succ, depth - 1, path)
            path.discard(succ)
            if found:
                return True
        return False

    for d in range(max_depth + 1):
        if dfs(init, d, {init}):
            return d
    return None


def reachable_states(task, limit: int = 5000):
    seen = {task.init}
    frontier = [task.init]
    while frontier and len(seen) < limit:
        nxt = []
        for s in frontier:
            for _, succ in brute_successors(s, task):
                if succ not in seen:
                    seen.add(succ)
                    nxt.append(succ)
        frontier = nxt
    return seen, not frontier


def ground_h_add(state, task):
    """Additive relaxed cost by Bellman-Ford over fully ground rules."""
    objects = sorted(task.objects)
    rules = []
    for schema in task.domain.actions:
        for args in itertools.product(objects, repeat=len(schema.params)):
            b = dict(zip(schema.params, args))
            pre = frozenset(_sub(l.atom, b) for l in schema.precondition if not l.negated)
            for o in schema.outcomes:
                rules.append((pre, {_sub(a, b) for a in o.adds}))
                for w in o.whens:
                    cond = frozenset(_sub(l.atom, b) for l in w.condition if not l.negated)
                    rules.append((pre | cond, {_sub(l.atom, b) for l in w.body if not l.negated}))
    cost = {a: 0 for a in state}
    changed = True
    while changed:
        changed = False
        for pre, adds in rules:
            if all(p in cost for p in pre):
                c = 1 + sum(cost[p] for p in pre)
                for a in adds:
                    if c < cost.get(a, math.inf):
                        cost[a] = c
                        changed = True
    goal = task.positive_goal
    if all(g in state for g in goal):
        return 0
    return sum(cost.get(g, math.inf) for g in goal)
