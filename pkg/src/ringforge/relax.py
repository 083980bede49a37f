"""Delete-relaxed reachability costs computed lifted.

Facts are finalised in cost order (generalised Dijkstra). When a fact is
finalised, only rule instances that use it are joined against the facts
finalised so far, so each instance fires once, when its last precondition
arrives. Instances that cannot beat the current bound on an unfinalised
target are pruned mid-join; this leaves the target costs exact.

Rules are compiled so that bindings are flat lists indexed by variable slot.
"""

from __future__ import annotations

import heapq
import itertools
import math
from operator import itemgetter
from typing import Callable, Iterable, Optional

from .pddl.model import Task, is_var
from .pddl.semantics import FactIndex, join_order

INF = math.inf


def _template(atom, slots):
    """(pred, ((is_slot, slot_or_const), ...)) for fast substitution."""
    return atom[0], tuple((True, slots[t]) if is_var(t) else (False, t) for t in atom[1:])


def _inst(tpl, b):
    pred, args = tpl
    return (pred,) + tuple(b[s] if v else s for v, s in args)


class _Rule:
    __slots__ = ("schema", "pos", "adds", "enum", "param_slots", "nslots")

    def __init__(self, schema, pos, adds, enum_vars, slots):
        self.schema = schema
        self.pos = pos
        self.adds = tuple(_template(a, slots) for a in adds)
        self.enum = tuple(slots[v] for v in enum_vars)
        self.param_slots = tuple(slots[p] for p in schema.params)
        self.nslots = len(slots)


def _keyfn(src):
    """Compile the lookup-key builder for one join step."""
    if not src:
        return None
    if all(v for v, _ in src):
        slots = [s for _, s in src]
        if len(slots) == 1:
            only = slots[0]
            return lambda b: (b[only],)
        return itemgetter(*slots)
    if not any(v for v, _ in src):
        const = tuple(s for _, s in src)
        return lambda b: const
    return lambda b: tuple(b[s] if v else s for v, s in src)


class _Seed:
    __slots__ = ("rule", "unify", "steps", "earlier")

    def __init__(self, rule, i, slots, empty):
        self.rule = rule
        lit = rule.pos[i]
        binds, consts, checks, first = [], [], [], {}
        for p, t in enumerate(lit[1:], start=1):
            if not is_var(t):
                consts.append((p, t))
            elif t in first:
                checks.append((p, first[t]))
            else:
                first[t] = p
                binds.append((slots[t], p))
        self.unify = (tuple(binds), tuple(consts), tuple(checks))
        rest = rule.pos[:i] + rule.pos[i + 1:]
        known = set(first)
        steps = []
        for atom in join_order(rest, empty, list(first)):
            positions, src, chk, bnd, seen = [], [], [], [], {}
            for p, t in enumerate(atom[1:], start=1):
                if not is_var(t):
                    positions.append(p)
                    src.append((False, t))
                elif t in known:
                    positions.append(p)
                    src.append((True, slots[t]))
                elif t in seen:
                    chk.append((p, seen[t]))
                else:
                    seen[t] = p
                    bnd.append((slots[t], p))
            known.update(seen)
            steps.append((atom[0], tuple(positions), _keyfn(tuple(src)), tuple(chk), tuple(bnd)))
        self.steps = tuple(steps)
        self.earlier = tuple(_template(rule.pos[j], slots) for j in range(i)
                             if rule.pos[j][0] == lit[0])


def _compile(task: Task, full_params: bool):
    cache = task.__dict__.setdefault("_relax_cache", {})
    if full_params in cache:
        return cache[full_params]
    rules = []
    for schema in sorted(task.domain.actions, key=lambda a: a.name):
        pre = schema.positive_pre
        variants = {}
        base_adds = []
        for o in schema.outcomes:
            base_adds.extend(o.adds)
            for w in o.whens:
                cond = tuple(l.atom for l in w.condition if not l.negated)
                body = tuple(l.atom for l in w.body if not l.negated)
                if body:
                    variants.setdefault(cond, []).extend(body)
        for cond, adds in [((), base_adds)] + sorted(variants.items()):
            adds = tuple(dict.fromkeys(adds))
            if not adds:
                continue
            pos = tuple(dict.fromkeys(pre + cond))
            slots = {p: k for k, p in enumerate(schema.params)}
            covered = {t for a in pos for t in a[1:] if is_var(t)}
            wanted = schema.params if full_params else tuple(
                dict.fromkeys(t for a in adds for t in a[1:] if is_var(t)))
            enum = tuple(v for v in wanted if v not in covered)
            rules.append(_Rule(schema, pos, adds, enum, slots))
    by_pred: dict[str, list] = {}
    empty = FactIndex()
    for r in rules:
        slots = {p: k for k, p in enumerate(r.schema.params)}
        for i, lit in enumerate(r.pos):
            by_pred.setdefault(lit[0], []).append(_Seed(r, i, slots, empty))
    cache[full_params] = (rules, by_pred)
    return rules, by_pred


def relaxed_costs(
    state,
    task: Task,
    targets: Iterable,
    exclude: Optional[Callable] = None,
    mode: str = "all",
) -> dict:
    """Relaxed additive costs of ``targets`` from ``state``.

    ``mode="all"`` finalises every target (unreachable ones map to ``inf``);
    ``mode="any"`` stops at the first finalised target. ``exclude(schema,
    args)`` removes ground actions from the relaxation.
    """
    targets = tuple(dict.fromkeys(targets))
    target_set = set(targets)
    rules, by_pred = _compile(task, exclude is not None)
    objects = sorted(task.objects)
    tentative = dict.fromkeys(state, 0)
    final: dict = {}
    index = FactIndex()
    lookup = index.lookup
    heap = [(0, a) for a in state]
    heapq.heapify(heap)
    pick = max if mode == "all" else min
    limit = [INF]

    def refresh():
        open_ = [tentative.get(t, INF) for t in targets if t not in final]
        limit[0] = pick(open_) if open_ else -INF

    def fire(rule, b, total):
        if rule.enum:
            combos = itertools.product(objects, repeat=len(rule.enum))
        else:
            combos = ((),)
        touched = False
        for combo in combos:
            for s, o in zip(rule.enum, combo):
                b[s] = o
            if exclude is not None and exclude(rule.schema, tuple(b[s] for s in rule.param_slots)):
                continue
            for pred, args in rule.adds:
                atom = (pred,) + tuple(b[s] if v else s for v, s in args)
                if total < tentative.get(atom, INF):
                    tentative[atom] = total
                    heapq.heappush(heap, (total, atom))
                    if atom in target_set:
                        touched = True
        if touched:
            refresh()

    tables = {}
    by_pred_atoms = index.by_pred

    def run(seed, steps, k, b, used, acc, fact):
        if acc + 1 >= limit[0]:
            return
        if k == len(steps):
            for tpl in seed.earlier:
                if _inst(tpl, b) == fact:
                    return
            fire(seed.rule, b, acc + 1)
            return
        pred, positions, keyfn, checks, binds = steps[k]
        if keyfn is None:
            candidates = by_pred_atoms.get(pred, ())
        else:
            table = tables.get((pred, positions))
            if table is None:
                table = tables[(pred, positions)] = index.table(pred, positions)
            candidates = table.get(keyfn(b), ())
        last = k + 1 == len(steps)
        for atom in candidates:
            if checks and any(atom[i] != atom[j] for i, j in checks):
                continue
            for s, p in binds:
                b[s] = atom[p]
            extra = 0 if atom in used else final[atom]
            if last:
                if acc + extra + 1 >= limit[0]:
                    continue
                if seed.earlier and any(_inst(tpl, b) == fact for tpl in seed.earlier):
                    continue
                fire(seed.rule, b, acc + extra + 1)
            elif extra or atom not in used:
                used.add(atom)
                run(seed, steps, k + 1, b, used, acc + extra, fact)
                used.discard(atom)
            else:
                run(seed, steps, k + 1, b, used, acc, fact)

    refresh()
    for rule in rules:
        if not rule.pos:
            fire(rule, [None] * rule.nslots, 1)

    while heap:
        c, fact = heapq.heappop(heap)
        if fact in final:
            continue
        if c >= limit[0]:
            # nothing cheaper than the bound can still arrive
            for t in targets:
                if t not in final and tentative.get(t, INF) <= c:
                    final[t] = tentative[t]
            break
        final[fact] = c
        index.add(fact)
        if fact in target_set:
            refresh()
            if mode == "any" or limit[0] == -INF:
                break
        for seed in by_pred.get(fact[0], ()):
            binds, consts, checks = seed.unify
            if any(fact[p] != v for p, v in consts) or any(fact[i] != fact[j] for i, j in checks):
                continue
            b = [None] * seed.rule.nslots
            for s, p in binds:
                b[s] = fact[p]
            run(seed, seed.steps, 0, b, {fact}, c, fact)
    return {t: final.get(t, INF) for t in targets}


def h_add(state, task: Task, exclude=None) -> float:
    """Sum of relaxed costs of the positive goal atoms (``inf`` if any is unreachable)."""
    goal = task.positive_goal
    if all(g in state for g in goal):
        return 0
    costs = relaxed_costs(state, task, goal, exclude)
    return sum(costs.values())
