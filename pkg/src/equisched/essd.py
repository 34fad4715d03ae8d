"""Exact algorithms for ESSD (one deadline per day, arbitrary processing times).

Three routes:

* :func:`solve_essd_dp_days` -- table over clients and per-day budgets,
  practical when the number of days is small.
* :func:`solve_essd_dp_clients` -- table over days and per-client counts,
  practical when the number of clients is small.
* :func:`build_essd_ilp` -- integer program over classes of equivalent days.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

from .core import CapExceeded, Instance, InstanceError, Solution, Variant, cap_limit
from .ip import IpModel, solve_ip

DEFAULT_TABLE_CAP = 5_000_000
DEFAULT_SIGNATURE_CLIENTS = 12


def _require_essd(instance: Instance) -> None:
    if instance.variant is not Variant.ESSD:
        raise InstanceError(f"expected an ESSD instance, got {instance.variant.value}")


def _processing(instance: Instance) -> list[list[int]]:
    return [[day.jobs[i].processing for day in instance.days] for i in range(instance.n)]


def _deadlines(instance: Instance) -> list[int]:
    return [day.common_deadline for day in instance.days]


class DayBudgetTable:
    """Entry ``(i, b)``: clients ``0..i-1`` can each get exactly ``k`` days
    with the load of day ``j`` at most ``b[j]``.

    Budgets are packed in mixed radix over ``d_j + 1``.  True entries keep the
    chosen day subset of client ``i - 1`` for traceback.
    """

    def __init__(self, instance: Instance, cap: int | None = None):
        _require_essd(instance)
        self.instance = instance
        self.deadlines = _deadlines(instance)
        self.p = _processing(instance)
        self.radix = [d + 1 for d in self.deadlines]
        size = math.prod(self.radix) * (instance.n + 1)
        limit = cap if cap is not None else cap_limit(DEFAULT_TABLE_CAP)
        if size > limit:
            raise CapExceeded("day-budget table", size, limit)
        self.combos = list(itertools.combinations(range(instance.m), instance.k))
        self.witness: dict[tuple[int, tuple[int, ...]], tuple[int, ...] | None] = {}

    def value(self, i: int, budgets: tuple[int, ...]) -> bool:
        budgets = tuple(budgets)
        if i == 0:
            return True
        key = (i, budgets)
        if key in self.witness:
            return self.witness[key] is not None
        # iterative deepening over clients avoids recursion limits
        self._fill(i, budgets)
        return self.witness[key] is not None

    def _fill(self, i: int, budgets: tuple[int, ...]) -> None:
        stack = [(i, budgets, 0)]
        while stack:
            ci, b, pos = stack.pop()
            if (ci, b) in self.witness:
                continue
            p = self.p[ci - 1]
            chosen = None
            pending = None
            while pos < len(self.combos):
                combo = self.combos[pos]
                if all(p[x] <= b[x] for x in combo):
                    rest = list(b)
                    for x in combo:
                        rest[x] -= p[x]
                    rest = tuple(rest)
                    if ci - 1 == 0:
                        chosen = combo
                        break
                    sub = self.witness.get((ci - 1, rest), "todo")
                    if sub == "todo":
                        pending = (ci - 1, rest)
                        break
                    if sub is not None:
                        chosen = combo
                        break
                pos += 1
            if pending is not None:
                stack.append((ci, b, pos))
                stack.append((pending[0], pending[1], 0))
                continue
            self.witness[ci, b] = chosen

    def traceback(self) -> list[tuple[int, ...]] | None:
        n = self.instance.n
        b = tuple(self.deadlines)
        if not self.value(n, b):
            return None
        picks = []
        for i in range(n, 0, -1):
            combo = self.witness[i, b]
            picks.append(combo)
            rest = list(b)
            for x in combo:
                rest[x] -= self.p[i - 1][x]
            b = tuple(rest)
        return picks[::-1]


def _solution_from_day_picks(instance: Instance, picks) -> Solution:
    satisfied: list[set[int]] = [set() for _ in range(instance.m)]
    for i, days in enumerate(picks):
        for j in days:
            satisfied[j].add(i)
    return Solution(tuple(frozenset(s) for s in satisfied))


def solve_essd_dp_days(instance: Instance, cap: int | None = None) -> Solution | None:
    """Decide ESSD with the table over per-day budgets; exactly ``k`` days per client."""
    table = DayBudgetTable(instance, cap)
    if instance.k == 0:
        return Solution.empty(instance.m)
    picks = table.traceback()
    return None if picks is None else _solution_from_day_picks(instance, picks)


def feasible_subsets(processing: list[int], deadline: int) -> list[int]:
    """Bitmasks of client subsets whose total processing fits, in binary order."""
    n = len(processing)
    out = []
    for mask in range(1 << n):
        total = 0
        for i in range(n):
            if mask >> i & 1:
                total += processing[i]
                if total > deadline:
                    break
        else:
            out.append(mask)
    return out


def solve_essd_dp_clients(instance: Instance, cap: int | None = None) -> Solution | None:
    """Decide ESSD with the table over days and per-client counts capped at ``k``."""
    _require_essd(instance)
    n, m, k = instance.n, instance.m, instance.k
    limit = cap if cap is not None else cap_limit(DEFAULT_TABLE_CAP)
    size = (k + 1) ** n * (m + 1)
    if size > limit or (1 << n) > limit:
        raise CapExceeded("client-count table", max(size, 1 << n), limit)
    if k == 0:
        return Solution.empty(m)
    weights = [(k + 1) ** i for i in range(n)]
    start = 0
    goal = sum(k * w for w in weights)
    layers: list[dict[int, tuple[int, int]]] = []
    frontier = {start: (-1, 0)}
    for day in instance.days:
        subsets = feasible_subsets([job.processing for job in day.jobs], day.common_deadline)
        nxt: dict[int, tuple[int, int]] = {}
        for state in frontier:
            counts = [state // w % (k + 1) for w in weights]
            for mask in subsets:
                new = state
                for i in range(n):
                    if mask >> i & 1 and counts[i] < k:
                        new += weights[i]
                if new not in nxt:
                    nxt[new] = (state, mask)
        layers.append(nxt)
        frontier = nxt
    if goal not in frontier:
        return None
    masks = []
    state = goal
    for layer in reversed(layers):
        state, mask = layer[state]
        masks.append(mask)
    masks.reverse()
    return Solution(tuple(frozenset(i for i in range(n) if mask >> i & 1) for mask in masks))


@dataclass(frozen=True)
class DayClass:
    """Days that admit exactly the same client subsets.

    Bit ``S`` of ``signature`` is set iff the jobs of subset ``S`` (a client
    bitmask) fit together before the deadline.
    """

    signature: int
    days: tuple[int, ...]

    def fits(self, mask: int) -> bool:
        return bool(self.signature >> mask & 1)


def day_equivalence_classes(instance: Instance, max_clients: int | None = None) -> list[DayClass]:
    _require_essd(instance)
    limit = max_clients if max_clients is not None else cap_limit(DEFAULT_SIGNATURE_CLIENTS)
    if instance.n > limit:
        raise CapExceeded("subset signatures (clients)", instance.n, limit)
    groups: dict[int, list[int]] = {}
    for j, day in enumerate(instance.days):
        signature = 0
        for mask in feasible_subsets([job.processing for job in day.jobs], day.common_deadline):
            signature |= 1 << mask
        groups.setdefault(signature, []).append(j)
    return [DayClass(sig, tuple(days)) for sig, days in groups.items()]


def build_essd_ilp(instance: Instance, classes: list[DayClass] | None = None) -> IpModel:
    """Integer program with one count variable per (day class, client subset).

    ``model.meta["vars"]`` maps (class index, subset mask) to variable index.
    """
    classes = day_equivalence_classes(instance) if classes is None else classes
    n, k = instance.n, instance.k
    model = IpModel(name="essd")
    index = {}
    for c, cls in enumerate(classes):
        # larger subsets first so that ascending value order leaves room for them
        for mask in range((1 << n) - 1, -1, -1):
            index[c, mask] = model.add_var(f"x_E{c + 1}_S{mask}", 0, len(cls.days))
    for c, cls in enumerate(classes):
        for mask in range((1 << n) - 1, -1, -1):
            if not cls.fits(mask):
                model.add_constraint({index[c, mask]: 1}, "=", 0, f"over_E{c + 1}_S{mask}")
    for i in range(n):
        coeffs = {index[c, mask]: 1 for c in range(len(classes)) for mask in range(1 << n) if mask >> i & 1}
        model.add_constraint(coeffs, ">=", k, f"cover_{i + 1}")
    for c, cls in enumerate(classes):
        model.add_constraint({index[c, mask]: 1 for mask in range(1 << n)}, "=", len(cls.days), f"days_E{c + 1}")
    model.meta = {"kind": "essd", "classes": classes, "vars": index}
    return model


def solution_from_essd_assignment(instance: Instance, model: IpModel, assignment: dict[str, int]) -> Solution:
    satisfied: list[frozenset[int]] = [frozenset()] * instance.m
    classes = model.meta["classes"]
    for c, cls in enumerate(classes):
        free = list(cls.days)
        for mask in range((1 << instance.n) - 1, -1, -1):
            count = assignment[model.variables[model.meta["vars"][c, mask]].name]
            members = frozenset(i for i in range(instance.n) if mask >> i & 1)
            for _ in range(count):
                satisfied[free.pop(0)] = members
        if free:
            raise AssertionError("class totals not met by assignment")
    return Solution(tuple(satisfied))


def solve_essd_ilp(instance: Instance) -> Solution | None:
    model = build_essd_ilp(instance)
    assignment = solve_ip(model)
    if assignment is None:
        return None
    return solution_from_essd_assignment(instance, model, assignment)
