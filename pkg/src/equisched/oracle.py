"""Exhaustive reference solver.

Every day picks one maximal realizable satisfied set; since realizability is
closed under taking subsets, restricting to maximal sets loses nothing.  The
search runs over days with few options first and skips enumerating the
options of the day with the most options: once every other day is fixed,
that last day only has to realize the clients that still need a day.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CapExceeded, Instance, Solution, Variant, cap_limit, realizable_set, verify_solution

DEFAULT_ORACLE_CAP = 5_000_000


@dataclass(frozen=True)
class DayOptionSet:
    """Maximal realizable subsets of ``pool`` on one day (an antichain)."""

    day: int
    pool: frozenset[int]
    options: tuple[frozenset[int], ...]


def _fits(instance: Instance, j: int, members) -> bool:
    day = instance.days[j]
    if instance.variant is Variant.ESPC:
        return realizable_set(day, instance.variant, day.closure(members))
    return realizable_set(day, instance.variant, members)


def _realize(instance: Instance, j: int, members) -> frozenset[int]:
    if instance.variant is Variant.ESPC:
        return instance.days[j].closure(members)
    return frozenset(members)


def _closed_sets_of_size(day, size: int):
    """Ancestor-closed client sets of exactly ``size`` elements.

    Over all clients these are the maximal realizable ESPC sets: a smaller
    closed set can always take one more job whose predecessors are all in.
    Clients are decided in topological order; excluding one rules out its
    descendants, and a branch is entered only if ``size`` is still reachable.
    """
    order = day.topological_order
    n = len(order)
    below = {}
    for v in reversed(order):
        mask = 1 << v
        for w in day.successors[v]:
            mask |= below[w]
        below[v] = mask
    later = [0] * (n + 1)
    for pos in range(n - 1, -1, -1):
        later[pos] = later[pos + 1] | 1 << order[pos]
    chosen: list[int] = []

    def walk(pos, blocked):
        if len(chosen) == size:
            yield frozenset(chosen)
            return
        v = order[pos]
        if not blocked >> v & 1:
            chosen.append(v)
            yield from walk(pos + 1, blocked)
            chosen.pop()
            blocked |= below[v]
        if len(chosen) + bin(later[pos + 1] & ~blocked).count("1") >= size:
            yield from walk(pos + 1, blocked)

    if size > n:
        return iter(())
    return walk(0, 0)


def iter_maximal_options(instance: Instance, j: int, pool=None):
    """Yield the maximal subsets of ``pool`` that can all be on time on day ``j``.

    For ESPC a subset counts as realizable when its ancestor closure is.
    """
    if instance.variant is Variant.ESPC and (pool is None or set(pool) >= set(range(instance.n))):
        day = instance.days[j]
        return _closed_sets_of_size(day, min(day.common_deadline, instance.n))
    pool = range(instance.n) if pool is None else pool
    candidates = [i for i in sorted(pool) if _fits(instance, j, (i,))]
    chosen: list[int] = []
    excluded: list[int] = []

    def walk(pos):
        reachable = chosen + candidates[pos:]
        if _fits(instance, j, reachable):
            # everything left fits: one completion, maximal unless an excluded client fits too
            if not any(_fits(instance, j, reachable + [c]) for c in excluded):
                yield frozenset(reachable)
            return
        c = candidates[pos]
        if _fits(instance, j, chosen + [c]):
            chosen.append(c)
            yield from walk(pos + 1)
            chosen.pop()
        # leaving ``c`` out is pointless if it still fits next to all that can follow
        excluded.append(c)
        rest = chosen + candidates[pos + 1:]
        if not any(_fits(instance, j, rest + [x]) for x in excluded):
            yield from walk(pos + 1)
        excluded.pop()

    return walk(0)


def maximal_options(instance: Instance, j: int, pool=None) -> DayOptionSet:
    pool = frozenset(range(instance.n) if pool is None else pool)
    return DayOptionSet(j, pool, tuple(iter_maximal_options(instance, j, pool)))


class _Budget:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def spend(self, what: str) -> None:
        self.used += 1
        if self.used > self.limit:
            raise CapExceeded(what, self.used, self.limit)


def _collect_options(instance: Instance, days: list[int], budget: _Budget):
    """Enumerate options of all but one day, round robin; the slowest day is left out.

    Returns (options per enumerated day, the left-out day or None).
    """
    if instance.starred:
        # identical days share one option list; the final day is still the shortcut day
        options = []
        for option in iter_maximal_options(instance, 0):
            budget.spend("oracle options")
            options.append(option)
        return {j: options for j in days}, None
    gens = {j: iter_maximal_options(instance, j) for j in days}
    found: dict[int, list[frozenset[int]]] = {j: [] for j in days}
    live = list(days)
    while len(live) > 1:
        for j in list(live):
            try:
                found[j].append(next(gens[j]))
                budget.spend("oracle options")
            except StopIteration:
                live.remove(j)
                if len(live) == 1:
                    break
    skipped = live[0] if live else None
    if skipped is not None:
        gens[skipped].close()
        del found[skipped]
    return found, skipped


def _interchangeable_groups(instance: Instance) -> list[list[int]]:
    """Clients whose jobs agree on every day (and touch no arc) are symmetric."""
    arc_clients = {u for day in instance.days for arc in day.precedence or () for u in arc}
    groups: dict = {}
    for i in range(instance.n):
        key = ("arc", i) if i in arc_clients else tuple(day.jobs[i] for day in instance.days)
        groups.setdefault(key, []).append(i)
    return list(groups.values())


def _decide_two_days(instance: Instance, k: int, budget: _Budget) -> Solution | None:
    """Two days: test options of either day against the other, alternating.

    Stops at the first success; when one day runs out of options every
    possibility has been checked.
    """
    n = instance.n
    days = (0,) if instance.starred else (0, 1)
    gens = {j: iter_maximal_options(instance, j) for j in days}
    while True:
        for j in days:
            option = next(gens[j], None)
            if option is None:
                return None
            budget.spend("oracle options")
            other = 1 - j
            if any(k - (i in option) > 1 for i in range(n)):
                continue
            wanted = frozenset(i for i in range(n) if k - (i in option) > 0)
            if _fits(instance, other, wanted):
                satisfied = [frozenset()] * 2
                satisfied[j] = _realize(instance, j, option)
                satisfied[other] = _realize(instance, other, wanted)
                solution = Solution(tuple(satisfied))
                report = verify_solution(instance, solution)
                if not (report.valid and report.min_count >= k):
                    raise AssertionError(f"oracle produced an invalid witness: {report}")
                return solution


def brute_force_decide(instance: Instance, k: int | None = None, cap: int | None = None) -> Solution | None:
    """A ``k``-equitable solution found by exhaustive search, or None if none exists.

    Raises:
        CapExceeded: more than ``cap`` options or search nodes were needed.
    """
    k = instance.k if k is None else k
    n, m = instance.n, instance.m
    if not 0 <= k <= m:
        raise ValueError(f"k={k} outside 0..{m}")
    if k == 0 or n == 0:
        return Solution.empty(m)
    budget = _Budget(cap if cap is not None else cap_limit(DEFAULT_ORACLE_CAP))
    if m == 2:
        return _decide_two_days(instance, k, budget)
    found, skipped = _collect_options(instance, list(range(m)), budget)

    if instance.starred:
        order = list(range(m - 1))
        last = m - 1
    else:
        order = sorted(found, key=lambda j: (len(found[j]), j))
        last = skipped
    options = [[sum(1 << i for i in option) for option in found[j]] for j in order]
    # remaining-day coverage bounds per client, for days order[pos:] plus the last day
    solo = [[_fits(instance, j, (i,)) for i in range(n)] for j in range(m)]
    cover_after = [[0] * n for _ in range(len(order) + 1)]
    for pos in range(len(order), -1, -1):
        for i in range(n):
            here = 0
            if pos < len(order):
                here = int(solo[order[pos]][i]) + cover_after[pos + 1][i]
            elif last is not None:
                here = int(solo[last][i])
            cover_after[pos][i] = here
    widest = [max((bin(o).count("1") for o in opts), default=0) for opts in options]
    width_after = [0] * (len(order) + 1)
    width_after[len(order)] = n if last is not None else 0
    for pos in range(len(order) - 1, -1, -1):
        width_after[pos] = widest[pos] + width_after[pos + 1]

    # load bound for ESSD: the cheapest processing of each client over the days left
    load_after: list[tuple[list[int], int] | None] = [None] * (len(order) + 1)
    if instance.variant is Variant.ESSD:
        tail_days = [last] if last is not None else []
        for pos in range(len(order), -1, -1):
            if pos < len(order):
                tail_days = [order[pos]] + tail_days
            cheapest = [min((instance.days[j].jobs[i].processing for j in tail_days), default=0) for i in range(n)]
            load_after[pos] = (cheapest, sum(instance.days[j].common_deadline for j in tail_days))
    groups = _interchangeable_groups(instance)

    def canonical(need):
        return tuple(tuple(sorted(need[i] for i in group)) for group in groups)

    failed: set = set()
    picks: list[int] = []

    def dfs(pos: int, need: tuple[int, ...]):
        budget.spend("oracle search nodes")
        if not any(need):
            return True
        if any(need[i] > cover_after[pos][i] for i in range(n)) or sum(need) > width_after[pos]:
            return False
        if load_after[pos] is not None:
            cheapest, capacity = load_after[pos]
            if sum(x * c for x, c in zip(need, cheapest)) > capacity:
                return False
        if pos == len(order):
            if last is None or max(need) > 1:
                return False
            wanted = frozenset(i for i in range(n) if need[i])
            return _realize(instance, last, wanted) if _fits(instance, last, wanted) else False
        key = (pos, canonical(need))
        if key in failed:
            return False
        wanted = sum(1 << i for i in range(n) if need[i])
        candidates = {}
        for idx, option in enumerate(options[pos]):
            candidates.setdefault(option & wanted, idx)
        # a choice covering a subset of another choice is never better
        sets = sorted(candidates, key=lambda s: -bin(s).count("1"))
        kept = []
        for s in sets:
            if not any(s & b == s for b in kept):
                kept.append(s)
        for useful in kept:
            picks.append(candidates[useful])
            result = dfs(pos + 1, tuple(x - (useful >> i & 1) if x else 0 for i, x in enumerate(need)))
            if result is not False:
                return result
            picks.pop()
        failed.add(key)
        return False

    outcome = dfs(0, tuple([k] * n))
    if outcome is False:
        return None
    satisfied = [frozenset()] * m
    for pos, idx in enumerate(picks):
        j = order[pos]
        satisfied[j] = _realize(instance, j, found[j][idx])
    if outcome is not True:
        satisfied[last] = outcome
    solution = Solution(tuple(satisfied))
    report = verify_solution(instance, solution)
    if not (report.valid and report.min_count >= k):
        raise AssertionError(f"oracle produced an invalid witness: {report}")
    return solution


def brute_force_max_k(instance: Instance, cap: int | None = None) -> tuple[int, Solution]:
    """Largest ``k`` admitting a ``k``-equitable solution, with a witness."""
    low, best = 0, Solution.empty(instance.m)
    high = instance.m
    while low < high:
        mid = (low + high + 1) // 2
        witness = brute_force_decide(instance, mid, cap)
        if witness is None:
            high = mid - 1
        else:
            low, best = mid, witness
    return low, best
