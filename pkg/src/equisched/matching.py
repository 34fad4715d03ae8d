"""ESUP via bipartite matching, with release dates and parallel machines.

Left side: one vertex per (client, day) job.  Right side: one slot vertex
per (completion time, day, machine) and ``m - k`` "late" vertices per
client.  A job is joined to the slots in which it can complete on time and
to all late vertices of its client.  The instance is ``k``-equitable iff
every job can be matched.
"""

from __future__ import annotations

from bisect import bisect_left
from collections import deque
from dataclasses import dataclass

from .core import Instance, Solution, Variant

UNMATCHED = -1


@dataclass(frozen=True)
class EquityGraph:
    n: int
    m: int
    k: int
    left: tuple[tuple[int, int], ...]  # (client, day)
    slots: tuple[tuple[int, int, int], ...]  # (time, day, machine), 1-based time/machine
    late: tuple[tuple[int, int], ...]  # (client, ordinal), ordinal 1..m-k
    adj: tuple[tuple[int, ...], ...]  # left index -> right indices

    @property
    def n_right(self) -> int:
        return len(self.slots) + len(self.late)

    def left_index(self, client: int, day: int) -> int:
        return day * self.n + client

    def is_slot(self, right: int) -> bool:
        return right < len(self.slots)

    def right_label(self, right: int) -> tuple:
        if right < len(self.slots):
            return ("u",) + self.slots[right]
        return ("w",) + self.late[right - len(self.slots)]

    @property
    def n_edges(self) -> int:
        return sum(len(a) for a in self.adj)


@dataclass(frozen=True)
class Matching:
    pair_left: tuple[int, ...]  # right partner per left vertex or UNMATCHED

    @property
    def size(self) -> int:
        return sum(1 for r in self.pair_left if r != UNMATCHED)

    def pairs(self) -> list[tuple[int, int]]:
        return [(v, r) for v, r in enumerate(self.pair_left) if r != UNMATCHED]


def build_equity_graph(instance: Instance, k: int | None = None) -> EquityGraph:
    if instance.variant is not Variant.ESUP:
        raise ValueError("equity graph is defined for ESUP instances")
    if any(job.processing != 1 for day in instance.days for job in day.jobs):
        raise ValueError("equity graph needs unit processing times")
    k = instance.k if k is None else k
    n, m = instance.n, instance.m
    max_machines = max((day.machines for day in instance.days), default=1)
    slots = []
    slot_index = {}
    for j, day in enumerate(instance.days):
        top = max(job.deadline for job in day.jobs) if day.jobs else 0
        for t in range(1, top + 1):
            for x in range(1, max_machines + 1):
                slot_index[t, j, x] = len(slots)
                slots.append((t, j, x))
    late = [(i, ell) for i in range(n) for ell in range(1, m - k + 1)]
    base = len(slots)
    adj = []
    left = []
    for j, day in enumerate(instance.days):
        for i, job in enumerate(day.jobs):
            edges = [slot_index[t, j, x]
                     for t in range(job.release + 1, job.deadline + 1)
                     for x in range(1, day.machines + 1)]
            edges.extend(range(base + i * (m - k), base + (i + 1) * (m - k)))
            left.append((i, j))
            adj.append(tuple(edges))
    return EquityGraph(n, m, k, tuple(left), tuple(slots), tuple(late), tuple(adj))


def hopcroft_karp(graph: EquityGraph) -> Matching:
    """Maximum-cardinality matching by shortest augmenting paths in phases."""
    return Matching(tuple(max_bipartite_matching(graph.adj, graph.n_right)))


def max_bipartite_matching(adj, n_right: int) -> list[int]:
    """Hopcroft-Karp on a plain adjacency list; returns the right partner per left vertex."""
    n_left = len(adj)
    pair_l = [UNMATCHED] * n_left
    pair_r = [UNMATCHED] * n_right
    # greedy warm start; does not affect optimality
    for v in range(n_left):
        for r in adj[v]:
            if pair_r[r] == UNMATCHED:
                pair_l[v] = r
                pair_r[r] = v
                break
    inf = n_left + 1
    while True:
        dist = [inf] * n_left
        queue = deque()
        for v in range(n_left):
            if pair_l[v] == UNMATCHED:
                dist[v] = 0
                queue.append(v)
        found = inf
        while queue:
            v = queue.popleft()
            if dist[v] >= found:
                continue
            for r in adj[v]:
                w = pair_r[r]
                if w == UNMATCHED:
                    if found == inf:
                        found = dist[v] + 1
                elif dist[w] == inf:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        if found == inf:
            break
        cursor = [0] * n_left
        for root in range(n_left):
            if pair_l[root] != UNMATCHED:
                continue
            # iterative DFS along the layered graph
            stack = [root]
            while stack:
                v = stack[-1]
                edges = adj[v]
                advanced = False
                while cursor[v] < len(edges):
                    r = edges[cursor[v]]
                    cursor[v] += 1
                    w = pair_r[r]
                    if w == UNMATCHED:
                        if dist[v] + 1 == found:
                            # augment along the stack
                            for u in reversed(stack):
                                prev = pair_l[u]
                                pair_l[u] = r
                                pair_r[r] = u
                                r = prev
                            stack = []
                            advanced = True
                            break
                    elif dist[w] == dist[v] + 1:
                        stack.append(w)
                        advanced = True
                        break
                if not advanced:
                    dist[v] = inf
                    stack.pop()
    return pair_l


def augmenting_path_matching(graph: EquityGraph) -> Matching:
    """Reference maximum matching: one augmenting-path search per left vertex."""
    pair_l = [UNMATCHED] * len(graph.adj)
    pair_r = [UNMATCHED] * graph.n_right

    def augment(v, seen):
        for r in graph.adj[v]:
            if r in seen:
                continue
            seen.add(r)
            if pair_r[r] == UNMATCHED or augment(pair_r[r], seen):
                pair_l[v] = r
                pair_r[r] = v
                return True
        return False

    for v in range(len(graph.adj)):
        augment(v, set())
    return Matching(tuple(pair_l))


def normalize_matching(graph: EquityGraph, matching: Matching) -> Matching:
    """Compact matched slots downward and renumber late vertices.

    Per day and machine, each free slot takes the earliest later occupant
    that may complete there.  Without release dates this leaves the matched
    slots of every (day, machine) as a prefix.  Late vertices of a client are
    then reassigned in day order: the l-th late day uses ordinal l.
    """
    pair = list(matching.pair_left)
    slot_index = {label: r for r, label in enumerate(graph.slots)}
    occupant = {}
    for v, r in enumerate(pair):
        if r != UNMATCHED and graph.is_slot(r):
            occupant[r] = v
    by_day_machine: dict[tuple[int, int], list[int]] = {}
    for t, j, x in graph.slots:
        by_day_machine.setdefault((j, x), []).append(t)
    for (j, x), times in sorted(by_day_machine.items()):
        times.sort()
        for pos, t in enumerate(times):
            r = slot_index[t, j, x]
            if r in occupant:
                continue
            for later in times[pos + 1:]:
                r2 = slot_index[later, j, x]
                v = occupant.get(r2)
                if v is not None and _adjacent(graph.adj[v], r):
                    del occupant[r2]
                    occupant[r] = v
                    pair[v] = r
                    break
    base = len(graph.slots)
    width = graph.m - graph.k
    for i in range(graph.n):
        ordinal = 0
        for j in range(graph.m):
            v = graph.left_index(i, j)
            if pair[v] != UNMATCHED and not graph.is_slot(pair[v]):
                pair[v] = base + i * width + ordinal
                ordinal += 1
    return Matching(tuple(pair))


def _adjacent(edges: tuple[int, ...], r: int) -> bool:
    # adjacency tuples are sorted ascending by construction
    pos = bisect_left(edges, r)
    return pos < len(edges) and edges[pos] == r


def solution_from_matching(graph: EquityGraph, matching: Matching) -> Solution:
    satisfied: list[set[int]] = [set() for _ in range(graph.m)]
    slots: list[dict[int, tuple[int, int]]] = [{} for _ in range(graph.m)]
    for v, r in matching.pairs():
        if graph.is_slot(r):
            i, j = graph.left[v]
            t, _, x = graph.slots[r]
            satisfied[j].add(i)
            slots[j][i] = (t, x)
    return Solution(tuple(frozenset(s) for s in satisfied), tuple(slots))


def solve_esup(instance: Instance) -> Solution | None:
    """A k-equitable solution of an ESUP instance, or None when none exists."""
    graph = build_equity_graph(instance)
    matching = hopcroft_karp(graph)
    if matching.size < instance.n * instance.m:
        return None
    return solution_from_matching(graph, normalize_matching(graph, matching))
