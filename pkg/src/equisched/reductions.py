"""Hardness reductions into equitable scheduling, with maps in both directions.

Each ``reduce_*`` function returns a :class:`ReductionCertificate` holding
the produced instance plus what is needed to turn a schedule back into a
certificate for the source problem (:func:`pull_back`) and to turn a source
certificate into a schedule (:func:`push_forward`).  Small brute-force
deciders for the source problems and seeded instance generators live here
too.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field

from .core import CapExceeded, Day, Instance, Job, Solution, Variant, cap_limit, verify_solution
from .matching import UNMATCHED, max_bipartite_matching

DEFAULT_UNARY_CAP = 10_000


class ReductionError(ValueError):
    """Source instance outside the domain of a reduction."""


# --- source problems -------------------------------------------------------

@dataclass(frozen=True)
class Graph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ReductionError(f"bad edge {(u, v)} for {self.n} vertices")
            norm.append((min(u, v), max(u, v)))
        if len(set(norm)) != len(norm):
            raise ReductionError("graph has parallel edges")
        object.__setattr__(self, "edges", tuple(norm))

    def degree(self, v: int) -> int:
        return sum(v in e for e in self.edges)

    def neighbours(self, v: int) -> set[int]:
        return {u if w == v else w for u, w in self.edges if v in (u, w)}

    def is_regular(self, degree: int) -> bool:
        return all(self.degree(v) == degree for v in range(self.n))


@dataclass(frozen=True)
class BinPacking:
    sizes: tuple[int, ...]
    bins: int
    capacity: int

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(int(s) for s in self.sizes))
        if any(s < 1 for s in self.sizes) or self.bins < 1 or self.capacity < 1:
            raise ReductionError("sizes, bin count and capacity must be positive")


@dataclass(frozen=True)
class NaeFormula:
    """Monotone clauses of 2 or 3 distinct variables, each variable in exactly three."""

    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        object.__setattr__(self, "clauses", clauses)
        for c in clauses:
            if len(c) not in (2, 3) or len(set(c)) != len(c):
                raise ReductionError(f"clause {c} must hold 2 or 3 distinct variables")
            if any(not 0 <= x < self.n_vars for x in c):
                raise ReductionError(f"clause {c} uses an undeclared variable")
        for x in range(self.n_vars):
            count = sum(x in c for c in clauses)
            if count != 3:
                raise ReductionError(f"variable {x + 1} occurs {count} times, expected 3")

    def satisfied_by(self, assignment) -> bool:
        return all(len({bool(assignment[x]) for x in c}) == 2 for c in self.clauses)


# --- brute-force source deciders -------------------------------------------

def independent_set_of_size(g: Graph, size: int) -> frozenset[int] | None:
    edges = set(g.edges)
    for combo in itertools.combinations(range(g.n), size):
        if not any((u, v) in edges for u, v in itertools.combinations(combo, 2)):
            return frozenset(combo)
    return None


def clique_of_size(g: Graph, size: int) -> frozenset[int] | None:
    edges = set(g.edges)
    for combo in itertools.combinations(range(g.n), size):
        if all((u, v) in edges for u, v in itertools.combinations(combo, 2)):
            return frozenset(combo)
    return None


def pack_bins(bp: BinPacking) -> tuple[int, ...] | None:
    """Bin index per item, or None if the items do not fit."""
    order = sorted(range(len(bp.sizes)), key=lambda i: -bp.sizes[i])
    load = [0] * bp.bins
    where = [0] * len(bp.sizes)

    def place(pos):
        if pos == len(order):
            return True
        i = order[pos]
        tried = set()
        for b in range(bp.bins):
            if load[b] in tried or load[b] + bp.sizes[i] > bp.capacity:
                continue
            tried.add(load[b])  # bins with equal load are interchangeable
            load[b] += bp.sizes[i]
            where[i] = b
            if place(pos + 1):
                return True
            load[b] -= bp.sizes[i]
        return False

    return tuple(where) if place(0) else None


def nae_assignment(f: NaeFormula) -> tuple[bool, ...] | None:
    for bits in itertools.product((False, True), repeat=f.n_vars):
        if f.satisfied_by(bits):
            return bits
    return None


# --- certificates ----------------------------------------------------------

@dataclass(frozen=True)
class ReductionCertificate:
    kind: str
    source: object
    instance: Instance
    meta: dict = field(default_factory=dict, compare=False)
    degenerate: bool = False  # the produced instance is a fixed NO gadget
    added_days: tuple[int, ...] = ()


def _day(n: int, deadline: int, processing=None, arcs=None) -> Day:
    processing = processing or [1] * n
    return Day(tuple(Job(p, deadline) for p in processing), arcs)


def _path_arcs(path) -> list[tuple[int, int]]:
    return list(zip(path, path[1:]))


def reduce_independent_set(g: Graph, ell: int) -> ReductionCertificate:
    """ESSD instance with ``d = 3`` and ``k = 1`` that is feasible iff ``g`` has an
    independent set of size ``ell``."""
    if not g.is_regular(3):
        raise ReductionError("independent set reduction needs a 3-regular graph")
    if not 1 <= ell <= g.n:
        raise ReductionError(f"ell={ell} outside 1..{g.n}")
    nv, ne = g.n, len(g.edges)
    n = nv + ne
    days = []
    for i in range(nv):
        p = [3 if v == i else 4 for v in range(nv)]
        p += [1 if i in e else 4 for e in g.edges]
        days.append(_day(n, 3, p))
    extra = _day(n, 3, [3] * nv + [4] * ne)
    days += [extra] * (nv - ell)
    inst = Instance(Variant.ESSD, n, 2 * nv - ell, 1, tuple(days))
    return ReductionCertificate("independent-set", (g, ell), inst, {"vertex_clients": nv})


def reduce_bin_packing(bp: BinPacking) -> ReductionCertificate:
    """ESSD* instance: one day per bin, processing equal to item size, deadline the capacity."""
    n = len(bp.sizes)
    day = _day(n, bp.capacity, list(bp.sizes))
    inst = Instance(Variant.ESSD, n, bp.bins, 1, (day,) * bp.bins, starred=True)
    return ReductionCertificate("bin-packing", bp, inst)


def _no_gadget() -> Instance:
    # three isolated unit jobs, one slot per day, two days: never 1-equitable
    day = Day(tuple(Job(1, 1) for _ in range(3)), ())
    return Instance(Variant.ESPC, 3, 2, 1, (day, day))


def reduce_clique(g: Graph, h: int) -> ReductionCertificate:
    """Two-day ESPC instance, ``k = 1``, feasible iff ``g`` has a clique on ``h`` vertices.

    With fewer than ``h(h-1)/2`` edges no clique exists and the first day's
    deadline would drop below the number of vertex clients, so a fixed NO
    instance is returned instead (``degenerate=True``).
    """
    if not 2 <= h <= g.n:
        raise ReductionError(f"h={h} outside 2..{g.n}")
    pairs = math.comb(h, 2)
    nv, ne = g.n, len(g.edges)
    if ne < pairs:
        return ReductionCertificate("clique", (g, h), _no_gadget(), {"vertex_clients": nv}, degenerate=True)
    n = nv + ne
    arcs1 = _path_arcs(list(range(nv))) + [(nv - 1, nv + e) for e in range(ne)]
    arcs2 = [(v, nv + e) for e, edge in enumerate(g.edges) for v in edge]
    day1 = _day(n, nv + ne - pairs, arcs=arcs1)
    day2 = _day(n, h + pairs, arcs=arcs2)
    inst = Instance(Variant.ESPC, n, 2, 1, (day1, day2))
    return ReductionCertificate("clique", (g, h), inst, {"vertex_clients": nv})


def _nae_layout(f: NaeFormula):
    """Occurrence numbers and clause orders with each variable's matched clause last."""
    adj = [tuple(c for c, clause in enumerate(f.clauses) if x in clause) for x in range(f.n_vars)]
    match = max_bipartite_matching(adj, len(f.clauses))
    if any(c == UNMATCHED for c in match):
        raise ReductionError("no matching saturates the variables")
    occurrence = {}
    for x in range(f.n_vars):
        others = [c for c in adj[x] if c != match[x]]
        occurrence[x, others[0]] = 1
        occurrence[x, others[1]] = 2
        occurrence[x, match[x]] = 3
    owner = {c: x for x, c in enumerate(match)}
    ordered = []
    for c, clause in enumerate(f.clauses):
        if c in owner:
            clause = tuple(x for x in clause if x != owner[c]) + (owner[c],)
        ordered.append(clause)
    return occurrence, ordered


def nae_client(var: int, side: str, t: int) -> int:
    """Client index of occurrence ``t`` (1..3) of ``var`` on side "T" or "F"."""
    return 6 * var + (0 if side == "T" else 3) + t - 1


def reduce_nae_sat(f: NaeFormula) -> ReductionCertificate:
    """ESPC instance with ``d = 3``, ``k = 1`` and at most two paths per day,
    feasible iff ``f`` has a not-all-equal assignment.

    Clients not named on a day are appended to the end of that day's first
    path, so they can never be scheduled there.
    """
    occurrence, ordered = _nae_layout(f)
    a = f.n_vars
    n = 6 * a + 3
    dummy = (6 * a, 6 * a + 1, 6 * a + 2)

    def lit(x, side, c):
        return nae_client(x, side, occurrence[x, c])

    def make(first, second=()):
        rest = [i for i in range(n) if i not in set(first) | set(second)]
        return _day(n, 3, arcs=_path_arcs(list(first) + rest) + _path_arcs(list(second)))

    days = [make(dummy)]
    for x in range(a):
        days.append(make([nae_client(x, "F", t) for t in (1, 2, 3)], [nae_client(x, "T", t) for t in (1, 2, 3)]))
    two = [c for c in range(len(ordered)) if len(ordered[c]) == 2]
    three = [c for c in range(len(ordered)) if len(ordered[c]) == 3]
    clause_days = {}
    for c in two:
        x1, x2 = ordered[c]
        clause_days[c] = (len(days),)
        days.append(make([dummy[0], lit(x1, "T", c), lit(x2, "F", c)],
                         [dummy[1], lit(x1, "F", c), lit(x2, "T", c)]))
    for c in three:
        x1, x2, x3 = ordered[c]
        clause_days[c] = (len(days), len(days) + 1)
        days.append(make([lit(x1, "F", c), lit(x2, "F", c), lit(x3, "T", c)],
                         [lit(x1, "T", c), lit(x2, "T", c), lit(x3, "F", c)]))
        days.append(make([dummy[0], lit(x1, "F", c), lit(x2, "T", c)],
                         [dummy[1], lit(x1, "T", c), lit(x2, "F", c)]))
    inst = Instance(Variant.ESPC, n, len(days), 1, tuple(days))
    meta = {"occurrence": occurrence, "ordered": ordered, "clause_days": clause_days, "dummy": dummy}
    return ReductionCertificate("nae-sat", f, inst, meta)


def expand_to_espc_star(inst: Instance, unary_cap: int | None = None) -> ReductionCertificate:
    """Replace processing time ``p`` by a chain of ``p - 1`` unit dummy jobs
    ahead of the client's own unit job, on every (identical) day."""
    if inst.variant is not Variant.ESSD or not inst.starred:
        raise ReductionError("expansion needs a starred ESSD instance")
    processing = [job.processing for job in inst.days[0].jobs] if inst.m else [1] * inst.n
    extra = sum(p - 1 for p in processing)
    limit = unary_cap if unary_cap is not None else cap_limit(DEFAULT_UNARY_CAP)
    if extra > limit:
        raise CapExceeded("unary expansion (dummy clients)", extra, limit)
    arcs = []
    chains = []
    nxt = inst.n
    for i, p in enumerate(processing):
        chain = list(range(nxt, nxt + p - 1)) + [i]
        nxt += p - 1
        chains.append(chain)
        arcs += _path_arcs(chain)
    deadline = inst.days[0].common_deadline if inst.m else 1
    n = inst.n + extra
    day = _day(n, deadline, arcs=arcs)
    out = Instance(Variant.ESPC, n, inst.m, inst.k, (day,) * inst.m, starred=True)
    return ReductionCertificate("espc-star", inst, out, {"chains": chains, "clients": inst.n})


def _paths_of(day: Day) -> list[list[int]]:
    preds, succs = day.predecessors, day.successors
    if any(len(s) > 1 for s in preds) or any(len(s) > 1 for s in succs):
        raise ReductionError("precedence DAG is not a union of disjoint paths")
    paths = []
    for start in range(day.n):
        if preds[start]:
            continue
        path = [start]
        while succs[path[-1]]:
            path.append(next(iter(succs[path[-1]])))
        paths.append(path)
    return paths


def shorten_paths(inst: Instance) -> ReductionCertificate:
    """Rewrite an ESPC instance with ``d = 3``, ``k = 1`` and path DAGs so that
    every path has at most four jobs.

    Uses ``3n`` dummy clients and ``n`` added days.  Jobs at position five or
    later move to a fresh path behind three dummies; on added day ``t`` the
    dummies of path ``t`` can run while every original job sits fourth.
    """
    if inst.variant is not Variant.ESPC or inst.k != 1:
        raise ReductionError("path shortening needs an ESPC instance with k = 1")
    if any(day.common_deadline != 3 for day in inst.days):
        raise ReductionError("path shortening needs deadline 3 on every day")
    n0 = inst.n
    n = 4 * n0
    dummies = list(range(n0, n))
    days = []
    for day in inst.days:
        arcs = []
        free = iter(dummies)
        used = set()
        for path in _paths_of(day):
            arcs += _path_arcs(path[:4])
            for job in path[4:]:
                pad = [next(free) for _ in range(3)]
                used.update(pad)
                arcs += _path_arcs(pad + [job])
        rest = [x for x in dummies if x not in used]
        for start in range(0, len(rest), 4):
            arcs += _path_arcs(rest[start:start + 4])
        days.append(_day(n, 3, arcs=arcs))
    for t in range(n0):
        arcs = []
        for i in range(n0):
            arcs += _path_arcs(dummies[3 * i:3 * i + 3] + [i])
        days.append(_day(n, 3, arcs=arcs))
    out = Instance(Variant.ESPC, n, len(days), 1, tuple(days))
    added = tuple(range(inst.m, inst.m + n0))
    return ReductionCertificate("short-paths", inst, out, {"clients": n0}, added_days=added)


# --- maps between certificates and schedules -------------------------------

def _require_equitable(cert: ReductionCertificate, sol: Solution) -> None:
    report = verify_solution(cert.instance, sol)
    if not report.k_equitable:
        raise ValueError(f"solution is not {cert.instance.k}-equitable for the reduced instance")


def pull_back(cert: ReductionCertificate, sol: Solution):
    """Source certificate from a ``k``-equitable schedule of the reduced instance.

    Returns an independent set, a bin per item, a clique, a truth assignment,
    or (for the two ESPC rewrites) a solution of the original instance.

    Raises:
        ValueError: ``sol`` is not ``k``-equitable, or does not map to a valid
            source certificate.
    """
    _require_equitable(cert, sol)
    kind = cert.kind
    if kind == "independent-set":
        g, ell = cert.source
        chosen = frozenset(v for v in range(g.n) if v in sol.satisfied[v])
        if len(chosen) < ell or any(u in chosen and v in chosen for u, v in g.edges):
            raise ValueError("schedule does not yield an independent set")
        return chosen
    if kind == "bin-packing":
        bp = cert.source
        where = tuple(min(j for j, s in enumerate(sol.satisfied) if i in s) for i in range(len(bp.sizes)))
        loads = [0] * bp.bins
        for i, b in enumerate(where):
            loads[b] += bp.sizes[i]
        if max(loads, default=0) > bp.capacity:
            raise ValueError("schedule does not yield a packing")
        return where
    if kind == "clique":
        g, h = cert.source
        chosen = frozenset(v for v in sol.satisfied[1] if v < g.n)
        edges = set(g.edges)
        if len(chosen) != h or not all(e in edges for e in itertools.combinations(sorted(chosen), 2)):
            raise ValueError("schedule does not yield a clique")
        return chosen
    if kind == "nae-sat":
        f = cert.source
        assignment = tuple(nae_client(x, "F", 3) in sol.satisfied[1 + x] for x in range(f.n_vars))
        if not f.satisfied_by(assignment):
            raise ValueError("schedule does not yield a not-all-equal assignment")
        return assignment
    if kind in ("espc-star", "short-paths"):
        original = cert.source
        keep = cert.meta["clients"]
        days = sol.satisfied[:original.m]
        back = Solution(tuple(frozenset(i for i in s if i < keep) for s in days))
        report = verify_solution(original, back)
        if not report.k_equitable:
            raise ValueError("schedule does not restrict to a solution of the original instance")
        return back
    raise ValueError(f"unknown reduction kind {kind!r}")


def push_forward(cert: ReductionCertificate, certificate) -> Solution:
    """Schedule for the reduced instance built from a source certificate."""
    kind = cert.kind
    inst = cert.instance
    if cert.degenerate:
        raise ValueError("degenerate reduction has no solutions")
    if kind == "independent-set":
        g, ell = cert.source
        chosen = set(certificate)
        days: list[set[int]] = [set() for _ in range(inst.m)]
        for v in chosen:
            days[v].add(v)
        for slot, v in enumerate(sorted(set(range(g.n)) - chosen)):
            days[g.n + slot].add(v)
        for e, (u, v) in enumerate(g.edges):
            days[u if u not in chosen else v].add(g.n + e)
        return Solution(tuple(frozenset(s) for s in days))
    if kind == "bin-packing":
        days = [set() for _ in range(inst.m)]
        for i, b in enumerate(certificate):
            days[b].add(i)
        return Solution(tuple(frozenset(s) for s in days))
    if kind == "clique":
        g, h = cert.source
        chosen = set(certificate)
        inside = {g.n + e for e, (u, v) in enumerate(g.edges) if u in chosen and v in chosen}
        day1 = frozenset(range(inst.n)) - inside
        return Solution((day1, frozenset(chosen | inside)))
    if kind == "nae-sat":
        f = cert.source
        value = tuple(bool(b) for b in certificate)
        occ, ordered = cert.meta["occurrence"], cert.meta["ordered"]
        dummy = cert.meta["dummy"]

        def lit(x, side, c):
            return nae_client(x, side, occ[x, c])

        days = [frozenset(dummy)]
        for x in range(f.n_vars):
            side = "F" if value[x] else "T"
            days.append(frozenset(nae_client(x, side, t) for t in (1, 2, 3)))
        for c in [c for c in range(len(ordered)) if len(ordered[c]) == 2]:
            x1, x2 = ordered[c]
            if value[x1]:
                days.append(frozenset((dummy[0], lit(x1, "T", c), lit(x2, "F", c))))
            else:
                days.append(frozenset((dummy[1], lit(x1, "F", c), lit(x2, "T", c))))
        for c in [c for c in range(len(ordered)) if len(ordered[c]) == 3]:
            x1, x2, x3 = ordered[c]
            if value[x3]:
                days.append(frozenset((lit(x1, "F", c), lit(x2, "F", c), lit(x3, "T", c))))
            else:
                days.append(frozenset((lit(x1, "T", c), lit(x2, "T", c), lit(x3, "F", c))))
            if (not value[x1] and not value[x3]) or (value[x2] and value[x3]):
                days.append(frozenset((dummy[0], lit(x1, "F", c), lit(x2, "T", c))))
            else:
                days.append(frozenset((dummy[1], lit(x1, "T", c), lit(x2, "F", c))))
        return Solution(tuple(days))
    if kind == "espc-star":
        chains = cert.meta["chains"]
        return Solution(tuple(frozenset(x for i in s for x in chains[i]) for s in certificate.satisfied))
    if kind == "short-paths":
        n0 = cert.meta["clients"]
        days = list(certificate.satisfied)
        for t in range(n0):
            days.append(frozenset(range(n0 + 3 * t, n0 + 3 * t + 3)))
        return Solution(tuple(days))
    raise ValueError(f"unknown reduction kind {kind!r}")


# --- enumeration of small sources ------------------------------------------

def connected_cubic_graphs(max_vertices: int = 8) -> list[Graph]:
    """All connected 3-regular graphs on at most ``max_vertices`` vertices, up to isomorphism."""
    import networkx as nx

    found: list[Graph] = []
    for nv in range(4, max_vertices + 1, 2):
        reps: dict[str, list] = {}
        for edges in _labelled_cubic(nv):
            gx = nx.Graph(edges)
            if not nx.is_connected(gx):
                continue
            key = nx.weisfeiler_lehman_graph_hash(gx)
            bucket = reps.setdefault(key, [])
            if any(nx.is_isomorphic(gx, other) for other in bucket):
                continue
            bucket.append(gx)
            found.append(Graph(nv, tuple(sorted(edges))))
    return found


def _labelled_cubic(nv: int):
    # every cubic graph can be relabelled so that vertex 0 is adjacent to 1, 2, 3
    degree = [3, 1, 1, 1] + [0] * (nv - 4)
    edges: list[tuple[int, int]] = [(0, 1), (0, 2), (0, 3)]

    def extend(v):
        while v < nv and degree[v] == 3:
            v += 1
        if v == nv:
            yield list(edges)
            return
        lowest = max((w for u, w in edges if u == v), default=v)
        for w in range(lowest + 1, nv):
            if degree[w] < 3:
                degree[v] += 1
                degree[w] += 1
                edges.append((v, w))
                yield from extend(v)
                edges.pop()
                degree[v] -= 1
                degree[w] -= 1

    yield from extend(0)


def nae_formulas(max_vars: int = 4) -> list[NaeFormula]:
    """Every valid formula (clauses as a multiset, in canonical order) on 1..max_vars variables."""
    out = []
    for a in range(1, max_vars + 1):
        kinds = [c for size in (2, 3) for c in itertools.combinations(range(a), size)]

        def extend(pos, counts, chosen):
            if all(x == 3 for x in counts):
                out.append(NaeFormula(a, tuple(chosen)))
                return
            if pos == len(kinds):
                return
            clause = kinds[pos]
            extend(pos + 1, counts, chosen)
            taken = 0
            while all(counts[x] < 3 for x in clause):
                for x in clause:
                    counts[x] += 1
                chosen.append(clause)
                taken += 1
                extend(pos + 1, counts, chosen)
            for _ in range(taken):
                chosen.pop()
                for x in clause:
                    counts[x] -= 1

        extend(0, [0] * a, [])
    return out


def bin_packing_instances(max_items: int = 5, max_size: int = 4, max_bins: int = 3, max_capacity: int = 6):
    """Every multiset of item sizes with every bin count and capacity in range."""
    for count in range(1, max_items + 1):
        for sizes in itertools.combinations_with_replacement(range(1, max_size + 1), count):
            for bins in range(1, max_bins + 1):
                for capacity in range(1, max_capacity + 1):
                    yield BinPacking(sizes, bins, capacity)


def random_graph(n: int, density: float, rng: random.Random) -> Graph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < density]
    return Graph(n, tuple(edges))


# --- seeded instance generator ---------------------------------------------

@dataclass(frozen=True)
class GeneratorSpec:
    """Parameters for :func:`generate_random`.

    ``k=None`` draws ``k`` uniformly from ``0..m``.  ``max_paths`` and
    ``max_path_length`` shape ESPC DAGs; ``arc_clients`` bounds how many
    clients may touch an arc.
    """

    variant: Variant
    n: int
    m: int
    k: int | None = None
    p_max: int = 1
    d_min: int = 1
    d_max: int | None = None
    starred: bool = False
    release_max: int = 0
    machines: int = 1
    max_paths: int = 2
    max_path_length: int = 4
    arc_clients: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.n < 1 or self.m < 1:
            raise ValueError("n and m must be >= 1")
        if self.k is not None and not 0 <= self.k <= self.m:
            raise ValueError(f"k={self.k} outside 0..{self.m}")
        if self.p_max < 1 or self.d_min < 1 or (self.d_max is not None and self.d_max < self.d_min):
            raise ValueError("processing and deadline ranges must be non-empty and positive")
        if self.machines < 1 or self.release_max < 0 or self.max_paths < 0 or self.max_path_length < 1:
            raise ValueError("machines >= 1, release_max >= 0, paths >= 0, path length >= 1")
        if self.arc_clients is not None and not 0 <= self.arc_clients <= self.n:
            raise ValueError("arc_clients outside 0..n")


def generate_random(spec: GeneratorSpec, seed: int) -> Instance:
    rng = random.Random(seed)
    n, m, v = spec.n, spec.m, spec.variant
    d_max = spec.d_max if spec.d_max is not None else (n * spec.p_max if v is Variant.ESSD else n)
    k = spec.k if spec.k is not None else rng.randint(0, m)
    pool = list(range(n))
    if v is Variant.ESPC:
        size = spec.arc_clients if spec.arc_clients is not None else n
        pool = sorted(rng.sample(range(n), size))

    def one_day() -> Day:
        if v is Variant.ESSD:
            d = rng.randint(spec.d_min, d_max)
            return Day(tuple(Job(rng.randint(1, spec.p_max), d) for _ in range(n)))
        if v is Variant.ESPC:
            d = rng.randint(spec.d_min, d_max)
            order = pool[:]
            rng.shuffle(order)
            arcs = []
            for _ in range(rng.randint(0, spec.max_paths)):
                length = rng.randint(1, spec.max_path_length)
                path, order = order[:length], order[length:]
                arcs += _path_arcs(path)
            return Day(tuple(Job(1, d) for _ in range(n)), tuple(arcs))
        jobs = []
        for _ in range(n):
            r = rng.randint(0, spec.release_max)
            d = rng.randint(max(spec.d_min, r + 1), max(d_max, r + 1))
            p = 1 if v is Variant.ESUP else rng.randint(1, spec.p_max)
            jobs.append(Job(p, d, r))
        machines = spec.machines if v is Variant.ESUP else 1
        return Day(tuple(jobs), None, machines)

    days = (one_day(),) * m if spec.starred else tuple(one_day() for _ in range(m))
    return Instance(v, n, m, k, days, starred=spec.starred)
