import random

from hypothesis import given, settings
from hypothesis import strategies as st

from equisched.core import Variant
from equisched.matching import (
    UNMATCHED,
    EquityGraph,
    augmenting_path_matching,
    build_equity_graph,
    hopcroft_karp,
    normalize_matching,
    solution_from_matching,
    solve_esup,
)
from equisched.oracle import brute_force_decide
from equisched.reductions import GeneratorSpec, generate_random

from helpers import assert_k_equitable, esup


def test_graph_single_client_single_day():
    g = build_equity_graph(esup([[1]], 1))
    assert (len(g.left), len(g.slots), len(g.late)) == (1, 1, 0)
    assert g.n_edges == 1


def test_graph_sizes_two_by_two():
    g = build_equity_graph(esup([[2, 2], [2, 2]], 1))
    assert (len(g.left), len(g.slots), len(g.late)) == (4, 4, 2)
    assert all(len(a) == 3 for a in g.adj)


def test_release_excludes_early_slots():
    g = build_equity_graph(esup([[2], [2]], 1, releases=[[1], [1]]))
    for day in range(2):
        v = g.left_index(0, day)
        slots = [g.right_label(r) for r in g.adj[v] if g.is_slot(r)]
        assert slots == [("u", 2, day, 1)]


def _raw_graph(adj, n_right):
    return EquityGraph(1, 1, 1, tuple((i, 0) for i in range(len(adj))),
                       tuple((t + 1, 0, 1) for t in range(n_right)), (), tuple(tuple(a) for a in adj))


def test_empty_graph_matching():
    assert hopcroft_karp(_raw_graph([], 0)).size == 0


def test_complete_bipartite_three():
    assert hopcroft_karp(_raw_graph([[0, 1, 2]] * 3, 3)).size == 3


def test_one_slot_per_day_leaves_jobs_unmatched():
    g = build_equity_graph(esup([[1, 1], [1, 1]], 2))
    assert hopcroft_karp(g).size == 2


def test_solve_examples():
    assert_k_equitable(inst := esup([[1, 2], [2, 1]], 1), solve_esup(inst))
    assert solve_esup(esup([[1, 1]], 1)) is None
    sol = solve_esup(esup([[1, 1, 1], [1, 1, 1]], 0))
    assert sol is not None


@st.composite
def esup_instances(draw, max_n=4, max_m=4):
    n, m = draw(st.integers(1, max_n)), draw(st.integers(1, max_m))
    spec = GeneratorSpec(Variant.ESUP, n, m, release_max=draw(st.integers(0, 2)),
                         machines=draw(st.integers(1, 2)))
    return generate_random(spec, draw(st.integers(0, 10**6)))


@settings(max_examples=120, deadline=None)
@given(esup_instances())
def test_matching_agrees_with_oracle(inst):
    got = solve_esup(inst)
    assert (got is None) == (brute_force_decide(inst) is None)
    if got is not None:
        assert_k_equitable(inst, got)


@settings(max_examples=120, deadline=None)
@given(esup_instances())
def test_matching_size_bound_and_reference(inst):
    g = build_equity_graph(inst)
    fast, slow = hopcroft_karp(g), augmenting_path_matching(g)
    assert fast.size == slow.size <= inst.n * inst.m
    assert (fast.size == inst.n * inst.m) == (solve_esup(inst) is not None)
    for v, r in fast.pairs():
        assert r in g.adj[v]
    assert len({r for _, r in fast.pairs()}) == fast.size


@settings(max_examples=120, deadline=None)
@given(esup_instances())
def test_normalization_keeps_size_and_left_side(inst):
    g = build_equity_graph(inst)
    before = hopcroft_karp(g)
    after = normalize_matching(g, before)
    assert after.size == before.size
    assert {v for v, _ in after.pairs()} == {v for v, _ in before.pairs()}
    for v, r in after.pairs():
        assert r in g.adj[v]
    if not any(day.has_release for day in inst.days):
        # matched slots of every (day, machine) form a prefix
        used = {g.slots[r] for _, r in after.pairs() if g.is_slot(r)}
        for t, day, machine in used:
            assert t == 1 or (t - 1, day, machine) in used
    if after.size == inst.n * inst.m:
        assert_k_equitable(inst, solution_from_matching(g, after))


def test_basic_graph_matches_plain_construction():
    rng = random.Random(5)
    for seed in range(30):
        inst = generate_random(GeneratorSpec(Variant.ESUP, rng.randint(1, 4), rng.randint(1, 4)), seed)
        g = build_equity_graph(inst)
        # v_{i,j} sees slots 1..d_{i,j} of its own day (deadlines past n add nothing)
        # plus the m-k late vertices of client i
        for (i, j), adj in zip(g.left, g.adj):
            d = min(inst.days[j].jobs[i].deadline, inst.n)
            expect = {("u", t, j, 1) for t in range(1, d + 1)}
            expect |= {("w", i, x) for x in range(1, inst.m - inst.k + 1)}
            assert {g.right_label(r) for r in adj} == expect


def test_unmatched_marker():
    assert UNMATCHED == -1
