import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equisched.core import (
    Day,
    Instance,
    InstanceError,
    Job,
    Solution,
    Variant,
    canonical_permutation,
    certifies,
    completion_times,
    moore_hodgson,
    realizable_set,
    verify_solution,
)

from helpers import esup, essd, espc


# --- realizable_set ----------------------------------------------------------

def test_essd_single_client_fitting_the_deadline():
    day = Day((Job(3, 3), Job(4, 3)))
    assert realizable_set(day, Variant.ESSD, {0})
    assert not realizable_set(day, Variant.ESSD, {1})


@pytest.mark.parametrize("variant", [Variant.ESUP, Variant.ESSD, Variant.ESPC, Variant.GENERAL])
def test_empty_set_is_realizable(variant):
    day = Day((Job(1, 1), Job(1, 1)), () if variant is Variant.ESPC else None)
    assert realizable_set(day, variant, set())


def test_espc_needs_predecessor():
    day = Day((Job(1, 1), Job(1, 1)), ((0, 1),))
    assert not realizable_set(day, Variant.ESPC, {1})
    assert realizable_set(day, Variant.ESPC, {0})


def test_esup_slot_condition():
    day = Day((Job(1, 1), Job(1, 1), Job(1, 3)))
    assert realizable_set(day, Variant.ESUP, {0, 2})
    assert not realizable_set(day, Variant.ESUP, {0, 1})


def test_esup_release_and_machines():
    day = Day((Job(1, 2, 1), Job(1, 2, 1)), None, 2)
    assert realizable_set(day, Variant.ESUP, {0, 1})
    one_machine = Day((Job(1, 2, 1), Job(1, 2, 1)))
    assert not realizable_set(one_machine, Variant.ESUP, {0, 1})


def test_general_day_uses_permutation_search():
    # EDF order fails here only if processing times are ignored
    day = Day((Job(2, 2), Job(1, 3), Job(1, 3)))
    assert realizable_set(day, Variant.GENERAL, {0, 1})
    assert not realizable_set(day, Variant.GENERAL, {0, 1, 2})


# --- canonical_permutation ---------------------------------------------------

def test_esup_permutation_puts_tighter_deadline_first():
    day = Day((Job(1, 2), Job(1, 1)))
    assert canonical_permutation(day, Variant.ESUP, {0, 1})[0] == 1


def test_espc_permutation_on_a_path():
    day = Day((Job(1, 2),) * 3, ((0, 1), (1, 2)))
    assert canonical_permutation(day, Variant.ESPC, {0, 1}) == (0, 1, 2)


def test_essd_permutation_schedules_members_first():
    day = Day((Job(1, 3), Job(4, 3), Job(1, 3)))
    order = canonical_permutation(day, Variant.ESSD, {0, 2})
    assert set(order[:2]) == {0, 2}
    times = completion_times(day, order)
    assert times[0] <= 3 and times[2] <= 3


def test_permutation_of_unrealizable_set_raises():
    day = Day((Job(2, 2), Job(2, 2)))
    with pytest.raises(ValueError):
        canonical_permutation(day, Variant.ESSD, {0, 1})


# --- moore_hodgson -------------------------------------------------------------

@pytest.mark.parametrize("jobs, size", [
    ([(2, 2), (1, 2)], 1),
    ([(1, 1)], 1),
    ([(1, 3), (1, 3), (1, 3)], 3),
    ([], 0),
])
def test_moore_hodgson_examples(jobs, size):
    assert len(moore_hodgson(jobs)) == size


def _best_on_time(jobs):
    best = 0
    for order in itertools.permutations(range(len(jobs))):
        t = hits = 0
        for i in order:
            t += jobs[i][0]
            hits += t <= jobs[i][1]
        best = max(best, hits)
    return best


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(st.integers(1, 5), st.integers(1, 12)), max_size=6))
def test_moore_hodgson_is_optimal(jobs):
    chosen = moore_hodgson(jobs)
    assert len(chosen) == _best_on_time(jobs)
    # the returned set is itself schedulable in EDF order
    t = 0
    for i in sorted(chosen, key=lambda i: jobs[i][1]):
        t += jobs[i][0]
        assert t <= jobs[i][1]


# --- verify_solution -----------------------------------------------------------

def test_verify_two_days_both_satisfied():
    inst = esup([[1], [1]], 2)
    assert verify_solution(inst, Solution((frozenset({0}), frozenset({0})))).k_equitable


def test_verify_one_day_short():
    inst = esup([[1], [1]], 2)
    report = verify_solution(inst, Solution((frozenset({0}), frozenset())))
    assert not report.k_equitable
    assert report.counts == (1,)


def test_verify_bin_packing_witness():
    from equisched.reductions import BinPacking, pack_bins, push_forward, reduce_bin_packing

    bp = BinPacking((2, 1, 1), 2, 2)
    cert = reduce_bin_packing(bp)
    sol = push_forward(cert, pack_bins(bp))
    assert verify_solution(cert.instance, sol).k_equitable


def test_unrealizable_day_counts_for_nobody():
    inst = essd([(2, (2, 2)), (2, (2, 2))], 1)
    report = verify_solution(inst, Solution((frozenset({0, 1}), frozenset({1}))))
    assert report.invalid_days == (0,)
    assert report.counts == (0, 1)
    assert not report.k_equitable


def test_solution_with_wrong_day_count_rejected():
    inst = esup([[1], [1]], 1)
    with pytest.raises(ValueError):
        verify_solution(inst, Solution((frozenset({0}),)))


# --- instance validation ---------------------------------------------------------

def test_cyclic_precedence_rejected():
    with pytest.raises(InstanceError):
        espc(2, [(2, [(0, 1), (1, 0)])], 1)


def test_esup_requires_unit_jobs():
    with pytest.raises(InstanceError):
        Instance(Variant.ESUP, 1, 1, 1, (Day((Job(2, 2),)),))


def test_essd_requires_common_deadline():
    with pytest.raises(InstanceError):
        Instance(Variant.ESSD, 2, 1, 1, (Day((Job(1, 2), Job(1, 3))),))


def test_k_out_of_range():
    with pytest.raises(InstanceError):
        esup([[1]], 2)


# --- properties ----------------------------------------------------------------

@st.composite
def essd_days(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    d = draw(st.integers(1, 8))
    return Day(tuple(Job(draw(st.integers(1, 5)), d) for _ in range(n)))


@st.composite
def esup_days(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    jobs = []
    for _ in range(n):
        r = draw(st.integers(0, 2))
        jobs.append(Job(1, draw(st.integers(r + 1, r + 4)), r))
    return Day(tuple(jobs), None, draw(st.integers(1, 2)))


@st.composite
def espc_days(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    arcs = [(u, v) for u in range(n) for v in range(u + 1, n) if draw(st.booleans())]
    perm = draw(st.permutations(range(n)))
    d = draw(st.integers(1, n))
    return Day(tuple(Job(1, d) for _ in range(n)),
               tuple((perm[u], perm[v]) for u, v in arcs))


def _subsets(n):
    return [frozenset(c) for r in range(n + 1) for c in itertools.combinations(range(n), r)]


@settings(max_examples=80, deadline=None)
@given(st.one_of(essd_days().map(lambda d: (Variant.ESSD, d)),
                 esup_days().map(lambda d: (Variant.ESUP, d)),
                 espc_days().map(lambda d: (Variant.ESPC, d))))
def test_canonical_permutation_certifies_every_realizable_set(case):
    variant, day = case
    for members in _subsets(day.n):
        if realizable_set(day, variant, members):
            order = canonical_permutation(day, variant, members)
            assert sorted(order) == list(range(day.n))
            assert certifies(day, order, members)


@settings(max_examples=80, deadline=None)
@given(st.one_of(essd_days().map(lambda d: (Variant.ESSD, d)),
                 esup_days().map(lambda d: (Variant.ESUP, d)),
                 espc_days().map(lambda d: (Variant.ESPC, d))))
def test_realizable_sets_are_downward_closed(case):
    variant, day = case
    good = [s for s in _subsets(day.n) if realizable_set(day, variant, s)]
    for s in good:
        for i in s:
            smaller = s - {i}
            if variant is Variant.ESPC and not day.is_closed(smaller):
                continue
            assert realizable_set(day, variant, smaller)


@settings(max_examples=60, deadline=None)
@given(essd_days(), st.data())
def test_report_ignores_order_of_equal_processing_clients(day, data):
    members = frozenset(i for i in range(day.n) if data.draw(st.booleans()))
    if not realizable_set(day, Variant.ESSD, members):
        return
    order = list(canonical_permutation(day, Variant.ESSD, members))
    # swap two members with equal processing time and recheck
    for a, b in itertools.combinations(range(len(members)), 2):
        if day.jobs[order[a]].processing == day.jobs[order[b]].processing:
            order[a], order[b] = order[b], order[a]
            break
    assert certifies(day, order, members)
    inst = Instance(Variant.ESSD, day.n, 1, 0, (day,))
    report = verify_solution(inst, Solution((members,)))
    assert report.counts == tuple(int(i in members) for i in range(day.n))
