import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equisched.approx import (
    StarInstance,
    approx_essd_star,
    approx_large_k,
    approx_small_k,
    large_k_prime,
    small_k_prime,
)
from equisched.core import InstanceError
from equisched.oracle import brute_force_decide

from helpers import assert_k_equitable, essd


def test_k_zero_returns_empty_schedule():
    result = approx_essd_star(StarInstance((2, 3), 4, 3, 0))
    assert result.k_prime == 0
    assert all(not s for s in result.solution.satisfied)


def test_two_clients_six_days():
    inst = StarInstance((2, 2), 6, 2, 3)
    result = approx_essd_star(inst)
    assert result.k_prime == 2
    assert_k_equitable(inst.to_instance(), result.solution, 2)


def test_small_k_block_trace():
    result = approx_small_k(StarInstance((2, 2), 6, 2, 3))
    assert result.solution.satisfied[:4] == (frozenset({0}),) * 2 + (frozenset({1}),) * 2


def test_two_large_clients_three_days():
    inst = StarInstance((1, 1), 3, 2, 3)
    result = approx_essd_star(inst)
    assert 2 * inst.k > inst.m
    assert result.k_prime == 2
    assert_k_equitable(inst.to_instance(), result.solution, 2)


def test_small_k_with_zero_target():
    result = approx_small_k(StarInstance((2,), 3, 2, 1))
    assert result.k_prime == 0 and not result.failed


def test_three_full_clients():
    assert approx_small_k(StarInstance((3, 3, 3), 2, 3, 1)).k_prime == 0
    inst = StarInstance((3, 3, 3), 6, 3, 3)
    result = approx_small_k(inst)
    assert result.k_prime == 2
    assert_k_equitable(inst.to_instance(), result.solution, 2)
    assert all(len(s) == 1 for s in result.solution.satisfied)


def test_single_large_client():
    inst = StarInstance((1,), 2, 1, 2)
    result = approx_large_k(inst)
    assert result.k_prime == 1
    assert_k_equitable(inst.to_instance(), result.solution, 1)


def test_large_k_step_three_trace():
    result = approx_large_k(StarInstance((1, 1), 3, 2, 3))
    assert result.k_prime == 2
    assert sorted(len(s) for s in result.solution.satisfied) == [1, 1, 2]


def test_four_large_clients_fail():
    inst = StarInstance((2, 2, 2, 2), 2, 2, 2)
    result = approx_essd_star(inst)
    assert result.failed
    assert brute_force_decide(inst.to_instance()) is None


def test_oversized_client_fails():
    assert approx_essd_star(StarInstance((4, 1), 6, 3, 3)).reason == "oversized-client"


def test_window_constants():
    assert [small_k_prime(k) for k in range(7)] == [0, 0, 0, 2, 2, 2, 4]
    assert [large_k_prime(k) for k in range(7)] == [0, 0, 1, 2, 2, 3, 4]


def test_from_instance_requires_starred():
    with pytest.raises(InstanceError):
        StarInstance.from_instance(essd([(2, (1, 1)), (3, (1, 1))], 1))
    star = StarInstance.from_instance(essd([(3, (1, 2))] * 2, 1, starred=True))
    assert star == StarInstance((1, 2), 2, 3, 1)


@st.composite
def star_instances(draw, max_n=6, max_m=8, max_d=7):
    d = draw(st.integers(1, max_d))
    p = tuple(draw(st.lists(st.integers(1, d), min_size=1, max_size=max_n)))
    m = draw(st.integers(1, max_m))
    return StarInstance(p, m, d, draw(st.integers(0, m)))


@settings(max_examples=300, deadline=None)
@given(star_instances())
def test_sound_and_within_window(inst):
    result = approx_essd_star(inst)
    if result.failed:
        assert brute_force_decide(inst.to_instance()) is None
        return
    assert small_k_prime(inst.k) <= result.k_prime <= large_k_prime(inst.k)
    assert_k_equitable(inst.to_instance(), result.solution, result.k_prime)


@settings(max_examples=300, deadline=None)
@given(star_instances())
def test_never_fails_on_feasible_target(inst):
    if brute_force_decide(inst.to_instance()) is not None:
        assert not approx_essd_star(inst).failed
