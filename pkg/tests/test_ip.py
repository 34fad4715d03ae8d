import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equisched.core import CapExceeded
from equisched.essd import build_essd_ilp, solution_from_essd_assignment
from equisched.espc import build_espc_ilp
from equisched.ip import IpModel, enumerate_ip, export_lp, parse_lp, solve_ip

from helpers import assert_k_equitable, essd, espc, random_ip_model


def test_equality_pins_value():
    model = IpModel()
    x = model.add_var("x", 0, 2)
    model.add_constraint({x: 1}, "=", 2)
    assert solve_ip(model) == {"x": 2}


def test_unreachable_rhs():
    model = IpModel()
    x, y = model.add_var("x", 0, 1), model.add_var("y", 0, 1)
    model.add_constraint({x: 1, y: 1}, ">=", 3)
    assert solve_ip(model) is None


def test_essd_model_gives_verified_solution():
    inst = essd([(3, (1, 2, 2)), (3, (2, 1, 2)), (4, (2, 2, 2))], 1)
    model = build_essd_ilp(inst)
    assignment = solve_ip(model)
    assert_k_equitable(inst, solution_from_essd_assignment(inst, model, assignment))


def test_maximisation():
    model = IpModel()
    x, y = model.add_var("x", 0, 4), model.add_var("y", 0, 4)
    model.add_constraint({x: 2, y: 3}, "<=", 12)
    model.maximize({x: 3, y: 4})
    best = solve_ip(model)
    assert 3 * best["x"] + 4 * best["y"] == 17  # x=3, y=2


def test_node_cap():
    model = IpModel()
    xs = [model.add_var(f"x{i}", 0, 3) for i in range(8)]
    model.add_constraint({x: 2 for x in xs}, "=", 7)  # odd rhs, even lhs: only found by search
    with pytest.raises(CapExceeded):
        solve_ip(model, node_cap=50)
    assert solve_ip(model, node_cap=10**6) is None


def test_bad_model_input():
    model = IpModel()
    with pytest.raises(ValueError):
        model.add_var("x", 2, 1)
    model.add_var("x", 0, 1)
    with pytest.raises(ValueError):
        model.add_var("x", 0, 1)
    with pytest.raises(ValueError):
        model.add_constraint({5: 1}, "<=", 1)
    with pytest.raises(ValueError):
        model.add_constraint({0: 1}, "<", 1)


def test_export_empty_model():
    text = export_lp(IpModel())
    lines = text.splitlines()
    for section in ("Minimize", "Subject To", "Bounds", "General", "End"):
        assert section in lines


def test_export_bounds_line():
    model = IpModel()
    model.add_var("x0", 0, 2)
    assert " 0 <= x0 <= 2" in export_lp(model).splitlines()


def _section(text, head, stop):
    lines = text.splitlines()
    start = lines.index(head) + 1
    end = lines.index(stop)
    return [line for line in lines[start:end] if line.strip()]


def test_espc_export_section_sizes():
    model = build_espc_ilp(espc(4, [(2, [(0, 1)]), (3, [(1, 2)]), (1, [])], 1))
    text = export_lp(model)
    assert len(_section(text, "Subject To", "Bounds")) == len(model.constraints)
    assert len(_section(text, "Bounds", "General")) == len(model.variables)
    general = " ".join(_section(text, "General", "End")).split()
    assert general == [v.name for v in model.variables]


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_solver_matches_enumeration(seed):
    model = random_ip_model(random.Random(seed), max_space=4000)
    points = enumerate_ip(model)
    got = solve_ip(model)
    assert (got is None) == (not points)
    if got is not None:
        values = [got[v.name] for v in model.variables]
        assert values in points
        if model.objective:
            value = sum(c * values[i] for i, c in model.objective.items())
            assert value == max(sum(c * p[i] for i, c in model.objective.items()) for p in points)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**6))
def test_lp_round_trip(seed):
    model = random_ip_model(random.Random(seed))
    back = parse_lp(export_lp(model))
    assert back.variables == model.variables
    assert back.constraints == model.constraints
    assert (back.objective or None) == (model.objective or None)
    assert export_lp(back) == export_lp(model)


def test_round_trip_of_scheduling_models():
    for model in (build_essd_ilp(essd([(3, (1, 2, 2)), (2, (1, 1, 2))], 1)),
                  build_espc_ilp(espc(4, [(2, [(0, 1)]), (3, [(1, 2)])], 1))):
        back = parse_lp(export_lp(model))
        assert back.constraints == model.constraints
        assert (solve_ip(back) is None) == (solve_ip(model) is None)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6))
def test_propagation_keeps_every_feasible_point(seed):
    rng = random.Random(seed)
    model = random_ip_model(rng, max_space=2000)
    for point in enumerate_ip(model)[:20]:
        # pin a random part of the point; the rest must still be found
        pinned = IpModel()
        for v in model.variables:
            pinned.add_var(v.name, v.lb, v.ub)
        for row in model.constraints:
            pinned.add_constraint(row.coeffs, row.sense, row.rhs, row.name)
        for i in rng.sample(range(len(point)), rng.randint(0, len(point))):
            pinned.add_constraint({i: 1}, "=", point[i])
        assert solve_ip(pinned) is not None
