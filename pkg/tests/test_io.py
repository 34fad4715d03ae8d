import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equisched import io
from equisched.core import InstanceError, Variant
from equisched.reductions import GeneratorSpec, generate_random
from equisched.oracle import brute_force_decide


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([Variant.ESUP, Variant.ESSD, Variant.ESPC, Variant.GENERAL]),
       st.integers(1, 5), st.integers(1, 4), st.booleans(), st.integers(0, 10_000))
def test_instance_round_trip(variant, n, m, starred, seed):
    spec = GeneratorSpec(variant, n, m, p_max=3, starred=starred and variant is Variant.ESSD,
                         release_max=1 if variant is Variant.ESUP else 0)
    inst = generate_random(spec, seed)
    assert io.instance_from_dict(json.loads(io.dumps(io.instance_to_dict(inst)))) == inst


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 1000))
def test_solution_round_trip(n, m, seed):
    inst = generate_random(GeneratorSpec(Variant.ESUP, n, m), seed)
    sol = brute_force_decide(inst)
    if sol is None:
        return
    assert io.solution_from_dict(json.loads(io.dumps(io.solution_to_dict(sol)))) == sol


def test_files_use_one_based_indices(tmp_path):
    data = {"variant": "ESPC", "starred": False, "n": 2, "m": 1, "k": 1,
            "days": [{"deadline": 1, "processing": [1, 1], "edges": [[1, 2]]}]}
    path = tmp_path / "inst.json"
    path.write_text(json.dumps(data), encoding="utf-8")
    inst = io.read_instance(path)
    assert inst.days[0].precedence == ((0, 1),)
    io.write_instance(path, inst)
    assert json.loads(path.read_text(encoding="utf-8"))["days"][0]["edges"] == [[1, 2]]


def test_bad_instance_file_raises():
    with pytest.raises(InstanceError):
        io.instance_from_dict({"variant": "ESUP", "n": 1, "m": 1, "k": 1,
                               "days": [{"deadline": 1, "processing": [2]}]})
