"""Small builders shared by the test modules."""

import random

from equisched.core import Day, Instance, Job, Variant, verify_solution
from equisched.ip import IpModel


def esup(deadlines, k, releases=None, machines=1):
    """``deadlines[j][i]`` is client i's deadline on day j."""
    days = []
    for j, row in enumerate(deadlines):
        rel = releases[j] if releases else [0] * len(row)
        days.append(Day(tuple(Job(1, d, r) for d, r in zip(row, rel)), None, machines))
    return Instance(Variant.ESUP, len(deadlines[0]), len(deadlines), k, tuple(days))


def essd(days, k, starred=False):
    """``days`` is a list of (deadline, processing-tuple)."""
    built = tuple(Day(tuple(Job(p, d) for p in ps)) for d, ps in days)
    return Instance(Variant.ESSD, len(days[0][1]), len(days), k, built, starred=starred)


def espc(n, days, k):
    """``days`` is a list of (deadline, arcs) with 0-based arcs."""
    built = tuple(Day(tuple(Job(1, d) for _ in range(n)), tuple(arcs)) for d, arcs in days)
    return Instance(Variant.ESPC, n, len(days), k, built)


def assert_k_equitable(instance, solution, k=None):
    report = verify_solution(instance, solution)
    k = instance.k if k is None else k
    assert report.valid, report
    assert report.min_count >= k, report
    return report


def random_ip_model(rng: random.Random, max_space=10**5) -> IpModel:
    """Random bounded model whose box has at most ``max_space`` points."""
    model = IpModel(name="rand")
    space = 1
    for v in range(rng.randint(1, 6)):
        lb = rng.randint(-2, 2)
        width = rng.randint(0, 6)
        if space * (width + 1) > max_space:
            break
        space *= width + 1
        model.add_var(f"x{v}", lb, lb + width)
    nvars = len(model.variables)
    for _ in range(rng.randint(0, 4)):
        coeffs = {i: rng.randint(-3, 3) for i in rng.sample(range(nvars), rng.randint(1, nvars))}
        model.add_constraint(coeffs, rng.choice(("<=", ">=", "=")), rng.randint(-4, 8))
    if rng.random() < 0.4:
        model.maximize({i: rng.randint(-2, 3) for i in range(nvars)})
    return model
