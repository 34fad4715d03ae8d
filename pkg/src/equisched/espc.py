"""ESPC (unit jobs, one deadline per day, precedence DAGs) via an integer program.

Only clients touching an arc ("arc clients") are tracked individually.  For
every distinct DAG and subset of arc clients, count variables say on how
many days with that DAG (and deadline) exactly that subset is scheduled.
Clients without arcs are interchangeable and handled by a capacity bound,
then filled in greedily, always picking the least-served client.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import CapExceeded, Instance, InstanceError, Solution, Variant, cap_limit, verify_solution
from .ip import IpModel, solve_ip

DEFAULT_ARC_CLIENT_CAP = 12


@dataclass(frozen=True)
class ArcClientProfile:
    n: int
    arc_clients: tuple[int, ...]
    beta: int
    dags: tuple[tuple[tuple[int, int], ...], ...]  # distinct arc sets, first-seen order
    day_dag: tuple[int, ...]  # DAG index of each day
    deadlines: tuple[int, ...]
    gamma: dict[tuple[int, int], int]  # (dag, deadline) -> number of days

    @property
    def alpha(self) -> int:
        return len(self.arc_clients)

    @property
    def low(self) -> int:
        """Deadlines up to this value are pooled into one variable family."""
        return self.n - self.alpha

    def gamma_upto(self, g: int, d: int) -> int:
        return sum(c for (h, r), c in self.gamma.items() if h == g and r <= d)

    def members(self, mask: int) -> frozenset[int]:
        return frozenset(a for pos, a in enumerate(self.arc_clients) if mask >> pos & 1)

    def closed(self, g: int, mask: int) -> bool:
        chosen = self.members(mask)
        return not any(u not in chosen and v in chosen for u, v in self.dags[g])


def _require_espc(instance: Instance) -> None:
    if instance.variant is not Variant.ESPC:
        raise InstanceError(f"expected an ESPC instance, got {instance.variant.value}")


def arc_client_profile(instance: Instance) -> ArcClientProfile:
    _require_espc(instance)
    arcs = set()
    dags: dict[tuple, int] = {}
    day_dag = []
    gamma: dict[tuple[int, int], int] = {}
    for day in instance.days:
        key = tuple(day.precedence or ())
        arcs.update(key)
        g = dags.setdefault(key, len(dags))
        day_dag.append(g)
        gamma[g, day.common_deadline] = gamma.get((g, day.common_deadline), 0) + 1
    clients = tuple(sorted({u for arc in arcs for u in arc}))
    return ArcClientProfile(
        n=instance.n,
        arc_clients=clients,
        beta=len(arcs),
        dags=tuple(dags),
        day_dag=tuple(day_dag),
        deadlines=tuple(day.common_deadline for day in instance.days),
        gamma=gamma,
    )


def build_espc_ilp(instance: Instance, profile: ArcClientProfile | None = None) -> IpModel:
    """The count model; ``model.meta`` holds the profile and variable maps.

    ``meta["x"][g, mask, d]`` indexes days with DAG ``g`` and deadline ``d`` above
    the pooled range; ``meta["pool"][g, mask]`` indexes the pooled days.
    """
    profile = arc_client_profile(instance) if profile is None else profile
    limit = cap_limit(DEFAULT_ARC_CLIENT_CAP)
    if profile.alpha > limit:
        raise CapExceeded("arc clients", profile.alpha, limit)
    n, k, alpha, low = instance.n, instance.k, profile.alpha, profile.low
    masks = range((1 << alpha) - 1, -1, -1)
    upper = range(low + 1, n + 1)
    size = [bin(mask).count("1") for mask in range(1 << alpha)]
    model = IpModel(name="espc")
    x, pool = {}, {}
    for g in range(len(profile.dags)):
        for d in upper:
            for mask in masks:
                x[g, mask, d] = model.add_var(f"x_G{g + 1}_A{mask}_d{d}", 0, profile.gamma.get((g, d), 0))
        for mask in masks:
            pool[g, mask] = model.add_var(f"xle_G{g + 1}_A{mask}", 0, profile.gamma_upto(g, low))

    for g in range(len(profile.dags)):
        for d in upper:
            model.add_constraint({x[g, mask, d]: 1 for mask in masks}, "=", profile.gamma.get((g, d), 0),
                                 f"days_G{g + 1}_d{d}")
        model.add_constraint({pool[g, mask]: 1 for mask in masks}, "=", profile.gamma_upto(g, low),
                             f"days_G{g + 1}_pool")
    for pos, client in enumerate(profile.arc_clients):
        coeffs = {}
        for g in range(len(profile.dags)):
            for mask in masks:
                if mask >> pos & 1:
                    coeffs[pool[g, mask]] = 1
                    for d in upper:
                        coeffs[x[g, mask, d]] = 1
        model.add_constraint(coeffs, ">=", k, f"arc_client_{client + 1}")
    for (g, mask, d), var in x.items():
        if size[mask] > d:
            model.add_constraint({var: 1}, "=", 0, f"full_G{g + 1}_A{mask}_d{d}")
    for g in range(len(profile.dags)):
        for d in range(1, low + 1):
            model.add_constraint({pool[g, mask]: 1 for mask in masks if size[mask] <= d}, ">=",
                                 profile.gamma_upto(g, d), f"pool_G{g + 1}_d{d}")
    for (g, mask), var in pool.items():
        if not profile.closed(g, mask):
            model.add_constraint({var: 1}, "=", 0, f"prec_G{g + 1}_A{mask}")
    for (g, mask, d), var in x.items():
        if not profile.closed(g, mask):
            model.add_constraint({var: 1}, "=", 0, f"prec_G{g + 1}_A{mask}_d{d}")
    coeffs = {var: min(d - size[mask], low) for (g, mask, d), var in x.items()}
    for (g, mask), var in pool.items():
        coeffs[var] = coeffs.get(var, 0) - size[mask]
    pooled_capacity = sum(d for d in profile.deadlines if d <= low)
    model.add_constraint(coeffs, ">=", k * (n - alpha) - pooled_capacity, "other_clients")
    model.meta = {"kind": "espc", "profile": profile, "x": x, "pool": pool}
    return model


def realize_espc_solution(instance: Instance, profile: ArcClientProfile, model: IpModel,
                          assignment: dict[str, int]) -> Solution:
    """Turn a feasible count assignment into per-day satisfied sets."""
    values = [assignment[v.name] for v in model.variables]
    low = profile.low
    arc_part: list[frozenset[int] | None] = [None] * instance.m
    for g in range(len(profile.dags)):
        for d in range(low + 1, instance.n + 1):
            days = [j for j in range(instance.m) if profile.day_dag[j] == g and profile.deadlines[j] == d]
            sets = []
            for (h, mask, r), var in model.meta["x"].items():
                if h == g and r == d:
                    sets += [mask] * values[var]
            if len(sets) != len(days):
                raise AssertionError(f"DAG {g + 1}, deadline {d}: {len(sets)} sets for {len(days)} days")
            for j, mask in zip(days, sets):
                arc_part[j] = profile.members(mask)
        days = sorted((j for j in range(instance.m) if profile.day_dag[j] == g and profile.deadlines[j] <= low),
                      key=lambda j: (profile.deadlines[j], j))
        sets = []
        for (h, mask), var in model.meta["pool"].items():
            if h == g:
                sets += [mask] * values[var]
        # bigger subsets go to days with later deadlines
        sets.sort(key=lambda mask: (bin(mask).count("1"), mask))
        if len(sets) != len(days):
            raise AssertionError(f"DAG {g + 1}: {len(sets)} pooled sets for {len(days)} days")
        for j, mask in zip(days, sets):
            arc_part[j] = profile.members(mask)

    others = [i for i in range(instance.n) if i not in set(profile.arc_clients)]
    served = {i: 0 for i in others}
    satisfied = []
    for j in range(instance.m):
        chosen = set(arc_part[j])
        room = min(profile.deadlines[j] - len(chosen), len(others))
        if room < 0:
            raise AssertionError(f"day {j + 1}: {len(chosen)} arc clients exceed deadline {profile.deadlines[j]}")
        for i in sorted(others, key=lambda i: (served[i], i))[:room]:
            chosen.add(i)
            served[i] += 1
        satisfied.append(frozenset(chosen))
    solution = Solution(tuple(satisfied))
    report = verify_solution(instance, solution)
    if not report.k_equitable:
        raise AssertionError(f"realized schedule is not {instance.k}-equitable: {report}")
    return solution


def solve_espc(instance: Instance) -> Solution | None:
    """Solve ESPC through the count model; None when it is infeasible."""
    profile = arc_client_profile(instance)
    model = build_espc_ilp(instance, profile)
    assignment = solve_ip(model)
    if assignment is None:
        return None
    return realize_espc_solution(instance, profile, model, assignment)
