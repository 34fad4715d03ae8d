"""JSON (de)serialization of instances and solutions.

Files use 1-based client and day indices.  Example instance::

    {"variant": "ESSD", "starred": false, "n": 2, "m": 1, "k": 1,
     "days": [{"deadline": 3, "processing": [1, 2]}]}

Example solution: ``{"satisfied": [[1, 2]]}``.
"""

from __future__ import annotations

import json
from pathlib import Path

from .core import Day, Instance, InstanceError, Job, Solution, Variant


def day_to_dict(day: Day, variant: Variant) -> dict:
    out: dict = {}
    deadline = day.common_deadline
    if deadline is not None and variant in (Variant.ESSD, Variant.ESPC):
        out["deadline"] = deadline
    else:
        out["deadlines"] = [job.deadline for job in day.jobs]
    out["processing"] = [job.processing for job in day.jobs]
    if day.has_release:
        out["release"] = [job.release for job in day.jobs]
    if day.precedence is not None:
        out["edges"] = [[u + 1, v + 1] for u, v in day.precedence]
    if day.machines != 1:
        out["machines"] = day.machines
    return out


def day_from_dict(data: dict, n: int) -> Day:
    if "deadlines" in data:
        deadlines = list(data["deadlines"])
    elif "deadline" in data:
        deadlines = [data["deadline"]] * n
    else:
        raise InstanceError("day needs 'deadline' or 'deadlines'")
    processing = list(data.get("processing", [1] * n))
    release = list(data.get("release", [0] * n))
    if not len(deadlines) == len(processing) == len(release) == n:
        raise InstanceError(f"day vectors must all have length n={n}")
    jobs = tuple(Job(int(p), int(d), int(r)) for p, d, r in zip(processing, deadlines, release))
    edges = data.get("edges")
    precedence = None if edges is None else tuple((int(u) - 1, int(v) - 1) for u, v in edges)
    return Day(jobs, precedence, int(data.get("machines", 1)))


def instance_to_dict(instance: Instance) -> dict:
    return {
        "variant": instance.variant.value,
        "starred": instance.starred,
        "n": instance.n,
        "m": instance.m,
        "k": instance.k,
        "days": [day_to_dict(day, instance.variant) for day in instance.days],
    }


def instance_from_dict(data: dict) -> Instance:
    n = int(data["n"])
    days = tuple(day_from_dict(d, n) for d in data["days"])
    return Instance(
        variant=Variant(data["variant"]),
        n=n,
        m=int(data.get("m", len(days))),
        k=int(data["k"]),
        days=days,
        starred=bool(data.get("starred", False)),
    )


def solution_to_dict(solution: Solution) -> dict:
    out: dict = {"satisfied": [sorted(i + 1 for i in members) for members in solution.satisfied]}
    if solution.slots is not None:
        out["slots"] = [
            [[i + 1, slot, machine] for i, (slot, machine) in sorted(day.items())] for day in solution.slots
        ]
    return out


def solution_from_dict(data: dict) -> Solution:
    satisfied = tuple(frozenset(int(i) - 1 for i in members) for members in data["satisfied"])
    slots = None
    if "slots" in data:
        slots = tuple({int(i) - 1: (int(s), int(x)) for i, s, x in day} for day in data["slots"])
    return Solution(satisfied, slots)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=False) + "\n"


def write_instance(path: str | Path, instance: Instance) -> None:
    Path(path).write_text(dumps(instance_to_dict(instance)), encoding="utf-8")


def read_instance(path: str | Path) -> Instance:
    return instance_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))


def write_solution(path: str | Path, solution: Solution) -> None:
    Path(path).write_text(dumps(solution_to_dict(solution)), encoding="utf-8")


def read_solution(path: str | Path) -> Solution:
    return solution_from_dict(json.loads(Path(path).read_text(encoding="utf-8")))
