"""Data model for equitable scheduling instances and per-day feasibility.

Clients and days are 0-based everywhere inside the library.  The JSON file
format (see :mod:`equisched.io`) is 1-based.

A day is described by one job per client.  A *satisfied set* is the set of
clients whose jobs finish by their deadline; solutions store one satisfied
set per day and permutations are derived on demand.
"""

from __future__ import annotations

import heapq
import itertools
import os
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property

GENERAL_EXHAUSTIVE_LIMIT = 8


class Variant(str, Enum):
    GENERAL = "GENERAL"
    ESUP = "ESUP"
    ESSD = "ESSD"
    ESPC = "ESPC"


class InstanceError(ValueError):
    """Raised when instance data violates the rules of its variant."""


class CapExceeded(RuntimeError):
    """A table or search space is larger than the configured cap."""

    def __init__(self, what: str, size: int, limit: int):
        super().__init__(f"{what}: size {size} exceeds cap {limit} (set EQUISCHED_CAP to override)")
        self.what = what
        self.size = size
        self.limit = limit


def cap_limit(default: int) -> int:
    """Return the search/table cap, honouring the ``EQUISCHED_CAP`` override."""
    raw = os.environ.get("EQUISCHED_CAP")
    if raw:
        return int(raw)
    return default


@dataclass(frozen=True)
class Job:
    processing: int
    deadline: int
    release: int = 0

    def __post_init__(self):
        if self.processing < 1:
            raise InstanceError(f"processing time must be >= 1, got {self.processing}")
        if self.deadline < 1:
            raise InstanceError(f"deadline must be >= 1, got {self.deadline}")
        if not 0 <= self.release < self.deadline:
            raise InstanceError(f"release {self.release} must lie in [0, deadline={self.deadline})")


@dataclass(frozen=True)
class Day:
    """The jobs of all clients on one day.

    ``precedence`` is a tuple of arcs ``(u, v)`` meaning u must run before v,
    or ``None`` when the day carries no DAG at all.
    """

    jobs: tuple[Job, ...]
    precedence: tuple[tuple[int, int], ...] | None = None
    machines: int = 1

    def __post_init__(self):
        object.__setattr__(self, "jobs", tuple(self.jobs))
        if self.precedence is not None:
            arcs = tuple(sorted({(int(u), int(v)) for u, v in self.precedence}))
            object.__setattr__(self, "precedence", arcs)
            n = len(self.jobs)
            for u, v in arcs:
                if not (0 <= u < n and 0 <= v < n) or u == v:
                    raise InstanceError(f"bad precedence arc {(u, v)} for {n} clients")
            if len(self.topological_order) != n:
                raise InstanceError("precedence graph contains a cycle")
        if self.machines < 1:
            raise InstanceError("machines must be >= 1")

    @property
    def n(self) -> int:
        return len(self.jobs)

    @cached_property
    def common_deadline(self) -> int | None:
        deadlines = {job.deadline for job in self.jobs}
        return deadlines.pop() if len(deadlines) == 1 else None

    @cached_property
    def predecessors(self) -> tuple[frozenset[int], ...]:
        preds: list[set[int]] = [set() for _ in self.jobs]
        for u, v in self.precedence or ():
            preds[v].add(u)
        return tuple(frozenset(p) for p in preds)

    @cached_property
    def successors(self) -> tuple[frozenset[int], ...]:
        succs: list[set[int]] = [set() for _ in self.jobs]
        for u, v in self.precedence or ():
            succs[u].add(v)
        return tuple(frozenset(s) for s in succs)

    @cached_property
    def topological_order(self) -> tuple[int, ...]:
        return _kahn(self.n, self.predecessors, self.successors, priority=lambda i: i)

    @property
    def has_release(self) -> bool:
        return any(job.release for job in self.jobs)

    def closure(self, members: Iterable[int]) -> frozenset[int]:
        """Smallest ancestor-closed superset of ``members`` in the day's DAG."""
        seen = set(members)
        stack = list(seen)
        while stack:
            for u in self.predecessors[stack.pop()]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return frozenset(seen)

    def is_closed(self, members: frozenset[int] | set[int]) -> bool:
        return all(self.predecessors[v] <= members for v in members)


def _kahn(n, preds, succs, priority) -> tuple[int, ...]:
    indeg = [len(p) for p in preds]
    heap = [(priority(i), i) for i in range(n) if indeg[i] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        _, u = heapq.heappop(heap)
        order.append(u)
        for v in succs[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                heapq.heappush(heap, (priority(v), v))
    return tuple(order)


@dataclass(frozen=True)
class Instance:
    """An equitable scheduling instance: ``n`` clients, ``m`` days, target ``k``.

    Deadlines of unit-time variants are clamped on construction since no job
    can ever complete later than ``n`` slots after the last release.
    """

    variant: Variant
    n: int
    m: int
    k: int
    days: tuple[Day, ...]
    starred: bool = False

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        days = tuple(self.days)
        if len(days) != self.m:
            raise InstanceError(f"expected {self.m} days, got {len(days)}")
        if not 0 <= self.k <= self.m:
            raise InstanceError(f"k={self.k} outside 0..{self.m}")
        for j, day in enumerate(days):
            if day.n != self.n:
                raise InstanceError(f"day {j + 1} has {day.n} jobs, expected {self.n}")
        days = tuple(self._normalise(j, day) for j, day in enumerate(days))
        if self.starred and any(day != days[0] for day in days):
            raise InstanceError("starred instance needs identical days")
        object.__setattr__(self, "days", days)

    def _normalise(self, j: int, day: Day) -> Day:
        v = self.variant
        where = f"day {j + 1}"
        if v in (Variant.ESUP, Variant.ESPC) and any(job.processing != 1 for job in day.jobs):
            raise InstanceError(f"{where}: {v.value} requires unit processing times")
        if v in (Variant.ESSD, Variant.ESPC):
            if day.common_deadline is None:
                raise InstanceError(f"{where}: {v.value} requires one deadline per day")
            if day.has_release or day.machines != 1:
                raise InstanceError(f"{where}: release dates and machines are ESUP-only")
        if v is Variant.GENERAL and day.machines != 1:
            raise InstanceError(f"{where}: parallel machines are ESUP-only")
        if v is Variant.ESPC:
            if day.precedence is None:
                day = Day(day.jobs, (), day.machines)
        elif day.precedence:
            raise InstanceError(f"{where}: precedence arcs are only allowed for ESPC")
        if v in (Variant.ESUP, Variant.ESPC):
            horizon = self.n + max((job.release for job in day.jobs), default=0)
            if any(job.deadline > horizon for job in day.jobs):
                jobs = tuple(Job(1, min(job.deadline, horizon), job.release) for job in day.jobs)
                day = Day(jobs, day.precedence, day.machines)
        return day

    def with_k(self, k: int) -> Instance:
        return Instance(self.variant, self.n, self.m, k, self.days, self.starred)


@dataclass(frozen=True)
class Solution:
    """Per-day satisfied sets, optionally with explicit (slot, machine) positions."""

    satisfied: tuple[frozenset[int], ...]
    slots: tuple[dict[int, tuple[int, int]], ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "satisfied", tuple(frozenset(s) for s in self.satisfied))

    @classmethod
    def empty(cls, m: int) -> Solution:
        return cls(tuple(frozenset() for _ in range(m)))

    def counts(self, n: int) -> list[int]:
        counts = [0] * n
        for members in self.satisfied:
            for i in members:
                counts[i] += 1
        return counts


@dataclass(frozen=True)
class EquityReport:
    counts: tuple[int, ...]
    min_count: int
    k: int
    k_equitable: bool
    invalid_days: tuple[int, ...] = ()

    @property
    def valid(self) -> bool:
        return not self.invalid_days


def edf_slots(day: Day, members: Iterable[int]) -> dict[int, tuple[int, int]] | None:
    """Assign unit jobs of ``members`` to (slot, machine) pairs, or None.

    Slot ``t`` is the unit interval ending at time ``t``.  At every slot the
    released members with the earliest deadlines are started first; for unit
    jobs on identical machines this succeeds whenever any assignment does.
    """
    pending = sorted(members, key=lambda i: (day.jobs[i].release, i))
    ready: list[tuple[int, int]] = []
    assignment: dict[int, tuple[int, int]] = {}
    pos = 0
    t = 0
    while pos < len(pending) or ready:
        if not ready:
            t = max(t, day.jobs[pending[pos]].release)
        t += 1
        while pos < len(pending) and day.jobs[pending[pos]].release < t:
            i = pending[pos]
            heapq.heappush(ready, (day.jobs[i].deadline, i))
            pos += 1
        for machine in range(1, day.machines + 1):
            if not ready:
                break
            deadline, i = heapq.heappop(ready)
            if deadline < t:
                return None
            assignment[i] = (t, machine)
    return assignment


def completion_times(day: Day, order: Sequence[int]) -> dict[int, int]:
    """Completion times of jobs run in ``order`` by list scheduling.

    Each job starts on the machine that becomes free first, no earlier than
    its release date.
    """
    free = [0] * day.machines
    done = {}
    for i in order:
        job = day.jobs[i]
        machine = min(range(day.machines), key=lambda x: free[x])
        start = max(free[machine], job.release)
        free[machine] = start + job.processing
        done[i] = free[machine]
    return done


def _check_members(day: Day, members) -> frozenset[int]:
    members = frozenset(members)
    if any(not 0 <= i < day.n for i in members):
        raise ValueError(f"client index out of range in {sorted(members)}")
    return members


def _general_order(day: Day, members: frozenset[int]) -> tuple[int, ...] | None:
    edf = tuple(sorted(members, key=lambda i: (day.jobs[i].deadline, i)))
    if not day.has_release:
        # Jackson's rule: earliest-deadline order is optimal for a fixed set
        done = completion_times(day, edf)
        return edf if all(done[i] <= day.jobs[i].deadline for i in edf) else None
    if len(members) > GENERAL_EXHAUSTIVE_LIMIT:
        raise CapExceeded("exhaustive permutation search", len(members), GENERAL_EXHAUSTIVE_LIMIT)
    for order in itertools.permutations(edf):
        done = completion_times(day, order)
        if all(done[i] <= day.jobs[i].deadline for i in order):
            return order
    return None


def realizable_set(day: Day, variant: Variant, members: Iterable[int]) -> bool:
    """True iff some feasible schedule of ``day`` finishes every member on time."""
    members = _check_members(day, members)
    variant = Variant(variant)
    if not members:
        return True
    if variant is Variant.ESSD:
        deadline = day.common_deadline
        if deadline is None:
            raise InstanceError("ESSD day must have a single deadline")
        return sum(day.jobs[i].processing for i in members) <= deadline
    if variant is Variant.ESPC:
        deadline = day.common_deadline
        if day.precedence is None or deadline is None:
            raise InstanceError("ESPC day needs a precedence DAG and a single deadline")
        return len(members) <= deadline and day.is_closed(members)
    if variant is Variant.ESUP:
        if any(day.jobs[i].processing != 1 for i in members):
            raise InstanceError("ESUP day must have unit processing times")
        return edf_slots(day, members) is not None
    return _general_order(day, members) is not None


def canonical_permutation(day: Day, variant: Variant, members: Iterable[int]) -> tuple[int, ...]:
    """A permutation of all clients under which every member finishes on time."""
    members = _check_members(day, members)
    variant = Variant(variant)
    if not realizable_set(day, variant, members):
        raise ValueError(f"set {sorted(members)} is not realizable on this day")
    rest = tuple(i for i in range(day.n) if i not in members)
    if variant is Variant.ESSD:
        return tuple(sorted(members)) + rest
    if variant is Variant.ESPC:
        return _kahn(day.n, day.predecessors, day.successors, priority=lambda i: (i not in members, i))
    if variant is Variant.ESUP:
        slots = edf_slots(day, members)
        return tuple(sorted(members, key=lambda i: (slots[i], i))) + rest
    return _general_order(day, members) + rest


def certifies(day: Day, order: Sequence[int], members: Iterable[int]) -> bool:
    """Recompute completion times of ``order`` and check every member is on time."""
    if sorted(order) != list(range(day.n)):
        return False
    position = {i: p for p, i in enumerate(order)}
    if any(position[u] > position[v] for u, v in day.precedence or ()):
        return False
    done = completion_times(day, order)
    return all(done[i] <= day.jobs[i].deadline for i in members)


def verify_solution(instance: Instance, solution: Solution) -> EquityReport:
    """Count satisfied days per client; unrealizable days count for nobody."""
    if len(solution.satisfied) != instance.m:
        raise ValueError(f"solution has {len(solution.satisfied)} days, instance has {instance.m}")
    counts = [0] * instance.n
    invalid = []
    for j, (day, members) in enumerate(zip(instance.days, solution.satisfied)):
        if not realizable_set(day, instance.variant, members):
            invalid.append(j)
            continue
        for i in members:
            counts[i] += 1
    low = min(counts, default=instance.k)
    return EquityReport(
        counts=tuple(counts),
        min_count=low,
        k=instance.k,
        k_equitable=not invalid and low >= instance.k,
        invalid_days=tuple(invalid),
    )


def moore_hodgson(jobs: Sequence[tuple[int, int]]) -> frozenset[int]:
    """Largest set of on-time jobs for ``1||sum U_j``; jobs are (processing, deadline)."""
    order = sorted(range(len(jobs)), key=lambda i: (jobs[i][1], i))
    heap: list[tuple[int, int]] = []
    total = 0
    for i in order:
        p, d = jobs[i]
        heapq.heappush(heap, (-p, -i))
        total += p
        if total > d:
            neg_p, _ = heapq.heappop(heap)
            total += neg_p
    return frozenset(-neg_i for _, neg_i in heap)
