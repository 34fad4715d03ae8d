"""Approximation for ESSD* (identical days, one common deadline).

Given a target ``k`` the algorithm either returns a ``k'``-equitable
solution or FAIL, where FAIL means no ``k``-equitable solution exists.  For
``k <= m/2`` it packs clients first-fit-decreasing into blocks of ``k'``
consecutive days with ``k' = 2*floor(k/3)``; otherwise it treats the at most
three "large" clients (``3p > d``) separately and fills the rest
round-robin, with ``k' = floor(2k/3)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Day, Instance, InstanceError, Job, Solution, Variant, verify_solution


@dataclass(frozen=True)
class StarInstance:
    processing: tuple[int, ...]
    m: int
    d: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "processing", tuple(int(p) for p in self.processing))
        if any(p < 1 for p in self.processing):
            raise InstanceError("processing times must be >= 1")
        if self.d < 1:
            raise InstanceError("deadline must be >= 1")
        if not 0 <= self.k <= self.m:
            raise InstanceError(f"k={self.k} outside 0..{self.m}")

    @property
    def n(self) -> int:
        return len(self.processing)

    def to_instance(self) -> Instance:
        day = Day(tuple(Job(p, self.d) for p in self.processing))
        return Instance(Variant.ESSD, self.n, self.m, self.k, (day,) * self.m, starred=True)

    @classmethod
    def from_instance(cls, instance: Instance, k: int | None = None) -> StarInstance:
        if instance.variant is not Variant.ESSD or not instance.starred:
            raise InstanceError("approximation needs a starred ESSD instance")
        day = instance.days[0] if instance.days else None
        processing = tuple(job.processing for job in day.jobs) if day else (1,) * instance.n
        deadline = day.common_deadline if day else 1
        return cls(processing, instance.m, deadline, instance.k if k is None else k)


@dataclass(frozen=True)
class ApproxResult:
    solution: Solution | None
    k_prime: int
    reason: str | None = None  # which check produced FAIL

    @property
    def failed(self) -> bool:
        return self.solution is None


def small_k_prime(k: int) -> int:
    return 2 * (k // 3)


def large_k_prime(k: int) -> int:
    return 2 * k // 3


def _fail(k_prime: int, reason: str) -> ApproxResult:
    return ApproxResult(None, k_prime, reason)


def _finish(inst: StarInstance, days: list[set[int]], k_prime: int) -> ApproxResult:
    solution = Solution(tuple(frozenset(s) for s in days))
    report = verify_solution(inst.to_instance(), solution)
    if not (report.valid and report.min_count >= k_prime):
        raise AssertionError(f"approximation built an invalid schedule: {report}")
    return ApproxResult(solution, k_prime)


def _by_size(inst: StarInstance) -> list[int]:
    return sorted(range(inst.n), key=lambda i: (-inst.processing[i], i))


def approx_essd_star(inst: StarInstance) -> ApproxResult:
    """Dispatch on ``2k <= m``; a ``k'`` of 0 is met by the empty schedule."""
    if 2 * inst.k <= inst.m:
        return approx_small_k(inst)
    return approx_large_k(inst)


def approx_small_k(inst: StarInstance) -> ApproxResult:
    m, d, p = inst.m, inst.d, inst.processing
    kp = small_k_prime(inst.k)
    if kp == 0:
        return ApproxResult(Solution.empty(m), 0)
    if any(x > d for x in p):
        return _fail(kp, "oversized-client")
    blocks = m // kp
    tail = m - blocks * kp  # days after the last full block
    days: list[set[int]] = [set() for _ in range(m)]
    load = [0] * m
    swapped = False

    def place(i, span):
        for j in span:
            days[j].add(i)
            load[j] += p[i]

    for i in _by_size(inst):
        for b in range(blocks):
            span = range(b * kp, (b + 1) * kp)
            if all(load[j] + p[i] <= d for j in span):
                place(i, span)
                break
        else:
            if tail < kp / 2:
                return _fail(kp, "small-k-short-tail")
            if swapped:
                return _fail(kp, "small-k-second-overflow")
            swapped = True
            probe = (2 * m) // 3  # 0-based index of day floor(2m/3)+1
            on_probe = sorted(days[probe], key=lambda c: (p[c], c))
            if not on_probe:
                return _fail(kp, "small-k-empty-probe")
            other = on_probe[0]
            half = kp // 2
            start = min(j for j in range(m) if other in days[j])
            tail_days = range(blocks * kp, blocks * kp + half)
            if any(load[j] + p[i] + p[other] > d for j in tail_days):
                return _fail(kp, "small-k-tail-overflow")
            place(i, tail_days)
            place(other, tail_days)
            for j in range(start, start + half):
                days[j].discard(other)
                load[j] -= p[other]
            place(i, range(start, start + half))
    return _finish(inst, days, kp)


def _freest(load: list[int], count: int) -> list[int]:
    return sorted(range(len(load)), key=lambda j: (load[j], j))[:count]


def approx_large_k(inst: StarInstance) -> ApproxResult:
    m, d, p, k = inst.m, inst.d, inst.processing, inst.k
    kp = large_k_prime(k)
    if kp == 0:
        return ApproxResult(Solution.empty(m), 0)
    if any(x > d for x in p):
        return _fail(kp, "oversized-client")
    ordered = _by_size(inst)
    if len(ordered) >= 2 and p[ordered[0]] + p[ordered[1]] > d:
        return _fail(kp, "pair-exceeds-deadline")
    large = [i for i in ordered if 3 * p[i] > d]
    small = [i for i in ordered if 3 * p[i] <= d]
    if len(large) >= 4:
        return _fail(kp, "four-large-clients")
    if k * sum(p) > m * d:
        return _fail(kp, "total-load")
    small_sum = sum(p[i] for i in small)
    days: list[set[int]] = [set() for _ in range(m)]
    load = [0] * m

    def place(i, span):
        for j in span:
            days[j].add(i)
            load[j] += p[i]

    if 3 * small_sum <= d and len(large) >= 2:
        for i in large:
            place(i, _freest(load, k))
            if max(load) > d:
                return _fail(kp, "large-overflow")
        third = math.ceil(k / 3)
        used: set[int] = set()
        for i in large[:2]:
            picked = [j for j in range(m) if i in days[j] and j not in used][:third]
            if len(picked) < third:
                return _fail(kp, "large-swap-days")
            for j in picked:
                days[j].discard(i)
                load[j] -= p[i]
                place_on = (j,)
                for s in small:
                    place(s, place_on)
            used.update(picked)
        return _finish(inst, days, kp)

    if 3 * small_sum <= 2 * d and len(large) <= 2:
        if not large:
            for s in small:
                place(s, range(kp))
            return _finish(inst, days, kp)
        if len(large) == 1:
            big = large[0]
            place(big, range(kp))
            for s in small:
                place(s, range(kp, m))
            if m < 2 * kp and small:
                sub = StarInstance(tuple(p[s] for s in small), kp, d - p[big], k + kp - m)
                inner = approx_essd_star(sub)
                if inner.failed:
                    return _fail(kp, f"recursion:{inner.reason}")
                for j, members in enumerate(inner.solution.satisfied):
                    for pos in members:
                        place(small[pos], (j,))
            return _finish(inst, days, kp)
        if 2 * kp < m:
            for i in large:
                place(i, range(kp))
            for s in small:
                place(s, range(m - kp, m))
            return _finish(inst, days, kp)

    for i in large:
        place(i, _freest(load, kp))
        if max(load) > d:
            return _fail(kp, "large-overflow")
    queue = small * kp
    head = 0
    for j in range(m):
        while head < len(queue):
            s = queue[head]
            if s in days[j] or load[j] + p[s] > d:
                break
            place(s, (j,))
            head += 1
    if head < len(queue):
        return _fail(kp, "small-clients-left")
    return _finish(inst, days, kp)
