"""
Exhaustive m* for tiny instances, used only to cross-check the flow oracle.

With integer data some optimal preemptive schedule processes whole units in unit
slots, so it is enough to decide, slot by slot, which jobs get one unit. Running
fewer jobs than there are free machines never helps, so each slot tries every
way of choosing min(m, |alive|) alive jobs.
"""

from functools import lru_cache
from itertools import combinations
from typing import Tuple

from ..core.models import Instance
from ..errors import BruteForceLimitError

MAX_JOBS = 6
MAX_HORIZON = 16


def _check_guard(inst: Instance) -> None:
    if len(inst) > MAX_JOBS:
        raise BruteForceLimitError(f"brute force handles at most {MAX_JOBS} jobs, got {len(inst)}")
    horizon = inst.horizon()
    if horizon is not None and horizon.length > MAX_HORIZON:
        raise BruteForceLimitError(
            f"brute force handles horizons up to {MAX_HORIZON}, got {horizon.length}"
        )


def brute_force_feasible(inst: Instance, m: int) -> bool:
    _check_guard(inst)
    jobs = inst.jobs
    if not jobs:
        return True
    start = min(job.r for job in jobs)
    end = max(job.d for job in jobs)

    @lru_cache(maxsize=None)
    def search(t: int, remaining: Tuple[int, ...]) -> bool:
        if not any(remaining):
            return True
        if t >= end:
            return False
        for job, left in zip(jobs, remaining):
            if left > max(0, job.d - t):
                return False
        alive = [i for i, job in enumerate(jobs) if remaining[i] and job.r <= t < job.d]
        for chosen in combinations(alive, min(m, len(alive))):
            after = list(remaining)
            for i in chosen:
                after[i] -= 1
            if search(t + 1, tuple(after)):
                return True
        return False

    return search(start, tuple(job.p for job in jobs))


def brute_force_min_machines(inst: Instance) -> int:
    _check_guard(inst)
    if not inst.jobs:
        raise ValueError("brute_force_min_machines needs a nonempty instance")
    for m in range(1, len(inst) + 1):
        if brute_force_feasible(inst, m):
            return m
    raise AssertionError("n unit-speed machines always suffice")
