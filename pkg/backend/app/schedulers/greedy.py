"""
Priority-list schedulers: EDF and SJF on a fixed pool of machines.

Both run the min(m, |alive|) best-ranked alive jobs, one per machine, filling
machines in index order. They only change their decision at arrivals and
completions, which the engine already treats as events.
"""

from typing import Callable, Dict, Iterable, Sequence, Tuple

from ..core.models import Job
from .base import Decision, OnlineScheduler, Tick


def edf_key(job: Job) -> Tuple[int, int]:
    return job.d, job.id


def sjf_key(job: Job) -> Tuple[int, int]:
    # original size, never the remaining work
    return job.p, job.id


def _ranked_assignment(alive: Iterable[Job], m: int, key: Callable) -> Dict[int, int]:
    if m < 1:
        raise ValueError(f"machine count must be >= 1, got {m}")
    ranked = sorted(alive, key=key)[:m]
    return {machine: job.id for machine, job in enumerate(ranked, start=1)}


def edf_assignment(alive: Iterable[Job], m: int) -> Dict[int, int]:
    """Earliest deadlines first, ties by id."""
    return _ranked_assignment(alive, m, edf_key)


def sjf_assignment(alive: Iterable[Job], m: int) -> Dict[int, int]:
    """Smallest original sizes first, ties by id."""
    return _ranked_assignment(alive, m, sjf_key)


POLICIES = {"edf": edf_assignment, "sjf": sjf_assignment}


class GreedyScheduler(OnlineScheduler):
    """EDF or SJF on `m` dedicated machines."""

    def __init__(self, policy: str, m: int, name: str = ""):
        if policy not in POLICIES:
            raise ValueError(f"unknown policy {policy!r}")
        if m < 1:
            raise ValueError(f"{policy} needs at least one machine, got {m}")
        self.policy = policy
        self.m = m
        self.name = name or f"{policy}"
        self._assign = POLICIES[policy]

    @property
    def machines(self) -> int:
        return self.m

    def admit(self, tick: Tick, jobs: Sequence[Job]) -> None:
        # stateless: the alive view carries everything the ranking needs
        return None

    def decide(self, tick: Tick) -> Decision:
        return Decision(assignment=self._assign(tick.jobs(), self.m))


def edf(m: int) -> GreedyScheduler:
    return GreedyScheduler("edf", m)


def sjf(m: int) -> GreedyScheduler:
    return GreedyScheduler("sjf", m)
