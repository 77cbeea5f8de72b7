"""
Doubling wrapper: run a machine-parameterized scheduler without knowing m*.

Time is cut into intervals I_1, I_2, ... opened online. Interval I_k owns a
fresh scheduler built for 2^(k-1) machines and every job that arrives while it
is current. On each arrival the current interval's scheduler is cloned, given
the newcomer, and simulated to quiescence assuming nothing else arrives; if that
look-ahead misses a deadline (or the clone declares failure) the next interval
opens at the arrival time and takes the job. After kappa intervals the wrapper
has used 1 + 2 + ... + 2^(kappa-1) = 2^kappa - 1 machines.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, List, Optional

from ..core.models import Job
from ..engine.simulator import lookahead_feasible
from .base import MachineLedger, OnlineScheduler, Tick
from .pooled import PooledScheduler

logger = logging.getLogger(__name__)

SchedulerFactory = Callable[[int], OnlineScheduler]
Lookahead = Callable[[OnlineScheduler, Tick], bool]


@dataclass
class DoublingInterval:
    index: int
    start: Fraction
    guess: int
    label: str
    jobs: List[int] = field(default_factory=list)


class DoublingScheduler(PooledScheduler):
    def __init__(
        self,
        factory: SchedulerFactory,
        name: str = "doubling",
        ledger: Optional[MachineLedger] = None,
        lookahead: Lookahead = lookahead_feasible,
    ):
        super().__init__(name, ledger)
        self.factory = factory
        self.lookahead = lookahead
        self.intervals: List[DoublingInterval] = []

    @property
    def kappa(self) -> int:
        return len(self.intervals)

    @property
    def current(self) -> Optional[DoublingInterval]:
        return self.intervals[-1] if self.intervals else None

    def route(self, tick: Tick, job: Job) -> str:
        current = self.current
        if current is None:
            return self._open_interval(tick.now).label
        pool = self.pool(current.label)
        probe = pool.scheduler.snapshot()
        view = tick.restrict(sorted(pool.jobs | {job.id}))
        probe.admit(view, [job])
        if self.lookahead(probe, view):
            return current.label
        return self._open_interval(tick.now).label

    def on_admitted(self, label: str, job: Job) -> None:
        self.current.jobs.append(job.id)

    def _open_interval(self, now: Fraction) -> DoublingInterval:
        index = self.kappa + 1
        guess = 2 ** (index - 1)
        label = f"{self.name}/I{index}"
        inner = self.factory(guess)
        inner.name = label
        self.open_pool(label, inner, inner.machines)
        interval = DoublingInterval(index=index, start=now, guess=guess, label=label)
        self.intervals.append(interval)
        logger.info(
            "%s: opened interval %d at t=%s with %d machines (total %d)",
            self.name,
            index,
            now,
            inner.machines,
            self.machines,
        )
        return interval


def doubling_wrap(
    factory: SchedulerFactory,
    name: str = "doubling",
    lookahead: Lookahead = lookahead_feasible,
) -> DoublingScheduler:
    return DoublingScheduler(factory, name=name, lookahead=lookahead)
