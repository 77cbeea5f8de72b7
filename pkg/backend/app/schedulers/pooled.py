"""
Composite schedulers built from disjoint machine pools.

A pooled scheduler routes every arriving job to exactly one child scheduler and
never moves it afterwards. Each child sees only its own jobs and numbers its
machines from 1; the composite shifts child decisions by the offset of the
block the child received from the MachineLedger. A child that itself draws
blocks from a shared ledger (a doubling cascade inside the adaptive hybrid)
already speaks global machine indices and is registered with no block.
"""

import logging
from abc import abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from ..core.models import Job
from .base import Decision, MachineBlock, MachineLedger, OnlineScheduler, Tick, earliest

logger = logging.getLogger(__name__)


@dataclass
class Pool:
    label: str
    scheduler: OnlineScheduler
    offset: int = 0
    jobs: Set[int] = field(default_factory=set)


class PooledScheduler(OnlineScheduler):
    """Routes jobs to child pools; subclasses supply the routing rule."""

    def __init__(self, name: str, ledger: Optional[MachineLedger] = None):
        self.name = name
        self.ledger = ledger if ledger is not None else MachineLedger()
        self._pools: Dict[str, Pool] = {}
        self.owner: Dict[int, str] = {}
        self._last: Dict[str, Tuple[Tick, Decision]] = {}

    @abstractmethod
    def route(self, tick: Tick, job: Job) -> str:
        """Label of the pool that takes `job`; may open the pool."""

    @property
    def machines(self) -> int:
        return sum(pool.scheduler.machines for pool in self._pools.values())

    @property
    def labels(self) -> List[str]:
        return list(self._pools)

    def pool(self, label: str) -> Pool:
        return self._pools[label]

    def open_pool(self, label: str, scheduler: OnlineScheduler, size: Optional[int]) -> Pool:
        """Register a child; with `size` it gets a fresh ledger block, without it numbers globally."""
        offset = 0
        if size is not None:
            offset = self.ledger.allocate(label, size).offset
        pool = Pool(label=label, scheduler=scheduler, offset=offset)
        self._pools[label] = pool
        logger.debug("%s: opened pool %s (offset %d)", self.name, label, offset)
        return pool

    def admit(self, tick: Tick, jobs: Sequence[Job]) -> None:
        for job in jobs:
            label = self.route(tick, job)
            pool = self._pools[label]
            self.owner[job.id] = label
            pool.jobs.add(job.id)
            pool.scheduler.admit(tick.restrict(sorted(pool.jobs)), [job])
            self.on_admitted(label, job)

    def on_admitted(self, label: str, job: Job) -> None:
        """Hook run after a child accepted a job."""

    def decide(self, tick: Tick) -> Decision:
        assignment: Dict[int, int] = {}
        wake_ups: List[Optional[Fraction]] = []
        self._last = {}
        for label, pool in self._pools.items():
            pool.jobs.intersection_update(tick.alive.keys())
            if not pool.jobs:
                continue
            view = tick.restrict(sorted(pool.jobs))
            decision = pool.scheduler.decide(view)
            if decision.failure is not None:
                logger.info("%s: pool %s failed: %s", self.name, label, decision.failure.reason)
                return Decision(failure=decision.failure)
            self._last[label] = (view, decision)
            assignment.update(decision.shifted(pool.offset).assignment)
            wake_ups.append(decision.wake_up)
        return Decision(assignment=assignment, wake_up=earliest(wake_ups))

    def advance(self, tick: Tick, until: Fraction, decision: Decision) -> None:
        for label, (view, child_decision) in self._last.items():
            self._pools[label].scheduler.advance(view, until, child_decision)

    def owner_of(self, job_id: int) -> str:
        label = self.owner.get(job_id)
        if label is None:
            return self.name
        return self._pools[label].scheduler.owner_of(job_id)

    def pools(self) -> List[MachineBlock]:
        return list(self.ledger.blocks)

    def export_trace(self) -> Optional[list]:
        traces = [pool.scheduler.export_trace() for pool in self._pools.values()]
        merged = [entry for trace in traces if trace for entry in trace]
        if not any(trace is not None for trace in traces):
            return None
        return sorted(merged, key=lambda entry: entry.time)
