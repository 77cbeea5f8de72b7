"""
The hybrid algorithm without a priori m*.

A running estimate m_hat drives the routing thresholds. Every sub-run (EDF,
each SJF bucket, CMS) is its own doubling cascade whose interval k gets
c * 2^(k-1) machines; all cascades draw blocks from one ledger. When a
cascade grows past 4 * c * m_hat machines the estimate doubles, which moves the
CMS threshold and adds SJF buckets for later arrivals. Jobs already routed stay
where they are.
"""

import logging
from typing import Dict

from ..core.laxity import route
from ..core.models import Job, RouteKind
from .base import OnlineScheduler, Tick
from .cms import CmsScheduler
from .doubling import DoublingScheduler
from .greedy import GreedyScheduler
from .hybrid import PoolConstants
from .pooled import PooledScheduler

logger = logging.getLogger(__name__)

# below this estimate the CMS threshold 1/m_hat would swallow almost every job
ADAPTIVE_ROUTING_FLOOR = 4
GROWTH_FACTOR = 4


class AdaptiveHybridScheduler(PooledScheduler):
    def __init__(self, constants: PoolConstants, name: str = "hybrid-adaptive"):
        super().__init__(name)
        self.constants = constants
        self.m_hat = 1
        self.m_hat_history = [1]
        self._multiplier: Dict[str, int] = {}

    def estimate(self) -> int:
        return self.m_hat

    @property
    def routing_estimate(self) -> int:
        return max(self.m_hat, ADAPTIVE_ROUTING_FLOOR)

    def route(self, tick: Tick, job: Job) -> str:
        target = route(job, self.routing_estimate)
        label = target.key
        if label not in self.labels:
            self._open_sub_run(label, target.kind)
        return label

    def _open_sub_run(self, label: str, kind: RouteKind) -> None:
        c = {
            RouteKind.EDF: self.constants.c_edf,
            RouteKind.SJF: self.constants.c_sjf,
            RouteKind.CMS: self.constants.c_cms,
        }[kind]
        self._multiplier[label] = c
        cascade = DoublingScheduler(_PoolFactory(kind, c), name=label, ledger=self.ledger)
        self.open_pool(label, cascade, None)

    def on_admitted(self, label: str, job: Job) -> None:
        cascade = self.pool(label).scheduler
        limit = GROWTH_FACTOR * self._multiplier[label]
        while cascade.machines > limit * self.m_hat:
            self.m_hat *= 2
            self.m_hat_history.append(self.m_hat)
            logger.info(
                "%s: %s uses %d machines, estimate m_hat doubled to %d",
                self.name,
                label,
                cascade.machines,
                self.m_hat,
            )


class _PoolFactory:
    """m -> scheduler on c * m machines."""

    def __init__(self, kind: RouteKind, c: int):
        self.kind = kind
        self.c = c

    def __call__(self, m: int) -> OnlineScheduler:
        size = self.c * m
        if self.kind is RouteKind.CMS:
            return CmsScheduler(size)
        return GreedyScheduler(self.kind.value, size)


def hybrid_a_adaptive(constants: PoolConstants) -> AdaptiveHybridScheduler:
    return AdaptiveHybridScheduler(constants)
