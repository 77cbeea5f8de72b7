"""
The hybrid algorithm for a known m*.

Jobs are routed once, at arrival, by relative laxity: rho >= 1/4 to an EDF pool,
rho <= 1/m* to a CMS pool, and everything in between to the SJF pool of its
doubly-exponential laxity bucket. All pools are opened up front and never share
machines.
"""

from pydantic import BaseModel, ConfigDict, Field

from ..core.laxity import bucket_count, route
from ..core.models import Job
from .base import Tick
from .cms import CmsScheduler
from .greedy import GreedyScheduler
from .pooled import PooledScheduler


class PoolConstants(BaseModel):
    """Per-algorithm machine multipliers c_edf, c_sjf, c_cms."""

    model_config = ConfigDict(frozen=True)

    c_edf: int = Field(default=16, ge=1)
    c_sjf: int = Field(default=8, ge=1)
    c_cms: int = Field(default=8, ge=1)


class HybridConfig(PoolConstants):
    m_star: int = Field(ge=1)

    @property
    def buckets(self) -> int:
        return bucket_count(self.m_star)

    @property
    def total_machines(self) -> int:
        return (self.c_edf + self.c_sjf * self.buckets + self.c_cms) * self.m_star


class HybridScheduler(PooledScheduler):
    def __init__(self, config: HybridConfig, name: str = "hybrid"):
        super().__init__(name)
        self.config = config
        m_star = config.m_star
        size = config.c_edf * m_star
        self.open_pool("edf", GreedyScheduler("edf", size, name="edf"), size)
        for i in range(1, config.buckets + 1):
            size = config.c_sjf * m_star
            self.open_pool(f"sjf-{i}", GreedyScheduler("sjf", size, name=f"sjf-{i}"), size)
        size = config.c_cms * m_star
        # the forbidden machine m_cms + 1 is never handed out
        self.open_pool("cms", CmsScheduler(size, name="cms"), size)

    def route(self, tick: Tick, job: Job) -> str:
        return route(job, self.config.m_star).key

    def set_trace(self, enabled: bool) -> None:
        self.pool("cms").scheduler.trace = enabled


def hybrid_a(config: HybridConfig) -> HybridScheduler:
    return HybridScheduler(config)
