"""
Build any scheduler from a validated configuration.

This is the single place the CLI and the experiment harness construct
schedulers, so a row in a results table can always be rebuilt from its config.
"""

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..errors import ConfigError
from .adaptive import hybrid_a_adaptive
from .base import OnlineScheduler
from .classed import classed_edf
from .cms import CmsScheduler
from .doubling import doubling_wrap
from .greedy import GreedyScheduler
from .hybrid import HybridConfig, PoolConstants, hybrid_a

Algorithm = Literal["edf", "sjf", "cms", "hybrid", "hybrid-adaptive", "classed-edf"]

ALGORITHMS = ("edf", "sjf", "cms", "hybrid", "hybrid-adaptive", "classed-edf")
SIZED = ("edf", "sjf", "cms", "classed-edf")
WRAPPABLE = ("edf", "sjf", "cms")
TRACEABLE = ("cms", "hybrid")


class AlgorithmConfig(BaseModel):
    """
    One scheduler configuration.

    `machines` is per pool for classed-edf. A missing machine count becomes
    multiplier * m* and a missing m_star becomes m*, with m* supplied by the
    caller (usually the oracle). With doubling, interval k runs the algorithm on
    multiplier * 2^(k-1) machines.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    algorithm: Algorithm
    machines: Optional[int] = Field(default=None, ge=1)
    m_star: Optional[int] = Field(default=None, ge=1)
    constants: PoolConstants = Field(default_factory=PoolConstants)
    doubling: bool = False
    multiplier: int = Field(default=1, ge=1)
    trace: bool = False

    @model_validator(mode="after")
    def _consistent(self) -> "AlgorithmConfig":
        if self.doubling and self.algorithm not in WRAPPABLE:
            raise ValueError(f"--doubling applies to {', '.join(WRAPPABLE)}, not {self.algorithm}")
        if self.trace and self.algorithm not in TRACEABLE:
            raise ValueError(f"tracing is available for {', '.join(TRACEABLE)} only")
        return self

    @property
    def needs_m_star(self) -> bool:
        if self.doubling:
            return False
        if self.algorithm in SIZED:
            return self.machines is None
        return self.algorithm == "hybrid" and self.m_star is None

    @property
    def label(self) -> str:
        """Stable, comma-free name used in tables and CSV rows."""
        c = self.constants
        scale = f"{self.multiplier}*" if self.multiplier > 1 else ""
        if self.doubling:
            suffix = f"(x{self.multiplier})" if self.multiplier > 1 else ""
            return f"{self.algorithm}+doubling{suffix}"
        if self.algorithm == "hybrid":
            m_star = self.m_star if self.m_star is not None else "m*"
            return f"hybrid(m*={m_star};{c.c_edf}/{c.c_sjf}/{c.c_cms})"
        if self.algorithm == "hybrid-adaptive":
            return f"hybrid-adaptive({c.c_edf}/{c.c_sjf}/{c.c_cms})"
        machines = self.machines if self.machines is not None else f"{scale}m*"
        return f"{self.algorithm}(m={machines})"


class _Factory:
    def __init__(self, algorithm: str, multiplier: int, trace: bool):
        self.algorithm = algorithm
        self.multiplier = multiplier
        self.trace = trace

    def __call__(self, m: int) -> OnlineScheduler:
        size = self.multiplier * m
        if self.algorithm == "cms":
            return CmsScheduler(size, trace=self.trace)
        return GreedyScheduler(self.algorithm, size)


def build_scheduler(config: AlgorithmConfig, m_star: Optional[int] = None) -> OnlineScheduler:
    """Construct the scheduler; `m_star` fills whatever the config leaves open."""
    if config.needs_m_star and m_star is None:
        raise ConfigError(f"{config.label} needs a machine count or m*")
    if config.doubling:
        factory = _Factory(config.algorithm, config.multiplier, config.trace)
        return doubling_wrap(factory, name=config.label)
    machines = config.machines
    if machines is None and m_star is not None:
        machines = config.multiplier * m_star
    if config.algorithm in ("edf", "sjf"):
        return GreedyScheduler(config.algorithm, machines)
    if config.algorithm == "cms":
        return CmsScheduler(machines, trace=config.trace)
    if config.algorithm == "classed-edf":
        return classed_edf(machines)
    if config.algorithm == "hybrid":
        hybrid = HybridConfig(
            m_star=config.m_star if config.m_star is not None else m_star,
            **config.constants.model_dump(),
        )
        scheduler = hybrid_a(hybrid)
        scheduler.set_trace(config.trace)
        return scheduler
    return hybrid_a_adaptive(config.constants)
