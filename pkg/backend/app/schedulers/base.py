"""
Behavioral contract shared by every online scheduler.

The engine owns the clock. At each event it hands the scheduler a Tick (current
time, machine speed and the alive jobs with their remaining work) and asks for a
Decision: which job runs on which machine until the next event, plus an optional
wake-up time for scheduler-internal events such as a CMS budget running out.
Schedulers only ever see jobs that have already been released.
"""

import copy
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from ..core.models import Job
from ..core.rational import Rational


@dataclass
class AliveJob:
    """A released, unfinished job and the work it still needs."""

    job: Job
    remaining: Fraction


@dataclass(frozen=True)
class Tick:
    now: Fraction
    speed: Fraction
    alive: Mapping[int, AliveJob]

    def restrict(self, ids: Iterable[int]) -> "Tick":
        """The same instant seen by a sub-scheduler that owns only `ids`."""
        alive = {j: self.alive[j] for j in ids if j in self.alive}
        return Tick(now=self.now, speed=self.speed, alive=alive)

    def jobs(self) -> List[Job]:
        return [entry.job for entry in self.alive.values()]


class Failure(BaseModel):
    """Why a run stopped early: a scheduler gave up or a deadline became unreachable."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    time: Rational
    scheduler: str
    reason: str
    job: Optional[int] = None


@dataclass
class Decision:
    """Machine -> job assignment held constant until the next event."""

    assignment: Dict[int, int] = field(default_factory=dict)
    wake_up: Optional[Fraction] = None
    failure: Optional[Failure] = None

    def shifted(self, offset: int) -> "Decision":
        return Decision(
            assignment={machine + offset: job for machine, job in self.assignment.items()},
            wake_up=self.wake_up,
            failure=self.failure,
        )


def earliest(times: Iterable[Optional[Fraction]]) -> Optional[Fraction]:
    present = [t for t in times if t is not None]
    return min(present) if present else None


class MachineBlock(BaseModel):
    """A contiguous run of machine indices offset+1 .. offset+size owned by one pool."""

    model_config = ConfigDict(frozen=True)

    label: str
    offset: int = Field(ge=0)
    size: int = Field(ge=0)


class MachineLedger:
    """Hands out fresh machine blocks as pools open, so indices never get reused."""

    def __init__(self) -> None:
        self.blocks: List[MachineBlock] = []

    @property
    def total(self) -> int:
        return sum(block.size for block in self.blocks)

    def allocate(self, label: str, size: int) -> MachineBlock:
        block = MachineBlock(label=label, offset=self.total, size=size)
        self.blocks.append(block)
        return block


class OnlineScheduler(ABC):
    """Passive policy queried by the engine at every event."""

    name: str = "scheduler"

    @property
    @abstractmethod
    def machines(self) -> int:
        """Machines opened so far; decisions only use indices 1..machines."""

    @abstractmethod
    def admit(self, tick: Tick, jobs: Sequence[Job]) -> None:
        """Jobs released at tick.now, in id order. tick.alive already contains them."""

    @abstractmethod
    def decide(self, tick: Tick) -> Decision:
        """Assignment for [tick.now, next event)."""

    def advance(self, tick: Tick, until: Fraction, decision: Decision) -> None:
        """Account for time passing from tick.now to `until` under `decision`."""

    def snapshot(self) -> "OnlineScheduler":
        """Independent copy for look-ahead simulation."""
        return copy.deepcopy(self)

    def owner_of(self, job_id: int) -> str:
        """Label of the (sub-)scheduler responsible for `job_id`."""
        return self.name

    def pools(self) -> List[MachineBlock]:
        return [MachineBlock(label=self.name, offset=0, size=self.machines)]

    def export_trace(self) -> Optional[list]:
        return None

    def estimate(self) -> Optional[int]:
        """Running m* estimate, for policies that keep one."""
        return None
