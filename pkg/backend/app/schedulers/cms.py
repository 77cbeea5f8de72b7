"""
The budget-burning algorithm for very tight jobs (Chen, Megow and Schewior).

Each job's laxity is split evenly over m_cms + 1 machines as delay budgets
b_ji. At every recompute, Sub-CMS walks the alive jobs latest-arrival-first
with a machine cursor: a job is assigned the cursor's machine, and if its budget
for that machine is already exhausted it is processed there ("active") and the
cursor moves on; otherwise it waits ("inactive") and burns that budget at rate 1.
Processing anything on machine m_cms + 1 is a declared failure.

Between recomputes the assignment is constant; the next recompute happens when
an inactive job exhausts its budget, an active job completes, or a job arrives.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from ..core.laxity import laxity
from ..core.models import Job
from ..core.rational import Rational
from .base import Decision, Failure, OnlineScheduler, Tick

logger = logging.getLogger(__name__)

FORBIDDEN_REASON = "job processed on forbidden machine"


def sub_cms(
    order: Sequence[int], budgets: Mapping[int, Sequence[Fraction]], m_cms: int
) -> Dict[int, int]:
    """
    Assign machines (1-based) to jobs given latest-arrival-first.

    Several inactive jobs may share a machine index; active jobs never do. The
    cursor stops at the forbidden machine m_cms + 1: once a job is active there
    the run has failed and later jobs are left unassigned.
    """
    psi: Dict[int, int] = {}
    cursor = 1
    forbidden = m_cms + 1
    for j in order:
        if cursor > forbidden:
            break
        psi[j] = cursor
        if budgets[j][cursor - 1] == 0:
            cursor += 1
    return psi


@dataclass
class CmsState:
    """Budgets b_ji, remaining sizes p_j(t) and the current assignment psi."""

    m_cms: int
    budgets: Dict[int, List[Fraction]] = field(default_factory=dict)
    remaining: Dict[int, Fraction] = field(default_factory=dict)
    psi: Dict[int, int] = field(default_factory=dict)
    arrival: Dict[int, Tuple[int, int]] = field(default_factory=dict)
    last_recompute: Fraction = Fraction(0)

    def admit(self, job: Job) -> None:
        share = Fraction(laxity(job), self.m_cms + 1)
        self.budgets[job.id] = [share] * (self.m_cms + 1)
        self.remaining[job.id] = Fraction(job.p)
        self.arrival[job.id] = (job.r, job.id)

    def retain(self, alive_ids) -> None:
        """Forget jobs the engine no longer reports alive (completed or expired)."""
        for j in [j for j in self.remaining if j not in alive_ids]:
            del self.remaining[j]
            del self.budgets[j]
            del self.arrival[j]
            self.psi.pop(j, None)

    def order(self) -> List[int]:
        """Alive jobs latest arrival first; simultaneous arrivals by id descending."""
        return sorted(self.remaining, key=lambda j: self.arrival[j], reverse=True)

    def assigned_budget(self, j: int) -> Fraction:
        return self.budgets[j][self.psi[j] - 1]

    def is_active(self, j: int) -> bool:
        return j in self.psi and self.assigned_budget(j) == 0

    def advance(self, elapsed: Fraction, speed: Fraction) -> None:
        """Inactive jobs burn budget at rate 1; active jobs lose work at rate `speed`."""
        for j, machine in self.psi.items():
            if self.budgets[j][machine - 1] > 0:
                left = self.budgets[j][machine - 1] - elapsed
                assert left >= 0, "budget overshoot: event horizon was skipped"
                self.budgets[j][machine - 1] = left
            else:
                left = self.remaining[j] - speed * elapsed
                assert left >= 0, "work overshoot: completion event was skipped"
                self.remaining[j] = left


@dataclass
class CmsStep:
    assignment: Dict[int, int]
    next_event: Optional[Fraction]
    failed: bool = False
    failing_job: Optional[int] = None


def cms_step(
    state: CmsState,
    now: Fraction,
    next_arrival: Optional[Fraction] = None,
    speed: Fraction = Fraction(1),
) -> CmsStep:
    """Recompute psi at `now` and report the assignment and the next event time."""
    order = state.order()
    state.psi = sub_cms(order, state.budgets, state.m_cms)
    state.last_recompute = now
    forbidden = state.m_cms + 1
    for j in order:
        if state.psi.get(j) == forbidden and state.assigned_budget(j) == 0:
            return CmsStep(assignment={}, next_event=None, failed=True, failing_job=j)

    horizon: List[Fraction] = []
    assignment: Dict[int, int] = {}
    for j, machine in state.psi.items():
        budget = state.budgets[j][machine - 1]
        if budget > 0:
            horizon.append(budget)
        else:
            horizon.append(state.remaining[j] / speed)
            assignment[machine] = j
    next_event = now + min(horizon) if horizon else None
    if next_arrival is not None and (next_event is None or next_arrival < next_event):
        next_event = next_arrival
    return CmsStep(assignment=assignment, next_event=next_event)


class CmsTraceEntry(BaseModel):
    """One recompute of psi, recorded when tracing is on."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    time: Rational
    psi: Dict[int, int]
    active: List[int]
    budgets: Dict[int, List[Rational]]
    remaining: Dict[int, Rational]
    shared_machines: List[int]


class CmsScheduler(OnlineScheduler):
    """CMS on m_cms usable machines plus the forbidden machine m_cms + 1."""

    def __init__(self, m_cms: int, name: str = "cms", trace: bool = False):
        if m_cms < 1:
            raise ValueError(f"CMS needs m_cms >= 1, got {m_cms}")
        self.state = CmsState(m_cms=m_cms)
        self.name = name
        self.trace = trace
        self.trace_log: List[CmsTraceEntry] = []

    @property
    def machines(self) -> int:
        return self.state.m_cms

    def admit(self, tick: Tick, jobs: Sequence[Job]) -> None:
        for job in jobs:
            self.state.admit(job)

    def decide(self, tick: Tick) -> Decision:
        self.state.retain(tick.alive)
        if not self.state.remaining:
            return Decision()
        step = cms_step(self.state, tick.now, speed=tick.speed)
        if self.trace:
            self._record(tick.now)
        if step.failed:
            logger.info(
                "%s: job %s active on forbidden machine %s at t=%s",
                self.name,
                step.failing_job,
                self.state.m_cms + 1,
                tick.now,
            )
            return Decision(
                failure=Failure(
                    time=tick.now,
                    scheduler=self.name,
                    reason=FORBIDDEN_REASON,
                    job=step.failing_job,
                )
            )
        return Decision(assignment=step.assignment, wake_up=step.next_event)

    def advance(self, tick: Tick, until: Fraction, decision: Decision) -> None:
        self.state.advance(until - tick.now, tick.speed)

    def export_trace(self) -> Optional[list]:
        return list(self.trace_log) if self.trace else None

    def _record(self, now: Fraction) -> None:
        state = self.state
        counts: Dict[int, int] = {}
        for machine in state.psi.values():
            counts[machine] = counts.get(machine, 0) + 1
        self.trace_log.append(
            CmsTraceEntry(
                time=now,
                psi=dict(sorted(state.psi.items())),
                active=sorted(j for j in state.psi if state.is_active(j)),
                budgets={j: list(b) for j, b in sorted(state.budgets.items())},
                remaining=dict(sorted(state.remaining.items())),
                shared_machines=sorted(m for m, c in counts.items() if c > 1),
            )
        )
