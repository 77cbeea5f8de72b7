"""
Event-driven simulator.

The engine owns the clock and advances exact rational time through the merged
stream of arrivals, completions, scheduler wake-ups and "latest start" instants
(the moment a waiting job's slack reaches zero). Between two events the
machine -> job assignment is constant, so a run is a finite list of pieces that
engine.verify can check exactly.

A run stops when every job has completed, when the scheduler declares failure,
or, with abort_on_miss, at the first instant some alive job can no longer meet
its deadline even if it ran continuously from now on.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from ..core.models import Instance, Job
from ..core.rational import Rational, as_time
from ..errors import SchedulerContractError
from ..schedulers.base import (
    AliveJob,
    Decision,
    Failure,
    MachineBlock,
    OnlineScheduler,
    Tick,
)
from ..schedulers.cms import CmsTraceEntry
from .verify import SchedulePiece

logger = logging.getLogger(__name__)

DEADLINE_MISS = "deadline miss"


class RunResult(BaseModel):
    """Everything a run produced; failures are data, not exceptions."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    algorithm: str
    speed: Rational
    machines_used: int
    machines_touched: int
    feasible: bool
    failure: Optional[Failure] = None
    events: int
    completions: Dict[int, Rational]
    missed: List[int]
    horizon_end: Optional[Rational] = None
    pools: List[MachineBlock]
    schedule: List[SchedulePiece]
    trace: Optional[List[CmsTraceEntry]] = None
    m_hat: Optional[int] = None


@dataclass
class _Outcome:
    now: Fraction
    events: int = 0
    failure: Optional[Failure] = None
    missed: List[int] = field(default_factory=list)
    completions: Dict[int, Fraction] = field(default_factory=dict)
    schedule: List[SchedulePiece] = field(default_factory=list)


class _PieceRecorder:
    """Turns the per-event assignments into maximal pieces."""

    def __init__(self, enabled: bool):
        self.enabled = enabled
        self.open: Dict[int, Tuple[int, Fraction]] = {}
        self.pieces: List[SchedulePiece] = []

    def update(self, assignment: Dict[int, int], now: Fraction) -> None:
        if not self.enabled:
            return
        for machine in list(self.open):
            job, start = self.open[machine]
            if assignment.get(machine) != job:
                self._close(machine, now)
        for machine, job in assignment.items():
            if machine not in self.open:
                self.open[machine] = (job, now)

    def close_all(self, now: Fraction) -> None:
        for machine in list(self.open):
            self._close(machine, now)

    def _close(self, machine: int, now: Fraction) -> None:
        job, start = self.open.pop(machine)
        if now > start:
            self.pieces.append(SchedulePiece(start=start, end=now, machine=machine, job=job))


def _check_decision(
    decision: Decision, alive: Dict[int, AliveJob], scheduler: OnlineScheduler, now: Fraction
) -> None:
    seen = set()
    for machine, job in decision.assignment.items():
        if not 1 <= machine <= scheduler.machines:
            raise SchedulerContractError(
                f"{scheduler.name} used machine {machine} of {scheduler.machines} at t={now}"
            )
        if job not in alive:
            raise SchedulerContractError(f"{scheduler.name} ran job {job} which is not alive")
        if job in seen:
            raise SchedulerContractError(f"{scheduler.name} ran job {job} on two machines")
        seen.add(job)
    if decision.wake_up is not None and decision.wake_up <= now:
        raise SchedulerContractError(
            f"{scheduler.name} asked to wake at {decision.wake_up}, not after {now}"
        )


def _run(
    scheduler: OnlineScheduler,
    pending: Sequence[Job],
    alive: Dict[int, AliveJob],
    start: Fraction,
    speed: Fraction,
    abort_on_miss: bool,
    record: bool,
) -> _Outcome:
    recorder = _PieceRecorder(record)
    outcome = _Outcome(now=start)
    doomed: set = set()
    idx = 0
    now = Fraction(pending[0].r) if pending and not alive else start

    while True:
        batch = []
        while idx < len(pending) and pending[idx].r <= now:
            job = pending[idx]
            idx += 1
            alive[job.id] = AliveJob(job=job, remaining=Fraction(job.p))
            batch.append(job)
        if batch:
            batch.sort(key=lambda job: job.id)
            scheduler.admit(Tick(now=now, speed=speed, alive=alive), batch)

        for j in [j for j, entry in alive.items() if entry.job.d <= now]:
            del alive[j]

        if not alive:
            recorder.close_all(now)
            if idx >= len(pending):
                break
            now = Fraction(pending[idx].r)
            continue

        tick = Tick(now=now, speed=speed, alive=alive)
        decision = scheduler.decide(tick)
        outcome.events += 1
        if decision.failure is not None:
            outcome.failure = decision.failure
            break
        _check_decision(decision, alive, scheduler, now)
        running = set(decision.assignment.values())

        for j in sorted(alive):
            if j in doomed:
                continue
            entry = alive[j]
            slack = entry.job.d - now - entry.remaining / speed
            if slack < 0 or (slack == 0 and j not in running):
                doomed.add(j)
                outcome.missed.append(j)
                if outcome.failure is None:
                    outcome.failure = Failure(
                        time=now, scheduler=scheduler.owner_of(j), reason=DEADLINE_MISS, job=j
                    )
        if outcome.failure is not None and abort_on_miss:
            logger.info("%s: job %s cannot meet its deadline at t=%s", scheduler.name, outcome.failure.job, now)
            break

        recorder.update(decision.assignment, now)

        candidates: List[Fraction] = []
        if decision.wake_up is not None:
            candidates.append(decision.wake_up)
        if idx < len(pending):
            candidates.append(Fraction(pending[idx].r))
        for j, entry in alive.items():
            if j in running:
                candidates.append(now + entry.remaining / speed)
            if j in doomed:
                # dropped at its deadline even while running
                candidates.append(Fraction(entry.job.d))
            elif j not in running:
                latest_start = entry.job.d - entry.remaining / speed
                if latest_start > now:
                    candidates.append(latest_start)
        until = min(candidates)

        elapsed = until - now
        for j in running:
            alive[j].remaining -= speed * elapsed
        scheduler.advance(tick, until, decision)
        now = until
        for j in sorted(running):
            if alive[j].remaining == 0:
                outcome.completions[j] = now
                del alive[j]

    recorder.close_all(now)
    outcome.now = now
    outcome.schedule = sorted(recorder.pieces, key=lambda piece: (piece.start, piece.machine))
    return outcome


def simulate(
    scheduler: OnlineScheduler,
    inst: Instance,
    speed=Fraction(1),
    abort_on_miss: bool = True,
) -> RunResult:
    """Run `scheduler` (a private copy of it) over `inst` on machines of speed `speed`."""
    speed = as_time(speed)
    if speed <= 0:
        raise ValueError(f"speed must be positive, got {speed}")
    policy = scheduler.snapshot()
    outcome = _run(
        policy,
        pending=list(inst.jobs),
        alive={},
        start=Fraction(inst.jobs[0].r) if inst.jobs else Fraction(0),
        speed=speed,
        abort_on_miss=abort_on_miss,
        record=True,
    )
    feasible = (
        outcome.failure is None
        and not outcome.missed
        and len(outcome.completions) == len(inst.jobs)
    )
    return RunResult(
        algorithm=policy.name,
        speed=speed,
        machines_used=policy.machines,
        machines_touched=len({piece.machine for piece in outcome.schedule}),
        feasible=feasible,
        failure=outcome.failure,
        events=outcome.events,
        completions=dict(sorted(outcome.completions.items())),
        missed=sorted(outcome.missed),
        horizon_end=outcome.now if inst.jobs else None,
        pools=policy.pools(),
        schedule=outcome.schedule,
        trace=policy.export_trace(),
        m_hat=policy.estimate(),
    )


def lookahead_feasible(snapshot: OnlineScheduler, tick: Tick) -> bool:
    """
    Simulate `snapshot` from tick.now assuming no further arrivals.

    The snapshot is copied first; True iff every alive job completes and the
    scheduler never declares failure.
    """
    probe = snapshot.snapshot()
    alive = {
        j: AliveJob(job=entry.job, remaining=entry.remaining) for j, entry in tick.alive.items()
    }
    if not alive:
        return True
    outcome = _run(
        probe,
        pending=[],
        alive=alive,
        start=tick.now,
        speed=tick.speed,
        abort_on_miss=True,
        record=False,
    )
    return outcome.failure is None and not outcome.missed
