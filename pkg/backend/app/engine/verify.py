"""
Exact schedule verification.

A schedule is a list of pieces (interval, machine, job). It is feasible on m
machines of speed s when no machine runs two jobs at once, no job runs on two
machines at once, every piece lies inside its job's lifespan and on a machine
1..m, and every job receives at least p_j / s time units of processing.
"""

from collections import defaultdict
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from pydantic import BaseModel, ConfigDict, Field

from ..core.models import Instance, Interval
from ..core.rational import Rational


class SchedulePiece(BaseModel):
    """Job `job` runs on `machine` during [start, end)."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    start: Rational
    end: Rational
    machine: int = Field(ge=1)
    job: int

    @property
    def interval(self) -> Interval:
        return Interval(start=self.start, end=self.end)

    @property
    def duration(self) -> Fraction:
        return self.end - self.start


class Violation(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: str
    detail: str
    job: Optional[int] = None
    machine: Optional[int] = None
    time: Optional[Rational] = None


class VerifyReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    ok: bool
    violation: Optional[Violation] = None

    def __bool__(self) -> bool:
        return self.ok


def _first_overlap(pieces: List[SchedulePiece]) -> Optional[tuple]:
    ordered = sorted(pieces, key=lambda piece: (piece.start, piece.end))
    for before, after in zip(ordered, ordered[1:]):
        if after.start < before.end:
            return before, after
    return None


def processing_time(schedule: Sequence[SchedulePiece]) -> Dict[int, Fraction]:
    totals: Dict[int, Fraction] = defaultdict(Fraction)
    for piece in schedule:
        totals[piece.job] += piece.duration
    return dict(totals)


def verify(
    schedule: Sequence[SchedulePiece],
    inst: Instance,
    m: int,
    speed: Fraction = Fraction(1),
) -> VerifyReport:
    """Return the first violation found, or a clean report."""
    jobs = inst.by_id()

    def fail(kind: str, detail: str, **where) -> VerifyReport:
        return VerifyReport(ok=False, violation=Violation(kind=kind, detail=detail, **where))

    for piece in schedule:
        if piece.start >= piece.end:
            return fail("empty piece", "piece has no duration", job=piece.job, time=piece.start)
        if piece.job not in jobs:
            return fail("unknown job", f"job {piece.job} is not in the instance", job=piece.job)
        if not 1 <= piece.machine <= m:
            return fail(
                "machine range",
                f"machine {piece.machine} outside 1..{m}",
                job=piece.job,
                machine=piece.machine,
            )
        job = jobs[piece.job]
        if piece.start < job.r or piece.end > job.d:
            return fail(
                "lifespan",
                f"piece [{piece.start}, {piece.end}) leaves [{job.r}, {job.d})",
                job=piece.job,
                machine=piece.machine,
                time=piece.start if piece.start < job.r else piece.end,
            )

    by_machine: Dict[int, List[SchedulePiece]] = defaultdict(list)
    by_job: Dict[int, List[SchedulePiece]] = defaultdict(list)
    for piece in schedule:
        by_machine[piece.machine].append(piece)
        by_job[piece.job].append(piece)

    for machine in sorted(by_machine):
        clash = _first_overlap(by_machine[machine])
        if clash:
            before, after = clash
            return fail(
                "machine conflict",
                f"jobs {before.job} and {after.job} overlap on machine {machine}",
                job=after.job,
                machine=machine,
                time=after.start,
            )
    for j in sorted(by_job):
        clash = _first_overlap(by_job[j])
        if clash:
            before, after = clash
            return fail(
                "job parallel",
                f"job {j} runs on machines {before.machine} and {after.machine} at once",
                job=j,
                machine=after.machine,
                time=after.start,
            )

    done = processing_time(schedule)
    for job in inst.jobs:
        needed = Fraction(job.p) / speed
        got = done.get(job.id, Fraction(0))
        if got < needed:
            return fail(
                "incomplete",
                f"job {job.id} processed {got} of {needed} time units",
                job=job.id,
            )
    return VerifyReport(ok=True)
