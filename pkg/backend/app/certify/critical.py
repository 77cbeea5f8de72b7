"""
Checkers for (mu, beta)-critical and weakly critical pairs.

A pair (G, T) is critical when every instant of T lies in the lifespans of at
least mu jobs of G and each job of G overlaps T for at least beta times its
laxity; the weak form replaces the per-job condition by
|T| >= (beta / mu) * sum of the laxities in G. Both are only meaningful for
alpha-tight jobs, which is checked first.

Coverage is constant between consecutive endpoints of T and of the lifespans in
G, so checking one instant per elementary interval is exact.
"""

import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ..core.laxity import is_alpha_tight, laxity, lifespan
from ..core.models import Instance, Interval, Job
from ..core.rational import Rational
from ..errors import CertificateError, UnknownJobError

logger = logging.getLogger(__name__)


class CriticalPair(BaseModel):
    """(G, T) with its parameters; serialized as {"G", "T", "mu", "beta", "alpha"}."""

    model_config = ConfigDict(frozen=True, populate_by_name=True, arbitrary_types_allowed=True)

    jobs: List[int] = Field(alias="G")
    times: List[Tuple[Rational, Rational]] = Field(alias="T")
    mu: int = Field(ge=1)
    beta: Rational
    alpha: Rational

    @model_validator(mode="after")
    def _well_formed(self) -> "CriticalPair":
        if not self.times:
            raise ValueError("T must be nonempty")
        if not self.jobs:
            raise ValueError("G must be nonempty")
        for lo, hi in self.times:
            if not lo < hi:
                raise ValueError(f"empty interval [{lo}, {hi}) in T")
        for (_, end), (start, _) in zip(self.times, self.times[1:]):
            if start < end:
                raise ValueError("intervals in T must be sorted and pairwise disjoint")
        for name in ("beta", "alpha"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise ValueError(f"{name} must lie in (0, 1), got {value}")
        return self

    @property
    def intervals(self) -> List[Interval]:
        return [Interval(start=lo, end=hi) for lo, hi in self.times]

    @property
    def measure(self) -> Fraction:
        return sum((hi - lo for lo, hi in self.times), Fraction(0))

    def overlap(self, job: Job) -> Fraction:
        """|T intersected with I(j)|."""
        span = lifespan(job)
        return sum((iv.overlap(span) for iv in self.intervals), Fraction(0))


class CertificateReport(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    ok: bool
    condition: Optional[str] = None
    detail: str = ""
    job: Optional[int] = None
    time: Optional[Rational] = None

    def __bool__(self) -> bool:
        return self.ok


def _members(pair: CriticalPair, inst: Instance) -> List[Job]:
    jobs = inst.by_id()
    missing = [j for j in pair.jobs if j not in jobs]
    if missing:
        raise UnknownJobError(f"certificate references unknown job ids {missing}")
    return [jobs[j] for j in pair.jobs]


def elementary_intervals(pair: CriticalPair, members: List[Job]) -> List[Tuple[Fraction, Fraction]]:
    """The pieces of T between consecutive endpoints of T and of the G lifespans."""
    cuts = {Fraction(job.r) for job in members} | {Fraction(job.d) for job in members}
    pieces = []
    for lo, hi in pair.times:
        inner = sorted({lo, hi} | {c for c in cuts if lo < c < hi})
        pieces.extend(zip(inner, inner[1:]))
    return pieces


def coverage(members: List[Job], lo: Fraction, hi: Fraction) -> int:
    """Number of lifespans containing [lo, hi)."""
    return sum(1 for job in members if job.r <= lo and hi <= job.d)


def _common_checks(pair: CriticalPair, members: List[Job]) -> Optional[CertificateReport]:
    for job in members:
        if not is_alpha_tight(job, pair.alpha):
            return CertificateReport(
                ok=False,
                condition="tightness",
                detail=f"job {job.id} has p={job.p} <= alpha*|I|={pair.alpha * job.span}",
                job=job.id,
            )
    for lo, hi in elementary_intervals(pair, members):
        covered = coverage(members, lo, hi)
        if covered < pair.mu:
            return CertificateReport(
                ok=False,
                condition="coverage",
                detail=f"[{lo}, {hi}) is covered by {covered} < mu={pair.mu} lifespans",
                time=lo,
            )
    return None


def check_critical(pair: CriticalPair, inst: Instance) -> CertificateReport:
    members = _members(pair, inst)
    failed = _common_checks(pair, members)
    if failed is not None:
        return failed
    for job in members:
        need = pair.beta * laxity(job)
        got = pair.overlap(job)
        if got < need:
            return CertificateReport(
                ok=False,
                condition="laxity",
                detail=f"|T n I({job.id})| = {got} < beta*l = {need}",
                job=job.id,
            )
    return CertificateReport(ok=True)


def check_weakly_critical(pair: CriticalPair, inst: Instance) -> CertificateReport:
    members = _members(pair, inst)
    failed = _common_checks(pair, members)
    if failed is not None:
        return failed
    need = pair.beta / pair.mu * sum(laxity(job) for job in members)
    if pair.measure < need:
        return CertificateReport(
            ok=False,
            condition="aggregate laxity",
            detail=f"|T| = {pair.measure} < (beta/mu) * sum(l) = {need}",
        )
    return CertificateReport(ok=True)


def load_certificate(path) -> CriticalPair:
    path = Path(path)
    try:
        return CriticalPair.model_validate_json(path.read_text())
    except ValidationError as e:
        raise CertificateError(f"{path}: {e}") from e


def dump_certificate(pair: CriticalPair) -> str:
    data: Dict = pair.model_dump(mode="json", by_alias=True)
    return json.dumps(data, indent=2) + "\n"


def write_certificate(pair: CriticalPair, path) -> None:
    Path(path).write_text(dump_certificate(pair))
