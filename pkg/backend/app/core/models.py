"""
Domain types shared by every other module: jobs, instances, intervals and routes.

Lifespans are half-open [r, d). With integer endpoints and measure-based
definitions this matches the closed/open forms used in the literature, and it
gives an unambiguous answer to "which job runs at instant t".
"""

from enum import Enum
from fractions import Fraction
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from .rational import Rational


class Job(BaseModel):
    """An online job: released at r, due at d, needing p units of processing."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    id: int = Field(ge=0)
    r: int
    d: int
    p: int = Field(ge=1)

    @model_validator(mode="after")
    def _individually_schedulable(self) -> "Job":
        if self.d < self.r + self.p:
            raise ValueError(
                f"job {self.id}: deadline {self.d} < release {self.r} + size {self.p}"
            )
        return self

    @property
    def span(self) -> int:
        """Lifespan length |I(j)| = d - r."""
        return self.d - self.r


class Interval(BaseModel):
    """Half-open time interval [start, end) with exact endpoints."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    start: Rational
    end: Rational

    @model_validator(mode="after")
    def _nonempty(self) -> "Interval":
        if not self.start < self.end:
            raise ValueError(f"empty interval [{self.start}, {self.end})")
        return self

    @property
    def length(self) -> Fraction:
        return self.end - self.start

    def contains(self, t: Fraction) -> bool:
        return self.start <= t < self.end

    def overlap(self, other: "Interval") -> Fraction:
        """Measure of the intersection with another interval."""
        lo = max(self.start, other.start)
        hi = min(self.end, other.end)
        return hi - lo if hi > lo else Fraction(0)


class Instance(BaseModel):
    """A finite job set, kept sorted by (r, id) so list order is the arrival tie-break."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    jobs: List[Job] = Field(default_factory=list)

    @field_validator("jobs")
    @classmethod
    def _sorted_unique(cls, jobs: List[Job]) -> List[Job]:
        ids = [job.id for job in jobs]
        if len(ids) != len(set(ids)):
            raise ValueError("job ids must be unique")
        return sorted(jobs, key=lambda job: (job.r, job.id))

    def __len__(self) -> int:
        return len(self.jobs)

    def by_id(self) -> dict:
        return {job.id: job for job in self.jobs}

    def total_work(self) -> int:
        return sum(job.p for job in self.jobs)

    def horizon(self) -> Optional[Interval]:
        """Smallest interval containing every lifespan, or None when empty."""
        if not self.jobs:
            return None
        return Interval(
            start=min(job.r for job in self.jobs), end=max(job.d for job in self.jobs)
        )

    def prefix(self, before: int) -> "Instance":
        """Jobs released strictly before `before` (online-ness checks)."""
        return Instance(jobs=[job for job in self.jobs if job.r < before])


class RouteKind(str, Enum):
    EDF = "edf"
    SJF = "sjf"
    CMS = "cms"


class Route(BaseModel):
    """Which sub-algorithm of the hybrid owns a job; `bucket` is set only for SJF."""

    model_config = ConfigDict(frozen=True)

    kind: RouteKind
    bucket: Optional[int] = Field(default=None, ge=1)

    @model_validator(mode="after")
    def _bucket_iff_sjf(self) -> "Route":
        if (self.kind is RouteKind.SJF) != (self.bucket is not None):
            raise ValueError("an SJF route carries a bucket index, other routes do not")
        return self

    @property
    def key(self) -> str:
        """Pool key used by composite schedulers ("edf", "sjf-2", "cms")."""
        if self.kind is RouteKind.SJF:
            return f"sjf-{self.bucket}"
        return self.kind.value
