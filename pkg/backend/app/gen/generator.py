"""
Seeded instance generators.

generate(spec) is a pure function of its GenSpec: every draw goes through one
numpy Generator seeded from spec.seed. To hit a relative-laxity range exactly
with integer data a job's lifespan length is drawn first and its size is then
chosen from the integer range that range forces, redrawing when it is empty.
"""

import logging
import math
from fractions import Fraction
from typing import Callable, Dict, List, Literal, Optional

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..core.models import Instance, Job
from ..core.rational import Rational
from ..errors import GeneratorError

logger = logging.getLogger(__name__)

Kind = Literal[
    "uniform",
    "bucketed",
    "very_tight",
    "loose",
    "laminar",
    "agreeable",
    "adversarial_doubling",
    "burst",
]

KINDS = (
    "uniform",
    "bucketed",
    "very_tight",
    "loose",
    "laminar",
    "agreeable",
    "adversarial_doubling",
    "burst",
)

MAX_ATTEMPTS = 1000


class GenSpec(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid", arbitrary_types_allowed=True)

    kind: Kind
    n: int = Field(default=20, ge=0)
    horizon: int = Field(default=100, ge=1)
    max_size: int = Field(default=10, ge=1)
    seed: int = 0
    l1: Optional[Rational] = None
    l2: Optional[Rational] = None
    m: Optional[int] = Field(default=None, ge=1)
    rho0: Rational = Fraction(1, 2)

    @model_validator(mode="after")
    def _kind_parameters(self) -> "GenSpec":
        if self.kind in ("bucketed", "burst"):
            if self.l1 is None or self.l2 is None:
                raise ValueError(f"{self.kind} needs l1 and l2")
            if not 0 <= self.l1 <= self.l2 < 1:
                raise ValueError(f"need 0 <= l1 <= l2 < 1, got l1={self.l1}, l2={self.l2}")
        if self.kind == "very_tight" and self.m is None:
            raise ValueError("very_tight needs m")
        if not 0 <= self.rho0 < 1:
            raise ValueError(f"rho0 must lie in [0, 1), got {self.rho0}")
        return self


class _Draw:
    """Integer draws from one seeded generator."""

    def __init__(self, seed: int):
        self.rng = np.random.default_rng(seed)

    def integer(self, lo: int, hi: int) -> int:
        """Uniform on [lo, hi] inclusive."""
        return int(self.rng.integers(lo, hi + 1))


def size_for_laxity(span: int, lo: Fraction, hi: Optional[Fraction], cap: int) -> Optional[range]:
    """Sizes p in [1, cap] with (span - p) / span inside [lo, hi]."""
    p_min = 1 if hi is None else max(1, math.ceil(span * (1 - hi)))
    p_max = min(cap, span, math.floor(span * (1 - lo)))
    if p_min > p_max:
        return None
    return range(p_min, p_max + 1)


def _job_in_range(
    draw: _Draw, job_id: int, r: int, spans: range, lo: Fraction, hi: Optional[Fraction], cap: int
) -> Job:
    for _ in range(MAX_ATTEMPTS):
        span = draw.integer(spans.start, spans.stop - 1)
        sizes = size_for_laxity(span, lo, hi, cap)
        if sizes is not None:
            p = draw.integer(sizes.start, sizes.stop - 1)
            return Job(id=job_id, r=r, d=r + span, p=p)
    raise GeneratorError(
        f"no integer job with lifespan in [{spans.start}, {spans.stop - 1}], size <= {cap}"
        f" and relative laxity in [{lo}, {hi}]"
    )


def _max_span(spec: GenSpec, hi_rho: Fraction) -> int:
    if hi_rho >= 1:
        # no laxity cap (very_tight with m=1): any lifespan up to the horizon
        return max(2, spec.horizon)
    # the longest lifespan whose forced size still fits under max_size
    return max(2, math.ceil(spec.max_size / (1 - hi_rho)))


def _uniform(spec: GenSpec, draw: _Draw) -> List[Job]:
    jobs = []
    for j in range(spec.n):
        r = draw.integer(0, spec.horizon - 1)
        p = draw.integer(1, spec.max_size)
        slack = draw.integer(0, 2 * spec.max_size)
        jobs.append(Job(id=j, r=r, d=r + p + slack, p=p))
    return jobs


def _ranged(spec: GenSpec, draw: _Draw, lo: Fraction, hi: Optional[Fraction]) -> List[Job]:
    spans = range(1, _max_span(spec, hi if hi is not None else Fraction(0)) + 1)
    return [
        _job_in_range(draw, j, draw.integer(0, spec.horizon - 1), spans, lo, hi, spec.max_size)
        for j in range(spec.n)
    ]


def _bucketed(spec: GenSpec, draw: _Draw) -> List[Job]:
    return _ranged(spec, draw, spec.l1, spec.l2)


def _very_tight(spec: GenSpec, draw: _Draw) -> List[Job]:
    return _ranged(spec, draw, Fraction(0), Fraction(1, spec.m))


def _loose(spec: GenSpec, draw: _Draw) -> List[Job]:
    spans = range(1, math.ceil(spec.max_size / (1 - spec.rho0)) + 1)
    return [
        _job_in_range(draw, j, draw.integer(0, spec.horizon - 1), spans, spec.rho0, None, spec.max_size)
        for j in range(spec.n)
    ]


def _laminar(spec: GenSpec, draw: _Draw) -> List[Job]:
    # lifespans are the nodes of random binary splits of [0, horizon)
    jobs: List[Job] = []
    frontier = [(0, spec.horizon)]
    while len(jobs) < spec.n:
        fresh = bool(frontier)
        if fresh:
            lo, hi = frontier.pop(draw.integer(0, len(frontier) - 1))
        else:
            # every cut is used up: repeat an existing lifespan, never split it again
            base = jobs[draw.integer(0, len(jobs) - 1)]
            lo, hi = base.r, base.d
        p = draw.integer(1, min(spec.max_size, hi - lo))
        jobs.append(Job(id=len(jobs), r=lo, d=hi, p=p))
        if fresh and hi - lo >= 2:
            cut = draw.integer(lo + 1, hi - 1)
            frontier.extend([(lo, cut), (cut, hi)])
    return jobs


def _agreeable(spec: GenSpec, draw: _Draw) -> List[Job]:
    releases = sorted(draw.integer(0, spec.horizon - 1) for _ in range(spec.n))
    jobs: List[Job] = []
    last_deadline = 0
    for j, r in enumerate(releases):
        p = draw.integer(1, spec.max_size)
        d = max(r + p + draw.integer(0, 2 * spec.max_size), last_deadline)
        last_deadline = d
        jobs.append(Job(id=j, r=r, d=d, p=p))
    return jobs


def _adversarial_doubling(spec: GenSpec, draw: _Draw) -> List[Job]:
    # waves of 1, 2, 4, ... zero-laxity jobs; wave w is released when wave w-1 is due
    jobs: List[Job] = []
    wave = 0
    while len(jobs) < spec.n:
        r = wave * spec.max_size
        for _ in range(min(2**wave, spec.n - len(jobs))):
            p = draw.integer(max(1, spec.max_size // 2), spec.max_size)
            jobs.append(Job(id=len(jobs), r=r, d=r + p, p=p))
        wave += 1
    return jobs


def _burst(spec: GenSpec, draw: _Draw) -> List[Job]:
    # lifespan lengths within a factor 2 of each other, releases in a short window;
    # sizes follow from the laxity range, so max_size does not apply
    spans = range(max(1, math.ceil(spec.horizon / 2)), spec.horizon + 1)
    window = max(1, spec.horizon // 8)
    return [
        _job_in_range(draw, j, draw.integer(0, window - 1), spans, spec.l1, spec.l2, spec.horizon)
        for j in range(spec.n)
    ]


GENERATORS: Dict[str, Callable[[GenSpec, _Draw], List[Job]]] = {
    "uniform": _uniform,
    "bucketed": _bucketed,
    "very_tight": _very_tight,
    "loose": _loose,
    "laminar": _laminar,
    "agreeable": _agreeable,
    "adversarial_doubling": _adversarial_doubling,
    "burst": _burst,
}


def generate(spec: GenSpec) -> Instance:
    jobs = GENERATORS[spec.kind](spec, _Draw(spec.seed))
    logger.debug("generated %d %s jobs (seed %d)", len(jobs), spec.kind, spec.seed)
    return Instance(jobs=jobs)


def p_ratio(inst: Instance) -> Fraction:
    """max p / min p."""
    if not inst.jobs:
        raise ValueError("p_ratio needs a nonempty instance")
    sizes = [job.p for job in inst.jobs]
    return Fraction(max(sizes), min(sizes))
