"""
Turn an SJF deadline miss into a weakly critical pair.

T is the part of the failing job's lifespan during which it was not processed
and G the jobs SJF ran during T. While the failing job waits, SJF keeps all m
machines busy with jobs whose lifespans contain that instant, so T is covered
m times. The run must have continued to the failing job's deadline
(simulate(..., abort_on_miss=False)) for T to span the whole lifespan.
"""

from fractions import Fraction
from typing import List, Tuple

from ..core.laxity import relative_laxity
from ..core.models import Instance
from ..engine.simulator import RunResult
from ..errors import CertificateError
from .critical import CriticalPair


def idle_times(run: RunResult, job_id: int, lo: Fraction, hi: Fraction) -> List[Tuple[Fraction, Fraction]]:
    """[lo, hi) minus the pieces in which `job_id` ran, as sorted disjoint intervals."""
    busy = sorted((p.start, p.end) for p in run.schedule if p.job == job_id)
    gaps = []
    cursor = lo
    for start, end in busy:
        if start > cursor:
            gaps.append((cursor, min(start, hi)))
        cursor = max(cursor, end)
    if cursor < hi:
        gaps.append((cursor, hi))
    return [(a, b) for a, b in gaps if a < b]


def laxity_range(inst: Instance) -> Tuple[Fraction, Fraction]:
    rhos = [relative_laxity(job) for job in inst.jobs]
    return min(rhos), max(rhos)


def extract_sjf_certificate(run: RunResult, inst: Instance) -> CriticalPair:
    if run.failure is None or run.failure.job is None:
        raise CertificateError("the run has no deadline miss to certify")
    jobs = inst.by_id()
    failing = jobs.get(run.failure.job)
    if failing is None:
        raise CertificateError(f"failing job {run.failure.job} is not in the instance")
    if run.horizon_end is None or run.horizon_end < failing.d:
        raise CertificateError(
            f"the run stopped at {run.horizon_end}, before d={failing.d} of job {failing.id};"
            " simulate it with abort_on_miss=False"
        )

    times = idle_times(run, failing.id, Fraction(failing.r), Fraction(failing.d))
    if not times:
        raise CertificateError(f"job {failing.id} was never idle inside its lifespan")
    group = sorted(
        {
            p.job
            for p in run.schedule
            if p.job != failing.id and any(p.start < b and a < p.end for a, b in times)
        }
    )
    if not group:
        raise CertificateError("no job ran while the failing job waited")

    low, high = laxity_range(inst)
    if low <= 0 or high >= 1:
        raise CertificateError(f"relative laxities must lie in (0, 1), got [{low}, {high}]")
    longest = max(jobs[j].span for j in group)
    # strictly inside the tightness bound: every job in G has rho <= high < 1 - alpha
    alpha = (1 - high) * Fraction(2 * longest - 1, 2 * longest)
    beta = low / (5 * high)
    return CriticalPair(
        jobs=group,
        times=times,
        mu=run.machines_used,
        beta=beta,
        alpha=alpha,
    )
