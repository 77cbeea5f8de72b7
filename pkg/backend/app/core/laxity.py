"""
Laxity arithmetic and the hybrid's routing rule.

Relative laxity rho_j = l_j / |I(j)| decides which sub-algorithm owns a job:
high laxity goes to EDF, intermediate laxity to one of the SJF buckets and
very tight jobs (rho_j <= 1/m*) to CMS.
"""

from fractions import Fraction

from .models import Interval, Job, Route, RouteKind

EDF_THRESHOLD = Fraction(1, 4)


def laxity(job: Job) -> int:
    """l_j = d_j - r_j - p_j, the idle time a job can afford inside its lifespan."""
    return job.d - job.r - job.p


def relative_laxity(job: Job) -> Fraction:
    """rho_j = l_j / (d_j - r_j), always in [0, 1)."""
    return Fraction(laxity(job), job.span)


def is_alpha_tight(job: Job, alpha: Fraction) -> bool:
    """True iff p_j > alpha * |I(j)|; the boundary p_j == alpha * |I(j)| counts as loose."""
    if not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    return job.p > alpha * job.span


def lifespan(job: Job) -> Interval:
    return Interval(start=job.r, end=job.d)


def covers(job: Job, t: Fraction) -> bool:
    """Half-open membership t in [r_j, d_j)."""
    return job.r <= t < job.d


def bucket_count(m_star: int) -> int:
    """max(0, ceil(lg lg m*)): the number of SJF buckets; 0 for m* <= 2."""
    if m_star < 1:
        raise ValueError(f"m_star must be >= 1, got {m_star}")
    if m_star <= 2:
        return 0
    k = 0
    while 2 ** (2**k) < m_star:
        k += 1
    return k


def bucket_range(i: int) -> tuple:
    """The half-open relative-laxity range (low, high] of SJF bucket i."""
    return Fraction(1, 2 ** (2 ** (i + 1))), Fraction(1, 2 ** (2**i))


def route_laxity(rho: Fraction, m_star: int) -> Route:
    """Route a relative laxity value; CMS takes precedence, then EDF, then the SJF buckets."""
    if rho <= Fraction(1, m_star):
        return Route(kind=RouteKind.CMS)
    if rho >= EDF_THRESHOLD:
        return Route(kind=RouteKind.EDF)
    for i in range(1, bucket_count(m_star) + 1):
        low, high = bucket_range(i)
        if low < rho <= high:
            return Route(kind=RouteKind.SJF, bucket=i)
    # the buckets reach below 1/m*, so this only keeps the rule total
    return Route(kind=RouteKind.EDF)


def route(job: Job, m_star: int) -> Route:
    return route_laxity(relative_laxity(job), m_star)
