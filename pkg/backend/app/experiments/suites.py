"""
Parameter sweeps and trend suites.

Each suite builds its own seeded instance family, runs the relevant schedulers
and returns a pydantic summary that the report template renders and the slow
tests assert on.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from decimal import Decimal
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict

from ..certify.bounds import hybrid_machine_budget, implied_lower_bound, sjf_machine_bound
from ..certify.critical import check_weakly_critical
from ..certify.sjf_certificate import extract_sjf_certificate
from ..core.laxity import bucket_count, bucket_range
from ..core.models import Instance, Job
from ..engine.simulator import simulate
from ..gen.generator import GenSpec, generate
from ..schedulers.adaptive import ADAPTIVE_ROUTING_FLOOR
from ..schedulers.greedy import GreedyScheduler
from ..schedulers.hybrid import PoolConstants
from ..schedulers.registry import AlgorithmConfig
from ..settings import get_settings
from .harness import execute, oracle_m_star

logger = logging.getLogger(__name__)

Labeled = Tuple[str, Instance, int]

TREND_SIZES = (2, 4, 8, 16)
TREND_TOLERANCE = Fraction(1, 5)
MAX_SEED_SCAN = 50


def _map(fn: Callable, items: Sequence, threads: Optional[int]) -> List:
    threads = threads if threads is not None else get_settings().threads
    if threads > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


def _collect(count: int, seed0: int, make: Callable[[int], Optional[Labeled]]) -> List[Labeled]:
    found: List[Labeled] = []
    seed = seed0
    while len(found) < count:
        if seed - seed0 > MAX_SEED_SCAN * count:
            raise RuntimeError(f"only {len(found)} of {count} suite instances after {seed - seed0} seeds")
        item = make(seed)
        if item is not None:
            found.append(item)
        seed += 1
    return found


# --- instance families -------------------------------------------------------


def very_tight_suite(count: int, seed0: int = 0, m_range: Tuple[int, int] = (2, 8)) -> List[Labeled]:
    """Very tight instances (rho <= 1/8, at most 24 jobs) with m* inside `m_range`."""

    def make(seed: int) -> Optional[Labeled]:
        inst = generate(GenSpec(kind="very_tight", m=8, n=24, horizon=30, max_size=10, seed=seed))
        m_star = oracle_m_star(inst)
        if m_range[0] <= m_star <= m_range[1]:
            return f"very_tight-{seed}", inst, m_star
        return None

    return _collect(count, seed0, make)


def loose_suite(count: int, seed0: int = 0, m_range: Tuple[int, int] = (1, 8)) -> List[Labeled]:
    """1/2-loose instances with m* inside `m_range`."""

    def make(seed: int) -> Optional[Labeled]:
        inst = generate(GenSpec(kind="loose", n=20, horizon=30, max_size=8, seed=seed))
        m_star = oracle_m_star(inst)
        if m_range[0] <= m_star <= m_range[1]:
            return f"loose-{seed}", inst, m_star
        return None

    return _collect(count, seed0, make)


TREND_BLOCK = 8
TREND_EXTRAS = 4
TREND_RHO = Fraction(2, 3)


def trend_instance(m_star: int, seed: int) -> Instance:
    """
    m_star concurrent zero-laxity jobs, then m_star copies of one seeded loose pattern.

    The opening block forces m* >= m_star. The pattern is trimmed until it fits on
    one machine, so the copies need at most m_star machines and the oracle returns
    exactly m_star. Zero-laxity jobs go to the CMS pool and jobs with relative
    laxity above 1/2 go to the EDF pool for every m* >= 2, so the machines the
    hybrid touches scale with the copies and only the pattern varies by seed.
    """
    block = TREND_BLOCK
    pattern = generate(
        GenSpec(kind="loose", n=TREND_EXTRAS, horizon=4 * block, max_size=block, rho0=TREND_RHO, seed=seed)
    ).jobs
    while len(pattern) > 1 and oracle_m_star(Instance(jobs=pattern)) > 1:
        pattern = pattern[:-1]
    jobs = [Job(id=j, r=0, d=block, p=block) for j in range(m_star)]
    for _ in range(m_star):
        for job in pattern:
            jobs.append(Job(id=len(jobs), r=block + job.r, d=block + job.d, p=job.p))
    return Instance(jobs=sorted(jobs, key=lambda job: (job.r, job.id)))


# --- CMS constant sweep --------------------------------------------------------


class CmsSweep(BaseModel):
    instances: int
    failures: Dict[int, int]
    minimal_c: Optional[int] = None


def _cms_failures(task) -> bool:
    c, name, inst, m_star = task
    config = AlgorithmConfig(algorithm="cms", machines=c * m_star)
    return not execute(config, inst).feasible


def cms_constant_sweep(
    instances: Sequence[Labeled], constants: Sequence[int] = range(1, 17), threads: Optional[int] = None
) -> CmsSweep:
    failures: Dict[int, int] = {}
    for c in constants:
        tasks = [(c, name, inst, m_star) for name, inst, m_star in instances]
        failures[c] = sum(_map(_cms_failures, tasks, threads))
        logger.info("cms sweep: c=%d failed on %d of %d instances", c, failures[c], len(tasks))
    zero = [c for c in constants if failures[c] == 0]
    return CmsSweep(instances=len(instances), failures=failures, minimal_c=min(zero) if zero else None)


# --- hybrid trend --------------------------------------------------------------


class TrendPoint(BaseModel):
    m_star: int
    instances: int
    all_feasible: bool
    allocated: int
    machines: int
    ratio: Fraction

    model_config = ConfigDict(arbitrary_types_allowed=True)


class HybridTrend(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    constants: PoolConstants
    points: List[TrendPoint]
    baseline: Fraction
    worst_growth: Fraction
    within_tolerance: bool


def _trend_run(task) -> Tuple[bool, int, int]:
    m_star, seed, constants = task
    inst = trend_instance(m_star, seed)
    config = AlgorithmConfig(algorithm="hybrid", m_star=m_star, constants=constants)
    result = execute(config, inst)
    return result.feasible, result.machines_used, result.machines_touched


def hybrid_trend(
    per_size: int = 5,
    m_stars: Sequence[int] = TREND_SIZES,
    constants: PoolConstants = PoolConstants(),
    seed0: int = 0,
    threads: Optional[int] = None,
) -> HybridTrend:
    """
    Machines the hybrid ran jobs on, divided by m* * max(1, ceil(lg lg m*)), per m*.

    The pool budget is reported as `allocated`; the ratio uses the machines that
    appear in the schedule, worst instance per m*. Growth is measured against the
    ratio at the first m*.
    """
    points = []
    for m_star in m_stars:
        tasks = [(m_star, seed0 + k, constants) for k in range(per_size)]
        outcomes = _map(_trend_run, tasks, threads)
        machines = max(touched for _, _, touched in outcomes)
        ratio = Fraction(machines, m_star * max(1, bucket_count(m_star)))
        points.append(
            TrendPoint(
                m_star=m_star,
                instances=per_size,
                all_feasible=all(ok for ok, _, _ in outcomes),
                allocated=max(used for _, used, _ in outcomes),
                machines=machines,
                ratio=ratio,
            )
        )
        logger.info("hybrid trend: m*=%d touched %d of %d machines", m_star, machines, points[-1].allocated)
    baseline = points[0].ratio
    worst = max(point.ratio / baseline for point in points) - 1
    return HybridTrend(
        constants=constants,
        points=points,
        baseline=baseline,
        worst_growth=worst,
        within_tolerance=worst <= TREND_TOLERANCE and all(p.all_feasible for p in points),
    )


# --- doubling overhead ---------------------------------------------------------


class DoublingPoint(BaseModel):
    instance: str
    m_star: int
    parameterized: int
    doubling: int
    feasible: bool

    @property
    def within_bound(self) -> bool:
        return self.doubling <= 4 * self.parameterized


class DoublingOverhead(BaseModel):
    multiplier: int
    points: List[DoublingPoint]

    @property
    def all_within_bound(self) -> bool:
        return all(point.within_bound and point.feasible for point in self.points)

    @property
    def worst_ratio(self) -> Fraction:
        return max(Fraction(p.doubling, p.parameterized) for p in self.points)


def _doubling_run(task) -> DoublingPoint:
    name, inst, m_star, multiplier = task
    fixed = execute(AlgorithmConfig(algorithm="edf", machines=multiplier * m_star), inst)
    wrapped = execute(AlgorithmConfig(algorithm="edf", doubling=True, multiplier=multiplier), inst)
    return DoublingPoint(
        instance=name,
        m_star=m_star,
        parameterized=fixed.machines_used,
        doubling=wrapped.machines_used,
        feasible=fixed.feasible and wrapped.feasible,
    )


def doubling_overhead(
    instances: Sequence[Labeled], multiplier: int = 4, threads: Optional[int] = None
) -> DoublingOverhead:
    """EDF on multiplier * m* machines against the doubling cascade of EDF on multiplier * 2^(k-1)."""
    tasks = [(name, inst, m_star, multiplier) for name, inst, m_star in instances]
    return DoublingOverhead(multiplier=multiplier, points=_map(_doubling_run, tasks, threads))


# --- adaptive hybrid overhead ----------------------------------------------------


class AdaptivePoint(BaseModel):
    instance: str
    m_star: int
    m_hat: int
    machines: int
    budget: int
    feasible: bool

    @property
    def within_bound(self) -> bool:
        return self.machines <= 4 * self.budget


class AdaptiveOverhead(BaseModel):
    constants: PoolConstants
    points: List[AdaptivePoint]

    @property
    def all_within_bound(self) -> bool:
        return all(point.within_bound and point.feasible for point in self.points)

    @property
    def worst_ratio(self) -> Fraction:
        return max(Fraction(p.machines, p.budget) for p in self.points)


def _adaptive_run(task) -> AdaptivePoint:
    name, inst, m_star, constants = task
    result = execute(AlgorithmConfig(algorithm="hybrid-adaptive", constants=constants), inst)
    m_hat = result.m_hat or 1
    return AdaptivePoint(
        instance=name,
        m_star=m_star,
        m_hat=m_hat,
        machines=result.machines_used,
        # the adaptive run routes like the fixed hybrid with m* = max(m_hat, floor)
        budget=hybrid_machine_budget(max(m_hat, ADAPTIVE_ROUTING_FLOOR), constants),
        feasible=result.feasible,
    )


def adaptive_overhead(
    instances: Sequence[Labeled], constants: PoolConstants = PoolConstants(), threads: Optional[int] = None
) -> AdaptiveOverhead:
    """Machines of the adaptive hybrid against the fixed hybrid's budget at the final estimate."""
    tasks = [(name, inst, m_star, constants) for name, inst, m_star in instances]
    return AdaptiveOverhead(constants=constants, points=_map(_adaptive_run, tasks, threads))


# --- SJF certificates ------------------------------------------------------------


class CertificatePoint(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    instance: str
    machines: int
    m_star: int
    accepted: bool
    condition: Optional[str] = None
    implied_bound: Decimal


class SjfBound(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    bucket_bounds: Dict[int, Decimal]
    certificates: List[CertificatePoint]

    @property
    def rejected(self) -> int:
        return sum(1 for point in self.certificates if not point.accepted)


def engineered_sjf_failure(seed: int, l1=Fraction(1, 8), l2=Fraction(1, 4)):
    """A burst of 2m+1 tight jobs on m SJF machines; None when SJF happens to cope."""
    m = 1 + seed % 3
    inst = generate(GenSpec(kind="burst", n=2 * m + 1, horizon=16, l1=l1, l2=l2, seed=seed))
    run = simulate(GreedyScheduler("sjf", m), inst, abort_on_miss=False)
    if run.failure is None:
        return None
    return inst, run


def _certificate_point(seed: int) -> Optional[CertificatePoint]:
    engineered = engineered_sjf_failure(seed)
    if engineered is None:
        return None
    inst, run = engineered
    pair = extract_sjf_certificate(run, inst)
    report = check_weakly_critical(pair, inst)
    return CertificatePoint(
        instance=f"burst-{seed}",
        machines=run.machines_used,
        m_star=oracle_m_star(inst),
        accepted=report.ok,
        condition=report.condition,
        implied_bound=implied_lower_bound(pair.mu, pair.beta, pair.alpha),
    )


def sjf_bound(failures: int = 50, seed0: int = 0, buckets: int = 4, threads: Optional[int] = None) -> SjfBound:
    """Per-bucket SJF machine factors and `failures` extracted, checked certificates."""
    bounds = {i: sjf_machine_bound(*bucket_range(i)) for i in range(1, buckets + 1)}
    points: List[CertificatePoint] = []
    seed = seed0
    while len(points) < failures:
        if seed - seed0 > MAX_SEED_SCAN * failures:
            raise RuntimeError(f"only {len(points)} engineered SJF failures after {seed - seed0} seeds")
        batch = list(range(seed, seed + failures))
        points.extend(p for p in _map(_certificate_point, batch, threads) if p is not None)
        seed += failures
    return SjfBound(bucket_bounds=bounds, certificates=points[:failures])
