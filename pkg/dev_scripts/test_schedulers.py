#!/usr/bin/env python3
"""
Scheduler tests: EDF/SJF ranking, the CMS budget machinery, the pooled hybrids,
the doubling cascade and the registry that builds them.
"""

from fractions import Fraction

import pytest
from pydantic import ValidationError

from backend.app.core.models import Job
from backend.app.engine.simulator import simulate
from backend.app.engine.verify import SchedulePiece, verify
from backend.app.errors import ConfigError
from backend.app.gen.generator import GenSpec, generate
from backend.app.schedulers.adaptive import ADAPTIVE_ROUTING_FLOOR, hybrid_a_adaptive
from backend.app.schedulers.base import AliveJob, MachineBlock, Tick
from backend.app.schedulers.classed import classed_edf, size_class
from backend.app.schedulers.cms import FORBIDDEN_REASON, CmsScheduler, CmsState, cms_step, sub_cms
from backend.app.schedulers.doubling import doubling_wrap
from backend.app.schedulers.greedy import GreedyScheduler, edf, edf_assignment, sjf_assignment
from backend.app.schedulers.hybrid import HybridConfig, PoolConstants, hybrid_a
from backend.app.schedulers.registry import AlgorithmConfig, build_scheduler
from conftest import make_instance


def tick_at(now, *entries):
    """Tick whose alive set holds (job, remaining) pairs."""
    alive = {job.id: AliveJob(job=job, remaining=Fraction(left)) for job, left in entries}
    return Tick(now=Fraction(now), speed=Fraction(1), alive=alive)


# --- EDF / SJF ---------------------------------------------------------------------


def test_edf_assignment_examples():
    a = Job(id=0, r=0, d=5, p=1)
    b = Job(id=1, r=0, d=3, p=1)
    c = Job(id=2, r=0, d=9, p=1)
    assert edf_assignment([a, b, c], 2) == {1: 1, 2: 0}
    assert edf_assignment([], 3) == {}
    tie = Job(id=3, r=0, d=5, p=1)
    assert edf_assignment([tie, a], 1) == {1: 0}


def test_sjf_assignment_examples():
    a = Job(id=0, r=0, d=10, p=4)
    b = Job(id=1, r=0, d=10, p=2)
    c = Job(id=2, r=0, d=10, p=7)
    assert sjf_assignment([a, b, c], 1) == {1: 1}
    assert set(sjf_assignment([a, b, c], 3).values()) == {0, 1, 2}


def test_sjf_ranks_by_original_size():
    """A half-finished large job still ranks behind a smaller untouched one"""
    big = Job(id=0, r=0, d=10, p=4)
    small = Job(id=1, r=0, d=10, p=3)
    decision = GreedyScheduler("sjf", 1).decide(tick_at(2, (big, 1), (small, 3)))
    assert decision.assignment == {1: 1}


def test_greedy_rejects_bad_arguments():
    with pytest.raises(ValueError):
        GreedyScheduler("lifo", 1)
    with pytest.raises(ValueError):
        GreedyScheduler("edf", 0)


# --- CMS -------------------------------------------------------------------------------


def test_sub_cms_examples():
    """Inactive jobs share a machine; an active one moves the cursor"""
    zero, one = Fraction(0), Fraction(1)
    assert sub_cms([2, 1], {2: [one] * 3, 1: [zero] * 3}, 2) == {2: 1, 1: 1}
    assert sub_cms([0], {0: [zero, zero]}, 1) == {0: 1}
    assert sub_cms([3, 2, 1], {j: [one] * 3 for j in (1, 2, 3)}, 2) == {3: 1, 2: 1, 1: 1}
    # two zero-laxity jobs on one usable machine: the second lands on the forbidden one
    assert sub_cms([1, 0], {0: [zero] * 2, 1: [zero] * 2}, 1) == {1: 1, 0: 2}


def test_sub_cms_is_deterministic():
    budgets = {j: [Fraction(j % 2), Fraction(1), Fraction(0)] for j in range(6)}
    order = [5, 4, 3, 2, 1, 0]
    assert sub_cms(order, budgets, 2) == sub_cms(list(order), dict(budgets), 2)


def test_cms_step_hand_trace():
    """(0,3,1) on m_cms=2: budgets 2/3, waits until 2/3, completes at 5/3"""
    state = CmsState(m_cms=2)
    state.admit(Job(id=0, r=0, d=3, p=1))
    assert state.budgets[0] == [Fraction(2, 3)] * 3

    first = cms_step(state, Fraction(0))
    assert first.assignment == {}
    assert first.next_event == Fraction(2, 3)
    assert not first.failed

    state.advance(Fraction(2, 3), Fraction(1))
    assert state.budgets[0] == [0, Fraction(2, 3), Fraction(2, 3)]
    second = cms_step(state, Fraction(2, 3))
    assert second.assignment == {1: 0}
    assert second.next_event == Fraction(5, 3)


def test_cms_step_stops_at_next_arrival():
    state = CmsState(m_cms=2)
    state.admit(Job(id=0, r=0, d=3, p=1))
    step = cms_step(state, Fraction(0), next_arrival=Fraction(1, 2))
    assert step.next_event == Fraction(1, 2)


def test_cms_zero_laxity_job_never_fails():
    result = simulate(CmsScheduler(1), make_instance((0, 4, 4)))
    assert result.feasible
    assert result.schedule == [SchedulePiece(start=0, end=4, machine=1, job=0)]


def test_cms_single_job_run():
    result = simulate(CmsScheduler(2, trace=True), make_instance((0, 3, 1)))
    assert result.feasible
    assert result.schedule == [SchedulePiece(start=Fraction(2, 3), end=Fraction(5, 3), machine=1, job=0)]
    assert result.completions == {0: Fraction(5, 3)}
    assert [entry.time for entry in result.trace] == [0, Fraction(2, 3)]
    assert result.trace[0].budgets == {0: [Fraction(2, 3)] * 3}
    assert result.trace[0].active == []
    assert result.trace[1].active == [0]
    print("✅ CMS waits out its first budget, then runs")


def test_cms_declares_failure(two_unit_jobs):
    result = simulate(CmsScheduler(1), two_unit_jobs)
    assert not result.feasible
    assert result.failure.reason == FORBIDDEN_REASON
    assert result.failure.scheduler == "cms"
    assert result.failure.job == 0
    assert result.failure.time == 0


@pytest.mark.parametrize("seed", range(10))
def test_cms_budgets_only_shrink(seed):
    inst = generate(GenSpec(kind="very_tight", m=4, n=12, horizon=20, max_size=8, seed=seed))
    result = simulate(CmsScheduler(len(inst), trace=True), inst)
    assert result.feasible
    assert verify(result.schedule, inst, len(inst)).ok
    seen = {}
    for entry in result.trace:
        for j, budgets in entry.budgets.items():
            assert all(b >= 0 for b in budgets)
            if j in seen:
                assert all(now <= before for now, before in zip(budgets, seen[j]))
            seen[j] = budgets


def test_cms_rejects_bad_size():
    with pytest.raises(ValueError):
        CmsScheduler(0)


# --- hybrid ----------------------------------------------------------------------------


def test_hybrid_pool_layout_for_m_star_16():
    config = HybridConfig(m_star=16)
    assert config.buckets == 2
    assert config.total_machines == 640
    scheduler = hybrid_a(config)
    assert scheduler.machines == 640
    assert scheduler.pools() == [
        MachineBlock(label="edf", offset=0, size=256),
        MachineBlock(label="sjf-1", offset=256, size=128),
        MachineBlock(label="sjf-2", offset=384, size=128),
        MachineBlock(label="cms", offset=512, size=128),
    ]


def test_hybrid_without_buckets():
    scheduler = hybrid_a(HybridConfig(m_star=2))
    assert scheduler.labels == ["edf", "cms"]
    assert scheduler.machines == (16 + 8) * 2


def test_hybrid_shifts_pool_machines():
    """An EDF job runs in the EDF block, a zero-laxity job in the CMS block"""
    inst = make_instance((0, 10, 4), (0, 16, 16))
    result = simulate(hybrid_a(HybridConfig(m_star=16)), inst)
    assert result.feasible
    assert {(p.job, p.machine) for p in result.schedule} == {(0, 1), (1, 513)}


def test_loose_jobs_stay_in_the_edf_pool():
    inst = generate(GenSpec(kind="loose", n=20, horizon=30, max_size=8, seed=3))
    result = simulate(hybrid_a(HybridConfig(m_star=4)), inst)
    assert result.feasible
    assert max(p.machine for p in result.schedule) <= 16 * 4


def test_hybrid_reports_failing_pool(two_unit_jobs):
    config = HybridConfig(m_star=1, c_edf=1, c_sjf=1, c_cms=1)
    result = simulate(hybrid_a(config), two_unit_jobs)
    assert result.failure.scheduler == "cms"
    assert result.failure.reason == FORBIDDEN_REASON


def test_pool_constants_validation():
    with pytest.raises(ValidationError):
        PoolConstants(c_edf=0)
    with pytest.raises(ValidationError):
        HybridConfig(m_star=0)


# --- doubling --------------------------------------------------------------------------


def test_doubling_single_job_keeps_one_interval():
    result = simulate(doubling_wrap(edf), make_instance((0, 5, 2)))
    assert result.feasible
    assert result.machines_used == 1
    assert [block.label for block in result.pools] == ["doubling/I1"]


def test_doubling_opens_second_interval(two_unit_jobs):
    """The second zero-laxity job does not fit next to the first on one machine"""
    result = simulate(doubling_wrap(edf), two_unit_jobs)
    assert result.feasible
    assert result.machines_used == 3
    assert result.pools == [
        MachineBlock(label="doubling/I1", offset=0, size=1),
        MachineBlock(label="doubling/I2", offset=1, size=2),
    ]
    assert {(p.job, p.machine) for p in result.schedule} == {(0, 1), (1, 2)}


def test_doubling_machine_total_after_four_intervals():
    inst = make_instance((0, 10, 1), (1, 10, 1), (2, 10, 1), (3, 10, 1))
    wrapper = doubling_wrap(edf, lookahead=lambda probe, tick: False)
    result = simulate(wrapper, inst)
    assert result.feasible
    assert [block.size for block in result.pools] == [1, 2, 4, 8]
    assert result.machines_used == 15


def test_doubling_keeps_jobs_when_lookahead_succeeds():
    inst = make_instance((0, 10, 1), (1, 10, 1), (2, 10, 1))
    result = simulate(doubling_wrap(edf), inst)
    assert result.machines_used == 1
    assert result.feasible


# --- adaptive hybrid -------------------------------------------------------------------


def test_adaptive_opens_only_what_it_needs():
    inst = make_instance((0, 4, 1), (4, 8, 2))
    result = simulate(hybrid_a_adaptive(PoolConstants(c_edf=1)), inst)
    assert result.feasible
    assert result.pools == [MachineBlock(label="edf/I1", offset=0, size=1)]


def test_adaptive_estimate_doubles_with_cascade_growth():
    scheduler = hybrid_a_adaptive(PoolConstants(c_edf=1, c_sjf=1, c_cms=1))
    assert scheduler.routing_estimate == ADAPTIVE_ROUTING_FLOOR
    jobs = [Job(id=j, r=0, d=1, p=1) for j in range(15)]
    scheduler.admit(tick_at(0, *[(job, 1) for job in jobs]), jobs)
    assert scheduler.labels == ["cms"]
    cascade = scheduler.pool("cms").scheduler
    assert cascade.kappa == 4
    assert scheduler.machines == 15
    assert scheduler.m_hat_history == [1, 2, 4]


def test_adaptive_run_reports_its_estimate():
    constants = PoolConstants(c_edf=1, c_sjf=1, c_cms=1)
    inst = make_instance(*[(0, 1, 1)] * 15)
    result = simulate(hybrid_a_adaptive(constants), inst)
    assert result.m_hat == 4
    assert result.machines_used == 15
    assert result.machines_used <= 4 * HybridConfig(m_star=4, **constants.model_dump()).total_machines
    assert simulate(edf(1), make_instance((0, 2, 1))).m_hat is None


@pytest.mark.parametrize("seed", range(5))
def test_adaptive_machines_within_four_fixed_budgets(seed):
    constants = PoolConstants(c_edf=1, c_sjf=1, c_cms=1)
    inst = generate(GenSpec(kind="very_tight", m=8, n=24, horizon=30, max_size=10, seed=seed))
    result = simulate(hybrid_a_adaptive(constants), inst)
    estimate = max(result.m_hat, ADAPTIVE_ROUTING_FLOOR)
    budget = HybridConfig(m_star=estimate, **constants.model_dump()).total_machines
    assert result.machines_used <= 4 * budget


@pytest.mark.parametrize("seed", range(5))
def test_adaptive_runs_are_feasible(seed):
    inst = generate(GenSpec(kind="uniform", n=25, horizon=30, max_size=8, seed=seed))
    result = simulate(hybrid_a_adaptive(PoolConstants()), inst)
    assert result.feasible
    assert verify(result.schedule, inst, result.machines_used).ok


# --- size classes ------------------------------------------------------------------


def test_size_class():
    assert [size_class(Job(id=0, r=0, d=10, p=p)) for p in (1, 2, 3, 4, 7, 8)] == [0, 1, 1, 2, 2, 3]


def test_classed_edf_opens_pools_lazily():
    inst = make_instance((0, 5, 1), (0, 5, 3), (1, 9, 5), (2, 9, 1))
    result = simulate(classed_edf(1), inst)
    assert result.feasible
    assert [block.label for block in result.pools] == ["class-0", "class-1", "class-2"]
    assert result.machines_used == 3


# --- registry -------------------------------------------------------------------------


def test_config_labels():
    assert AlgorithmConfig(algorithm="edf", machines=4).label == "edf(m=4)"
    assert AlgorithmConfig(algorithm="edf", multiplier=4).label == "edf(m=4*m*)"
    assert AlgorithmConfig(algorithm="edf", doubling=True, multiplier=4).label == "edf+doubling(x4)"
    assert AlgorithmConfig(algorithm="hybrid").label == "hybrid(m*=m*;16/8/8)"
    assert AlgorithmConfig(algorithm="hybrid", m_star=4).label == "hybrid(m*=4;16/8/8)"
    assert AlgorithmConfig(algorithm="hybrid-adaptive").label == "hybrid-adaptive(16/8/8)"


def test_config_validation():
    with pytest.raises(ValidationError):
        AlgorithmConfig(algorithm="hybrid", doubling=True)
    with pytest.raises(ValidationError):
        AlgorithmConfig(algorithm="edf", trace=True)
    with pytest.raises(ValidationError):
        AlgorithmConfig(algorithm="lifo")
    with pytest.raises(ValidationError):
        AlgorithmConfig(algorithm="edf", machines=0)


def test_build_scheduler_fills_machines_from_m_star():
    config = AlgorithmConfig(algorithm="sjf", multiplier=2)
    with pytest.raises(ConfigError):
        build_scheduler(config)
    assert build_scheduler(config, m_star=3).machines == 6
    assert build_scheduler(AlgorithmConfig(algorithm="cms", machines=5)).machines == 5
    assert build_scheduler(AlgorithmConfig(algorithm="hybrid"), m_star=16).machines == 640


def test_build_doubling_from_config(two_unit_jobs):
    config = AlgorithmConfig(algorithm="edf", doubling=True, multiplier=4)
    result = simulate(build_scheduler(config), two_unit_jobs)
    assert result.feasible
    assert result.pools == [MachineBlock(label="edf+doubling(x4)/I1", offset=0, size=4)]


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
