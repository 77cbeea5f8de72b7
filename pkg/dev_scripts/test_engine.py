#!/usr/bin/env python3
"""
Simulator and verifier tests: event loop, deadline handling, look-ahead and exact verification.
"""

from fractions import Fraction

import pytest

from backend.app.core.models import Instance
from backend.app.engine.simulator import DEADLINE_MISS, RunResult, lookahead_feasible, simulate
from backend.app.engine.verify import SchedulePiece, processing_time, verify
from backend.app.errors import SchedulerContractError
from backend.app.gen.generator import GenSpec, generate
from backend.app.schedulers.base import AliveJob, Decision, OnlineScheduler, Tick
from backend.app.schedulers.greedy import edf, sjf
from conftest import make_instance


def piece(start, end, machine, job):
    return SchedulePiece(start=start, end=end, machine=machine, job=job)


def test_empty_instance():
    result = simulate(edf(1), Instance())
    assert result.feasible
    assert result.schedule == []
    assert result.events == 0
    assert result.horizon_end is None


def test_single_edf_job():
    """(0,3,2) on one EDF machine runs [0,2) and completes at 2"""
    result = simulate(edf(1), make_instance((0, 3, 2)))
    assert result.feasible
    assert result.schedule == [piece(0, 2, 1, 0)]
    assert result.completions == {0: 2}
    assert result.machines_used == 1 and result.machines_touched == 1
    print("✅ single EDF job")


def test_unit_job_with_slack():
    result = simulate(edf(1), make_instance((0, 2, 1)))
    assert result.schedule == [piece(0, 1, 1, 0)]
    assert result.completions == {0: 1}


def test_preemption_at_arrival():
    """A later job with an earlier deadline preempts on the only machine"""
    inst = make_instance((0, 10, 4), (1, 3, 2))
    result = simulate(edf(1), inst)
    assert result.feasible
    assert result.schedule == [piece(0, 1, 1, 0), piece(1, 3, 1, 1), piece(3, 6, 1, 0)]
    assert result.completions == {0: 6, 1: 3}
    assert verify(result.schedule, inst, 1).ok


def test_speed_scales_processing():
    result = simulate(edf(1), make_instance((0, 2, 2)), speed=2)
    assert result.feasible
    assert result.completions == {0: 1}
    assert result.speed == 2


def test_deadline_miss_aborts(two_unit_jobs):
    """With abort_on_miss the run stops at the first doomed instant"""
    result = simulate(edf(1), two_unit_jobs)
    assert not result.feasible
    assert result.failure.reason == DEADLINE_MISS
    assert result.failure.job == 1
    assert result.failure.time == 0
    assert result.failure.scheduler == "edf"
    assert result.horizon_end == 0
    assert result.schedule == []


def test_deadline_miss_continues(two_unit_jobs):
    """Without abort the doomed job is dropped at its deadline and the rest still runs"""
    result = simulate(edf(1), two_unit_jobs, abort_on_miss=False)
    assert not result.feasible
    assert result.missed == [1]
    assert result.completions == {0: 1}
    assert result.horizon_end == 1
    assert result.schedule == [piece(0, 1, 1, 0)]


def test_latest_start_is_an_event(tight_pair):
    """SJF keeps job 0 and job 1 becomes doomed exactly when its slack hits zero"""
    result = simulate(sjf(1), tight_pair, abort_on_miss=False)
    assert result.failure.time == 1
    assert result.failure.job == 1
    assert result.schedule == [piece(0, 3, 1, 0), piece(3, 4, 1, 1)]
    assert result.horizon_end == 4


def test_run_result_json_round_trip(tight_pair):
    result = simulate(sjf(1), tight_pair, abort_on_miss=False)
    again = RunResult.model_validate_json(result.model_dump_json())
    assert again == result


class _RogueScheduler(OnlineScheduler):
    name = "rogue"

    @property
    def machines(self) -> int:
        return 1

    def admit(self, tick, jobs):
        return None

    def decide(self, tick):
        return Decision(assignment={2: next(iter(tick.alive))})


def test_contract_violation_raises():
    with pytest.raises(SchedulerContractError):
        simulate(_RogueScheduler(), make_instance((0, 3, 1)))


def test_lookahead_examples(two_unit_jobs):
    one = make_instance((0, 1, 1))

    def tick_for(inst):
        alive = {job.id: AliveJob(job=job, remaining=Fraction(job.p)) for job in inst.jobs}
        return Tick(now=Fraction(0), speed=Fraction(1), alive=alive)

    assert lookahead_feasible(edf(1), tick_for(one))
    assert not lookahead_feasible(edf(1), tick_for(two_unit_jobs))
    assert lookahead_feasible(edf(2), tick_for(two_unit_jobs))
    assert lookahead_feasible(edf(1), Tick(now=Fraction(0), speed=Fraction(1), alive={}))


@pytest.mark.parametrize("policy", [edf, sjf])
@pytest.mark.parametrize("seed", range(10))
def test_feasible_runs_conserve_work(policy, seed):
    inst = generate(GenSpec(kind="loose", n=15, horizon=20, max_size=6, seed=seed))
    result = simulate(policy(len(inst)), inst)
    assert result.feasible
    assert verify(result.schedule, inst, result.machines_used).ok
    done = processing_time(result.schedule)
    assert all(done[job.id] == job.p for job in inst.jobs)


@pytest.mark.parametrize("seed", range(10))
def test_event_count_stays_linear(seed):
    inst = generate(GenSpec(kind="uniform", n=20, horizon=30, max_size=8, seed=seed))
    result = simulate(edf(2), inst, abort_on_miss=False)
    assert result.events <= 4 * len(inst)


def _clip(schedule, end):
    return sorted(
        (p.start, min(p.end, end), p.machine, p.job) for p in schedule if p.start < end
    )


@pytest.mark.parametrize("policy", [edf, sjf])
@pytest.mark.parametrize("seed", range(8))
def test_decisions_do_not_depend_on_future_jobs(policy, seed):
    """The schedule before t is the same whether or not jobs released at t or later exist"""
    inst = generate(GenSpec(kind="uniform", n=12, horizon=20, max_size=6, seed=seed))
    for cut in (5, 10, 15):
        full = simulate(policy(2), inst, abort_on_miss=False)
        prefix = simulate(policy(2), inst.prefix(cut), abort_on_miss=False)
        end = Fraction(cut)
        assert _clip(full.schedule, end) == _clip(prefix.schedule, end)


def test_verify_accepts_valid_schedule():
    inst = make_instance((0, 2, 1), (0, 2, 1))
    schedule = [piece(0, 1, 1, 0), piece(1, 2, 1, 1)]
    assert verify(schedule, inst, 1).ok


def test_verify_violations():
    inst = make_instance((0, 2, 1), (0, 2, 1))
    cases = {
        "machine conflict": [piece(0, 1, 1, 0), piece(Fraction(1, 2), Fraction(3, 2), 1, 1)],
        "lifespan": [piece(0, 1, 1, 0), piece(Fraction(3, 2), Fraction(5, 2), 1, 1)],
        "job parallel": [piece(0, 1, 1, 0), piece(0, 1, 2, 0), piece(1, 2, 1, 1)],
        "machine range": [piece(0, 1, 1, 0), piece(0, 1, 3, 1)],
        "incomplete": [piece(0, 1, 1, 0), piece(1, Fraction(3, 2), 1, 1)],
        "unknown job": [piece(0, 1, 1, 7)],
    }
    for kind, schedule in cases.items():
        report = verify(schedule, inst, 2)
        assert not report.ok
        assert report.violation.kind == kind, kind
    print("✅ every violation kind is reported")


def test_verify_respects_speed():
    inst = make_instance((0, 2, 2))
    assert verify([piece(0, 1, 1, 0)], inst, 1, speed=Fraction(2)).ok
    assert not verify([piece(0, 1, 1, 0)], inst, 1).ok


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
