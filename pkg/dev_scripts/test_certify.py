#!/usr/bin/env python3
"""
Certificate tests: critical and weakly critical pairs, SJF failure extraction and
the closed-form bounds.
"""

import math
from decimal import Decimal
from fractions import Fraction

import pytest
from pydantic import ValidationError

from backend.app.certify.bounds import (
    basic_lower_bound,
    edf_machine_bound,
    hybrid_machine_budget,
    implied_lower_bound,
    loose_edf_machine_bound,
    sjf_machine_bound,
)
from backend.app.certify.critical import (
    CriticalPair,
    check_critical,
    check_weakly_critical,
    coverage,
    dump_certificate,
    elementary_intervals,
    load_certificate,
    write_certificate,
)
from backend.app.certify.sjf_certificate import extract_sjf_certificate, idle_times
from backend.app.engine.simulator import simulate
from backend.app.errors import CertificateError, UnknownJobError
from backend.app.experiments.suites import engineered_sjf_failure
from backend.app.schedulers.greedy import sjf
from conftest import make_instance

HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


def pair(jobs=(0,), times=((0, 1),), mu=1, beta=HALF, alpha=QUARTER) -> CriticalPair:
    return CriticalPair(jobs=list(jobs), times=list(times), mu=mu, beta=beta, alpha=alpha)


def close_to(value: Decimal, expected: float, digits: int = 30) -> bool:
    return abs(value - Decimal(repr(expected))) < Decimal(10) ** (-min(digits, 14))


# --- checkers ---------------------------------------------------------------------------


def test_single_job_is_critical():
    inst = make_instance((0, 2, 1))
    assert check_critical(pair(), inst).ok
    assert check_weakly_critical(pair(), inst).ok
    print("✅ single-job certificate accepted")


def test_tightness_is_checked_first():
    report = check_critical(pair(alpha=HALF), make_instance((0, 2, 1)))
    assert not report.ok
    assert report.condition == "tightness"
    assert report.job == 0


def test_coverage_failure():
    report = check_critical(pair(mu=2), make_instance((0, 2, 1)))
    assert report.condition == "coverage"
    assert report.time == 0
    assert check_weakly_critical(pair(mu=2), make_instance((0, 2, 1))).condition == "coverage"


@pytest.mark.parametrize("checker", [check_critical, check_weakly_critical])
def test_invalid_pairs_are_rejected_by_both_checkers(checker):
    inst = make_instance((0, 2, 1))
    # p=1 is not above alpha*|I| = 1, and one lifespan cannot cover mu=5
    report = checker(pair(mu=5, alpha=HALF), inst)
    assert not report.ok
    assert not bool(report)
    assert report.condition == "tightness"
    report = checker(pair(mu=5), inst)
    assert not report.ok
    assert report.condition == "coverage"


def test_laxity_condition():
    """T barely touches the lifespan of a job with a lot of laxity"""
    inst = make_instance((0, 10, 6), (0, 2, 2))
    weak_pair = pair(jobs=(0, 1), times=((0, 1),), beta=HALF, alpha=QUARTER)
    # per-job: |T n I(0)| = 1 < 1/2 * 4
    report = check_critical(weak_pair, inst)
    assert report.condition == "laxity"
    assert report.job == 0
    # aggregate: 1 < (1/2) / 1 * 4
    assert check_weakly_critical(weak_pair, inst).condition == "aggregate laxity"


def test_weak_boundary_holds_with_equality():
    inst = make_instance((0, 3, 1))
    # |T| = 1 and (beta / mu) * l = 1/2 * 2 = 1
    assert check_weakly_critical(pair(times=((0, 1),), alpha=Fraction(1, 4)), inst).ok


def test_unknown_job_raises():
    with pytest.raises(UnknownJobError):
        check_critical(pair(jobs=(5,)), make_instance((0, 2, 1)))


def test_malformed_pairs_are_rejected():
    with pytest.raises(ValidationError):
        pair(times=())
    with pytest.raises(ValidationError):
        pair(jobs=())
    with pytest.raises(ValidationError):
        pair(times=((0, 2), (1, 3)))
    with pytest.raises(ValidationError):
        pair(times=((1, 1),))
    with pytest.raises(ValidationError):
        pair(beta=Fraction(1))
    with pytest.raises(ValidationError):
        pair(alpha=Fraction(0))


def _sampled_coverage_ok(p: CriticalPair, members) -> bool:
    for lo, hi in p.times:
        step = Fraction(1, 4)
        t = Fraction(lo)
        while t < hi:
            if sum(1 for job in members if job.r <= t < job.d) < p.mu:
                return False
            t += step
    return True


@pytest.mark.parametrize("mu", [1, 2, 3])
def test_coverage_matches_point_sampling(mu):
    """Checking one instant per elementary interval agrees with dense sampling"""
    inst = make_instance((0, 6, 5), (1, 7, 5), (2, 9, 6), (4, 8, 4), (5, 12, 6))
    members = inst.jobs
    for times in (((2, 6),), ((0, 3), (5, 7)), ((4, 8),), ((1, 2), (6, 9))):
        p = pair(jobs=[job.id for job in members], times=times, mu=mu, beta=HALF, alpha=Fraction(1, 2))
        exact = all(coverage(members, lo, hi) >= mu for lo, hi in elementary_intervals(p, members))
        assert exact == _sampled_coverage_ok(p, members)


def test_certificate_file_round_trip(tmp_path):
    original = pair(times=((0, Fraction(1, 2)), (Fraction(3, 4), 1)))
    path = tmp_path / "cert.json"
    write_certificate(original, path)
    assert '"G"' in path.read_text() and '"1/2"' in path.read_text()
    assert load_certificate(path) == original
    assert dump_certificate(original).endswith("\n")


def test_bad_certificate_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"G": [0], "T": [], "mu": 1, "beta": "1/2", "alpha": "1/4"}')
    with pytest.raises(CertificateError):
        load_certificate(path)


# --- extraction ------------------------------------------------------------------------


def test_idle_times():
    inst = make_instance((0, 4, 3), (0, 4, 3))
    run = simulate(sjf(1), inst, abort_on_miss=False)
    assert idle_times(run, 1, Fraction(0), Fraction(4)) == [(0, 3)]
    assert idle_times(run, 0, Fraction(0), Fraction(4)) == [(3, 4)]


def test_engineered_failure_is_certified(tight_pair):
    """Two identical tight jobs on one SJF machine give a weakly critical pair"""
    run = simulate(sjf(1), tight_pair, abort_on_miss=False)
    certificate = extract_sjf_certificate(run, tight_pair)
    assert certificate.jobs == [0]
    assert certificate.times == [(0, 3)]
    assert certificate.mu == 1
    assert certificate.beta == Fraction(1, 5)
    assert certificate.alpha == Fraction(21, 32)
    assert certificate.measure >= 1
    assert check_weakly_critical(certificate, tight_pair).ok
    assert check_critical(certificate, tight_pair).ok


def test_extraction_needs_a_failure():
    inst = make_instance((0, 4, 1), (0, 4, 1))
    run = simulate(sjf(1), inst, abort_on_miss=False)
    assert run.feasible
    with pytest.raises(CertificateError):
        extract_sjf_certificate(run, inst)


def test_extraction_needs_the_whole_lifespan(tight_pair):
    aborted = simulate(sjf(1), tight_pair)
    with pytest.raises(CertificateError):
        extract_sjf_certificate(aborted, tight_pair)


@pytest.mark.parametrize("seed", range(10))
def test_burst_failures_are_certified(seed):
    engineered = engineered_sjf_failure(seed)
    if engineered is None:
        pytest.skip("SJF coped with this burst")
    inst, run = engineered
    certificate = extract_sjf_certificate(run, inst)
    assert check_weakly_critical(certificate, inst).ok
    failing = inst.by_id()[run.failure.job]
    assert certificate.measure >= failing.d - failing.r - failing.p


# --- bounds -------------------------------------------------------------------------------


def test_implied_lower_bound_exact_powers():
    assert abs(implied_lower_bound(4, QUARTER, HALF) - 2) < Decimal("1e-35")
    assert abs(implied_lower_bound(4, Fraction(1, 16), Fraction(3, 4)) - 2) < Decimal("1e-35")
    assert abs(basic_lower_bound(3, Fraction(1, 8)) - 1) < Decimal("1e-35")


def test_implied_lower_bound_diverges_near_one():
    beta = Fraction(10**80 - 1, 10**80)
    assert implied_lower_bound(1, beta, HALF).is_infinite()
    with pytest.raises(ValueError):
        implied_lower_bound(0, HALF, HALF)
    with pytest.raises(ValueError):
        implied_lower_bound(1, Fraction(1), HALF)


def test_sjf_machine_bound():
    assert close_to(sjf_machine_bound(HALF, HALF), math.log2(5))
    for i in (1, 2, 3):
        l1, l2 = Fraction(1, 2 ** (2 ** (i + 1))), Fraction(1, 2 ** (2**i))
        expected = (2**i + math.log2(5)) / 2**i
        assert close_to(sjf_machine_bound(l1, l2), expected)
    assert close_to(sjf_machine_bound(QUARTER / 5, QUARTER), math.log(25) / math.log(4))
    with pytest.raises(ValueError):
        sjf_machine_bound(HALF, QUARTER)


def test_edf_bounds():
    assert edf_machine_bound(HALF) == 4
    assert edf_machine_bound(QUARTER) == 16
    assert loose_edf_machine_bound(HALF) == 4
    assert loose_edf_machine_bound(0) == 1
    with pytest.raises(ValueError):
        edf_machine_bound(0)


def test_hybrid_machine_budget():
    assert hybrid_machine_budget(16) == 640
    assert hybrid_machine_budget(2) == 48


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
