#!/usr/bin/env python3
"""
Experiment suite tests at desk scale: the hybrid trend family and the adaptive
hybrid's overhead against the fixed hybrid.
"""

import pytest

from backend.app.experiments.harness import oracle_m_star
from backend.app.experiments.report import ReportData, render_report
from backend.app.experiments.suites import (
    TREND_EXTRAS,
    adaptive_overhead,
    hybrid_trend,
    loose_suite,
    trend_instance,
    very_tight_suite,
)
from backend.app.schedulers.hybrid import PoolConstants


@pytest.mark.parametrize("m_star", [1, 2, 3, 4])
@pytest.mark.parametrize("seed", range(2))
def test_trend_instance_has_the_requested_optimum(m_star, seed):
    inst = trend_instance(m_star, seed)
    assert oracle_m_star(inst) == m_star
    assert trend_instance(m_star, seed) == inst


def test_hybrid_trend_counts_machines_in_the_schedule():
    trend = hybrid_trend(per_size=2, m_stars=(2, 4), threads=1)
    for point in trend.points:
        assert point.all_feasible
        # the zero-laxity block plus every copy of the pattern's busiest instant
        assert point.machines % point.m_star == 0
        assert 2 * point.m_star <= point.machines <= (1 + TREND_EXTRAS) * point.m_star
        assert point.machines < point.allocated
    assert trend.points[0].ratio == trend.points[1].ratio
    assert trend.worst_growth == 0
    assert trend.within_tolerance
    print(f"✅ touched machines {[p.machines for p in trend.points]}")


def test_hybrid_trend_ratio_halves_with_a_second_bucket():
    trend = hybrid_trend(per_size=1, m_stars=(4, 8), threads=1)
    assert trend.points[1].ratio == trend.points[0].ratio / 2
    assert trend.worst_growth == 0


def test_adaptive_overhead_stays_within_four_budgets():
    instances = loose_suite(2) + very_tight_suite(2)
    overhead = adaptive_overhead(instances, threads=1)
    assert len(overhead.points) == 4
    assert overhead.all_within_bound
    assert all(point.m_hat >= 1 for point in overhead.points)
    print(f"✅ worst adaptive / fixed budget ratio {overhead.worst_ratio}")


def test_adaptive_overhead_with_unit_constants():
    constants = PoolConstants(c_edf=1, c_sjf=1, c_cms=1)
    overhead = adaptive_overhead(very_tight_suite(3), constants=constants, threads=1)
    assert all(point.within_bound for point in overhead.points)


def test_report_renders_adaptive_section():
    overhead = adaptive_overhead(loose_suite(1), threads=1)
    text = render_report(ReportData(adaptive=overhead))
    assert "## Adaptive hybrid overhead" in text
    assert "every run within 4x" in text


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
