"""
Experiment report rendering.

Suites are run by build_report and rendered to markdown with the jinja2
template in backend/app/templates.
"""

from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Optional

from jinja2 import Environment, FileSystemLoader
from pydantic import BaseModel, ConfigDict

from ..core.rational import format_rational
from ..schedulers.hybrid import PoolConstants
from .suites import (
    AdaptiveOverhead,
    CmsSweep,
    DoublingOverhead,
    HybridTrend,
    SjfBound,
    adaptive_overhead,
    cms_constant_sweep,
    doubling_overhead,
    hybrid_trend,
    loose_suite,
    sjf_bound,
    very_tight_suite,
)

SUITES = ("cms-sweep", "hybrid-trend", "sjf-bound", "doubling", "all")
TEMPLATE = "experiment_report.md.j2"
TEMPLATES_DIR = Path(__file__).parent.parent / "templates"


class ReportData(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    seed0: int = 0
    cms_sweep: Optional[CmsSweep] = None
    hybrid_trend: Optional[HybridTrend] = None
    doubling: Optional[DoublingOverhead] = None
    adaptive: Optional[AdaptiveOverhead] = None
    sjf_bound: Optional[SjfBound] = None


def _digits(value: Decimal) -> str:
    if value.is_infinite():
        return "unbounded"
    return f"{value:.12g}"


def _environment() -> Environment:
    env = Environment(
        loader=FileSystemLoader(str(TEMPLATES_DIR)),
        trim_blocks=True,
        lstrip_blocks=True,
        keep_trailing_newline=True,
    )
    env.filters["rational"] = lambda value: format_rational(Fraction(value))
    env.filters["digits"] = _digits
    return env


def build_report(
    suite: str,
    seeds: int,
    seed0: int = 0,
    constants: PoolConstants = PoolConstants(),
    threads: Optional[int] = None,
) -> ReportData:
    """Run the requested suite(s); `seeds` is the instance count per suite."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {', '.join(SUITES)}")
    data = ReportData(seed0=seed0)
    if suite in ("cms-sweep", "all"):
        data.cms_sweep = cms_constant_sweep(very_tight_suite(seeds, seed0), threads=threads)
    if suite in ("hybrid-trend", "all"):
        data.hybrid_trend = hybrid_trend(per_size=seeds, constants=constants, seed0=seed0, threads=threads)
    if suite in ("doubling", "all"):
        loose = loose_suite(seeds, seed0)
        data.doubling = doubling_overhead(loose, threads=threads)
        data.adaptive = adaptive_overhead(
            loose + very_tight_suite(seeds, seed0), constants=constants, threads=threads
        )
    if suite in ("sjf-bound", "all"):
        data.sjf_bound = sjf_bound(failures=seeds, seed0=seed0, threads=threads)
    return data


def render_report(data: ReportData) -> str:
    template = _environment().get_template(TEMPLATE)
    return template.render(**{name: getattr(data, name) for name in ReportData.model_fields})
