"""
Experiment harness: run scheduler configurations over instances and tabulate.

Rows are always returned and written in canonical (instance, algorithm) order,
whatever order the workers finish in. Wall time is the only nondeterministic
value and is written to CSV only on request.
"""

import csv
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, TextIO, Tuple

from pydantic import BaseModel, ConfigDict

from ..core.models import Instance
from ..core.rational import Rational, format_rational
from ..engine.simulator import RunResult, simulate
from ..engine.verify import verify
from ..oracle.flow_oracle import min_machines
from ..schedulers.registry import AlgorithmConfig, build_scheduler
from ..settings import get_settings

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "instance",
    "algorithm",
    "m_star",
    "machines_used",
    "machines_touched",
    "feasible",
    "events",
    "failure_time",
    "failure_scheduler",
    "failure_reason",
    "failure_job",
)
TIMING_COLUMN = "wall_time_s"


class ExperimentRow(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    instance: str
    algorithm: str
    m_star: int
    machines_used: int
    machines_touched: int
    feasible: bool
    events: int
    failure_time: Optional[Rational] = None
    failure_scheduler: Optional[str] = None
    failure_reason: Optional[str] = None
    failure_job: Optional[int] = None
    wall_time: Optional[float] = None

    @property
    def key(self) -> Tuple[str, str]:
        return self.instance, self.algorithm

    def csv_values(self, timing: bool) -> List[str]:
        values = [
            self.instance,
            self.algorithm,
            str(self.m_star),
            str(self.machines_used),
            str(self.machines_touched),
            "yes" if self.feasible else "no",
            str(self.events),
            "" if self.failure_time is None else format_rational(self.failure_time),
            self.failure_scheduler or "",
            self.failure_reason or "",
            "" if self.failure_job is None else str(self.failure_job),
        ]
        if timing:
            values.append(f"{self.wall_time:.6f}" if self.wall_time is not None else "")
        return values


def oracle_m_star(inst: Instance, speed=Fraction(1)) -> int:
    """m* of `inst`, 0 for the empty instance."""
    return min_machines(inst, speed) if inst.jobs else 0


def execute(
    config: AlgorithmConfig,
    inst: Instance,
    m_star: Optional[int] = None,
    speed=Fraction(1),
    abort_on_miss: bool = True,
) -> RunResult:
    """Build and simulate one configuration, checking feasible runs with verify."""
    scheduler = build_scheduler(config, m_star=m_star or None)
    result = simulate(scheduler, inst, speed=speed, abort_on_miss=abort_on_miss)
    if result.feasible:
        report = verify(result.schedule, inst, result.machines_used, result.speed)
        if not report.ok:
            raise AssertionError(f"{config.label} produced an invalid schedule: {report.violation}")
    return result


def run_experiment(
    name: str,
    inst: Instance,
    config: AlgorithmConfig,
    m_star: Optional[int] = None,
    speed=Fraction(1),
) -> ExperimentRow:
    if m_star is None:
        m_star = oracle_m_star(inst, speed)
    started = time.perf_counter()
    result = execute(config, inst, m_star=m_star, speed=speed)
    elapsed = time.perf_counter() - started
    failure = result.failure
    row = ExperimentRow(
        instance=name,
        algorithm=config.label,
        m_star=m_star,
        machines_used=result.machines_used,
        machines_touched=result.machines_touched,
        feasible=result.feasible,
        events=result.events,
        failure_time=failure.time if failure else None,
        failure_scheduler=failure.scheduler if failure else None,
        failure_reason=failure.reason if failure else None,
        failure_job=failure.job if failure else None,
        wall_time=elapsed,
    )
    logger.debug("%s / %s: feasible=%s machines=%d", name, config.label, row.feasible, row.machines_used)
    return row


def _instance_rows(task) -> List[ExperimentRow]:
    name, inst, configs, speed = task
    m_star = oracle_m_star(inst, speed)
    return [run_experiment(name, inst, config, m_star=m_star, speed=speed) for config in configs]


def compare(
    instances: Iterable[Tuple[str, Instance]],
    configs: Sequence[AlgorithmConfig],
    speed=Fraction(1),
    threads: Optional[int] = None,
) -> List[ExperimentRow]:
    """Every configuration on every instance; m* is computed once per instance."""
    threads = threads if threads is not None else get_settings().threads
    tasks = [(name, inst, list(configs), speed) for name, inst in instances]
    rows: List[ExperimentRow] = []
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            for batch in pool.map(_instance_rows, tasks):
                rows.extend(batch)
    else:
        for task in tasks:
            rows.extend(_instance_rows(task))
    return sorted(rows, key=lambda row: row.key)


def _write_rows(rows: Sequence[ExperimentRow], stream: TextIO, timing: bool) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(list(CSV_COLUMNS) + ([TIMING_COLUMN] if timing else []))
    for row in sorted(rows, key=lambda row: row.key):
        writer.writerow(row.csv_values(timing))


def write_csv(rows: Sequence[ExperimentRow], target, timing: bool = False) -> None:
    """Write rows to a path or an open text stream."""
    if hasattr(target, "write"):
        _write_rows(rows, target, timing)
        return
    with open(Path(target), "w", newline="") as f:
        _write_rows(rows, f, timing)
