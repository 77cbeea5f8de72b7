"""
Exact offline feasibility and m* through maximum flow.

The distinct releases and deadlines cut the horizon into elementary slots. In a
slot of length L a job whose lifespan contains the slot can receive at most s*L
work (it never runs on two machines at once) and the slot as a whole supplies
m*s*L. The instance is feasible on m machines of speed s iff the flow

    source -> job (p_j) -> slot (s*L) -> sink (m*s*L)

saturates every job. With s = a/b all capacities are multiplied by b, so the
network is integral and networkx solves it exactly.
"""

import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict

from ..core.models import Instance, Interval
from ..core.rational import Rational, as_time
from ..engine.verify import SchedulePiece
from ..errors import OracleError

logger = logging.getLogger(__name__)

SOURCE = ("source",)
SINK = ("sink",)


class Deficit(BaseModel):
    """Where the work does not fit and how much of it is left over."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    interval: Interval
    amount: Rational


class FeasibilityResult(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    feasible: bool
    m: int
    speed: Rational
    max_flow_value: int
    scale: int = 1
    deficit: Optional[Deficit] = None
    witness: Optional[List[SchedulePiece]] = None

    @property
    def work_served(self) -> Fraction:
        """Max-flow value in units of work."""
        return Fraction(self.max_flow_value, self.scale)


def event_points(inst: Instance) -> List[int]:
    return sorted({job.r for job in inst.jobs} | {job.d for job in inst.jobs})


def slots(inst: Instance) -> List[Tuple[int, int]]:
    points = event_points(inst)
    return list(zip(points, points[1:]))


def _network(inst: Instance, m: int, speed: Fraction) -> nx.DiGraph:
    a, b = speed.numerator, speed.denominator
    graph = nx.DiGraph()
    graph.add_node(SOURCE)
    graph.add_node(SINK)
    cuts = slots(inst)
    for k, (lo, hi) in enumerate(cuts):
        graph.add_edge(("slot", k), SINK, capacity=m * a * (hi - lo))
    for job in inst.jobs:
        graph.add_edge(SOURCE, ("job", job.id), capacity=job.p * b)
        for k, (lo, hi) in enumerate(cuts):
            if job.r <= lo and hi <= job.d:
                graph.add_edge(("job", job.id), ("slot", k), capacity=a * (hi - lo))
    return graph


def _deficit(
    graph: nx.DiGraph, inst: Instance, cuts: List[Tuple[int, int]], missing: Fraction
) -> Deficit:
    _, (source_side, _) = nx.minimum_cut(graph, SOURCE, SINK)
    hull = [cuts[node[1]] for node in source_side if node[0] == "slot"]
    if not hull:
        jobs = inst.by_id()
        hull = [(jobs[node[1]].r, jobs[node[1]].d) for node in source_side if node[0] == "job"]
    return Deficit(
        interval=Interval(start=min(lo for lo, _ in hull), end=max(hi for _, hi in hull)),
        amount=missing,
    )


def wrap_around(
    slot: Tuple[int, int], amounts: List[Tuple[int, Fraction]], m: int
) -> List[SchedulePiece]:
    """
    McNaughton's rule for one slot: fill machine 1 from the slot start, wrap to the
    next machine at the slot end. `amounts` are processing times (job id, time),
    each at most the slot length, with total at most m times the slot length.
    """
    lo, hi = Fraction(slot[0]), Fraction(slot[1])
    pieces: List[SchedulePiece] = []
    machine, cursor = 1, lo
    for job, time in amounts:
        if time <= 0:
            continue
        if cursor + time <= hi:
            pieces.append(SchedulePiece(start=cursor, end=cursor + time, machine=machine, job=job))
            cursor += time
        else:
            head = hi - cursor
            tail = time - head
            pieces.append(SchedulePiece(start=cursor, end=hi, machine=machine, job=job))
            machine += 1
            pieces.append(SchedulePiece(start=lo, end=lo + tail, machine=machine, job=job))
            cursor = lo + tail
        if cursor == hi:
            machine, cursor = machine + 1, lo
    if pieces and max(piece.machine for piece in pieces) > m:
        raise AssertionError(f"wrap-around overflowed {m} machines in slot {slot}")
    return pieces


def _witness(
    flows: Dict, inst: Instance, cuts: List[Tuple[int, int]], m: int, speed: Fraction
) -> List[SchedulePiece]:
    # scaled flow f is f/b work, i.e. f/a time units at speed a/b
    a = speed.numerator
    schedule: List[SchedulePiece] = []
    for k, slot in enumerate(cuts):
        amounts = []
        for job in sorted(inst.jobs, key=lambda job: job.id):
            f = flows[("job", job.id)].get(("slot", k), 0)
            if f:
                amounts.append((job.id, Fraction(f, a)))
        schedule.extend(wrap_around(slot, amounts, m))
    return schedule


def feasible(
    inst: Instance, m: int, speed=Fraction(1), want_witness: bool = False
) -> FeasibilityResult:
    """Decide whether `inst` fits on m machines of speed `speed`."""
    speed = as_time(speed)
    if m < 1:
        raise ValueError(f"machine count must be >= 1, got {m}")
    if speed <= 0:
        raise ValueError(f"speed must be positive, got {speed}")
    scale = speed.denominator
    if not inst.jobs:
        return FeasibilityResult(
            feasible=True, m=m, speed=speed, max_flow_value=0, scale=scale,
            witness=[] if want_witness else None,
        )
    graph = _network(inst, m, speed)
    value, flows = nx.maximum_flow(graph, SOURCE, SINK)
    demand = inst.total_work() * scale
    ok = value == demand
    cuts = slots(inst)
    return FeasibilityResult(
        feasible=ok,
        m=m,
        speed=speed,
        max_flow_value=value,
        scale=scale,
        deficit=None if ok else _deficit(graph, inst, cuts, Fraction(demand - value, scale)),
        witness=_witness(flows, inst, cuts, m, speed) if ok and want_witness else None,
    )


def demand_lower_bound(inst: Instance, speed=Fraction(1)) -> int:
    """max over event-point windows [a, b] of ceil(work released and due inside / (s * (b - a)))."""
    speed = as_time(speed)
    points = event_points(inst)
    best = 0
    for i, lo in enumerate(points):
        for hi in points[i + 1 :]:
            work = sum(job.p for job in inst.jobs if job.r >= lo and job.d <= hi)
            if work:
                best = max(best, math.ceil(Fraction(work) / (speed * (hi - lo))))
    return best


def min_machines(inst: Instance, speed=Fraction(1)) -> int:
    """Smallest m with feasible(inst, m, speed); binary search over [demand bound, n]."""
    speed = as_time(speed)
    if not inst.jobs:
        raise ValueError("min_machines needs a nonempty instance")
    lo = max(1, demand_lower_bound(inst, speed))
    hi = len(inst)
    if lo > hi or not feasible(inst, hi, speed).feasible:
        raise OracleError(f"{len(inst)} jobs do not fit on any number of speed-{speed} machines")
    while lo < hi:
        mid = (lo + hi) // 2
        ok = feasible(inst, mid, speed).feasible
        logger.debug("min_machines: m=%d feasible=%s (range %d..%d)", mid, ok, lo, hi)
        if ok:
            hi = mid
        else:
            lo = mid + 1
    return lo
