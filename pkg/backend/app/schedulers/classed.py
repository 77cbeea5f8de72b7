"""Size-class EDF baseline: one EDF pool per floor(log2 p) class, opened on first use."""

from ..core.models import Job
from .base import Tick
from .greedy import GreedyScheduler
from .pooled import PooledScheduler


def size_class(job: Job) -> int:
    return job.p.bit_length() - 1


class ClassedEdfScheduler(PooledScheduler):
    def __init__(self, machines_per_class: int, name: str = "classed-edf"):
        if machines_per_class < 1:
            raise ValueError(f"machines_per_class must be >= 1, got {machines_per_class}")
        super().__init__(name)
        self.machines_per_class = machines_per_class

    def route(self, tick: Tick, job: Job) -> str:
        label = f"class-{size_class(job)}"
        if label not in self.labels:
            size = self.machines_per_class
            self.open_pool(label, GreedyScheduler("edf", size, name=label), size)
        return label


def classed_edf(machines_per_class: int) -> ClassedEdfScheduler:
    return ClassedEdfScheduler(machines_per_class)
