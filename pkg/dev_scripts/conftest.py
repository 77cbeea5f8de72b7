"""
Shared pytest fixtures.

Puts the repository root on sys.path so the tests import backend.app the same
way run_machmin.py does.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent))

from backend.app.core.models import Instance, Job  # noqa: E402


def make_instance(*triples) -> Instance:
    """Instance from (r, d, p) triples; ids follow argument order."""
    return Instance(jobs=[Job(id=i, r=r, d=d, p=p) for i, (r, d, p) in enumerate(triples)])


def small_random_instance(seed: int, max_jobs: int = 5, max_release: int = 6, max_size: int = 4) -> Instance:
    """Tiny instance with horizon <= max_release + 2 * max_size, inside the brute-force guard."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, max_jobs + 1))
    triples = []
    for _ in range(n):
        r = int(rng.integers(0, max_release + 1))
        p = int(rng.integers(1, max_size + 1))
        slack = int(rng.integers(0, max_size + 1))
        triples.append((r, r + p + slack, p))
    return make_instance(*triples)


@pytest.fixture
def two_unit_jobs() -> Instance:
    return make_instance((0, 1, 1), (0, 1, 1))


@pytest.fixture
def tight_pair() -> Instance:
    """Two identical tight jobs that one SJF machine cannot both finish."""
    return make_instance((0, 4, 3), (0, 4, 3))
