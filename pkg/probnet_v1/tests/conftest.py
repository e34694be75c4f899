from __future__ import annotations

from pathlib import Path
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
import pytest

from probnet_v1.core.network import Network, parse_kb

from .helpers import STUDENT_ATOMS, widened_network, world_conditionals

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"


@pytest.fixture
def fixture_dir() -> Path:
    return FIXTURE_DIR


@pytest.fixture
def load_kb() -> Callable[[str], Network]:
    def _load(name: str) -> Network:
        with open(FIXTURE_DIR / name, encoding="utf-8") as handle:
            return parse_kb(handle)

    return _load


@pytest.fixture
def students_net(load_kb) -> Network:
    return load_kb("students.kb")


@pytest.fixture
def students_table(students_net) -> dict:
    """(target, given) -> ProbInterval as printed in the saturated table."""
    table = {}
    for t in STUDENT_ATOMS:
        for g in STUDENT_ATOMS:
            if t != g:
                table[(t, g)] = students_net.bound(students_net.atom(t).id, students_net.atom(g).id)
    return table


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260418)


@pytest.fixture
def random_kb(rng) -> Callable[..., Tuple[Network, np.ndarray]]:
    """Factory: a feasible KB widened from a random positive world distribution.

    Returns the network and the true conditional matrix it was built from.
    """

    def _make(
        n: int,
        arcs: Optional[Sequence[Tuple[int, int]]] = None,
        max_width: float = 0.2,
    ) -> Tuple[Network, np.ndarray]:
        x = rng.dirichlet(np.ones(2**n))
        true = world_conditionals(x, n)
        return widened_network(true, rng, arcs, max_width), true

    return _make
