from __future__ import annotations

from typing import Optional, Sequence, Tuple

import numpy as np

from probnet_v1.core.models import ProbInterval
from probnet_v1.core.network import Network

STUDENT_ATOMS = ("student", "sport", "single", "young", "children")


def world_conditionals(x: np.ndarray, n: int) -> np.ndarray:
    """true[t][g] = P(atom t | atom g) under world distribution x (bit k = atom k)."""
    worlds = np.arange(x.size)
    truth = np.array([(worlds >> k) & 1 == 1 for k in range(n)])
    mass = truth.astype(float) @ x
    joint = (truth[:, None, :] & truth[None, :, :]).astype(float) @ x
    return joint / mass[None, :]


def widened_network(
    true: np.ndarray,
    rng: np.random.Generator,
    arcs: Optional[Sequence[Tuple[int, int]]] = None,
    max_width: float = 0.2,
    names: Optional[Sequence[str]] = None,
) -> Network:
    """Network whose entries are random widenings of ``true`` on the chosen arcs."""
    n = true.shape[0]
    net = Network()
    for k in range(n):
        net.add_atom(names[k] if names else f"a{k}")
    if arcs is None:
        arcs = [(t, g) for t in range(n) for g in range(n) if t != g]
    for t, g in arcs:
        p = float(true[t, g])
        lo = max(0.0, p - rng.uniform(0.0, max_width))
        hi = min(1.0, p + rng.uniform(0.0, max_width))
        net.constrain(t, g, ProbInterval(lo, hi))
    return net


def precise_network(true: np.ndarray) -> Network:
    return widened_network(true, np.random.default_rng(0), max_width=0.0)


def independent_distribution(rng: np.random.Generator, given: int, pair: Tuple[int, int]) -> np.ndarray:
    """Random distribution over 3 atoms where ``pair`` is independent given atom ``given``."""
    worlds = np.arange(8)
    bits = np.array([(worlds >> k) & 1 for k in range(3)])
    p_given = rng.uniform(0.2, 0.8)
    p_i, p_j = rng.uniform(0.1, 0.9, size=2)
    inside = bits[given] == 1
    i, j = pair
    x = np.zeros(8)
    x[inside] = (
        p_given
        * np.where(bits[i][inside] == 1, p_i, 1.0 - p_i)
        * np.where(bits[j][inside] == 1, p_j, 1.0 - p_j)
    )
    x[~inside] = (1.0 - p_given) * rng.dirichlet(np.ones(4))
    return x
