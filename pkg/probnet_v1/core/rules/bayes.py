from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from probnet_v1.core.models import ProbInterval, RuleName
from probnet_v1.core.models.errors import EmptyIntersection, InconsistentNetwork
from probnet_v1.core.network import EPS_Q, Network
from probnet_v1.logging_config import get_logger

logger = get_logger(__name__)

# Circuit positivity tolerance in the log domain.
EPS_CYC = 1e-7


@dataclass
class ArcWeightGraph:
    """Log-ratio arc weights w[i][j] = ln P_*(A_i|A_j) - ln P^*(A_j|A_i).

    exp(w[i][j]) is a lower bound on P(A_i) / P(A_j); arcs with a zero
    numerator or denominator carry -inf (no information).
    """

    w: np.ndarray

    @property
    def n(self) -> int:
        return int(self.w.shape[0])

    @classmethod
    def from_network(cls, net: Network) -> "ArcWeightGraph":
        lo, hi_t = net.lo, net.hi.T
        usable = (lo > 0.0) & (hi_t > 0.0)
        w = np.full(lo.shape, -np.inf)
        with np.errstate(divide="ignore"):
            w[usable] = np.log(lo[usable]) - np.log(hi_t[usable])
        return cls(w=w)


@dataclass
class Violation:
    """A circuit whose weight exceeds EPS_CYC: the bounds admit no distribution."""

    circuit: List[int]
    excess: float

    def describe(self, net: Network) -> str:
        names = [net.atoms[i].name for i in self.circuit]
        return " -> ".join(names + names[:1]) + f" (log excess {self.excess:.6g})"


def longest_paths(graph: ArcWeightGraph) -> np.ndarray:
    """Max-plus closure of the arc weights with a zero diagonal.

    D[i][j] is the heaviest walk from i to j. Walks and simple paths agree
    when no circuit is positive.
    """
    D = graph.w.copy()
    np.fill_diagonal(D, np.maximum(np.diag(D), 0.0))
    for k in range(graph.n):
        np.maximum(D, D[:, k, None] + D[None, k, :], out=D)
    return D


def circuit_log_weight(graph: ArcWeightGraph, circuit: Sequence[int]) -> float:
    """Sum of w along circuit[0] -> circuit[1] -> ... -> circuit[0]."""
    if len(circuit) < 2:
        return 0.0
    heads = list(circuit)
    tails = heads[1:] + heads[:1]
    return float(sum(graph.w[i, j] for i, j in zip(heads, tails)))


def _follow(nxt: np.ndarray, start: int, end: int) -> List[int]:
    path = [start]
    node = start
    for _ in range(nxt.shape[0]):
        if node == end and len(path) > 1:
            break
        node = int(nxt[node, end])
        if node < 0:
            break
        path.append(node)
    return path


def _simple_cycles(walk: List[int]) -> List[List[int]]:
    """Split a closed walk (first == last) into simple cycles."""
    cycles: List[List[int]] = []
    stack: List[int] = []
    for node in walk:
        if node in stack:
            at = stack.index(node)
            cycles.append(stack[at:])
            stack = stack[: at + 1]
        else:
            stack.append(node)
    return cycles


def cycle_check(net: Network, eps: float = EPS_CYC) -> Optional[Violation]:
    """Return None when every circuit has log weight <= eps, else a witness.

    Runs the closure without self loops and stops at the first pivot that
    closes a positive circuit; the circuit is rebuilt from successor
    pointers and split into simple cycles, the heaviest one is reported.
    """
    graph = ArcWeightGraph.from_network(net)
    n = graph.n
    D = graph.w.copy()
    np.fill_diagonal(D, -np.inf)
    nxt = np.where(np.isfinite(D), np.arange(n)[None, :], -1)
    for k in range(n):
        through = D[:, k, None] + D[None, k, :]
        better = through > D
        diag = np.diag(through)
        if np.any(diag > eps):
            i = int(np.argmax(diag))
            walk = _follow(nxt, i, k) + _follow(nxt, k, i)[1:]
            cycles = _simple_cycles(walk) or [walk[:-1]]
            best = max(cycles, key=lambda cyc: circuit_log_weight(graph, cyc))
            excess = circuit_log_weight(graph, best)
            if excess <= eps:
                best, excess = walk[:-1], float(diag[i])
            violation = Violation(circuit=best, excess=excess)
            logger.warning("Positive circuit found: %s", violation.describe(net))
            return violation
        D = np.where(better, through, D)
        nxt = np.where(better, nxt[:, k, None], nxt)
    return None


def bg_tighten(net: Network, iteration: int = 0, eps: float = EPS_Q) -> bool:
    """Generalized Bayes step over every ordered pair at once.

    For each pair (A, B):
        P(A|B) >= P_*(B|A) * exp(D[A][B])
        P(A|B) <= P^*(B|A) * exp(-D[B][A])
    where D is the longest-path closure.
    """
    graph = ArcWeightGraph.from_network(net)
    D = longest_paths(graph)
    lo_t, hi_t = net.lo.T.copy(), net.hi.T.copy()
    with np.errstate(over="ignore", invalid="ignore"):
        cand_lo = np.minimum(lo_t * np.exp(D), 1.0)
        cand_hi = np.where(np.isneginf(D.T), 1.0, hi_t * np.exp(-D.T))
    cand_lo = np.where(np.isfinite(D), cand_lo, 0.0)
    cand_hi = np.nan_to_num(np.minimum(cand_hi, 1.0), nan=1.0)
    np.fill_diagonal(cand_lo, 1.0)
    np.fill_diagonal(cand_hi, 1.0)

    improves = (cand_lo > net.lo) | (cand_hi < net.hi)
    changed = 0
    for a, b in zip(*np.nonzero(improves)):
        a, b = int(a), int(b)
        try:
            candidate = ProbInterval.clamped(cand_lo[a, b], cand_hi[a, b])
            if net.tighten(a, b, candidate, RuleName.BG, (a, b), iteration, eps):
                changed += 1
        except EmptyIntersection as exc:
            names = (net.atoms[a].name, net.atoms[b].name)
            raise InconsistentNetwork(
                f"Bayes propagation empties P({names[0]}|{names[1]})",
                witness={"rule": RuleName.BG.value, "arc": names, "lo": exc.lo, "hi": exc.hi},
            ) from None
    logger.debug("BG pass (outer %d): %d arcs tightened", iteration, changed)
    return changed > 0
