from __future__ import annotations

from typing import Iterator, Tuple

import numpy as np

from probnet_v1.core.models import IndepDecl, IndepKind, ProbInterval, RuleName
from probnet_v1.core.models.errors import EmptyIntersection, InconsistentNetwork
from probnet_v1.core.network import EPS_Q, Network
from probnet_v1.logging_config import get_logger

from .arith import corner_range, one_minus_ratio, to_interval, upper_ratio

logger = get_logger(__name__)

Candidate = Tuple[int, int, ProbInterval]


def _mediated(net: Network, a: int, b: int, c: int) -> Iterator[Candidate]:
    """A and C independent given B: P(C|A,B) = P(C|B)."""
    ba, cb = net.bound(b, a), net.bound(c, b)
    ab, bc = net.bound(a, b), net.bound(b, c)
    # P(C|A) in [P(C|B) P(B|A), 1 - P(B|A) + P(C|B) P(B|A)]
    yield c, a, to_interval(cb.lo * ba.lo, 1.0 - ba.lo + cb.hi * ba.lo)
    if ab.lo <= 0.0 or bc.lo <= 0.0:
        # the ratio bound needs A and B, and B and C, to overlap
        return
    # P(C|A) <= P(B|A) P(C|B) / (P(A|B) P(B|C)) * (1 - P(B|C) + P(A|B) P(B|C))
    _, hi = corner_range(
        lambda x_ba, x_cb, x_ab, x_bc: x_ba * x_cb * (upper_ratio(1.0 - x_bc, x_ab * x_bc) + 1.0),
        ba,
        cb,
        ab,
        bc,
    )
    yield c, a, to_interval(0.0, hi)


def _common_source(net: Network, a: int, b: int, c: int) -> Iterator[Candidate]:
    """B and C independent given A: P(C|A) = P(C|A,B)."""
    ab, cb = net.bound(a, b), net.bound(c, b)
    lower = float(np.maximum(0.0, one_minus_ratio(1.0 - cb.lo, ab.lo)))
    upper = float(upper_ratio(cb.hi, ab.lo))
    yield c, a, to_interval(lower, upper)


def _common_effect(net: Network, a: int, b: int, c: int) -> Iterator[Candidate]:
    """A and B independent given C: P(A|C) = P(A|B,C)."""
    ab, cb = net.bound(a, b), net.bound(c, b)
    ba, bc = net.bound(b, a), net.bound(b, c)
    lower = float(np.maximum(0.0, one_minus_ratio(1.0 - ab.lo, cb.lo)))
    upper = float(upper_ratio(ab.hi, cb.lo))
    yield a, c, to_interval(lower, upper)
    # P(C|A) in [P(B|A) / P(B|C) * (1 - (1 - P(C|B)) / P(A|B)), P(B|A) / P(B|C)]
    lo, _ = corner_range(
        lambda x_ba, x_bc, x_cb, x_ab: np.where(
            x_bc > 0,
            x_ba * np.maximum(0.0, one_minus_ratio(1.0 - x_cb, x_ab)) / np.where(x_bc > 0, x_bc, 1.0),
            0.0,
        ),
        ba,
        bc,
        cb,
        ab,
    )
    _, hi = corner_range(lambda x_ba, x_bc: upper_ratio(x_ba, x_bc), ba, bc)
    yield c, a, to_interval(lo, hi)


def _candidates(net: Network, decl: IndepDecl) -> Iterator[Candidate]:
    a, b, c = decl.triple
    if decl.kind is IndepKind.II:
        # A and C play symmetric roles
        yield from _mediated(net, a, b, c)
        yield from _mediated(net, c, b, a)
    elif decl.kind is IndepKind.I:
        # B and C play symmetric roles
        yield from _common_source(net, a, b, c)
        yield from _common_source(net, a, c, b)
    else:
        # A and B play symmetric roles
        yield from _common_effect(net, a, b, c)
        yield from _common_effect(net, b, a, c)


def indep_tighten(net: Network, decl: IndepDecl, iteration: int = 0, eps: float = EPS_Q) -> bool:
    """Tighten the arcs constrained by one independence declaration.

    Every bound presumes the three atoms intersect pairwise with positive
    probability.
    """
    changed = False
    try:
        for target, given, candidate in _candidates(net, decl):
            if net.tighten(target, given, candidate, RuleName.INDEP, decl.triple, iteration, eps):
                changed = True
    except EmptyIntersection as exc:
        names = tuple(net.atoms[i].name for i in decl.triple)
        raise InconsistentNetwork(
            f"independence {decl.kind.value} over {names} leaves an empty interval",
            witness={"rule": RuleName.INDEP.value, "triple": names, "lo": exc.lo, "hi": exc.hi},
        ) from None
    return changed
