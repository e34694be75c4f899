from __future__ import annotations

import math
from typing import Callable, List, Optional, Tuple

import numpy as np

from probnet_v1.core.intervals import intersect
from probnet_v1.core.models import (
    Direction,
    ProbInterval,
    RuleName,
    SaturationStatus,
    TraceStep,
)
from probnet_v1.core.models.errors import (
    EmptyIntersection,
    InconsistentNetwork,
    NotBaseAtom,
    UndefinedMembership,
)
from probnet_v1.core.network import Network, add_conjunction_node, add_disjunction_node
from probnet_v1.logging_config import get_logger

from .arith import corner_range, one_minus_ratio, to_interval, upper_ratio

logger = get_logger(__name__)


def _membership(p: float, q: float) -> float:
    den = p + q - p * q
    return p / den if den > 0 else 0.0


def disj_membership(p: ProbInterval, q: ProbInterval) -> ProbInterval:
    """P(A | A or B) from p = P(A|B) and q = P(B|A).

    f(p, q) = p / (p + q - pq) rises with p and falls with q.
    """
    if p.hi == 0.0 and q.hi == 0.0:
        raise UndefinedMembership("P(A|B) and P(B|A) are both 0")
    lo = 0.0 if p.lo + q.hi == 0.0 else _membership(p.lo, q.hi)
    hi = 1.0 if q.lo == 0.0 else _membership(p.hi, q.lo)
    return ProbInterval.clamped(lo, hi)


def _scalar(value) -> float:
    return float(np.asarray(value).reshape(-1)[0])


def _times(x: float, ratio: float) -> float:
    # 0 * inf is 0 here: a zero factor kills the term
    return 0.0 if x == 0.0 else x * ratio


class _Bounds:
    """Table lookups P(X|Y) for a fixed (a, b, c) triple."""

    def __init__(self, net: Network, a: int, b: int, c: int) -> None:
        self.ba = net.bound(b, a)
        self.ab = net.bound(a, b)
        self.ca = net.bound(c, a)
        self.ac = net.bound(a, c)
        self.cb = net.bound(c, b)
        self.bc = net.bound(b, c)


def _additivity_lower(x_lo: float, y_hi: float, r_num: float, r_den: float, s_lo: float) -> float:
    """x_lo / y_hi + (r_num / r_den) * (1 - 1 / s_lo), vacuous on zero denominators."""
    if y_hi <= 0.0 or s_lo <= 0.0:
        return -math.inf
    if s_lo >= 1.0:
        return x_lo / y_hi
    if r_den <= 0.0:
        return -math.inf if r_num > 0.0 else x_lo / y_hi
    return x_lo / y_hi + (r_num / r_den) * (1.0 - 1.0 / s_lo)


def c_given_ab_closed_form(t: _Bounds) -> ProbInterval:
    """P(C | A and B) from the six pairwise conditionals."""
    lower = max(
        0.0,
        _scalar(one_minus_ratio(1.0 - t.ca.lo, t.ba.lo)),
        _scalar(one_minus_ratio(1.0 - t.cb.lo, t.ab.lo)),
        _additivity_lower(t.ca.lo, t.ba.hi, t.cb.hi, t.ab.lo, t.bc.lo),
        _additivity_lower(t.cb.lo, t.ab.hi, t.ca.hi, t.ba.lo, t.ac.lo),
    )
    upper = min(1.0, _scalar(upper_ratio(t.cb.hi, t.ab.lo)), _scalar(upper_ratio(t.ca.hi, t.ba.lo)))
    return to_interval(lower, upper)


def ab_given_c_closed_form(t: _Bounds) -> ProbInterval:
    """P(A and B | C); the upper bound is tight, the lower one only sound."""
    via_a = _times(t.ac.lo, max(0.0, _scalar(one_minus_ratio(1.0 - t.ba.lo, t.ca.lo))))
    via_b = _times(t.bc.lo, max(0.0, _scalar(one_minus_ratio(1.0 - t.ab.lo, t.cb.lo))))
    lower = max(0.0, via_a, via_b, t.ac.lo + t.bc.lo - 1.0)
    upper = min(
        t.ac.hi,
        t.bc.hi,
        _times(t.ac.hi, _scalar(upper_ratio(t.ba.hi, t.ca.lo))),
        _times(t.bc.hi, _scalar(upper_ratio(t.ab.hi, t.cb.lo))),
    )
    return to_interval(lower, upper)


def _memberships(t: _Bounds) -> Tuple[ProbInterval, ProbInterval]:
    try:
        m_a = disj_membership(t.ab, t.ba)
    except UndefinedMembership:
        m_a = ProbInterval.vacuous()
    try:
        m_b = disj_membership(t.ba, t.ab)
    except UndefinedMembership:
        m_b = ProbInterval.vacuous()
    return m_a, m_b


def c_given_a_or_b_closed_form(t: _Bounds) -> ProbInterval:
    """P(C | A or B) = P(C|A) m_A + P(C|B) m_B - P(C, A, B) / P(A or B)."""
    m_a, m_b = _memberships(t)
    lo_sum, _ = corner_range(lambda ca, ma, cb, mb, ba: ca * ma + cb * mb - ba * ma, t.ca, m_a, t.cb, m_b, t.ba)
    _, hi_sum = corner_range(lambda ca, ma, cb, mb: ca * ma + cb * mb, t.ca, m_a, t.cb, m_b)
    lo_a, _ = corner_range(lambda ca, ma: ca * ma, t.ca, m_a)
    lo_b, _ = corner_range(lambda cb, mb: cb * mb, t.cb, m_b)
    return to_interval(max(lo_sum, lo_a, lo_b), min(1.0, hi_sum))


def a_or_b_given_c_closed_form(t: _Bounds) -> ProbInterval:
    """P(A or B | C) = P(A|C) + P(B|C) - P(A and B | C)."""
    u_and = ab_given_c_closed_form(t).hi
    lower = max(t.ac.lo, t.bc.lo, t.ac.lo + t.bc.lo - u_and)
    upper = min(1.0, t.ac.hi + t.bc.hi)
    return to_interval(lower, upper)


_CLOSED_FORMS = {
    Direction.C_GIVEN_AB: c_given_ab_closed_form,
    Direction.AB_GIVEN_C: ab_given_c_closed_form,
    Direction.C_GIVEN_A_OR_B: c_given_a_or_b_closed_form,
    Direction.A_OR_B_GIVEN_C: a_or_b_given_c_closed_form,
}

_CONJUNCTIVE = (Direction.C_GIVEN_AB, Direction.AB_GIVEN_C)


def closed_form_bounds(net: Network, a: int, b: int, c: int, direction: Direction) -> ProbInterval:
    for atom in (a, b, c):
        if not net.atoms[atom].is_base:
            raise NotBaseAtom(f"'{net.atoms[atom].name}' is not a base atom")
    if len({a, b, c}) != 3:
        raise NotBaseAtom("compound bounds need three distinct atoms")
    try:
        return _CLOSED_FORMS[direction](_Bounds(net, a, b, c))
    except EmptyIntersection as exc:
        raise InconsistentNetwork(
            f"closed-form bounds for {direction.value} are empty",
            witness={"lo": exc.lo, "hi": exc.hi},
        ) from None


Resaturate = Callable[[Network], object]


def compound_query_bounds(
    net: Network,
    a: int,
    b: int,
    c: int,
    direction: Direction,
    resaturate: Optional[Resaturate] = None,
) -> Tuple[ProbInterval, List[TraceStep]]:
    """Bounds on a compound conditional over base atoms a, b, c.

    The network is cloned, extended with the A&B (or A+B) node and
    re-saturated; the table entry for the compound arc is intersected with
    the closed forms. Returns the interval and the trace steps taken on
    the clone; ``net`` itself is left untouched.
    """
    if resaturate is None:
        from probnet_v1.core.saturation import saturate as resaturate

    closed = closed_form_bounds(net, a, b, c, direction)
    extended = net.copy()
    add_node = add_conjunction_node if direction in _CONJUNCTIVE else add_disjunction_node
    node = add_node(extended, a, b).id
    report = resaturate(extended)
    if getattr(report, "status", None) is SaturationStatus.INCONSISTENT:
        raise InconsistentNetwork(
            f"extension by {extended.atoms[node].name} is inconsistent",
            witness=getattr(report, "witness", None),
        )

    given_compound = direction in (Direction.C_GIVEN_AB, Direction.C_GIVEN_A_OR_B)
    arc = (c, node) if given_compound else (node, c)
    propagated = extended.bound(*arc)
    try:
        result = intersect(propagated, closed)
    except EmptyIntersection as exc:
        raise InconsistentNetwork(
            f"closed-form bounds for {direction.value} contradict propagation",
            witness={"propagated": propagated, "closed_form": closed, "lo": exc.lo, "hi": exc.hi},
        ) from None
    steps = extended.trace.since(len(net.trace))
    if result is not propagated:
        steps.append(
            TraceStep(
                rule=RuleName.INTERSECT,
                operands=(a, b, c),
                arc=arc,
                before=propagated,
                after=result,
                iteration=0,
            )
        )
    logger.debug(
        "%s over (%s, %s, %s): propagated %s, closed form %s",
        direction.value,
        net.atoms[a].name,
        net.atoms[b].name,
        net.atoms[c].name,
        propagated,
        closed,
    )
    return result, steps


def conj_query_bounds(
    net: Network, a: int, b: int, c: int, direction: Direction, resaturate: Optional[Resaturate] = None
) -> ProbInterval:
    if direction not in _CONJUNCTIVE:
        raise ValueError(f"{direction.value} is not a conjunction direction")
    return compound_query_bounds(net, a, b, c, direction, resaturate)[0]


def disj_query_bounds(
    net: Network, a: int, b: int, c: int, direction: Direction, resaturate: Optional[Resaturate] = None
) -> ProbInterval:
    if direction in _CONJUNCTIVE:
        raise ValueError(f"{direction.value} is not a disjunction direction")
    return compound_query_bounds(net, a, b, c, direction, resaturate)[0]
