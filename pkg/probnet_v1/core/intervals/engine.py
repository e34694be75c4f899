from __future__ import annotations

from decimal import ROUND_HALF_EVEN, Decimal

from probnet_v1.core.models import EPS_C, ProbInterval
from probnet_v1.core.models.errors import EmptyIntersection

_SIX_PLACES = Decimal("0.000001")


def intersect(a: ProbInterval, b: ProbInterval, tol: float = EPS_C) -> ProbInterval:
    """Combine two sound intervals for the same quantity.

    Raises EmptyIntersection when they are disjoint by more than ``tol``;
    smaller inversions collapse to a point.
    """
    lo = max(a.lo, b.lo)
    hi = min(a.hi, b.hi)
    if lo <= hi:
        if lo == a.lo and hi == a.hi:
            return a
        return ProbInterval(lo, hi)
    if lo - hi > tol:
        raise EmptyIntersection(lo, hi)
    mid = 0.5 * (lo + hi)
    return ProbInterval(mid, mid)


def contains(outer: ProbInterval, inner: ProbInterval, tol: float = EPS_C) -> bool:
    return outer.lo <= inner.lo + tol and inner.hi <= outer.hi + tol


def format_endpoint(value: float, rounding: str = ROUND_HALF_EVEN) -> str:
    quantized = Decimal(repr(float(value))).quantize(_SIX_PLACES, rounding=rounding)
    if quantized.is_zero():
        # never print "-0.000000"
        quantized = abs(quantized)
    return str(quantized)


def format_interval(iv: ProbInterval) -> str:
    return f"[{format_endpoint(iv.lo)};{format_endpoint(iv.hi)}]"
