from __future__ import annotations

from itertools import product
from typing import Callable, Tuple

import numpy as np

from probnet_v1.core.models import ProbInterval


def upper_ratio(num, den) -> np.ndarray:
    """num / den for upper-bound terms; a zero denominator gives +inf (term dropped)."""
    num, den = np.broadcast_arrays(np.asarray(num, dtype=float), np.asarray(den, dtype=float))
    out = np.full(num.shape, np.inf)
    np.divide(num, den, out=out, where=den > 0)
    return out


def one_minus_ratio(num, den) -> np.ndarray:
    """1 - num / den for lower-bound terms.

    With a zero denominator the term is 1 when ``num`` is 0 (certainty
    carries over) and -inf otherwise (term dropped by the max).
    """
    num, den = np.broadcast_arrays(np.asarray(num, dtype=float), np.asarray(den, dtype=float))
    out = np.where(num <= 0.0, 1.0, -np.inf)
    np.subtract(1.0, num / np.where(den > 0, den, 1.0), out=out, where=den > 0)
    return out


def corner_range(fn: Callable[..., np.ndarray], *intervals: ProbInterval) -> Tuple[float, float]:
    """Extremes of ``fn`` over the 2**k endpoint combinations of its arguments.

    Exact for expressions monotone in each argument separately. An
    undefined (NaN) corner makes the result (-inf, inf).
    """
    grid = np.array(list(product(*[(iv.lo, iv.hi) for iv in intervals])), dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.asarray(fn(*grid.T), dtype=float)
    if np.isnan(values).any():
        return -np.inf, np.inf
    return float(values.min()), float(values.max())


def to_interval(lo: float, hi: float) -> ProbInterval:
    """Clip raw bound terms (possibly infinite) into a ProbInterval."""
    return ProbInterval.clamped(lo, hi)
