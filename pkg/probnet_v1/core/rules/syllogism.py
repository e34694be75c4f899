from __future__ import annotations

import numpy as np

from probnet_v1.core.models import ProbInterval, RuleName
from probnet_v1.core.models.errors import EmptyIntersection, InconsistentNetwork
from probnet_v1.core.network import EPS_Q, Network
from probnet_v1.logging_config import get_logger

from .arith import one_minus_ratio, upper_ratio

logger = get_logger(__name__)


def qs_lower(ba_lo, ab_lo, cb_lo) -> np.ndarray:
    """P_*(C|A) = P_*(B|A) * max(0, 1 - (1 - P_*(C|B)) / P_*(A|B))."""
    return np.asarray(ba_lo, dtype=float) * np.maximum(0.0, one_minus_ratio(1.0 - np.asarray(cb_lo), ab_lo))


def qs_upper(ba_lo, ba_hi, ab_lo, cb_hi, bc_lo) -> np.ndarray:
    """Maximum over x = P(B|A) in [ba_lo, ba_hi] of the least of four terms.

    With r = P^*(C|B) / P_*(A|B) and s = P_*(B|C), each term is affine in x:

        1,  1 - x + x r,  x r / s,  x + x r (1 - s) / s

    Zero denominators drop the affected terms. The maximum of the lower
    envelope sits at an interval end or where two terms cross.
    """
    ba_lo, ba_hi, ab_lo, cb_hi, bc_lo = np.broadcast_arrays(
        *(np.atleast_1d(np.asarray(v, dtype=float)) for v in (ba_lo, ba_hi, ab_lo, cb_hi, bc_lo))
    )
    r = upper_ratio(cb_hi, ab_lo)
    r_over_s = upper_ratio(r, bc_lo)
    finite_r = np.isfinite(r)
    finite_rs = np.isfinite(r_over_s)

    one = np.ones_like(r)
    zero = np.zeros_like(r)
    # intercepts and slopes, shape (4, m); dropped terms get intercept +inf
    alpha = np.stack(
        [
            one,
            np.where(finite_r, 1.0, np.inf),
            np.where(finite_rs, 0.0, np.inf),
            np.where(finite_rs, 0.0, np.inf),
        ]
    )
    beta = np.stack(
        [
            zero,
            np.where(finite_r, r - 1.0, 0.0),
            np.where(finite_rs, r_over_s, 0.0),
            np.where(finite_rs, 1.0 + r_over_s - np.where(finite_r, r, 0.0), 0.0),
        ]
    )

    candidates = [ba_lo, ba_hi]
    with np.errstate(divide="ignore", invalid="ignore"):
        for i in range(4):
            for j in range(i + 1, 4):
                x = (alpha[j] - alpha[i]) / (beta[i] - beta[j])
                ok = np.isfinite(x) & (x > ba_lo) & (x < ba_hi)
                candidates.append(np.where(ok, x, ba_lo))
    xs = np.stack(candidates)  # (k, m)
    envelope = np.min(alpha[:, None, :] + beta[:, None, :] * xs[None, :, :], axis=0)
    return np.minimum(np.max(envelope, axis=0), 1.0)


def qs_bounds(
    ba: ProbInterval, ab: ProbInterval, cb: ProbInterval, bc: ProbInterval
) -> ProbInterval:
    """Quantified syllogism: bounds on P(C|A) from P(B|A), P(A|B), P(C|B), P(B|C)."""
    lo = float(qs_lower(ba.lo, ab.lo, cb.lo))
    hi = float(qs_upper(ba.lo, ba.hi, ab.lo, cb.hi, bc.lo)[0])
    return ProbInterval.clamped(lo, hi)


def _qs_pass(net: Network, iteration: int, eps: float) -> int:
    n = net.n
    changed = 0
    every = np.arange(n)
    for c in range(n):
        for b in range(n):
            if b == c:
                continue
            targets = every[(every != b) & (every != c)]
            if targets.size == 0:
                continue
            lo, hi = net.lo, net.hi
            cand_lo = qs_lower(lo[b, targets], lo[targets, b], lo[c, b])
            cand_hi = qs_upper(lo[b, targets], hi[b, targets], lo[targets, b], hi[c, b], lo[b, c])
            improves = (cand_lo > lo[c, targets]) | (cand_hi < hi[c, targets])
            for k in np.flatnonzero(improves):
                a = int(targets[k])
                try:
                    candidate = ProbInterval.clamped(cand_lo[k], cand_hi[k])
                    if net.tighten(c, a, candidate, RuleName.QS, (a, b, c), iteration, eps):
                        changed += 1
                except EmptyIntersection as exc:
                    names = tuple(net.atoms[i].name for i in (a, b, c))
                    raise InconsistentNetwork(
                        f"syllogism over {names} empties P({names[2]}|{names[0]})",
                        witness={"rule": RuleName.QS.value, "triple": names, "lo": exc.lo, "hi": exc.hi},
                    ) from None
    return changed


def qs_sweep(net: Network, iteration: int = 0, eps: float = EPS_Q) -> bool:
    """Apply the syllogism to every ordered triple until a full pass is stable.

    Triples are visited in (C, B) lexicographic order with all A at once;
    the entries written for a fixed (C, B) are never read in the same step,
    so batching over A matches one-at-a-time application.
    """
    any_change = False
    sweeps = 0
    while True:
        sweeps += 1
        changed = _qs_pass(net, iteration, eps)
        logger.debug("QS sweep %d (outer %d): %d arcs tightened", sweeps, iteration, changed)
        if not changed:
            return any_change
        any_change = True


def qs_triple(net: Network, a: int, b: int, c: int) -> ProbInterval:
    """qs_bounds read straight from the table for one triple."""
    return qs_bounds(net.bound(b, a), net.bound(a, b), net.bound(c, b), net.bound(b, c))
