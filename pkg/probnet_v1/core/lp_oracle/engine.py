from __future__ import annotations

from dataclasses import replace
from typing import List, Tuple, Union

import numpy as np

from probnet_v1.core.models import (
    ConstraintId,
    FractionalProgram,
    LinearProgram,
    ProbInterval,
    QueryExpr,
    Sense,
    SimplexResult,
    SimplexStatus,
    Verdict,
    VerdictStatus,
)
from probnet_v1.core.models.errors import (
    DegenerateDenominator,
    InfeasibleKB,
    SolverDriftError,
    ZeroMassCondition,
)
from probnet_v1.core.network import Network
from probnet_v1.logging_config import get_logger

from .simplex import FEAS_TOL, solve
from .worlds import EPS_MASS, build_world_lp, check_oracle_size, floor_rows, kb_rows, truth_masks

logger = get_logger(__name__)

# Agreement required between the fractional and the linear objective.
OBJECTIVE_TOL = 1e-9


def _floor_labels(fp: FractionalProgram) -> List[ConstraintId]:
    return [ConstraintId(name, "*", "mass floor") for name in fp.floor_atoms]


def charnes_cooper(fp: FractionalProgram) -> LinearProgram:
    """Linearise max/min (c.x)/(d.x) with y = x / (d.x) and t = 1 / (d.x).

    Variables are z = (y, t):
        M.y <= 0,  -F.y + floor t <= 0,  d.y = 1,  1.y - t = 0,  z >= 0.
    """
    if not np.any(fp.d > 0):
        raise DegenerateDenominator("the conditioning event holds in no world")
    n = fp.n_worlds
    F = fp.F if fp.F is not None else np.zeros((0, n))
    A_ub = np.vstack(
        [
            np.hstack([fp.M, np.zeros((fp.M.shape[0], 1))]),
            np.hstack([-F, np.full((F.shape[0], 1), fp.floor)]),
        ]
    )
    A_eq = np.vstack(
        [
            np.append(fp.d, 0.0),
            np.append(np.ones(n), -1.0),
        ]
    )
    return LinearProgram(
        c=np.append(fp.c, 0.0),
        A_ub=A_ub,
        b_ub=np.zeros(A_ub.shape[0]),
        A_eq=A_eq,
        b_eq=np.array([1.0, 0.0]),
        sense=fp.sense,
        n_worlds=n,
        ub_labels=list(fp.row_ids) + _floor_labels(fp),
        eq_labels=["denominator", "normalization"],
    )


def recover_worlds(lp: LinearProgram, z: np.ndarray) -> np.ndarray:
    """Map a (y, t) solution back to world probabilities x = y / t."""
    y, t = z[: lp.n_worlds], z[lp.n_worlds]
    if t <= 0:
        raise SolverDriftError("scaling variable vanished")
    return y / t


def fractional_residual(fp: FractionalProgram, x: np.ndarray) -> float:
    """Largest violation of 1.x = 1, M.x <= 0, F.x >= floor, x >= 0."""
    worst = max(abs(float(x.sum()) - 1.0), float(max(0.0, -x.min())))
    if fp.M.size:
        worst = max(worst, float(np.max(fp.M @ x)))
    if fp.F is not None and fp.F.size:
        worst = max(worst, float(np.max(fp.floor - fp.F @ x)))
    return worst


def _solve_verified(fp: FractionalProgram, lp: LinearProgram, solver: str) -> SimplexResult:
    """Solve the linearised program and report the ratio at the recovered worlds.

    Every row except d.y = 1 is homogeneous, so y / t keeps the optimal
    ratio even when the scale of y drifts. The recovered x must satisfy the
    unscaled constraints; the hand-written simplex hands drifting optima
    over to HiGHS.
    """
    result = solve(lp, solver)
    if result.status is not SimplexStatus.OPTIMAL:
        return result
    try:
        x = recover_worlds(lp, result.z)
        ratio = float(fp.c @ x) / float(fp.d @ x)
        residual = fractional_residual(fp, x)
    except SolverDriftError:
        ratio, residual = float("nan"), float("inf")
    agrees = abs(ratio - result.value) <= max(OBJECTIVE_TOL, FEAS_TOL * abs(ratio))
    if residual <= FEAS_TOL and agrees:
        return replace(result, value=ratio)
    if solver == "simplex":
        logger.warning(
            "Simplex drift (residual %.3g, ratio %.12f vs value %.12f); re-solving with HiGHS",
            residual,
            ratio,
            result.value,
        )
        return _solve_verified(fp, lp, "highs")
    if residual <= FEAS_TOL:
        logger.debug("Scale drift %.3g in d.y; ratio kept", abs(ratio - result.value))
        return replace(result, value=ratio)
    logger.warning("Solver drift: residual %.3g at the recovered worlds", residual)
    raise SolverDriftError(f"optimum violates the world constraints (residual {residual:.3g})")


def consistency_program(net: Network, mass_floor: float = EPS_MASS, force: bool = False) -> LinearProgram:
    """Feasibility program over world probabilities, objective 0."""
    check_oracle_size(net, force)
    truth = truth_masks(net)
    M, labels, mentioned = kb_rows(net, truth)
    mentioned |= {atom.id for atom in net.base_atoms()}
    F, floor_atoms = floor_rows(net, truth, mentioned)
    n = truth.shape[1]
    return LinearProgram(
        c=np.zeros(n),
        A_ub=np.vstack([M, -F]),
        b_ub=np.concatenate([np.zeros(M.shape[0]), np.full(F.shape[0], -mass_floor)]),
        A_eq=np.ones((1, n)),
        b_eq=np.array([1.0]),
        sense=Sense.MAX,
        n_worlds=n,
        ub_labels=labels + [ConstraintId(name, "*", "mass floor") for name in floor_atoms],
        eq_labels=["normalization"],
    )


def check_consistency(
    net: Network,
    mass_floor: float = EPS_MASS,
    force: bool = False,
    solver: str = "simplex",
) -> Verdict:
    """Decide whether some distribution over worlds satisfies every KB entry.

    An infeasible verdict lists the rows with a nonzero phase-one dual.
    """
    logger.info("Checking consistency of %d atoms (floor %g)", net.n, mass_floor)
    try:
        lp = consistency_program(net, mass_floor, force)
        result = solve(lp, solver)
        if result.status is SimplexStatus.INFEASIBLE and solver != "simplex":
            # only the hand-written simplex exposes its phase-one duals
            result = solve(lp, "simplex")
    except Exception:
        logger.exception("Consistency check failed")
        raise

    if result.status is SimplexStatus.INFEASIBLE:
        certificate = [lp.ub_labels[r] for r in result.infeasible_ub_rows]
        verdict = Verdict(
            status=VerdictStatus.INFEASIBLE,
            certificate=certificate,
            details={"mass_floor": mass_floor, "worlds": lp.n_worlds, "pivots": result.pivots},
        )
        logger.info("KB infeasible; certificate of %d rows", len(certificate))
        return verdict
    logger.info("KB consistent (%d worlds)", lp.n_worlds)
    return Verdict(
        status=VerdictStatus.CONSISTENT,
        details={"mass_floor": mass_floor, "worlds": lp.n_worlds, "pivots": result.pivots},
    )


def exact_bounds(
    net: Network,
    q: Union[QueryExpr, str],
    mass_floor: float = EPS_MASS,
    force: bool = False,
    solver: str = "simplex",
) -> ProbInterval:
    """Tightest bounds on the query over every distribution satisfying the KB."""
    logger.info("Exact bounds for %s via %s", q, solver)
    try:
        fp = build_world_lp(net, q, Sense.MAX, mass_floor, force)
        lp = charnes_cooper(fp)
        values: List[float] = []
        for sense in (Sense.MIN, Sense.MAX):
            lp.sense = fp.sense = sense
            result = _solve_verified(fp, lp, solver)
            if result.status is SimplexStatus.INFEASIBLE:
                verdict = check_consistency(net, mass_floor, force, solver)
                if not verdict.consistent:
                    raise InfeasibleKB(verdict)
                raise ZeroMassCondition(f"every model of the KB gives '{q}' a zero-mass condition")
            if result.status is SimplexStatus.UNBOUNDED:
                raise SolverDriftError("bounded ratio program reported unbounded")
            values.append(float(result.value))
    except (InfeasibleKB, ZeroMassCondition):
        raise
    except Exception:
        logger.exception("Exact bounds failed for %s", q)
        raise
    lo, hi = values
    interval = ProbInterval.clamped(lo, hi, tol=FEAS_TOL)
    logger.info("Exact bounds for %s: [%.6f, %.6f]", q, interval.lo, interval.hi)
    return interval


def exact_pair(net: Network, target: int, given: int, **kwargs) -> Tuple[ProbInterval, str]:
    """exact_bounds for an atomic pair, also returning the query text."""
    text = f"{net.atoms[target].name}|{net.atoms[given].name}"
    return exact_bounds(net, text, **kwargs), text
