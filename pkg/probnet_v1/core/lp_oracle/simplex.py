from __future__ import annotations

from typing import List, Tuple

import numpy as np

from probnet_v1.core.models import LinearProgram, Sense, SimplexResult, SimplexStatus
from probnet_v1.core.models.errors import IterationLimit
from probnet_v1.logging_config import get_logger

logger = get_logger(__name__)

PIVOT_TOL = 1e-9
FEAS_TOL = 1e-8
MAX_PIVOTS = 10**6


class _Tableau:
    """Dense simplex tableau in minimisation form.

    Rows 0..m-1 hold B^-1 [A | b]; the last row holds reduced costs and,
    in its last cell, minus the objective value.
    """

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: List[int]) -> None:
        m, n = A.shape
        self.T = np.zeros((m + 1, n + 1))
        self.T[:m, :n] = A
        self.T[:m, n] = b
        self.basis = list(basis)
        self.pivots = 0

    def set_costs(self, cost: np.ndarray) -> None:
        self.T[-1, :] = 0.0
        self.T[-1, : cost.size] = cost
        for row, col in enumerate(self.basis):
            if cost[col] != 0.0:
                self.T[-1, :] -= cost[col] * self.T[row, :]

    def pivot(self, row: int, col: int) -> None:
        self.pivots += 1
        if self.pivots > MAX_PIVOTS:
            raise IterationLimit(f"simplex exceeded {MAX_PIVOTS} pivots")
        T = self.T
        T[row, :] /= T[row, col]
        factors = T[:, col].copy()
        factors[row] = 0.0
        T -= np.outer(factors, T[row, :])
        self.basis[row] = col

    def entering(self, allowed: np.ndarray) -> int:
        # Bland: lowest index with a negative reduced cost
        reduced = self.T[-1, :-1]
        candidates = np.flatnonzero((reduced < -PIVOT_TOL) & allowed)
        return int(candidates[0]) if candidates.size else -1

    def leaving(self, col: int) -> int:
        column = self.T[:-1, col]
        rhs = self.T[:-1, -1]
        eligible = np.flatnonzero(column > PIVOT_TOL)
        if eligible.size == 0:
            return -1
        ratios = rhs[eligible] / column[eligible]
        best = ratios.min()
        ties = eligible[ratios <= best + PIVOT_TOL * max(1.0, abs(best))]
        # Bland: among ties, the row whose basic variable has the lowest index
        return int(min(ties, key=lambda r: self.basis[r]))

    def run(self, allowed: np.ndarray) -> SimplexStatus:
        while True:
            col = self.entering(allowed)
            if col < 0:
                return SimplexStatus.OPTIMAL
            row = self.leaving(col)
            if row < 0:
                return SimplexStatus.UNBOUNDED
            self.pivot(row, col)

    def objective(self) -> float:
        return -float(self.T[-1, -1])

    def primal(self, n: int) -> np.ndarray:
        z = np.zeros(self.T.shape[1] - 1)
        z[self.basis] = self.T[:-1, -1]
        return np.maximum(z[:n], 0.0)


def _standard_form(lp: LinearProgram) -> Tuple[np.ndarray, np.ndarray, List[int], int, int, int]:
    """Stack [A_ub | I] and [A_eq | 0] with non-negative right-hand sides.

    Returns the matrix (artificial columns appended), b, the column of each
    row's starting basic variable, the number of structural columns, the
    first artificial column and the number of inequality rows.
    """
    n = lp.c.size
    A_ub = np.asarray(lp.A_ub, dtype=float).reshape(-1, n)
    A_eq = np.asarray(lp.A_eq, dtype=float).reshape(-1, n)
    b_ub = np.asarray(lp.b_ub, dtype=float).reshape(-1)
    b_eq = np.asarray(lp.b_eq, dtype=float).reshape(-1)
    m_ub, m_eq = A_ub.shape[0], A_eq.shape[0]
    m = m_ub + m_eq

    core = np.zeros((m, n + m_ub))
    core[:m_ub, :n] = A_ub
    core[:m_ub, n:] = np.eye(m_ub)
    core[m_ub:, :n] = A_eq
    b = np.concatenate([b_ub, b_eq])
    flip = b < 0
    core[flip] *= -1.0
    b[flip] *= -1.0

    # slack rows with b >= 0 start basic on their slack; every other row gets an artificial
    needs_art = np.ones(m, dtype=bool)
    needs_art[:m_ub] = flip[:m_ub]
    art_rows = np.flatnonzero(needs_art)
    art_start = n + m_ub
    A = np.zeros((m, art_start + art_rows.size))
    A[:, :art_start] = core
    start_cols = [n + r if r < m_ub else -1 for r in range(m)]
    for k, r in enumerate(art_rows):
        A[r, art_start + k] = 1.0
        start_cols[r] = art_start + k
    return A, b, start_cols, n, art_start, m_ub


def _phase_one_duals(tab: _Tableau, cost: np.ndarray, start_cols: List[int]) -> np.ndarray:
    """pi = c_B B^-1, read off the columns that formed the starting identity."""
    c_b = cost[tab.basis]
    B_inv = tab.T[:-1, start_cols]
    return c_b @ B_inv


def solve_simplex(lp: LinearProgram) -> SimplexResult:
    """Two-phase primal simplex with Bland's rule on a dense tableau."""
    A, b, start_cols, n, art_start, m_ub = _standard_form(lp)
    tab = _Tableau(A, b, start_cols)
    n_cols = A.shape[1]

    phase_one = np.zeros(n_cols)
    phase_one[art_start:] = 1.0
    tab.set_costs(phase_one)
    tab.run(np.ones(n_cols, dtype=bool))
    infeasibility = tab.objective()
    if infeasibility > FEAS_TOL:
        duals = _phase_one_duals(tab, phase_one, start_cols)
        support = np.flatnonzero(np.abs(duals) > PIVOT_TOL)
        logger.debug("Phase one ended at %.3g; %d rows in the certificate", infeasibility, support.size)
        return SimplexResult(
            status=SimplexStatus.INFEASIBLE,
            pivots=tab.pivots,
            infeasible_ub_rows=[int(r) for r in support if r < m_ub],
            infeasible_eq_rows=[int(r) - m_ub for r in support if r >= m_ub],
        )

    # drive remaining artificials out of the basis; rows that cannot pivot are redundant
    keep: List[int] = []
    for row, col in enumerate(list(tab.basis)):
        if col < art_start:
            keep.append(row)
            continue
        structural = np.flatnonzero(np.abs(tab.T[row, :art_start]) > PIVOT_TOL)
        if structural.size:
            tab.pivot(row, int(structural[0]))
            keep.append(row)
    tab.T = np.vstack([tab.T[keep], tab.T[-1:]])
    tab.basis = [tab.basis[r] for r in keep]

    allowed = np.zeros(n_cols, dtype=bool)
    allowed[:art_start] = True
    cost = np.zeros(n_cols)
    c = np.asarray(lp.c, dtype=float)
    cost[:n] = -c if lp.sense is Sense.MAX else c
    tab.set_costs(cost)
    status = tab.run(allowed)
    if status is SimplexStatus.UNBOUNDED:
        return SimplexResult(status=status, pivots=tab.pivots)

    # objective at the returned point, not the tableau cell
    z = tab.primal(n)
    return SimplexResult(status=SimplexStatus.OPTIMAL, value=float(c @ z), z=z, pivots=tab.pivots)


def solve_highs(lp: LinearProgram) -> SimplexResult:
    """Same contract as solve_simplex, delegated to scipy's HiGHS."""
    from scipy.optimize import linprog

    c = np.asarray(lp.c, dtype=float)
    sign = -1.0 if lp.sense is Sense.MAX else 1.0
    n = c.size
    A_ub = np.asarray(lp.A_ub, dtype=float).reshape(-1, n)
    A_eq = np.asarray(lp.A_eq, dtype=float).reshape(-1, n)
    res = linprog(
        sign * c,
        A_ub=A_ub if A_ub.size else None,
        b_ub=np.asarray(lp.b_ub, dtype=float) if A_ub.size else None,
        A_eq=A_eq if A_eq.size else None,
        b_eq=np.asarray(lp.b_eq, dtype=float) if A_eq.size else None,
        bounds=(0, None),
        method="highs",
    )
    if res.status == 2:
        return SimplexResult(status=SimplexStatus.INFEASIBLE)
    if res.status == 3:
        return SimplexResult(status=SimplexStatus.UNBOUNDED)
    if res.status != 0:
        raise IterationLimit(f"HiGHS stopped: {res.message}")
    return SimplexResult(
        status=SimplexStatus.OPTIMAL,
        value=sign * float(res.fun),
        z=np.maximum(np.asarray(res.x, dtype=float), 0.0),
        pivots=int(getattr(res, "nit", 0) or 0),
    )


def solve(lp: LinearProgram, solver: str = "simplex") -> SimplexResult:
    if solver == "highs":
        return solve_highs(lp)
    if solver != "simplex":
        raise ValueError(f"unknown solver '{solver}'")
    return solve_simplex(lp)
