from .engine import (
    charnes_cooper,
    check_consistency,
    consistency_program,
    exact_bounds,
    exact_pair,
    fractional_residual,
    recover_worlds,
)
from .simplex import FEAS_TOL, MAX_PIVOTS, PIVOT_TOL, solve, solve_highs, solve_simplex
from .worlds import EPS_MASS, MAX_ORACLE_ATOMS, build_world_lp, truth_masks

__all__ = [
    "EPS_MASS",
    "FEAS_TOL",
    "MAX_ORACLE_ATOMS",
    "MAX_PIVOTS",
    "PIVOT_TOL",
    "build_world_lp",
    "charnes_cooper",
    "check_consistency",
    "consistency_program",
    "exact_bounds",
    "exact_pair",
    "fractional_residual",
    "recover_worlds",
    "solve",
    "solve_highs",
    "solve_simplex",
    "truth_masks",
]
