from .bayes import EPS_CYC, ArcWeightGraph, Violation, bg_tighten, circuit_log_weight, cycle_check, longest_paths
from .compound import (
    closed_form_bounds,
    compound_query_bounds,
    conj_query_bounds,
    disj_membership,
    disj_query_bounds,
)
from .independence import indep_tighten
from .syllogism import qs_bounds, qs_sweep, qs_triple

__all__ = [
    "EPS_CYC",
    "ArcWeightGraph",
    "Violation",
    "bg_tighten",
    "circuit_log_weight",
    "closed_form_bounds",
    "compound_query_bounds",
    "conj_query_bounds",
    "cycle_check",
    "disj_membership",
    "disj_query_bounds",
    "indep_tighten",
    "longest_paths",
    "qs_bounds",
    "qs_sweep",
    "qs_triple",
]
