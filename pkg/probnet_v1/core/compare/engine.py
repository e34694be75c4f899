from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Tuple

import pandas as pd
from tqdm import tqdm

from probnet_v1.core.intervals import contains, format_endpoint, format_interval
from probnet_v1.core.models import CompareRow, ProbInterval, SaturationStatus
from probnet_v1.core.models.errors import InconsistentNetwork
from probnet_v1.core.network import EPS_Q, Network
from probnet_v1.core.lp_oracle import EPS_MASS, exact_pair
from probnet_v1.core.saturation import MAX_OUTER, saturate
from probnet_v1.logging_config import get_logger

logger = get_logger(__name__)

# Allowed excess of the exact interval over the local one.
SOUNDNESS_SLACK = 1e-7


def _saturated_copy(net: Network, keep_indeps: bool, tol: float, max_outer: int) -> Network:
    local = net.copy()
    if not keep_indeps:
        local.indeps = []
    report = saturate(local, tol=tol, max_outer=max_outer)
    if report.status is SaturationStatus.INCONSISTENT:
        raise InconsistentNetwork(f"saturation failed: {report.witness}", witness=report.witness)
    return local


def compare_network(
    net: Network,
    tol: float = EPS_Q,
    max_outer: int = MAX_OUTER,
    mass_floor: float = EPS_MASS,
    force: bool = False,
    solver: str = "simplex",
    workers: int = 1,
    progress: bool = True,
) -> List[CompareRow]:
    """Local versus exact bounds for every ordered pair of base atoms.

    The local interval comes from saturating without independence
    declarations, since the oracle cannot encode them; when the KB declares
    some, the saturated interval with them is reported alongside.
    """
    base = [atom.id for atom in net.base_atoms()]
    pairs: List[Tuple[int, int]] = [(t, g) for t in base for g in base if t != g]
    logger.info("Comparing %d ordered pairs with %d worker(s)", len(pairs), workers)

    try:
        local = _saturated_copy(net, keep_indeps=False, tol=tol, max_outer=max_outer)
        with_indeps: Optional[Network] = None
        if net.indeps:
            with_indeps = _saturated_copy(net, keep_indeps=True, tol=tol, max_outer=max_outer)

        def oracle(pair: Tuple[int, int]) -> ProbInterval:
            interval, _ = exact_pair(net, *pair, mass_floor=mass_floor, force=force, solver=solver)
            return interval

        exact: Dict[Tuple[int, int], ProbInterval] = {}
        bar = tqdm(total=len(pairs), desc="exact bounds", unit="query", disable=not progress)
        with ThreadPoolExecutor(max_workers=max(1, workers)) as pool:
            for pair, interval in zip(pairs, pool.map(oracle, pairs)):
                exact[pair] = interval
                bar.update(1)
        bar.close()
    except Exception:
        logger.exception("Comparison failed")
        raise

    rows: List[CompareRow] = []
    for t, g in pairs:
        loc = local.bound(t, g)
        ex = exact[(t, g)]
        failure = not contains(loc, ex, SOUNDNESS_SLACK)
        if failure:
            logger.error(
                "Soundness failure on P(%s|%s): local %s misses exact %s",
                net.atoms[t].name,
                net.atoms[g].name,
                format_interval(loc),
                format_interval(ex),
            )
        rows.append(
            CompareRow(
                target=net.atoms[t].name,
                given=net.atoms[g].name,
                local=loc,
                exact=ex,
                gap=loc.width - ex.width + 0.0,
                failure=failure,
                local_indep=with_indeps.bound(t, g) if with_indeps is not None else None,
            )
        )
    logger.info("Comparison done: %d failures", sum(row.failure for row in rows))
    return rows


def compare_frame(rows: List[CompareRow]) -> pd.DataFrame:
    """Tabulate compare rows; endpoints are plain floats."""
    records = []
    for row in rows:
        record = {
            "target": row.target,
            "given": row.given,
            "local_lo": row.local.lo,
            "local_hi": row.local.hi,
            "exact_lo": row.exact.lo,
            "exact_hi": row.exact.hi,
            "gap": row.gap,
            "failure": row.failure,
        }
        if row.local_indep is not None:
            record["indep_lo"] = row.local_indep.lo
            record["indep_hi"] = row.local_indep.hi
        records.append(record)
    return pd.DataFrame.from_records(records)


def render_compare_table(rows: List[CompareRow]) -> str:
    frame = pd.DataFrame(
        {
            "query": [f"P({row.target}|{row.given})" for row in rows],
            "local": [format_interval(row.local) for row in rows],
            "exact": [format_interval(row.exact) for row in rows],
            "gap": [format_endpoint(row.gap) for row in rows],
        }
    )
    if any(row.local_indep is not None for row in rows):
        frame["with indep"] = [
            format_interval(row.local_indep) if row.local_indep is not None else "" for row in rows
        ]
    lines = [frame.to_string(index=False)]
    for row in rows:
        if row.failure:
            lines.append(
                f"FAILURE P({row.target}|{row.given}): local {format_interval(row.local)} "
                f"does not contain exact {format_interval(row.exact)}"
            )
    return "\n".join(lines)
