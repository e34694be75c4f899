from __future__ import annotations

import time
from typing import Optional, Union

from probnet_v1.core.models import (
    Direction,
    ProbInterval,
    QueryExpr,
    QueryResult,
    SaturationReport,
    SaturationStatus,
    Side,
    SideKind,
)
from probnet_v1.core.models.errors import InconsistentNetwork, QuerySyntaxError, TooManyAtoms
from probnet_v1.core.network import EPS_Q, Network
from probnet_v1.core.network.engine import NAME_RE
from probnet_v1.core.rules import (
    bg_tighten,
    compound_query_bounds,
    cycle_check,
    disj_membership,
    indep_tighten,
    qs_sweep,
)
from probnet_v1.logging_config import get_logger

logger = get_logger(__name__)

MAX_ATOMS = 256
MAX_OUTER = 100


def _describe_inconsistency(exc: InconsistentNetwork) -> str:
    if exc.witness is None:
        return exc.reason
    return f"{exc.reason} {exc.witness}"


def saturate(net: Network, tol: float = EPS_Q, max_outer: int = MAX_OUTER) -> SaturationReport:
    """Run the global fixpoint: syllogism sweeps, independences, Bayes step, repeat.

    Mutates ``net``. Inconsistency is reported through the status, never raised.
    """
    if net.n > MAX_ATOMS:
        raise TooManyAtoms(f"{net.n} atoms exceed the saturation limit of {MAX_ATOMS}")
    if tol <= 0:
        raise ValueError("tol must be positive")

    logger.info(
        "Saturating %d atoms (%d independences), tol=%g, max_outer=%d",
        net.n,
        len(net.indeps),
        tol,
        max_outer,
    )
    start = time.perf_counter()
    trace_start = len(net.trace)
    status = SaturationStatus.MAX_ITERATIONS
    witness: Optional[str] = None
    iterations = 0

    try:
        violation = cycle_check(net)
        if violation is not None:
            status, witness = SaturationStatus.INCONSISTENT, violation.describe(net)
        else:
            for outer in range(1, max_outer + 1):
                iterations = outer
                changed = qs_sweep(net, outer, tol)
                for decl in net.indeps:
                    changed = indep_tighten(net, decl, outer, tol) or changed
                violation = cycle_check(net)
                if violation is not None:
                    status, witness = SaturationStatus.INCONSISTENT, violation.describe(net)
                    break
                changed = bg_tighten(net, outer, tol) or changed
                logger.debug("Outer iteration %d: changed=%s", outer, changed)
                if not changed:
                    status = SaturationStatus.SATURATED
                    break
    except InconsistentNetwork as exc:
        status, witness = SaturationStatus.INCONSISTENT, _describe_inconsistency(exc)
    except Exception:
        logger.exception("Saturation failed")
        raise

    steps = net.trace.since(trace_start)
    report = SaturationReport(
        iterations=iterations,
        changed_arcs=len({step.arc for step in steps}),
        wall_time=time.perf_counter() - start,
        trace=net.trace,
        status=status,
        witness=witness,
    )
    if status is SaturationStatus.MAX_ITERATIONS:
        logger.warning("Saturation stopped after %d outer iterations without converging", iterations)
    elif status is SaturationStatus.INCONSISTENT:
        logger.warning("Knowledge base is inconsistent: %s", witness)
    logger.info(
        "Saturation finished: %s after %d iterations, %d arcs changed, %.3fs",
        status.value,
        report.iterations,
        report.changed_arcs,
        report.wall_time,
    )
    return report


def _parse_side(text: str) -> Side:
    text = text.strip()
    has_and, has_or = "&" in text, "+" in text
    if has_and and has_or:
        raise QuerySyntaxError(f"'{text}' mixes '&' and '+'")
    if has_and or has_or:
        kind, sep = (SideKind.AND, "&") if has_and else (SideKind.OR, "+")
        names = tuple(part.strip() for part in text.split(sep))
        if len(names) != 2:
            raise QuerySyntaxError(f"'{text}' must combine exactly two atoms")
        if names[0] == names[1]:
            raise QuerySyntaxError(f"'{text}' repeats an atom")
    else:
        kind, names = SideKind.ATOM, (text,)
    for name in names:
        if not NAME_RE.fullmatch(name):
            raise QuerySyntaxError(f"invalid atom name '{name}'")
    return Side(kind, names)


def parse_query(text: str) -> QueryExpr:
    """Parse ``TARGET | GIVEN``; each side is NAME, NAME & NAME or NAME + NAME."""
    parts = text.split("|")
    if len(parts) != 2:
        raise QuerySyntaxError(f"expected exactly one '|' in '{text}'")
    target, given = (_parse_side(part) for part in parts)
    if target.kind is not SideKind.ATOM and given.kind is not SideKind.ATOM:
        raise QuerySyntaxError("at most one side of a query may be compound")
    return QueryExpr(target=target, given=given)


def format_query(q: QueryExpr) -> str:
    return str(q)


def _compound_direction(q: QueryExpr) -> Direction:
    if q.given.kind is SideKind.AND:
        return Direction.C_GIVEN_AB
    if q.given.kind is SideKind.OR:
        return Direction.C_GIVEN_A_OR_B
    if q.target.kind is SideKind.AND:
        return Direction.AB_GIVEN_C
    return Direction.A_OR_B_GIVEN_C


def _degenerate(net: Network, direction: Direction, a: int, b: int, c: int) -> Optional[ProbInterval]:
    """Compound queries whose single atom is one of the pair."""
    if c not in (a, b):
        return None
    other = b if c == a else a
    if direction in (Direction.C_GIVEN_AB, Direction.A_OR_B_GIVEN_C):
        return ProbInterval.certain()
    if direction is Direction.AB_GIVEN_C:
        return net.bound(other, c)
    # P(C | C or X) from P(C|X) and P(X|C)
    return disj_membership(net.bound(c, other), net.bound(other, c))


def query(
    net: Network,
    q: Union[QueryExpr, str],
    tol: float = EPS_Q,
    max_outer: int = MAX_OUTER,
) -> QueryResult:
    """Answer a query against a saturated network.

    Compound sides are evaluated on a private clone; ``net`` is only read.
    """
    if isinstance(q, str):
        q = parse_query(q)
    logger.info("Query %s", format_query(q))

    if q.target.kind is SideKind.ATOM and q.given.kind is SideKind.ATOM:
        t = net.atom(q.target.names[0]).id
        g = net.atom(q.given.names[0]).id
        if t == g:
            return QueryResult(query=q, interval=ProbInterval.certain())
        return QueryResult(query=q, interval=net.bound(t, g), trace=net.trace.for_arc((t, g)))

    direction = _compound_direction(q)
    pair, single = (q.given, q.target) if q.given.kind is not SideKind.ATOM else (q.target, q.given)
    a, b = (net.atom(name).id for name in pair.names)
    c = net.atom(single.names[0]).id
    trivial = _degenerate(net, direction, a, b, c)
    if trivial is not None:
        return QueryResult(query=q, interval=trivial)

    interval, steps = compound_query_bounds(
        net,
        a,
        b,
        c,
        direction,
        resaturate=lambda extended: saturate(extended, tol=tol, max_outer=max_outer),
    )
    logger.info("Query %s answered: [%.6f, %.6f]", format_query(q), interval.lo, interval.hi)
    return QueryResult(query=q, interval=interval, trace=steps)
