from __future__ import annotations

from typing import Iterable, List, Set, Tuple, Union

import numpy as np

from probnet_v1.core.models import (
    AtomKind,
    ConstraintId,
    FractionalProgram,
    QueryExpr,
    Sense,
    Side,
    SideKind,
)
from probnet_v1.core.models.errors import TooManyAtoms
from probnet_v1.core.network import Network
from probnet_v1.logging_config import get_logger

logger = get_logger(__name__)

MAX_ORACLE_ATOMS = 12
EPS_MASS = 1e-6


def check_oracle_size(net: Network, force: bool = False) -> int:
    n_base = len(net.base_atoms())
    if n_base > MAX_ORACLE_ATOMS:
        if not force:
            raise TooManyAtoms(
                f"{n_base} base atoms means {2 ** n_base} worlds; the oracle stops at "
                f"{MAX_ORACLE_ATOMS} unless forced"
            )
        logger.warning("Oracle forced over %d base atoms (%d worlds)", n_base, 2 ** n_base)
    return n_base


def truth_masks(net: Network) -> np.ndarray:
    """Boolean table truth[atom, world]; world w sets base atom k iff bit k of w is 1.

    Auxiliary atoms are the AND / OR of their parents' rows.
    """
    base = net.base_atoms()
    worlds = np.arange(2 ** len(base))
    truth = np.zeros((net.n, worlds.size), dtype=bool)
    for bit, atom in enumerate(base):
        truth[atom.id] = (worlds >> bit) & 1 == 1
    for atom in net.atoms:
        if atom.kind is AtomKind.CONJUNCTION:
            truth[atom.id] = truth[atom.parents[0]] & truth[atom.parents[1]]
        elif atom.kind is AtomKind.DISJUNCTION:
            truth[atom.id] = truth[atom.parents[0]] | truth[atom.parents[1]]
    return truth


def side_mask(net: Network, truth: np.ndarray, side: Side) -> np.ndarray:
    rows = [truth[net.atom(name).id] for name in side.names]
    if side.kind is SideKind.AND:
        return rows[0] & rows[1]
    if side.kind is SideKind.OR:
        return rows[0] | rows[1]
    return rows[0]


def _base_ids(net: Network, atom_id: int) -> Set[int]:
    atom = net.atoms[atom_id]
    if atom.is_base:
        return {atom.id}
    return set(atom.parents or ())


def kb_rows(net: Network, truth: np.ndarray) -> Tuple[np.ndarray, List[ConstraintId], Set[int]]:
    """Rows M.x <= 0 for every non-vacuous entry, plus the base atoms they mention."""
    rows: List[np.ndarray] = []
    labels: List[ConstraintId] = []
    mentioned: Set[int] = set()
    for t in range(net.n):
        for g in range(net.n):
            if t == g:
                continue
            iv = net.bound(t, g)
            if iv.is_vacuous:
                continue
            both = (truth[t] & truth[g]).astype(float)
            given = truth[g].astype(float)
            target_name, given_name = net.atoms[t].name, net.atoms[g].name
            if iv.hi < 1.0:
                rows.append(both - iv.hi * given)
                labels.append(ConstraintId(target_name, given_name, "upper"))
            if iv.lo > 0.0:
                rows.append(iv.lo * given - both)
                labels.append(ConstraintId(target_name, given_name, "lower"))
            mentioned |= _base_ids(net, t) | _base_ids(net, g)
    width = truth.shape[1]
    M = np.vstack(rows) if rows else np.zeros((0, width))
    return M, labels, mentioned


def floor_rows(net: Network, truth: np.ndarray, atom_ids: Iterable[int]) -> Tuple[np.ndarray, List[str]]:
    ids = sorted(atom_ids)
    width = truth.shape[1]
    F = truth[ids].astype(float) if ids else np.zeros((0, width))
    return F, [net.atoms[i].name for i in ids]


def _query_atoms(net: Network, q: QueryExpr) -> Set[int]:
    return {net.atom(name).id for side in (q.target, q.given) for name in side.names}


def build_world_lp(
    net: Network,
    q: Union[QueryExpr, str],
    sense: Sense = Sense.MAX,
    mass_floor: float = EPS_MASS,
    force: bool = False,
) -> FractionalProgram:
    """Encode the KB over possible worlds; the objective is P(target | given)."""
    if isinstance(q, str):
        from probnet_v1.core.saturation import parse_query

        q = parse_query(q)
    n_base = check_oracle_size(net, force)
    truth = truth_masks(net)
    M, labels, mentioned = kb_rows(net, truth)
    given = side_mask(net, truth, q.given)
    target = side_mask(net, truth, q.target)
    mentioned |= _query_atoms(net, q)
    F, floor_atoms = floor_rows(net, truth, mentioned)
    logger.debug(
        "World LP for %s: %d base atoms, %d worlds, %d rows, %d floors",
        q,
        n_base,
        truth.shape[1],
        M.shape[0],
        F.shape[0],
    )
    return FractionalProgram(
        c=(target & given).astype(float),
        d=given.astype(float),
        M=M,
        sense=sense,
        row_ids=labels,
        F=F,
        floor=mass_floor,
        floor_atoms=floor_atoms,
    )
