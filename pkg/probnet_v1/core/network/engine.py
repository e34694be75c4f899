from __future__ import annotations

import re
from typing import Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

import numpy as np

from probnet_v1.core.intervals import intersect
from probnet_v1.core.models import (
    Atom,
    AtomKind,
    DerivationTrace,
    IndepDecl,
    ProbInterval,
    RuleName,
    TraceStep,
)
from probnet_v1.core.models.errors import NotBaseAtom, UndefinedMembership, UnknownAtom
from probnet_v1.logging_config import get_logger

logger = get_logger(__name__)

# Minimum tightening that counts as a change.
EPS_Q = 1e-9

# '|', '&', '+', ';' are reserved by the grammars; the rest delimit KB lines.
NAME_RE = re.compile(r"[^\s|&+;=\[\],#]+")

AtomRef = Union[Atom, int, str]


class Network:
    """Atoms plus the n x n table of bounds, bounds[i][j] constraining P(A_i | A_j).

    Endpoints live in two float arrays ``lo`` and ``hi``; unconstrained entries
    are [0, 1] and the diagonal is pinned to [1, 1].
    """

    def __init__(self) -> None:
        self.atoms: List[Atom] = []
        self.lo = np.zeros((0, 0), dtype=float)
        self.hi = np.zeros((0, 0), dtype=float)
        self.indeps: List[IndepDecl] = []
        self.trace = DerivationTrace()
        self._index: Dict[str, int] = {}
        self._registry: Dict[Tuple[AtomKind, FrozenSet[int]], int] = {}

    @property
    def n(self) -> int:
        return len(self.atoms)

    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        return f"Network(atoms={[a.name for a in self.atoms]}, indeps={len(self.indeps)})"

    def add_atom(
        self,
        name: str,
        kind: AtomKind = AtomKind.BASE,
        parents: Optional[Tuple[int, int]] = None,
    ) -> Atom:
        if name in self._index:
            return self.atoms[self._index[name]]
        if kind is AtomKind.BASE and not NAME_RE.fullmatch(name):
            raise ValueError(f"invalid atom name '{name}'")
        atom = Atom(id=self.n, name=name, kind=kind, parents=parents)
        self.atoms.append(atom)
        self._index[name] = atom.id
        self.lo = np.pad(self.lo, ((0, 1), (0, 1)), constant_values=0.0)
        self.hi = np.pad(self.hi, ((0, 1), (0, 1)), constant_values=1.0)
        self.lo[atom.id, atom.id] = 1.0
        self.hi[atom.id, atom.id] = 1.0
        return atom

    def has_atom(self, name: str) -> bool:
        return name in self._index

    def atom(self, ref: AtomRef) -> Atom:
        if isinstance(ref, Atom):
            return self.atoms[ref.id]
        if isinstance(ref, (int, np.integer)):
            return self.atoms[int(ref)]
        try:
            return self.atoms[self._index[ref]]
        except KeyError:
            raise UnknownAtom(ref) from None

    def base_atoms(self) -> List[Atom]:
        return [atom for atom in self.atoms if atom.is_base]

    def bound(self, i: int, j: int) -> ProbInterval:
        return ProbInterval(float(self.lo[i, j]), float(self.hi[i, j]))

    def set_bound(self, i: int, j: int, iv: ProbInterval) -> None:
        self.lo[i, j] = iv.lo
        self.hi[i, j] = iv.hi

    def constrain(self, i: int, j: int, iv: ProbInterval) -> ProbInterval:
        """Intersect ``iv`` into bounds[i][j] without tracing (KB loading)."""
        merged = intersect(self.bound(i, j), iv)
        self.set_bound(i, j, merged)
        return merged

    def tighten(
        self,
        i: int,
        j: int,
        candidate: ProbInterval,
        rule: RuleName,
        operands: Tuple[int, ...],
        iteration: int,
        eps: float = EPS_Q,
    ) -> bool:
        """Intersect a derived bound into bounds[i][j].

        Every improvement is stored; only those exceeding ``eps`` are traced
        and reported as a change.
        """
        before = self.bound(i, j)
        after = intersect(before, candidate)
        if after is before:
            return False
        self.set_bound(i, j, after)
        shift = max(after.lo - before.lo, before.hi - after.hi)
        if shift <= eps:
            return False
        self.trace.record(
            TraceStep(
                rule=rule,
                operands=operands,
                arc=(i, j),
                before=before,
                after=after,
                iteration=iteration,
            )
        )
        return True

    def add_indep(self, decl: IndepDecl) -> None:
        if decl not in self.indeps:
            self.indeps.append(decl)

    def auxiliary(self, kind: AtomKind, a: int, b: int) -> Optional[Atom]:
        idx = self._registry.get((kind, frozenset((a, b))))
        return None if idx is None else self.atoms[idx]

    def _register(self, kind: AtomKind, a: int, b: int, atom: Atom) -> None:
        self._registry[(kind, frozenset((a, b)))] = atom.id

    def copy(self) -> "Network":
        clone = Network()
        clone.atoms = list(self.atoms)
        clone.lo = self.lo.copy()
        clone.hi = self.hi.copy()
        clone.indeps = list(self.indeps)
        clone.trace = DerivationTrace(list(self.trace.steps))
        clone._index = dict(self._index)
        clone._registry = dict(self._registry)
        return clone

    def permuted(self, order: Iterable[int]) -> "Network":
        """Relabel base atoms so that new atom k is old atom order[k]."""
        order = list(order)
        if sorted(order) != list(range(self.n)) or any(not a.is_base for a in self.atoms):
            raise ValueError("permuted() needs a permutation of a base-only network")
        clone = Network()
        for old in order:
            clone.add_atom(self.atoms[old].name)
        idx = np.asarray(order)
        clone.lo = self.lo[np.ix_(idx, idx)].copy()
        clone.hi = self.hi[np.ix_(idx, idx)].copy()
        position = {old: new for new, old in enumerate(order)}
        for decl in self.indeps:
            clone.add_indep(IndepDecl(decl.kind, tuple(position[t] for t in decl.triple)))
        return clone


def _require_base(net: Network, ref: AtomRef) -> Atom:
    atom = net.atom(ref)
    if not atom.is_base:
        raise NotBaseAtom(f"'{atom.name}' is not a base atom")
    return atom


def add_conjunction_node(net: Network, a: AtomRef, b: AtomRef) -> Atom:
    """Append the auxiliary atom A&B, coupled to its parents by bound copies."""
    atom_a = _require_base(net, a)
    atom_b = _require_base(net, b)
    if atom_a.id == atom_b.id:
        raise NotBaseAtom("a conjunction needs two distinct atoms")
    existing = net.auxiliary(AtomKind.CONJUNCTION, atom_a.id, atom_b.id)
    if existing is not None:
        return existing

    ia, ib = sorted((atom_a.id, atom_b.id))
    name = f"{net.atoms[ia].name}&{net.atoms[ib].name}"
    ab = net.add_atom(name, AtomKind.CONJUNCTION, parents=(ia, ib))
    net._register(AtomKind.CONJUNCTION, ia, ib, ab)
    k = ab.id
    couplings = [
        ((ia, k), ProbInterval.certain()),
        ((ib, k), ProbInterval.certain()),
        # P(A&B | A) = P(B | A), P(A&B | B) = P(A | B)
        ((k, ia), net.bound(ib, ia)),
        ((k, ib), net.bound(ia, ib)),
    ]
    for (i, j), iv in couplings:
        net.tighten(i, j, iv, RuleName.CONJ, (ia, ib), 0)
    logger.debug("Added conjunction node %s as atom %d", name, k)
    return ab


def add_disjunction_node(net: Network, a: AtomRef, b: AtomRef) -> Atom:
    """Append the auxiliary atom A+B (A or B)."""
    from probnet_v1.core.rules.compound import disj_membership

    atom_a = _require_base(net, a)
    atom_b = _require_base(net, b)
    if atom_a.id == atom_b.id:
        raise NotBaseAtom("a disjunction needs two distinct atoms")
    existing = net.auxiliary(AtomKind.DISJUNCTION, atom_a.id, atom_b.id)
    if existing is not None:
        return existing

    ia, ib = sorted((atom_a.id, atom_b.id))
    name = f"{net.atoms[ia].name}+{net.atoms[ib].name}"
    avb = net.add_atom(name, AtomKind.DISJUNCTION, parents=(ia, ib))
    net._register(AtomKind.DISJUNCTION, ia, ib, avb)
    k = avb.id
    net.tighten(k, ia, ProbInterval.certain(), RuleName.DISJ, (ia, ib), 0)
    net.tighten(k, ib, ProbInterval.certain(), RuleName.DISJ, (ia, ib), 0)
    for x, y in ((ia, ib), (ib, ia)):
        try:
            # P(X | X+Y) from p = P(X|Y), q = P(Y|X)
            membership = disj_membership(net.bound(x, y), net.bound(y, x))
        except UndefinedMembership:
            logger.debug("Membership of %s in %s undefined; arc left vacuous", net.atoms[x].name, name)
            continue
        net.tighten(x, k, membership, RuleName.DISJ, (ia, ib), 0)
    logger.debug("Added disjunction node %s as atom %d", name, k)
    return avb
