from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from probnet_v1.core.models.errors import BoundsError, EmptyIntersection

# Tolerance for lows exceeding highs through rounding alone.
EPS_C = 1e-9


@dataclass(frozen=True)
class ProbInterval:
    """A closed subinterval of [0, 1] bounding one conditional probability."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.lo <= self.hi <= 1.0):
            raise BoundsError(f"invalid probability interval [{self.lo!r}, {self.hi!r}]")

    @classmethod
    def vacuous(cls) -> "ProbInterval":
        return cls(0.0, 1.0)

    @classmethod
    def certain(cls) -> "ProbInterval":
        return cls(1.0, 1.0)

    @classmethod
    def impossible(cls) -> "ProbInterval":
        return cls(0.0, 0.0)

    @classmethod
    def clamped(cls, lo: float, hi: float, tol: float = EPS_C) -> "ProbInterval":
        """Build from computed endpoints: clip to [0, 1], collapse jitter-sized inversions."""
        # + 0.0 turns a surviving -0.0 into 0.0
        lo = min(max(float(lo), 0.0), 1.0) + 0.0
        hi = min(max(float(hi), 0.0), 1.0) + 0.0
        if lo > hi:
            if lo - hi > tol:
                raise EmptyIntersection(lo, hi)
            lo = hi = 0.5 * (lo + hi)
        return cls(lo, hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def is_precise(self) -> bool:
        return self.lo == self.hi

    @property
    def is_vacuous(self) -> bool:
        return self.lo == 0.0 and self.hi == 1.0


class AtomKind(str, Enum):
    BASE = "base"
    CONJUNCTION = "conjunction"
    DISJUNCTION = "disjunction"


@dataclass(frozen=True)
class Atom:
    id: int
    name: str
    kind: AtomKind = AtomKind.BASE
    parents: Optional[Tuple[int, int]] = None

    @property
    def is_base(self) -> bool:
        return self.kind is AtomKind.BASE


class IndepKind(str, Enum):
    I = "i"  # P(B&C|A) = P(B|A) P(C|A)
    II = "ii"  # P(A&C|B) = P(A|B) P(C|B)
    III = "iii"  # P(A&B|C) = P(A|C) P(B|C)


@dataclass(frozen=True)
class IndepDecl:
    kind: IndepKind
    triple: Tuple[int, int, int]


class RuleName(str, Enum):
    QS = "QS"
    BG = "BG"
    INDEP = "INDEP"
    CONJ = "CONJ"
    DISJ = "DISJ"
    INTERSECT = "INTERSECT"


@dataclass(frozen=True)
class TraceStep:
    rule: RuleName
    operands: Tuple[int, ...]
    arc: Tuple[int, int]
    before: ProbInterval
    after: ProbInterval
    iteration: int


@dataclass
class DerivationTrace:
    steps: List[TraceStep] = field(default_factory=list)

    def record(self, step: TraceStep) -> None:
        self.steps.append(step)

    def for_arc(self, arc: Tuple[int, int]) -> List[TraceStep]:
        return [step for step in self.steps if step.arc == arc]

    def since(self, start: int) -> List[TraceStep]:
        return list(self.steps[start:])

    def __len__(self) -> int:
        return len(self.steps)


class SaturationStatus(str, Enum):
    SATURATED = "Saturated"
    MAX_ITERATIONS = "MaxIterations"
    INCONSISTENT = "Inconsistent"


@dataclass
class SaturationReport:
    """Outcome of one saturation run over a network."""

    iterations: int
    changed_arcs: int
    wall_time: float
    trace: DerivationTrace
    status: SaturationStatus
    witness: Optional[str] = None


class Direction(str, Enum):
    """Which compound conditional a closed-form bound targets."""

    C_GIVEN_AB = "C_given_AB"
    AB_GIVEN_C = "AB_given_C"
    C_GIVEN_A_OR_B = "C_given_AorB"
    A_OR_B_GIVEN_C = "AorB_given_C"


class SideKind(str, Enum):
    ATOM = "atom"
    AND = "and"
    OR = "or"


@dataclass(frozen=True)
class Side:
    kind: SideKind
    names: Tuple[str, ...]

    def __str__(self) -> str:
        joiner = {SideKind.ATOM: "", SideKind.AND: "&", SideKind.OR: "+"}[self.kind]
        return joiner.join(self.names)


@dataclass(frozen=True)
class QueryExpr:
    target: Side
    given: Side

    def __str__(self) -> str:
        return f"{self.target}|{self.given}"


@dataclass
class QueryResult:
    query: QueryExpr
    interval: ProbInterval
    trace: List[TraceStep] = field(default_factory=list)


class Sense(str, Enum):
    MAX = "max"
    MIN = "min"


@dataclass(frozen=True)
class ConstraintId:
    """Identifies the KB entry P(target|given) behind one LP row."""

    target: str
    given: str
    side: str  # "lower" | "upper"

    def __str__(self) -> str:
        return f"cond {self.target} | {self.given} ({self.side})"


@dataclass
class FractionalProgram:
    """Opti (c.x)/(d.x) under 1.x = 1, M.x <= 0, F.x >= floor, x >= 0."""

    c: np.ndarray
    d: np.ndarray
    M: np.ndarray
    sense: Sense
    row_ids: List[ConstraintId] = field(default_factory=list)
    F: Optional[np.ndarray] = None
    floor: float = 0.0
    floor_atoms: List[str] = field(default_factory=list)

    @property
    def n_worlds(self) -> int:
        return int(self.c.shape[0])


@dataclass
class LinearProgram:
    """Opti c.z under A_ub.z <= b_ub, A_eq.z = b_eq, z >= 0."""

    c: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    sense: Sense = Sense.MAX
    n_worlds: int = 0
    ub_labels: List[Any] = field(default_factory=list)
    eq_labels: List[Any] = field(default_factory=list)


class SimplexStatus(str, Enum):
    OPTIMAL = "Optimal"
    INFEASIBLE = "Infeasible"
    UNBOUNDED = "Unbounded"


@dataclass
class SimplexResult:
    status: SimplexStatus
    value: Optional[float] = None
    z: Optional[np.ndarray] = None
    pivots: int = 0
    # rows carrying a nonzero phase-one dual when infeasible
    infeasible_ub_rows: List[int] = field(default_factory=list)
    infeasible_eq_rows: List[int] = field(default_factory=list)


class VerdictStatus(str, Enum):
    CONSISTENT = "Consistent"
    INFEASIBLE = "Infeasible"


@dataclass
class Verdict:
    status: VerdictStatus
    certificate: List[ConstraintId] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return self.status is VerdictStatus.CONSISTENT


@dataclass
class CompareRow:
    target: str
    given: str
    local: ProbInterval
    exact: ProbInterval
    gap: float
    failure: bool
    local_indep: Optional[ProbInterval] = None
