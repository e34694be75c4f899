from .entities import (
    EPS_C,
    Atom,
    AtomKind,
    CompareRow,
    ConstraintId,
    DerivationTrace,
    Direction,
    FractionalProgram,
    IndepDecl,
    IndepKind,
    LinearProgram,
    ProbInterval,
    QueryExpr,
    QueryResult,
    RuleName,
    SaturationReport,
    SaturationStatus,
    Sense,
    Side,
    SideKind,
    SimplexResult,
    SimplexStatus,
    TraceStep,
    Verdict,
    VerdictStatus,
)

__all__ = [
    "EPS_C",
    "Atom",
    "AtomKind",
    "CompareRow",
    "ConstraintId",
    "DerivationTrace",
    "Direction",
    "FractionalProgram",
    "IndepDecl",
    "IndepKind",
    "LinearProgram",
    "ProbInterval",
    "QueryExpr",
    "QueryResult",
    "RuleName",
    "SaturationReport",
    "SaturationStatus",
    "Sense",
    "Side",
    "SideKind",
    "SimplexResult",
    "SimplexStatus",
    "TraceStep",
    "Verdict",
    "VerdictStatus",
]
