from __future__ import annotations

from typing import Any, Optional


class ProbnetError(Exception):
    """Base class for every domain error raised by probnet."""


class BoundsError(ProbnetError, ValueError):
    """An interval endpoint lies outside [0, 1] or lo exceeds hi."""


class EmptyIntersection(ProbnetError):
    """Two sound intervals for the same quantity do not overlap."""

    def __init__(self, lo: float, hi: float, message: str = "") -> None:
        self.lo = lo
        self.hi = hi
        super().__init__(message or f"empty intersection: lo={lo:.9f} > hi={hi:.9f}")


class KbSyntaxError(ProbnetError, ValueError):
    def __init__(self, line_no: int, reason: str) -> None:
        self.line_no = line_no
        self.reason = reason
        super().__init__(f"line {line_no}: {reason}")


class QuerySyntaxError(ProbnetError, ValueError):
    pass


class UnknownAtom(ProbnetError, KeyError):
    def __init__(self, name: str, line_no: Optional[int] = None) -> None:
        self.name = name
        self.line_no = line_no
        super().__init__(name)

    def __str__(self) -> str:
        where = f"line {self.line_no}: " if self.line_no is not None else ""
        return f"{where}unknown atom '{self.name}'"


class NotBaseAtom(ProbnetError, ValueError):
    pass


class UndefinedMembership(ProbnetError, ValueError):
    """P(A|A or B) has no defined value: neither conditional carries mass."""


class InconsistentNetwork(ProbnetError):
    """The knowledge base admits no probability distribution.

    ``witness`` holds whatever proves it: the triple and arc of an empty
    intersection, or a positive circuit.
    """

    def __init__(self, reason: str, witness: Any = None) -> None:
        self.reason = reason
        self.witness = witness
        super().__init__(reason)


class TooManyAtoms(ProbnetError, ValueError):
    pass


class DegenerateDenominator(ProbnetError, ValueError):
    pass


class InfeasibleKB(ProbnetError):
    def __init__(self, verdict: Any) -> None:
        self.verdict = verdict
        super().__init__("knowledge base is infeasible")


class ZeroMassCondition(ProbnetError):
    """The conditioning event has probability zero in every model of the KB."""


class IterationLimit(ProbnetError):
    pass


class SolverDriftError(ProbnetError):
    """Substituting the simplex optimum back into the constraints failed."""
