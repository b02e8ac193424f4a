"""Exception hierarchy for dillbench.

Every error carries the data needed to report it and the process exit code
the CLI uses for it: 1 for a failed check, 2 for usage or parse errors, 3 for
exhausted fuel or search budget.
"""

from typing import Any


class DillError(Exception):
    """Base class of all dillbench errors."""

    exit_code = 2


# algebra


class ModeViolation(DillError):
    """A scalar is not valid in the active semiring mode."""


class SubsetViolation(DillError):
    """A multiset is not below another one."""


class MarginalMismatch(DillError):
    """The column marginal of a matching differs from the expected multiset."""


# syntax


class ParseError(DillError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class DisjointnessError(DillError):
    """Two parts of a tree or net share a variable."""


class NotLinear(DillError):
    """A variable that must occur exactly once does not."""


# typing


class TypingError(DillError):
    exit_code = 1


class TypeMismatch(TypingError):
    def __init__(self, position: str, expected: Any, got: Any):
        super().__init__(f"type mismatch at {position}: expected {expected}, got {got}")
        self.position = position
        self.expected = expected
        self.got = got


class UnboundVar(TypingError):
    pass


class AmbiguousType(TypingError):
    pass


class WidthMismatch(TypingError):
    pass


class CutTypeClash(TypingError):
    pass


# logic


class RuleViolation(DillError):
    exit_code = 1

    def __init__(self, node: Any, reason: str):
        super().__init__(f"{type(node).__name__}: {reason}")
        self.node = node
        self.reason = reason


class NotFound(DillError):
    """Exhaustive search found no derivation."""

    exit_code = 1


class BudgetExceeded(DillError):
    exit_code = 3


# rewrite


class NotARedex(DillError):
    pass


class SideConditionBlocked(DillError):
    pass


class FuelExhausted(DillError):
    exit_code = 3

    def __init__(self, partial: Any, steps: int):
        super().__init__(f"fuel exhausted after {steps} steps")
        self.partial = partial
        self.steps = steps


# semantics


class UnknownAtom(DillError):
    pass


class WebMismatch(DillError):
    pass


class NegativeCoefficient(DillError):
    exit_code = 1


class SymmetryViolation(DillError):
    exit_code = 1

    def __init__(self, witness: Any):
        super().__init__(f"symmetry hypothesis fails at {witness}")
        self.witness = witness


class TruncationUnstable(DillError):
    exit_code = 3


class NotPolynomialUpTo(DillError):
    exit_code = 1

    def __init__(self, maxn: int):
        super().__init__(f"not polynomial up to degree {maxn}")
        self.maxn = maxn


class DegreeExceedsBound(DillError):
    pass


# resource


class NotLinearInH(DillError):
    exit_code = 1


# laws


class UnknownSuite(DillError):
    """No such law suite, or the suite has no version in the requested model."""
