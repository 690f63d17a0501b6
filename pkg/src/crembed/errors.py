"""Exception hierarchy.

Every error carries enough context to print a witness; indices stored on
exceptions are 0-based, messages print them 1-based.
"""

from __future__ import annotations


class CrembedError(Exception):
    """Base class for all library errors."""


class InputError(CrembedError, ValueError):
    """Malformed input data (bad shapes, non-finite entries, bad file)."""


class ParseError(InputError):
    pass


class AntisymmetryViolation(InputError):
    def __init__(self, indices, value, partner):
        self.indices = tuple(indices)
        self.value = value
        self.partner = partner
        a, b, g = (i + 1 for i in self.indices)
        super().__init__(
            f"c[{a},{b}]^{g} = {value} but c[{b},{a}]^{g} = {partner}; "
            "structure constants must be antisymmetric")


class JacobiViolation(CrembedError):
    def __init__(self, max_residual: float, indices, tolerance: float):
        self.max_residual = float(max_residual)
        self.indices = tuple(indices)
        self.tolerance = tolerance
        shown = ",".join(str(i + 1) for i in self.indices)
        super().__init__(
            f"Jacobi identity fails: residual {self.max_residual:.3e} at "
            f"(alpha,beta,gamma,nu)=({shown}) exceeds {tolerance:.1e}")


class IndexOutOfRange(CrembedError, IndexError):
    pass


class OutsideValidityRadius(InputError):
    """Coordinate point lies outside the configured chart radius."""


class ExpConvergenceFailure(CrembedError, ArithmeticError):
    pass


class StepTooSmall(InputError):
    """Finite-difference step below the admitted range, or round-off dominated."""


class StepTooLarge(InputError):
    """Finite-difference step above the admitted range, or truncation dominated."""


class NotNilpotent(CrembedError):
    def __init__(self, message: str, witness=None):
        self.witness = witness
        super().__init__(message)


class NotRational(CrembedError):
    """The exact oracle needs Gaussian-rational structure constants."""


class CRStructureError(CrembedError):
    invariant = "cr-structure"

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class RankDeficient(CRStructureError):
    invariant = "rank"


class NotIntegrable(CRStructureError):
    invariant = "integrability"


class IntersectsConjugate(CRStructureError):
    invariant = "h-cap-conj(h)"


class TargetUnreachable(CrembedError):
    pass


class StageFailure(CrembedError):
    """An embedding-pipeline stage failed; ``certificate`` holds the partial run."""

    def __init__(self, stage: str, message: str, certificate=None):
        self.stage = stage
        self.certificate = certificate
        super().__init__(f"stage '{stage}' failed: {message}")
