"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ConecertError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(ConecertError):
    """A vector or matrix does not match the ambient dimension."""


class InvalidCone(ConecertError):
    """Cone data violates a construction invariant (not solid, not pointed,
    inconsistent facet/generator forms, unsupported dimension)."""


class AnchorNotInterior(ConecertError):
    """The state-space anchor is not an interior point of the cone."""


class AnchorNotAxial(ConecertError):
    """A second-order state space requires an anchor on the cone axis."""


class NotOnBoundary(ConecertError):
    """Supporting-face queries require a point on the cone boundary."""


class ApexDegenerate(ConecertError):
    """The supporting face at the apex is the whole state-space boundary
    and is rejected."""


class EmptyInterval(ConecertError):
    """Order-interval query with endpoints that are not comparable."""


class FrameNotFound(ConecertError):
    """Could not select d linearly independent exposed points."""


class SingularFrame(ConecertError):
    """A functional frame matrix is numerically singular."""


class NonpositiveBaseMargin(ConecertError):
    """The unperturbed frame has no positive strict-positivity margin."""


class NotMonotone(ConecertError):
    """Monotonicity verification failed; carries a witness pair."""

    def __init__(self, message: str, witness=None):
        super().__init__(message)
        self.witness = witness


class LeftDomain(ConecertError):
    """An iterate left the map domain at step ``step``."""

    def __init__(self, step: int, point=None):
        super().__init__(f"iterate left the domain at step {step}")
        self.step = step
        self.point = point


class SearchExhausted(ConecertError):
    """A periodic-point search consumed its budget without success."""


class NotSandwiched(ConecertError):
    """Trap construction failed: the center is not strictly inside every
    order interval."""


class BadParams(ConecertError):
    """Unknown example-system name or malformed parameters."""


class SqueezeFailed(ConecertError):
    """No periodic points found on both sides of a boundary point."""


class LocatorFailed(ConecertError):
    """No fixed point with zero support margin was located.  Reportable:
    the locator is a numerical search, not a completeness guarantee."""


class BoundaryPeriodicSearchFailed(ConecertError):
    """No periodic boundary point found near one frame direction."""

    def __init__(self, index: int, side: str, message: str = ""):
        detail = message or f"no periodic point near frame direction {index} ({side} side)"
        super().__init__(detail)
        self.index = index
        self.side = side


class PinchDegenerate(ConecertError):
    """Extracted functional frames lost independence or positivity."""


class ResidualTooLarge(ConecertError):
    """The final periodicity residual exceeds the certification tolerance."""

    def __init__(self, value: float, bound: float):
        super().__init__(f"residual {value:.3e} exceeds tolerance {bound:.3e}")
        self.value = value
        self.bound = bound


class PeriodOverflow(ConecertError):
    """A least common multiple of periods exceeded the safe integer range."""


class ScenarioError(ConecertError):
    """Scenario file is malformed or internally inconsistent."""
