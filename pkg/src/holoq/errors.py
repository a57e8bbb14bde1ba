"""Exception types raised by the holoq library.

Numerical failures carry enough context (offending parameter point, report,
step index) for a caller to diagnose them without re-running.
"""


class HoloqError(Exception):
    """Base class for all holoq errors."""


class DimensionMismatch(HoloqError):
    pass


class NoConvergence(HoloqError):
    """Eigensolver failed within its iteration cap."""


class Singular(HoloqError):
    """Matrix is singular or too ill-conditioned to invert."""


class NonDiagonalizable(HoloqError):
    """Hamiltonian is defective; carries the multiplicity report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NearDefective(HoloqError):
    """Eigenvalue gap below the configured floor; results unreliable."""

    def __init__(self, message, min_gap=None, floor=None):
        super().__init__(message)
        self.min_gap = min_gap
        self.floor = floor


class ComplexSpectrum(HoloqError):
    """Operation requires a real spectrum; carries the offending point."""

    def __init__(self, message, point=None, index=None):
        super().__init__(message)
        self.point = point
        self.index = index


class Degenerate(HoloqError):
    pass


class StepTooCoarse(HoloqError):
    """Frame overlap between consecutive path samples too small to track bands."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class LeakageTooLarge(HoloqError):
    pass


class NotClosed(HoloqError):
    pass


class NoReference(HoloqError):
    """Model has no closed-form reference bundle."""


class OnEP(HoloqError):
    """Requested point lies on the exceptional set."""


class OutOfValidity(HoloqError):
    """Closed-form reference is not valid at the requested point."""


class EdgeTooLong(HoloqError):
    """Loop edge could not be refined to a safe overlap."""


class StepDegenerate(HoloqError):
    """Finite-difference step is in the cancellation regime."""


class SurfaceTouchesEP(HoloqError):
    pass


class InsufficientSamples(HoloqError):
    pass


class ZeroFactor(HoloqError):
    """Gauge factors must be nonzero."""


class ColumnMismatch(HoloqError):
    """Result table lacks the columns required by the plot kind."""


class ConfigError(HoloqError):
    """Job configuration failed validation; carries the JSON path."""

    def __init__(self, message, path=""):
        super().__init__(message)
        self.path = path
