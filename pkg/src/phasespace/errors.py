"""Exception hierarchy shared by all phasespace modules."""


class PhaseSpaceError(Exception):
    """Base class for all errors raised by this package."""


class ConfigInvalid(PhaseSpaceError):
    """A scenario/config file or CLI argument failed validation."""


class DimensionMismatch(PhaseSpaceError):
    """Array shapes are inconsistent with the declared mode count."""


class NonSymmetricB(PhaseSpaceError):
    """A sampled quadratic-coefficient matrix is not symmetric."""


class SymplecticDriftExceeded(PhaseSpaceError):
    """A propagator violates the symplectic identity beyond tolerance."""


class NonRealResult(PhaseSpaceError):
    """A conversion that must produce real data left an imaginary residue."""


class InvalidState(PhaseSpaceError):
    """A Gaussian state or parameter set violates its invariants."""


class SingularDispersion(PhaseSpaceError):
    """The dispersion matrix is not invertible at working precision."""


class SingularMatrix(PhaseSpaceError):
    """A required matrix inverse does not exist; message names the matrix."""


class IndexOutOfRange(PhaseSpaceError):
    """Mode or quantum-number index outside the supported range."""


class AsymmetricR(PhaseSpaceError):
    """Hermite-polynomial coefficient matrix is not symmetric."""


class DegreeTooLarge(PhaseSpaceError):
    """Requested polynomial degree exceeds the supported cap."""


class NegativeProbability(PhaseSpaceError):
    """A probability came out negative beyond numerical noise."""


class GridTooCoarse(PhaseSpaceError):
    """A quadrature grid failed its refinement self-check."""


class WronskianDrift(PhaseSpaceError):
    """Trajectory integration failed to conserve the Wronskian."""


class NotPeriodic(PhaseSpaceError):
    """Quasienergy analysis requested for a profile without a period."""


class NullState(PhaseSpaceError):
    """The requested superposition state has vanishing norm."""


class BranchTrackingLost(PhaseSpaceError):
    """Continuous square-root branch tracking hit a zero crossing."""
