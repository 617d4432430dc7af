"""Exception and warning types shared across the package."""


class InterferoxError(Exception):
    """Base class for physics/validation errors raised by this package."""


# beam-splitter / Fock optics
class LosslessnessViolation(InterferoxError):
    """Reflection/transmission pair violates |R|^2+|T|^2=1 or RT*+TR*=0."""


class CutoffExceeded(InterferoxError):
    """An operation would populate occupations beyond the state's cutoff."""


# scalar wave fields
class GridTooNarrow(InterferoxError):
    """Aperture or element does not fit on the sampling grid."""


class NoExtrema(InterferoxError):
    """Profile has no interior extrema (constant or monotone)."""


class ZeroFlux(InterferoxError):
    """Sampling requested from a profile with no power."""


class AliasingRisk(UserWarning):
    """Propagation carries spectral power beyond the alias-free band."""


# duality metrics
class InvalidIntensities(InterferoxError):
    """I_max/I_min pair outside the physical range."""


class WrongArity(InterferoxError):
    """Operation defined for two-path distributions only."""


class GridMismatch(InterferoxError):
    """Profiles to compare are not sampled on a common grid."""


class OutOfRange(InterferoxError):
    """Metric argument outside [0, 1]."""


# pilot-wave dynamics
class NodeEncountered(InterferoxError):
    """Wavefunction is exactly zero where a phase is required."""


class NodeProximity(InterferoxError):
    """Trajectory entered a region where |psi| is numerically zero."""


# pointer-measurement model
class NeverSeparates(InterferoxError):
    """Pointer packets cannot separate (degenerate coupling or spectrum)."""


class AmbiguousRegion(InterferoxError):
    """Pointer sample falls where two branch densities are indistinguishable."""


class OrthogonalPostSelection(InterferoxError):
    """Weak value undefined: post-selected state orthogonal to pre-selected."""


# orchestration
class MissingData(InterferoxError):
    """Scenario result lacks the inputs required for a duality report."""
