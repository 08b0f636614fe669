"""Exception types shared across the package."""


class StrataError(Exception):
    """Base class for all domain errors raised by this package."""


class DegenerateLayer(StrataError):
    """A layer thickness is zero or negative where positivity is required."""


class OutOfRegime(StrataError):
    """A quantity was requested outside the parameter regime where it is defined."""


class NonRealSpectrum(StrataError):
    """Closed-form eigenvectors were requested for a state with complex eigenvalues."""


class DegenerateEigenvector(StrataError):
    """A closed-form eigenvector collapses to zero (or a dependent pair) at this state."""


class EigenTrackingFailure(StrataError):
    """Eigenvalue matching across perturbed states was ambiguous."""
