"""Exception hierarchy shared across the package."""


class NmottoError(Exception):
    """Base class for all package-specific errors."""


class PoleError(NmottoError, ValueError):
    """Trigamma evaluated at (or within 1e-12 of) a nonpositive integer."""


class QuadratureError(NmottoError, RuntimeError):
    """A quadrature routine failed to reach its tolerance."""


class GridError(NmottoError, ValueError):
    """Kernel-grid construction rejected its step or size."""


class PositivityError(NmottoError, RuntimeError):
    """A propagated population left [0, 1] beyond tolerance.

    Signals a grid that is too coarse or parameters outside the validity
    of the second-order time-convolutionless expansion.
    """


class SingularMapError(NmottoError, RuntimeError):
    """The one-cycle population map has no unique fixed point."""


class ConfigError(NmottoError, ValueError):
    """A run configuration failed validation; message names the field."""
