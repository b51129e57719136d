"""Exception types shared across the package."""


class KgfieldError(Exception):
    """Base class for package-specific failures."""


class UnsupportedQueryError(KgfieldError):
    """A query that is outside the defined interface of an object.

    Examples: position-space evaluation of a bullet-transformed function,
    off-shell Fourier values of a bullet image, support box of the zero
    function.
    """


class UnknownFamilyError(KgfieldError, ValueError):
    """Generator family not present in the model being used."""


class NonFiniteSampleError(KgfieldError):
    """An integrand produced NaN or infinity at a quadrature node."""


class TermBudgetError(KgfieldError):
    """A normal-ordered product exceeded the intermediate term budget."""


class QuadratureConvergenceError(KgfieldError):
    """Adaptive quadrature hit its node budget before reaching tolerance.

    Carries the best available estimate so callers can inspect how far the
    run got before giving up.
    """

    def __init__(self, message, value, est_error, nodes_used):
        super().__init__(message)
        self.value = value
        self.est_error = est_error
        self.nodes_used = nodes_used
