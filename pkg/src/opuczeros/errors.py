"""Exception hierarchy shared by the numerical modules."""


class OpucError(Exception):
    """Base class for numerical failures raised by this package."""


class InvalidWeightError(OpucError, ValueError):
    pass


class QuadratureError(OpucError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class SzegoClassError(OpucError, ValueError):
    pass


class DomainError(OpucError, ValueError):
    pass


class MomentDegeneracyError(OpucError):
    def __init__(self, step, variance):
        super().__init__(
            f"moment sequence is not positive definite: prediction-error "
            f"variance {variance!r} at step {step}"
        )
        self.step = step
        self.variance = variance


class NearCircleError(DomainError):
    """Closed-form kernel requested inside the band around |z| = 1."""


class ConsistencyError(OpucError):
    """A quantity that is nonnegative in exact arithmetic came out negative."""


class IntegrationError(OpucError):
    def __init__(self, message, estimates=()):
        super().__init__(message)
        self.estimates = tuple(estimates)


class RootFindingError(OpucError):
    def __init__(self, message, residual=None, trial=None):
        super().__init__(message)
        self.residual = residual
        self.trial = trial


class DegeneratePolynomialError(OpucError, ValueError):
    pass
