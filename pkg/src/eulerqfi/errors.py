"""Exception types shared across the package."""


class ValidationError(ValueError):
    """Input violates a documented precondition."""


class NumericalError(RuntimeError):
    """A numerical self-check failed (step size, eigensolver, cross-check)."""


class SingularQfimError(ValidationError):
    """The Fisher information matrix is singular at the requested angles."""

    def __init__(self, determinant: float, threshold: float):
        self.determinant = determinant
        self.threshold = threshold
        super().__init__(
            f"QFIM is singular: det={determinant:.6g} below threshold {threshold:.6g}"
        )
