"""Exception types shared across the library."""


class HeisminError(Exception):
    """Base class for all library errors."""


class SingularPoint(HeisminError):
    """Evaluation requested at (or too close to) a singular locus."""


class BlowUp(HeisminError):
    """Numerical trajectory exceeded the overflow guard; a singular
    coordinate value is nearby."""

    def __init__(self, x, message=None):
        self.x = x
        super().__init__(message or f"trajectory blow-up near x = {x}")


class DegenerateBranch(HeisminError):
    """The conserved quantity is undefined on this solution branch."""


class MixedType(HeisminError):
    """An x-window straddles singular curves or the c2 coefficient
    changes sign; classification would be ambiguous."""


class QuadratureFailure(HeisminError):
    """An integrand evaluated non-finite along the quadrature path."""


class BadRotation(HeisminError):
    """Rotation coefficients (A, B) do not satisfy A^2 + B^2 = 1."""


class DegenerateChart(HeisminError):
    """The ruled chart fails to be an immersion at the requested point."""


class PreconditionFailed(HeisminError):
    """A check was requested at a point where its hypotheses fail."""


class NewtonDivergence(HeisminError):
    """Newton refinement failed to converge from the given seed."""


class ExprSyntaxError(HeisminError):
    """Malformed expression source.

    Attributes:
        offset: byte offset of the error in the source text.
        expected: short description of what the parser expected.
    """

    def __init__(self, offset, expected):
        self.offset = offset
        self.expected = expected
        super().__init__(f"syntax error at offset {offset}: expected {expected}")
