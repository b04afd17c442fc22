"""Exception types shared across modules.

Validation problems raise ``ValueError``.  Everything below signals that a
well-posed numerical computation did not succeed.
"""


class NumericalFailure(RuntimeError):
    """Base class for failures of an otherwise valid computation."""


class StepSizeUnderflow(NumericalFailure):
    pass


class BracketError(NumericalFailure):
    """A root could not be enclosed, or bisection ran out of iterations."""

    def __init__(self, message, samples=None):
        super().__init__(message)
        self.samples = list(samples or [])


class TransitError(NumericalFailure):
    """A corner transit did not reach its exit surface."""
