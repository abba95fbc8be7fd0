"""Exception hierarchy shared by all modules.

The CLI maps these onto its exit-code contract: hypothesis and
certification failures exit 2, malformed input exits 3.
"""


class WienerError(Exception):
    """Base class for all library errors."""


class InvalidInput(WienerError):
    """Malformed or out-of-domain input (NaN coefficients, bad JSON, ...)."""


class BoundOverflow(WienerError):
    """A certified upper bound overflowed to infinity."""


class HypothesisFailure(WienerError):
    """A precondition of a certified operation could not be established.

    Carries an optional ``report`` dict with the quantities that failed.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class CertificationFailure(WienerError):
    """The hypothesis held but the target certificate was not reached.

    Distinct from HypothesisFailure: the input may well be fine, the
    search simply hit its cap.  ``report`` records the best attempt.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report or {}


class ToleranceUnreachable(WienerError):
    """A quadrature tolerance cannot be met within the panel cap."""
