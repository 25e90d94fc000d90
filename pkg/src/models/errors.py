"""
Exception hierarchy shared by every computational module
"""

from typing import Optional


class EisVerifyError(Exception):
    """Base class for all errors raised by the verification engine"""


class RootDatumError(EisVerifyError):
    """Rejected root datum, malformed coweight or mismatched datum"""


class InexactDivisionError(EisVerifyError):
    """Laurent polynomial division with a nonzero remainder"""


class ZeroDivisorError(EisVerifyError):
    """Division by zero, or specialization of v^-k at v = 0"""


class NonDominantError(EisVerifyError):
    """A dominant coweight was required"""


class AffineSupportError(EisVerifyError):
    """A finite identity check received elements with translation parts"""


class BudgetExceededError(EisVerifyError):
    """An enumeration or search would exceed the configured budget"""

    def __init__(self, message: str, estimate: Optional[int] = None, budget: Optional[int] = None):
        super().__init__(message)
        self.estimate = estimate
        self.budget = budget


class MissingCellError(EisVerifyError):
    """An Eisenstein vector has support on a cell that was not enumerated"""

    def __init__(self, message: str, missing: Optional[list] = None):
        super().__init__(message)
        self.missing = missing or []


class ConfigError(EisVerifyError):
    """Invalid run configuration"""


class InternalConsistencyError(EisVerifyError):
    """An internal invariant failed; the result cannot be trusted"""
