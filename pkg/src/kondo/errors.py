"""Exception types shared across the package.

Everything derives from KondoError so callers (notably the CLI) can catch
domain and numerical failures in one place without swallowing genuine bugs.
"""


class KondoError(Exception):
    """Base class for all errors raised by this package."""


class GridSpecError(KondoError, ValueError):
    """Invalid momentum-grid specification (non-monotone, zero entries, ...)."""


class PoleError(KondoError, ValueError):
    """Evaluation requested exactly on (or too close to) a conduction pole."""


class BracketError(KondoError, RuntimeError):
    """A root bracket failed; carries the offending interval for diagnosis."""

    def __init__(self, message, interval=None):
        super().__init__(message)
        self.interval = interval


class QuadratureError(KondoError, RuntimeError):
    """Adaptive quadrature did not reach the requested error estimate."""


class ZeroModeError(KondoError, RuntimeError):
    """The dense spectrum has no eigenvalue at zero within tolerance."""


class IntegrationError(KondoError, RuntimeError):
    """Time stepping rejected (Hermiticity defect grew beyond the bound)."""
