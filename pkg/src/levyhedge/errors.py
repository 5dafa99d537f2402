"""Exception types shared across the library."""


class LevyHedgeError(Exception):
    """Base class for all library errors."""


class UnsupportedOrderError(LevyHedgeError, ValueError):
    """Moment order outside the analytic range of the jump distribution."""


class BankruptcyError(LevyHedgeError, RuntimeError):
    """A sampled jump of size <= -1 drove the asset to or below zero."""


class MissingJumpRecordsError(LevyHedgeError, ValueError):
    """Power-jump bookkeeping requested on a path without jump records."""


class InsufficientNodesError(LevyHedgeError, ValueError):
    """Stencil order p requires 2N > p."""


class BudgetExceededError(LevyHedgeError, RuntimeError):
    """Combination enumeration exceeded the configured work budget.

    ``completed_orders`` reports the derivative orders whose coefficients
    were fully accumulated before the budget ran out.
    """

    def __init__(self, message, completed_orders=(), visits=0):
        super().__init__(message)
        self.completed_orders = tuple(completed_orders)
        self.visits = visits


class TableFormatError(LevyHedgeError, ValueError):
    """Stencil table file is malformed; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class GridError(LevyHedgeError, ValueError):
    """Price-curve grid is not uniform or otherwise unusable."""


class PricingFailedError(LevyHedgeError, RuntimeError):
    """Every simulated path was discarded (e.g. all bankrupt)."""


class LadderOrderError(LevyHedgeError, ValueError):
    """Requested derivative order exceeds what the stencil table supports."""


class NeedsHigherOrderError(LevyHedgeError, RuntimeError):
    """No truncation order within the ladder met the tolerance."""

    def __init__(self, message, best_error=None, best_order=None):
        super().__init__(message)
        self.best_error = best_error
        self.best_order = best_order


class ZeroRateError(LevyHedgeError, ValueError):
    """Bank-account replication formula requires r > 0."""


class IncompleteMarketError(LevyHedgeError, ValueError):
    """No basket available for a required Taylor term."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order


class AlignmentError(LevyHedgeError, ValueError):
    """Swap sampling points do not bracket the hedging period."""


class ConventionError(LevyHedgeError, ValueError):
    """Log-return realized moments cannot back a hedging basket."""


class DegenerateModelError(LevyHedgeError, ValueError):
    """Model has no risk in the direction a formula divides by."""


class UnhedgeableSetError(LevyHedgeError, RuntimeError):
    """Instrument matrix is singular or too ill-conditioned to solve."""

    def __init__(self, message, order=None):
        super().__init__(message)
        self.order = order
