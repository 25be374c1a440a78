"""Exception hierarchy shared by all dcbam modules.

The service layer maps these onto HTTP statuses, so keep the split stable:
invariant/domain/parse/version/budget -> 400, integrity -> 404,
no-arbitrage/degenerate -> 422, stale revision -> 409.
"""


class DcbamError(Exception):
    """Base class for all dcbam errors."""


class InvariantError(DcbamError):
    """A domain type invariant was violated at construction or load time."""


class DomainError(DcbamError):
    """An operation was called with arguments outside its domain."""


class QaMismatchError(DcbamError):
    """A quality attribute required by the weights is missing from a decision."""


class IntegrityError(DcbamError):
    """A cross-reference (dad id, portfolio id, qa name, ...) does not resolve."""


class ParseError(DcbamError):
    """A document or CSV input could not be parsed."""


class VersionError(DcbamError):
    """A project document carries an unsupported schema version."""


class BudgetExceededError(DcbamError):
    """Portfolio deployment cost exceeds the stated budget."""

    def __init__(self, total: float, budget: float):
        self.total = total
        self.budget = budget
        self.excess = total - budget
        super().__init__(
            f"portfolio cost {total} exceeds budget {budget} by {self.excess}"
        )


class NoArbitrageError(DcbamError):
    """The lattice factors violate the no-arbitrage constraint d < 1 + r < u."""


class DegenerateLatticeError(DcbamError):
    """Up and down factors coincide; the risk-adjusted probability is undefined."""


class StaleRevisionError(DcbamError):
    """A mutation was submitted against an outdated project revision."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"stale revision: expected {expected}, got {got}")
