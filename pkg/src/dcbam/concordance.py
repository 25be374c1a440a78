"""Rater-consistency check over contribution-score rankings using Kendall's
coefficient of concordance W (tie-corrected)."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import DomainError, InvariantError

DEFAULT_CONSISTENCY_THRESHOLD = 0.7

_ROW_SUM_TOL = 1e-9


@dataclass(frozen=True)
class RatingMatrix:
    """m raters x n items matrix of ranks, mid-ranks allowed for ties.

    Each row must be a valid (possibly tied) ranking of the n items, which
    pins its sum to n(n+1)/2.
    """

    ranks: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(float(v) for v in row) for row in self.ranks)
        object.__setattr__(self, "ranks", rows)
        if not rows:
            raise InvariantError("rating matrix has no raters")
        n = len(rows[0])
        expected = n * (n + 1) / 2.0
        for i, row in enumerate(rows):
            if len(row) != n:
                raise InvariantError(
                    f"rater {i} ranked {len(row)} items, expected {n}"
                )
            if abs(sum(row) - expected) > _ROW_SUM_TOL:
                raise InvariantError(
                    f"rater {i} row sums to {sum(row)}, expected {expected}"
                )

    @property
    def raters(self) -> int:
        return len(self.ranks)

    @property
    def items(self) -> int:
        return len(self.ranks[0])


def kendalls_w(ratings: RatingMatrix) -> float:
    """Kendall's W in [0, 1]: 12S / (m^2(n^3 - n) - m*T) with the standard
    tie correction T = sum over raters of sum(t^3 - t) per tie group.

    Returns 0.0 for the degenerate all-tied matrix (zero denominator, no
    discrimination between items). Clamped against rounding.
    """
    m, n = ratings.raters, ratings.items
    if m < 2 or n < 2:
        raise DomainError(f"need at least 2 raters and 2 items, got {m}x{n}")
    rank_sums = [sum(row[i] for row in ratings.ranks) for i in range(n)]
    mean = sum(rank_sums) / n
    s = sum((r - mean) ** 2 for r in rank_sums)
    tie_term = 0.0
    for row in ratings.ranks:
        for count in Counter(row).values():
            if count > 1:
                tie_term += count**3 - count
    denom = m * m * (n**3 - n) - m * tie_term
    if denom <= 0:
        return 0.0
    return min(1.0, max(0.0, 12.0 * s / denom))


@dataclass(frozen=True)
class ConsistencyReport:
    w: float
    threshold: float
    verdict: str  # "consistent" | "inconsistent"


def consistency_report(
    w: float, threshold: float = DEFAULT_CONSISTENCY_THRESHOLD
) -> ConsistencyReport:
    """Classify a concordance value against a threshold (inclusive)."""
    if not 0.0 <= w <= 1.0:
        raise DomainError(f"w must lie in [0, 1], got {w}")
    if not 0.0 <= threshold <= 1.0:
        raise DomainError(f"threshold must lie in [0, 1], got {threshold}")
    verdict = "consistent" if w >= threshold else "inconsistent"
    return ConsistencyReport(w=w, threshold=threshold, verdict=verdict)
