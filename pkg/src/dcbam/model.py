"""Core decision model: weighted quality attributes, diversified decisions,
benefit/cost arithmetic and ranking.

All types are immutable after construction and all operations are pure, so
everything here is safe to share across threads.
"""
from __future__ import annotations

from dataclasses import dataclass

from .errors import IntegrityError, InvariantError, QaMismatchError

WEIGHT_SUM_TARGET = 100.0
WEIGHT_SUM_TOL = 1e-9

DEFAULT_SCALE_FACTOR = 25.0


@dataclass(frozen=True)
class ValidationResult:
    """Outcome of a data validation: violations are data, not exceptions."""

    ok: bool
    violations: tuple[str, ...] = ()


@dataclass(frozen=True)
class QualityAttributeWeights:
    """Ordered importance scores per quality attribute, in points out of 100."""

    entries: tuple[tuple[str, float], ...]

    def __post_init__(self):
        names = [name for name, _ in self.entries]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise InvariantError(f"duplicate qa_name entries: {dupes}")
        object.__setattr__(self, "entries", tuple((n, float(s)) for n, s in self.entries))

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.entries)

    def score(self, name: str) -> float:
        for n, s in self.entries:
            if n == name:
                return s
        raise IntegrityError(f"unknown quality attribute: {name!r}")

    def total(self) -> float:
        return sum(score for _, score in self.entries)

    def as_dict(self) -> dict[str, float]:
        return dict(self.entries)


@dataclass(frozen=True)
class Scenario:
    """A quality-attribute scenario with its measurable response target."""

    id: str
    description: str
    qa_concern: str
    response_measure: str
    candidate_dads: tuple[str, ...] = ()


@dataclass(frozen=True)
class ArchitecturalStrategy:
    """A single design alternative composable into diversified decisions.

    ``cost`` (monetary units, same scale as effective_cost) is only needed
    by the shared-strategy cost dedup extension and may be omitted.
    """

    id: str
    name: str
    cost: float | None = None


@dataclass(frozen=True)
class DiversifiedDecision:
    """A bundle of architectural strategies with per-QA contribution scores
    in [-1, 1] and a raw cost on the 1-100 scale.

    ``scale_factor`` converts raw table units into monetary units and is
    applied to both costs and benefits.  ``base_value`` is the optional
    utility-derived seed used when pricing this decision on a lattice.
    """

    id: str
    strategies: tuple[str, ...]
    contrib: dict[str, float]
    raw_cost: float
    scale_factor: float = DEFAULT_SCALE_FACTOR
    base_value: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "strategies", tuple(self.strategies))
        object.__setattr__(self, "contrib", dict(self.contrib))
        for qa, value in self.contrib.items():
            if not -1.0 <= value <= 1.0:
                raise InvariantError(
                    f"{self.id}: contrib[{qa!r}] = {value} outside [-1, 1]"
                )
        if not 1.0 <= self.raw_cost <= 100.0:
            raise InvariantError(
                f"{self.id}: raw_cost {self.raw_cost} outside [1, 100]"
            )
        if self.scale_factor <= 0:
            raise InvariantError(f"{self.id}: scale_factor must be positive")

    @property
    def effective_cost(self) -> float:
        return self.raw_cost * self.scale_factor


@dataclass(frozen=True)
class Portfolio:
    """An ordered set of decision ids plus the budget they must fit into.

    ``budget=None`` means unconstrained (ad-hoc portfolios built on the
    command line); stored project portfolios always carry one.
    """

    dad_ids: tuple[str, ...]
    budget: float | None = None
    id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "dad_ids", tuple(self.dad_ids))
        if not self.dad_ids:
            raise InvariantError("portfolio must contain at least one dad_id")
        if len(set(self.dad_ids)) != len(self.dad_ids):
            raise InvariantError(f"portfolio has duplicate dad_ids: {self.dad_ids}")
        if self.budget is not None and self.budget <= 0:
            raise InvariantError(f"portfolio budget must be positive, got {self.budget}")


def validate_qa_scores(weights: QualityAttributeWeights) -> ValidationResult:
    """Check the weight constraints: every score >= 0 and the sum is exactly
    100 (within 1e-9). Accepts arbitrary candidates; violations come back as
    data rather than exceptions."""
    violations = []
    for name, score in weights.entries:
        if score < 0:
            violations.append(f"score for {name!r} is negative: {score}")
    total = weights.total()
    if abs(total - WEIGHT_SUM_TARGET) > WEIGHT_SUM_TOL:
        violations.append(f"scores must sum to 100, got {total}")
    return ValidationResult(ok=not violations, violations=tuple(violations))


def compute_benefit(dad: DiversifiedDecision, weights: QualityAttributeWeights) -> float:
    """Benefit of a decision: the weighted sum of its contribution scores.

    A plain dot product, so it is additive in the weights and insensitive to
    attribute order. Raises QaMismatchError when the weights name an
    attribute the decision has no contribution score for; weight-sum
    validity is the caller's concern (checked at load and API boundaries).
    """
    total = 0.0
    for name, score in weights.entries:
        if name not in dad.contrib:
            raise QaMismatchError(
                f"{dad.id}: no contribution score for quality attribute {name!r}"
            )
        total += score * dad.contrib[name]
    return total


def compute_scaled_benefit(dad: DiversifiedDecision, weights: QualityAttributeWeights) -> float:
    """Benefit in monetary units: raw benefit times the decision's scale factor."""
    return compute_benefit(dad, weights) * dad.scale_factor


def rank_dads(
    candidates: list[DiversifiedDecision], weights: QualityAttributeWeights
) -> list[tuple[str, float]]:
    """Rank decisions by descending benefit.

    Ties break toward the lower effective cost, then lexicographic id, so the
    ordering is total and deterministic.
    """
    scored = [(dad, compute_benefit(dad, weights)) for dad in candidates]
    scored.sort(key=lambda pair: (-pair[1], pair[0].effective_cost, pair[0].id))
    return [(dad.id, benefit) for dad, benefit in scored]


def check_budget(
    portfolio: Portfolio, dads: dict[str, DiversifiedDecision]
) -> ValidationResult:
    """Check that the summed effective costs fit the portfolio budget."""
    total = 0.0
    for dad_id in portfolio.dad_ids:
        if dad_id not in dads:
            raise IntegrityError(f"portfolio references unknown dad_id {dad_id!r}")
        total += dads[dad_id].effective_cost
    if portfolio.budget is None or total <= portfolio.budget:
        return ValidationResult(ok=True)
    excess = total - portfolio.budget
    return ValidationResult(
        ok=False,
        violations=(
            f"total cost {total} exceeds budget {portfolio.budget} by {excess}",
        ),
    )


def portfolio_cost(portfolio: Portfolio, dads: dict[str, DiversifiedDecision]) -> float:
    """Summed effective cost of the portfolio members (the exercise price)."""
    total = 0.0
    for dad_id in portfolio.dad_ids:
        if dad_id not in dads:
            raise IntegrityError(f"portfolio references unknown dad_id {dad_id!r}")
        total += dads[dad_id].effective_cost
    return total
