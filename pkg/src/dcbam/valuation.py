"""Portfolio-of-options valuation: price a decision portfolio horizon by
horizon, sum the per-horizon prices, compare portfolios, and classify the
switch / wait / abandon action.

The headline number is the sum of the per-horizon option prices; the price
of the option expiring at the final horizon is also reported as a
diagnostic (``final_horizon_price``).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum

from .errors import BudgetExceededError, DomainError, InvariantError
from .lattice import (
    DiscountConvention,
    ExerciseStyle,
    HorizonValuation,
    LatticeParams,
    value_option_single_horizon,
)
from .model import DiversifiedDecision, Portfolio, check_budget, portfolio_cost

DEFAULT_SWITCH_MARGIN = 0.05
DEFAULT_ABANDON_EPSILON = 1.0

_TOTAL_TOL = 1e-9


class Recommendation(str, Enum):
    SWITCH = "switch"
    WAIT = "wait"
    ABANDON = "abandon"


@dataclass(frozen=True)
class PortfolioValuationRequest:
    """Everything needed to price one portfolio: members, per-decision base
    values, and the shared lattice inputs."""

    portfolio: Portfolio
    per_dad_base_values: dict[str, float]
    lattice: LatticeParams
    horizons: int | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "per_dad_base_values", dict(self.per_dad_base_values)
        )
        missing = [
            dad_id
            for dad_id in self.portfolio.dad_ids
            if dad_id not in self.per_dad_base_values
        ]
        if missing:
            raise InvariantError(f"missing base values for: {missing}")

    @property
    def horizon_count(self) -> int:
        return self.horizons if self.horizons is not None else self.lattice.horizons


@dataclass(frozen=True)
class OptionValuation:
    """Per-horizon option prices for one portfolio plus the action derived
    from them."""

    dad_ids: tuple[str, ...]
    per_dad_base_values: dict[str, float]
    exercise_cost: float
    v_s: float
    u: float
    d: float
    r: float
    convention: DiscountConvention
    style: ExerciseStyle
    per_horizon_prices: tuple[float, ...]
    total_price: float
    final_horizon_price: float
    grids: tuple[HorizonValuation, ...]
    recommendation: Recommendation
    portfolio_id: str | None = None
    budget: float | None = None
    compared_against: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "dad_ids", tuple(self.dad_ids))
        object.__setattr__(
            self, "per_dad_base_values", dict(self.per_dad_base_values)
        )
        object.__setattr__(
            self, "per_horizon_prices", tuple(self.per_horizon_prices)
        )
        object.__setattr__(self, "convention", DiscountConvention(self.convention))
        object.__setattr__(self, "style", ExerciseStyle(self.style))
        object.__setattr__(self, "recommendation", Recommendation(self.recommendation))
        if abs(self.total_price - sum(self.per_horizon_prices)) > _TOTAL_TOL:
            raise InvariantError(
                f"total_price {self.total_price} != sum of per-horizon prices "
                f"{sum(self.per_horizon_prices)}"
            )
        for price in self.per_horizon_prices:
            if price < 0:
                raise InvariantError(f"negative per-horizon price {price}")

    @property
    def horizons(self) -> int:
        return len(self.per_horizon_prices)


def classify_standalone(
    total_price: float,
    per_horizon_prices: tuple[float, ...],
    abandon_epsilon: float = DEFAULT_ABANDON_EPSILON,
) -> Recommendation:
    """Wait/abandon classification with no candidates on the table."""
    if total_price < abandon_epsilon or all(p == 0.0 for p in per_horizon_prices):
        return Recommendation.ABANDON
    return Recommendation.WAIT


def deduped_exercise_cost(
    portfolio: Portfolio,
    dads: dict[str, DiversifiedDecision],
    strategy_costs: dict[str, float],
) -> float:
    """Extension: combined-portfolio cost with each shared strategy's cost
    counted once instead of once per member decision."""
    total = portfolio_cost(portfolio, dads)
    counts: Counter[str] = Counter()
    for dad_id in portfolio.dad_ids:
        counts.update(dads[dad_id].strategies)
    for strategy_id, k in sorted(counts.items()):
        if k <= 1:
            continue
        cost = strategy_costs.get(strategy_id)
        if cost is None:
            raise DomainError(
                f"cannot dedup: no cost recorded for shared strategy {strategy_id!r}"
            )
        total -= (k - 1) * cost
    if total < 0:
        raise DomainError(f"deduped cost is negative ({total}); check strategy costs")
    return total


def value_portfolio(
    request: PortfolioValuationRequest,
    dads: dict[str, DiversifiedDecision],
    abandon_epsilon: float = DEFAULT_ABANDON_EPSILON,
    dedup_shared_strategy_costs: bool = False,
    strategy_costs: dict[str, float] | None = None,
) -> OptionValuation:
    """Price a portfolio as a portfolio of call options.

    The lattice seed is the base system value plus the summed member base
    values; the exercise cost is the summed member effective costs. One
    option is priced per horizon 1..T and the prices are summed.

    ``dedup_shared_strategy_costs`` switches the exercise cost (and the
    budget check) to the dedup extension above.
    """
    portfolio = request.portfolio
    if dedup_shared_strategy_costs:
        exercise_cost = deduped_exercise_cost(portfolio, dads, strategy_costs or {})
        if portfolio.budget is not None and exercise_cost > portfolio.budget:
            raise BudgetExceededError(total=exercise_cost, budget=portfolio.budget)
    else:
        budget_check = check_budget(portfolio, dads)
        if not budget_check.ok:
            cost = portfolio_cost(portfolio, dads)
            raise BudgetExceededError(total=cost, budget=portfolio.budget)
        exercise_cost = portfolio_cost(portfolio, dads)
    s0_dad = sum(request.per_dad_base_values[d] for d in portfolio.dad_ids)
    horizons = request.horizon_count
    params = LatticeParams(
        v_s=request.lattice.v_s,
        s0_dad=s0_dad,
        u=request.lattice.u,
        d=request.lattice.d,
        r=request.lattice.r,
        horizons=horizons,
        convention=request.lattice.convention,
        style=request.lattice.style,
    )

    grids = tuple(
        value_option_single_horizon(params, exercise_cost, horizon=t)
        for t in range(1, horizons + 1)
    )
    prices = tuple(g.price for g in grids)
    total = sum(prices)

    return OptionValuation(
        dad_ids=portfolio.dad_ids,
        per_dad_base_values={
            d: request.per_dad_base_values[d] for d in portfolio.dad_ids
        },
        exercise_cost=exercise_cost,
        v_s=params.v_s,
        u=params.u,
        d=params.d,
        r=params.r,
        convention=params.convention,
        style=params.style,
        per_horizon_prices=prices,
        total_price=total,
        final_horizon_price=prices[-1],
        grids=grids,
        recommendation=classify_standalone(total, prices, abandon_epsilon),
        portfolio_id=portfolio.id,
        budget=portfolio.budget,
    )


def compare_portfolios(
    current: OptionValuation,
    candidates: list[OptionValuation],
    switch_margin: float = DEFAULT_SWITCH_MARGIN,
    abandon_epsilon: float = DEFAULT_ABANDON_EPSILON,
) -> OptionValuation:
    """Classify the current portfolio against candidate alternatives.

    Abandon when its total is below the epsilon or every per-horizon price
    is zero; otherwise switch to the best candidate whose total beats the
    current one by more than the margin fraction; otherwise wait. Candidate
    ties break toward lower exercise cost, then id. Returns the current
    valuation with recommendation and compared_against filled in.
    """
    for other in candidates:
        if (
            other.convention != current.convention
            or other.v_s != current.v_s
            or other.horizons != current.horizons
        ):
            raise DomainError(
                "candidates must share v_s, convention, and horizon count "
                "with the current valuation"
            )

    if current.total_price < abandon_epsilon or all(
        p == 0.0 for p in current.per_horizon_prices
    ):
        return replace(
            current, recommendation=Recommendation.ABANDON, compared_against=None
        )

    if candidates:
        best = min(
            candidates,
            key=lambda v: (-v.total_price, v.exercise_cost, v.portfolio_id or ""),
        )
        if best.total_price > current.total_price * (1.0 + switch_margin):
            return replace(
                current,
                recommendation=Recommendation.SWITCH,
                compared_against=best.portfolio_id,
            )

    return replace(current, recommendation=Recommendation.WAIT, compared_against=None)


@dataclass(frozen=True)
class DiversificationDelta:
    delta: float
    favourable: bool


def diversification_delta(
    separate: list[OptionValuation], combined: OptionValuation
) -> DiversificationDelta:
    """Gain (or loss) of deploying decisions together versus the best of
    deploying them separately."""
    if not separate:
        raise DomainError("need at least one separate valuation")
    delta = combined.total_price - max(v.total_price for v in separate)
    return DiversificationDelta(delta=delta, favourable=delta > 0)


@dataclass(frozen=True)
class WhatIfRow:
    base_value: float
    total_price: float
    recommendation: Recommendation


@dataclass(frozen=True)
class WhatIfTable:
    lo: float
    hi: float
    step: float
    rows: tuple[WhatIfRow, ...]


def whatif_sweep(
    request: PortfolioValuationRequest,
    dads: dict[str, DiversifiedDecision],
    lo: float,
    hi: float,
    step: float,
    abandon_epsilon: float = DEFAULT_ABANDON_EPSILON,
) -> WhatIfTable:
    """Revalue the portfolio across a grid of combined base values.

    Each grid point replaces the portfolio's summed per-decision seed, so a
    row's lattice starts at v_s + base_value. Rows come back sorted
    ascending by base value.
    """
    if lo > hi:
        raise DomainError(f"invalid range: lo {lo} > hi {hi}")
    if step <= 0:
        raise DomainError(f"step must be positive, got {step}")

    portfolio = request.portfolio
    budget_check = check_budget(portfolio, dads)
    if not budget_check.ok:
        cost = portfolio_cost(portfolio, dads)
        raise BudgetExceededError(total=cost, budget=portfolio.budget)
    exercise_cost = portfolio_cost(portfolio, dads)
    horizons = request.horizon_count

    # integer stepping avoids float accumulation drift across the grid
    count = int((hi - lo) / step + 1e-9) + 1
    rows = []
    for k in range(count):
        base = lo + k * step
        params = LatticeParams(
            v_s=request.lattice.v_s,
            s0_dad=base,
            u=request.lattice.u,
            d=request.lattice.d,
            r=request.lattice.r,
            horizons=horizons,
            convention=request.lattice.convention,
            style=request.lattice.style,
        )
        prices = tuple(
            value_option_single_horizon(params, exercise_cost, horizon=t).price
            for t in range(1, horizons + 1)
        )
        total = sum(prices)
        rows.append(
            WhatIfRow(
                base_value=base,
                total_price=total,
                recommendation=classify_standalone(total, prices, abandon_epsilon),
            )
        )
    return WhatIfTable(lo=lo, hi=hi, step=step, rows=tuple(rows))
