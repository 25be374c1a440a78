import random

import pytest

from dcbam.errors import BudgetExceededError, DomainError, InvariantError
from dcbam.lattice import LatticeParams
from dcbam.model import DiversifiedDecision, Portfolio
from dcbam.report import canonical_json, valuation_report
from dcbam.valuation import (
    OptionValuation,
    PortfolioValuationRequest,
    Recommendation,
    compare_portfolios,
    deduped_exercise_cost,
    diversification_delta,
    value_portfolio,
    whatif_sweep,
)

from .oracles import path_price

QAS = ("Performance", "Reliability", "Availability", "Security", "Scalability", "EnergyEfficiency")

DAD5 = DiversifiedDecision(
    id="DAD5",
    strategies=("Wifi", "FH"),
    contrib=dict(zip(QAS, (1.0, 1.0, 0.9, -0.1, 0.7, -0.6))),
    raw_cost=45.0,
)
DAD7 = DiversifiedDecision(
    id="DAD7",
    strategies=("BT", "FH"),
    contrib=dict(zip(QAS, (0.5, 0.2, 0.6, 0.8, -0.4, 0.7))),
    raw_cost=35.0,
)
DADS = {"DAD5": DAD5, "DAD7": DAD7}

LATTICE = LatticeParams(
    v_s=1750.0, s0_dad=0.0, u=1.2, d=0.9, r=0.005, horizons=3
)

# frozen pre-build from path enumeration: S0 = 1750 + 800, cost = 45 * 25
DAD5_PRICES = (1444.9748743718592, 1465.1789096234936, 1485.6145516349704)
DAD5_TOTAL = 4395.768335630323
# S0 = 1750 + 800 + 650, cost = 2000
COMBO_PRICES = (1222.1105527638185, 1244.4938259134863, 1267.1528141452181)
COMBO_TOTAL = 3733.757192822523


def request_for(dad_ids, bases, budget=None, lattice=LATTICE, portfolio_id=None):
    return PortfolioValuationRequest(
        portfolio=Portfolio(dad_ids=tuple(dad_ids), budget=budget, id=portfolio_id),
        per_dad_base_values=dict(zip(dad_ids, bases)),
        lattice=lattice,
    )


class TestValuePortfolio:
    def test_single_dad_pinned_prices(self):
        valuation = value_portfolio(request_for(["DAD5"], [800.0]), DADS)
        assert valuation.exercise_cost == 1125.0
        assert valuation.per_horizon_prices == pytest.approx(DAD5_PRICES, rel=1e-9)
        assert valuation.total_price == pytest.approx(DAD5_TOTAL, rel=1e-9)
        assert valuation.final_horizon_price == valuation.per_horizon_prices[-1]

    def test_combined_portfolio_pinned_prices(self):
        valuation = value_portfolio(request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS)
        assert valuation.exercise_cost == 2000.0
        assert valuation.per_horizon_prices == pytest.approx(COMBO_PRICES, rel=1e-9)
        assert valuation.total_price == pytest.approx(COMBO_TOTAL, rel=1e-9)

    def test_matches_oracle_per_horizon(self):
        valuation = value_portfolio(request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS)
        for t, price in enumerate(valuation.per_horizon_prices, start=1):
            assert price == pytest.approx(
                path_price(3200.0, 1.2, 0.9, 0.005, 2000.0, t), rel=1e-12
            )

    def test_combined_inputs_are_sums_of_parts(self):
        a = value_portfolio(request_for(["DAD5"], [800.0]), DADS)
        b = value_portfolio(request_for(["DAD7"], [650.0]), DADS)
        combined = value_portfolio(request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS)
        assert combined.exercise_cost == a.exercise_cost + b.exercise_cost
        assert sum(combined.per_dad_base_values.values()) == sum(
            a.per_dad_base_values.values()
        ) + sum(b.per_dad_base_values.values())

    def test_budget_violation_rejected(self):
        request = request_for(["DAD5", "DAD7"], [800.0, 650.0], budget=1999.0)
        with pytest.raises(BudgetExceededError) as exc_info:
            value_portfolio(request, DADS)
        assert exc_info.value.excess == pytest.approx(1.0)

    def test_all_zero_payoffs(self):
        # cost above S0 * u^T everywhere
        deep_cost_dad = DiversifiedDecision(
            id="DAD5", strategies=(), contrib=DAD5.contrib, raw_cost=100.0, scale_factor=100.0
        )
        valuation = value_portfolio(
            request_for(["DAD5"], [100.0]), {"DAD5": deep_cost_dad}
        )
        assert valuation.total_price == 0.0
        assert all(p == 0.0 for p in valuation.per_horizon_prices)
        assert valuation.recommendation is Recommendation.ABANDON

    def test_missing_base_value_rejected(self):
        with pytest.raises(InvariantError, match="base values"):
            PortfolioValuationRequest(
                portfolio=Portfolio(dad_ids=("DAD5", "DAD7")),
                per_dad_base_values={"DAD5": 800.0},
                lattice=LATTICE,
            )

    def test_total_invariant_enforced(self):
        valuation = value_portfolio(request_for(["DAD5"], [800.0]), DADS)
        with pytest.raises(InvariantError, match="total_price"):
            OptionValuation(
                dad_ids=valuation.dad_ids,
                per_dad_base_values=valuation.per_dad_base_values,
                exercise_cost=valuation.exercise_cost,
                v_s=valuation.v_s,
                u=valuation.u,
                d=valuation.d,
                r=valuation.r,
                convention=valuation.convention,
                style=valuation.style,
                per_horizon_prices=valuation.per_horizon_prices,
                total_price=valuation.total_price + 1.0,
                final_horizon_price=valuation.final_horizon_price,
                grids=valuation.grids,
                recommendation=valuation.recommendation,
            )

    def test_deterministic_report(self):
        a = value_portfolio(request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS)
        b = value_portfolio(request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS)
        assert canonical_json(valuation_report(a)) == canonical_json(valuation_report(b))


class TestDedupSharedStrategyCosts:
    COSTS = {"Wifi": 450.0, "BT": 300.0, "FH": 325.0}

    def test_shared_strategy_counted_once(self):
        portfolio = Portfolio(dad_ids=("DAD5", "DAD7"))
        # FH appears in both members: 2000 - 325
        assert deduped_exercise_cost(portfolio, DADS, self.COSTS) == 1675.0

    def test_no_sharing_no_change(self):
        portfolio = Portfolio(dad_ids=("DAD5",))
        assert deduped_exercise_cost(portfolio, DADS, self.COSTS) == 1125.0

    def test_missing_strategy_cost_rejected(self):
        portfolio = Portfolio(dad_ids=("DAD5", "DAD7"))
        with pytest.raises(DomainError, match="FH"):
            deduped_exercise_cost(portfolio, DADS, {})

    def test_valuation_uses_deduped_cost(self):
        valuation = value_portfolio(
            request_for(["DAD5", "DAD7"], [800.0, 650.0]),
            DADS,
            dedup_shared_strategy_costs=True,
            strategy_costs=self.COSTS,
        )
        assert valuation.exercise_cost == 1675.0
        plain = value_portfolio(request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS)
        assert valuation.total_price > plain.total_price


def narrative(total, pid, cost=1000.0, prices=None):
    """Hand-built valuation for ordinal comparison narratives."""
    prices = tuple(prices) if prices is not None else (total,)
    return OptionValuation(
        dad_ids=("DADx",),
        per_dad_base_values={"DADx": 0.0},
        exercise_cost=cost,
        v_s=1750.0,
        u=1.2,
        d=0.9,
        r=0.005,
        convention="one-minus-r",
        style="european",
        per_horizon_prices=prices,
        total_price=total,
        final_horizon_price=prices[-1],
        grids=(),
        recommendation="wait",
        portfolio_id=pid,
    )


class TestComparePortfolios:
    def test_collapsed_current_switches_to_strong_candidate(self):
        current = narrative(14.75, "triple")
        candidate = narrative(2916.90, "pair")
        result = compare_portfolios(current, [candidate])
        assert result.recommendation is Recommendation.SWITCH
        assert result.compared_against == "pair"

    def test_all_zero_prices_abandon(self):
        current = narrative(0.0, "dead", prices=(0.0, 0.0, 0.0))
        result = compare_portfolios(current, [narrative(0.0, "other", prices=(0.0, 0.0, 0.0))])
        assert result.recommendation is Recommendation.ABANDON

    def test_below_epsilon_abandons(self):
        result = compare_portfolios(narrative(0.5, "tiny"), [])
        assert result.recommendation is Recommendation.ABANDON

    def test_below_margin_waits(self):
        result = compare_portfolios(narrative(100.0, "cur"), [narrative(103.0, "alt")])
        assert result.recommendation is Recommendation.WAIT
        assert result.compared_against is None

    def test_above_margin_switches(self):
        result = compare_portfolios(narrative(100.0, "cur"), [narrative(106.0, "alt")])
        assert result.recommendation is Recommendation.SWITCH

    def test_candidate_tie_breaks_on_cost_then_id(self):
        current = narrative(100.0, "cur")
        cheap = narrative(200.0, "b-cheap", cost=500.0)
        pricey = narrative(200.0, "a-pricey", cost=900.0)
        result = compare_portfolios(current, [pricey, cheap])
        assert result.compared_against == "b-cheap"
        same_cost = narrative(200.0, "aaa", cost=500.0)
        result = compare_portfolios(current, [cheap, same_cost])
        assert result.compared_against == "aaa"

    def test_empty_candidates_never_switch(self):
        assert compare_portfolios(narrative(100.0, "x"), []).recommendation is Recommendation.WAIT
        assert (
            compare_portfolios(narrative(0.2, "x"), []).recommendation
            is Recommendation.ABANDON
        )

    def test_mixed_conventions_rejected(self):
        other = OptionValuation(
            dad_ids=("DADx",),
            per_dad_base_values={"DADx": 0.0},
            exercise_cost=1000.0,
            v_s=1750.0,
            u=1.2,
            d=0.9,
            r=0.005,
            convention="one-plus-r",
            style="european",
            per_horizon_prices=(100.0,),
            total_price=100.0,
            final_horizon_price=100.0,
            grids=(),
            recommendation="wait",
            portfolio_id="other",
        )
        with pytest.raises(DomainError, match="convention"):
            compare_portfolios(narrative(100.0, "cur"), [other])


class TestDiversificationDelta:
    def test_favourable_case(self):
        separate = [narrative(2542.39, "a"), narrative(2761.44, "b")]
        combined = narrative(2916.90, "ab")
        result = diversification_delta(separate, combined)
        assert result.delta == pytest.approx(155.46, abs=1e-9)
        assert result.favourable

    def test_unfavourable_case(self):
        separate = [
            narrative(3111.58, "a"),
            narrative(2542.39, "b"),
            narrative(2761.44, "c"),
        ]
        combined = narrative(14.75, "abc")
        result = diversification_delta(separate, combined)
        assert result.delta == pytest.approx(-3096.83, abs=1e-9)
        assert not result.favourable

    def test_boundary_not_favourable(self):
        separate = [narrative(100.0, "a")]
        result = diversification_delta(separate, narrative(100.0, "combo"))
        assert result.delta == 0.0
        assert not result.favourable

    def test_empty_separate_rejected(self):
        with pytest.raises(DomainError):
            diversification_delta([], narrative(1.0, "x"))


class TestWhatIfSweep:
    def test_default_range_has_twenty_rows(self):
        table = whatif_sweep(
            request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS, lo=300.0, hi=2200.0, step=100.0
        )
        assert len(table.rows) == 20
        assert table.rows[0].base_value == 300.0
        assert table.rows[-1].base_value == 2200.0

    def test_rows_sorted_and_monotone(self):
        table = whatif_sweep(
            request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS, lo=300.0, hi=2200.0, step=100.0
        )
        bases = [row.base_value for row in table.rows]
        totals = [row.total_price for row in table.rows]
        assert bases == sorted(bases)
        assert all(b <= a + 1e-9 for b, a in zip(totals, totals[1:]))

    def test_degenerate_range(self):
        table = whatif_sweep(
            request_for(["DAD5"], [800.0]), DADS, lo=500.0, hi=500.0, step=100.0
        )
        assert len(table.rows) == 1
        assert table.rows[0].base_value == 500.0

    def test_row_matches_direct_valuation(self):
        table = whatif_sweep(
            request_for(["DAD5"], [0.0]), DADS, lo=800.0, hi=800.0, step=1.0
        )
        direct = value_portfolio(request_for(["DAD5"], [800.0]), DADS)
        assert table.rows[0].total_price == pytest.approx(direct.total_price, rel=1e-12)

    def test_invalid_ranges(self):
        request = request_for(["DAD5"], [800.0])
        with pytest.raises(DomainError):
            whatif_sweep(request, DADS, lo=100.0, hi=50.0, step=10.0)
        with pytest.raises(DomainError):
            whatif_sweep(request, DADS, lo=100.0, hi=200.0, step=0.0)


class TestScalingInvariance:
    def test_prices_scale_and_recommendations_hold(self):
        rng = random.Random(7)
        for _ in range(25):
            c = rng.uniform(0.01, 100.0)
            base = value_portfolio(request_for(["DAD5", "DAD7"], [800.0, 650.0]), DADS)
            scaled_dads = {
                dad_id: DiversifiedDecision(
                    id=dad.id,
                    strategies=dad.strategies,
                    contrib=dad.contrib,
                    raw_cost=dad.raw_cost,
                    scale_factor=dad.scale_factor * c,
                )
                for dad_id, dad in DADS.items()
            }
            scaled_lattice = LatticeParams(
                v_s=LATTICE.v_s * c,
                s0_dad=0.0,
                u=LATTICE.u,
                d=LATTICE.d,
                r=LATTICE.r,
                horizons=LATTICE.horizons,
            )
            scaled = value_portfolio(
                request_for(
                    ["DAD5", "DAD7"], [800.0 * c, 650.0 * c], lattice=scaled_lattice
                ),
                scaled_dads,
            )
            for a, b in zip(scaled.per_horizon_prices, base.per_horizon_prices):
                assert a == pytest.approx(c * b, rel=1e-9)
            # epsilon is monetary: scaling the unit scales it too
            base_rec = compare_portfolios(base, [], abandon_epsilon=1.0).recommendation
            scaled_rec = compare_portfolios(scaled, [], abandon_epsilon=c).recommendation
            assert base_rec == scaled_rec
