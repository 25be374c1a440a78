import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dcbam.errors import DegenerateLatticeError, InvariantError, NoArbitrageError
from dcbam.lattice import (
    DiscountConvention,
    ExerciseStyle,
    LatticeParams,
    build_lattice,
    grid_to_dot,
    grid_to_json_obj,
    initial_system_value,
    risk_neutral_prob,
    terminal_payoffs,
    value_option_single_horizon,
)

from .oracles import path_price


def params(
    s0=100.0, u=1.2, d=0.9, r=0.005, horizons=3, convention="one-minus-r", style="european"
):
    return LatticeParams(
        v_s=s0, s0_dad=0.0, u=u, d=d, r=r, horizons=horizons, convention=convention, style=style
    )


class TestInitialSystemValue:
    def test_worked_cell(self):
        assert initial_system_value(1750.0, [1200.0]) == 2950.0

    def test_empty_sum(self):
        assert initial_system_value(1750.0, []) == 1750.0

    def test_additive(self):
        assert initial_system_value(1750.0, [500.0, 700.0]) == 2950.0


class TestRiskNeutralProb:
    def test_simple_thirds(self):
        assert risk_neutral_prob(2.0, 0.5, 0.0) == pytest.approx(1 / 3, abs=1e-12)

    def test_symmetric_half(self):
        assert risk_neutral_prob(1.2, 0.9, 0.05) == pytest.approx(0.5, abs=1e-12)

    def test_down_factor_violation(self):
        with pytest.raises(NoArbitrageError, match=r"d < 1 \+ r"):
            risk_neutral_prob(1.2, 1.01, 0.005)

    def test_up_factor_violation(self):
        with pytest.raises(NoArbitrageError, match=r"1 \+ r < u"):
            risk_neutral_prob(1.004, 0.9, 0.005)

    def test_degenerate(self):
        with pytest.raises(DegenerateLatticeError):
            risk_neutral_prob(1.1, 1.1, 0.005)


class TestLatticeParams:
    def test_constraint_enforced_at_construction(self):
        with pytest.raises(NoArbitrageError):
            params(u=1.2, d=1.01, r=0.005)

    def test_r_below_one_under_one_minus_convention(self):
        with pytest.raises(InvariantError, match="r must be < 1"):
            params(u=2.5, d=0.5, r=1.2, convention="one-minus-r")

    def test_r_above_one_allowed_under_one_plus_convention(self):
        assert params(u=2.5, d=0.5, r=1.2, convention="one-plus-r").discount == 2.2

    def test_horizons_positive(self):
        with pytest.raises(InvariantError, match="horizons"):
            params(horizons=0)

    def test_negative_seed_rejected(self):
        with pytest.raises(InvariantError):
            LatticeParams(v_s=-1.0, s0_dad=0.0, u=1.2, d=0.9, r=0.005, horizons=1)


class TestBuildLattice:
    def test_level_two_values(self):
        lattice = build_lattice(params(horizons=2))
        values = [node.s for node in lattice.level(2)]
        # direct multiplication: 100 * u^j * d^(2-j)
        assert values == pytest.approx([81.0, 108.0, 144.0], rel=1e-12)

    def test_single_down_step(self):
        lattice = build_lattice(params(horizons=1))
        assert lattice.node(1, 0).s == pytest.approx(90.0, rel=1e-12)

    def test_recombining_level_sizes(self):
        lattice = build_lattice(params(horizons=4))
        for t in range(5):
            assert len(lattice.level(t)) == t + 1
        assert len(lattice.nodes) == 15

    def test_intrinsic_payoffs_non_negative(self):
        lattice = build_lattice(params(horizons=3), exercise_cost=110.0)
        assert all(node.payoff >= 0.0 for node in lattice.nodes)
        assert lattice.node(0, 0).payoff == 0.0

    def test_deterministic(self):
        a = build_lattice(params(horizons=3), exercise_cost=50.0)
        b = build_lattice(params(horizons=3), exercise_cost=50.0)
        assert a == b


class TestTerminalPayoffs:
    def test_worked_cell(self):
        lattice = build_lattice(
            LatticeParams(v_s=1750.0, s0_dad=138.0, u=1.25, d=0.8, r=0.005, horizons=2)
        )
        # uu node: 1888 * 1.25^2 = 2950
        payoffs = terminal_payoffs(lattice, exercise_cost=1125.0, horizon=2)
        assert payoffs[-1] == pytest.approx(1825.0, abs=1e-9)

    def test_out_of_the_money_floors_at_zero(self):
        lattice = build_lattice(params(horizons=1))
        assert terminal_payoffs(lattice, exercise_cost=1500.0, horizon=1) == [0.0, 0.0]

    def test_at_the_money_is_zero(self):
        lattice = build_lattice(params(horizons=1))
        s_down = lattice.node(1, 0).s
        assert terminal_payoffs(lattice, exercise_cost=s_down, horizon=1)[0] == 0.0

    @pytest.mark.parametrize("horizon", [0, 4])
    def test_horizon_out_of_range(self, horizon):
        lattice = build_lattice(params(horizons=3))
        with pytest.raises(IndexError):
            terminal_payoffs(lattice, exercise_cost=0.0, horizon=horizon)


class TestSingleHorizonValuation:
    def test_one_step_one_minus_r_denominator(self):
        result = value_option_single_horizon(
            params(s0=100.0, u=1.2, d=0.9, r=0.05, horizons=1), 100.0, horizon=1
        )
        # p = 0.5, payoff up 20, down 0, divided by 0.95
        assert result.price == pytest.approx(10.5263, abs=1e-4)
        assert result.price == pytest.approx(10.0 / 0.95, rel=1e-12)

    def test_one_step_one_plus_r_denominator(self):
        result = value_option_single_horizon(
            params(s0=100.0, u=1.2, d=0.9, r=0.05, horizons=1, convention="one-plus-r"),
            100.0,
            horizon=1,
        )
        assert result.price == pytest.approx(9.5238, abs=1e-4)
        assert result.price == pytest.approx(10.0 / 1.05, rel=1e-12)

    def test_deep_out_of_the_money_is_zero(self):
        p = params(horizons=3)
        cost = 100.0 * 1.2**3 + 1.0
        result = value_option_single_horizon(p, cost, horizon=3)
        assert result.price == 0.0
        assert all(node.value == 0.0 for node in result.nodes)

    def test_grid_shape_and_root(self):
        result = value_option_single_horizon(params(horizons=3), 100.0, horizon=2)
        assert result.horizon == 2
        assert len(result.nodes) == 6
        assert result.node(0, 0).value == result.price

    def test_horizon_out_of_range(self):
        with pytest.raises(IndexError):
            value_option_single_horizon(params(horizons=2), 100.0, horizon=3)

    @pytest.mark.parametrize("convention", ["one-minus-r", "one-plus-r"])
    @pytest.mark.parametrize("horizon", [1, 2, 3, 5])
    def test_matches_path_enumeration(self, convention, horizon):
        p = params(horizons=5, convention=convention)
        engine = value_option_single_horizon(p, 95.0, horizon=horizon).price
        oracle = path_price(100.0, 1.2, 0.9, 0.005, 95.0, horizon, convention)
        assert engine == pytest.approx(oracle, rel=1e-12)

    def test_american_dominates_european_elementwise(self):
        cost = 95.0
        eu = value_option_single_horizon(params(horizons=4), cost, horizon=4)
        am = value_option_single_horizon(params(horizons=4, style="american"), cost, horizon=4)
        for eu_node, am_node in zip(eu.nodes, am.nodes):
            assert am_node.value >= eu_node.value - 1e-12

    def test_american_at_least_intrinsic_everywhere(self):
        am = value_option_single_horizon(params(horizons=4, style="american"), 95.0, horizon=4)
        for node in am.nodes:
            assert node.value >= max(0.0, node.s - 95.0) - 1e-12


# -- properties ---------------------------------------------------------------

valid_rates = st.floats(min_value=0.0, max_value=0.5, allow_nan=False)


@st.composite
def arbitrage_free(draw):
    r = draw(valid_rates)
    growth = 1.0 + r
    d = draw(st.floats(min_value=0.05, max_value=growth * 0.98, allow_nan=False))
    u = draw(st.floats(min_value=growth * 1.02, max_value=growth * 4.0, allow_nan=False))
    return u, d, r


@given(arbitrage_free())
def test_probability_strictly_inside_unit_interval(triple):
    u, d, r = triple
    p = risk_neutral_prob(u, d, r)
    assert 0.0 < p < 1.0


@given(
    arbitrage_free(),
    st.floats(min_value=1.0, max_value=1e4, allow_nan=False),
    st.floats(min_value=0.0, max_value=1e4, allow_nan=False),
    st.integers(min_value=1, max_value=6),
    st.floats(min_value=0.01, max_value=100.0, allow_nan=False),
)
@settings(max_examples=200)
def test_homogeneity_degree_one(triple, s0, cost, horizon, c):
    u, d, r = triple
    base = value_option_single_horizon(
        params(s0=s0, u=u, d=d, r=r, horizons=horizon), cost, horizon
    ).price
    scaled = value_option_single_horizon(
        params(s0=c * s0, u=u, d=d, r=r, horizons=horizon), c * cost, horizon
    ).price
    assert scaled == pytest.approx(c * base, rel=1e-9, abs=1e-9)


@given(
    arbitrage_free(),
    st.floats(min_value=1.0, max_value=1e4, allow_nan=False),
    st.floats(min_value=0.0, max_value=1e4, allow_nan=False),
    st.integers(min_value=1, max_value=6),
    st.sampled_from(["one-minus-r", "one-plus-r"]),
    st.sampled_from(["european", "american"]),
)
@settings(max_examples=200)
def test_all_node_values_non_negative(triple, s0, cost, horizon, convention, style):
    u, d, r = triple
    result = value_option_single_horizon(
        params(s0=s0, u=u, d=d, r=r, horizons=horizon, convention=convention, style=style),
        cost,
        horizon,
    )
    assert result.price >= 0.0
    assert all(node.value >= 0.0 for node in result.nodes)


@given(
    arbitrage_free(),
    st.floats(min_value=1.0, max_value=1e4, allow_nan=False),
    st.floats(min_value=0.0, max_value=1e4, allow_nan=False),
    st.floats(min_value=1.001, max_value=2.0, allow_nan=False),
    st.integers(min_value=1, max_value=6),
)
@settings(max_examples=200)
def test_price_monotone_in_seed_and_cost(triple, s0, cost, bump, horizon):
    u, d, r = triple
    price = value_option_single_horizon(
        params(s0=s0, u=u, d=d, r=r, horizons=horizon), cost, horizon
    ).price
    higher_seed = value_option_single_horizon(
        params(s0=s0 * bump, u=u, d=d, r=r, horizons=horizon), cost, horizon
    ).price
    higher_cost = value_option_single_horizon(
        params(s0=s0, u=u, d=d, r=r, horizons=horizon), cost * bump + 1.0, horizon
    ).price
    assert higher_seed >= price - 1e-9
    assert higher_cost <= price + 1e-9


@given(st.floats(min_value=0.0, max_value=0.5), st.floats(min_value=0.01, max_value=5.0))
def test_constraint_violations_always_rejected(r, slack):
    growth = 1.0 + r
    with pytest.raises(NoArbitrageError):
        risk_neutral_prob(growth + slack, growth + slack / 2, r)  # d >= 1 + r
    with pytest.raises(NoArbitrageError):
        risk_neutral_prob(growth - min(slack, growth * 0.5) / 2, 0.01, r)  # u <= 1 + r


# -- exports ------------------------------------------------------------------

class TestExports:
    def test_dot_is_stable_and_labeled(self):
        grid = value_option_single_horizon(params(horizons=2), 95.0, horizon=2)
        dot_a = grid_to_dot(grid)
        dot_b = grid_to_dot(
            value_option_single_horizon(params(horizons=2), 95.0, horizon=2)
        )
        assert dot_a == dot_b
        assert 'label="S=' in dot_a
        assert '[label="u"]' in dot_a and '[label="d"]' in dot_a
        assert dot_a.startswith("digraph lattice {")

    def test_dot_for_raw_lattice(self):
        lattice = build_lattice(params(horizons=1), exercise_cost=95.0)
        dot = grid_to_dot(lattice)
        assert "n_0_0" in dot and "n_1_1" in dot

    def test_json_grid_counts(self):
        grid = value_option_single_horizon(params(horizons=3), 95.0, horizon=3)
        obj = grid_to_json_obj(grid)
        assert obj["levels"] == 3
        assert len(obj["nodes"]) == 10
        assert {"t", "j", "s", "f"} == set(obj["nodes"][0])

    def test_json_grid_values_match_nodes(self):
        grid = value_option_single_horizon(params(horizons=2), 95.0, horizon=2)
        obj = grid_to_json_obj(grid)
        root = next(n for n in obj["nodes"] if n["t"] == 0)
        assert root["f"] == grid.price
