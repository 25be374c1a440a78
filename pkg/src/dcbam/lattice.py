"""Recombining binomial lattice of system values and single-horizon option
pricing by backward induction.

The engine supports two discount conventions for the per-step denominator:
``one-minus-r`` divides by (1 - r) and ``one-plus-r`` divides by (1 + r).
Both use the same risk-adjusted probability p = (1 + r - d) / (u - d), which
lies strictly inside (0, 1) exactly when d < 1 + r < u holds.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DegenerateLatticeError, DomainError, InvariantError, NoArbitrageError


class DiscountConvention(str, Enum):
    ONE_MINUS_R = "one-minus-r"
    ONE_PLUS_R = "one-plus-r"


class ExerciseStyle(str, Enum):
    EUROPEAN = "european"
    AMERICAN = "american"


def risk_neutral_prob(u: float, d: float, r: float) -> float:
    """Risk-adjusted probability p = (1 + r - d) / (u - d).

    Raises DegenerateLatticeError when u == d and NoArbitrageError when
    d < 1 + r < u fails, naming the violated inequality.
    """
    if u == d:
        raise DegenerateLatticeError(f"u == d == {u}: probability undefined")
    growth = 1.0 + r
    if not d < growth:
        raise NoArbitrageError(f"d < 1 + r violated: d={d}, 1+r={growth}")
    if not growth < u:
        raise NoArbitrageError(f"1 + r < u violated: u={u}, 1+r={growth}")
    return (growth - d) / (u - d)


@dataclass(frozen=True)
class LatticeParams:
    """Inputs for one lattice: base system value, decision seed, up/down
    factors, per-step rate, horizon count, and pricing conventions.

    The no-arbitrage constraint d < 1 + r < u is validated here, so any
    LatticeParams instance is safe to price with.
    """

    v_s: float
    s0_dad: float
    u: float
    d: float
    r: float
    horizons: int
    convention: DiscountConvention = DiscountConvention.ONE_MINUS_R
    style: ExerciseStyle = ExerciseStyle.EUROPEAN

    def __post_init__(self):
        object.__setattr__(self, "convention", DiscountConvention(self.convention))
        object.__setattr__(self, "style", ExerciseStyle(self.style))
        if self.v_s < 0:
            raise InvariantError(f"v_s must be >= 0, got {self.v_s}")
        if self.s0_dad < 0:
            raise InvariantError(f"s0_dad must be >= 0, got {self.s0_dad}")
        if self.u <= 0 or self.d <= 0:
            raise InvariantError(f"u and d must be positive, got u={self.u}, d={self.d}")
        if self.r < 0:
            raise InvariantError(f"r must be >= 0, got {self.r}")
        if self.horizons < 1:
            raise InvariantError(f"horizons must be >= 1, got {self.horizons}")
        risk_neutral_prob(self.u, self.d, self.r)  # no-arbitrage gate
        if self.convention is DiscountConvention.ONE_MINUS_R and self.r >= 1:
            raise InvariantError(
                f"r must be < 1 under the one-minus-r convention, got {self.r}"
            )

    @property
    def s0(self) -> float:
        return self.v_s + self.s0_dad

    @property
    def discount(self) -> float:
        if self.convention is DiscountConvention.ONE_MINUS_R:
            return 1.0 - self.r
        return 1.0 + self.r


def initial_system_value(v_s: float, dad_base_values: list[float]) -> float:
    """System value with decisions in place: the base value plus the summed
    per-decision values."""
    return v_s + sum(dad_base_values)


@dataclass(frozen=True)
class LatticeNode:
    t: int
    j: int  # number of up moves
    s: float
    payoff: float


@dataclass(frozen=True)
class Lattice:
    """Triangular grid of system values; level t holds t + 1 nodes and
    s(t, j) = S0 * u^j * d^(t-j). Immutable once built."""

    params: LatticeParams
    exercise_cost: float
    nodes: tuple[LatticeNode, ...]

    def node(self, t: int, j: int) -> LatticeNode:
        if not (0 <= t <= self.params.horizons and 0 <= j <= t):
            raise IndexError(f"node ({t}, {j}) outside lattice")
        return self.nodes[t * (t + 1) // 2 + j]

    def level(self, t: int) -> tuple[LatticeNode, ...]:
        if not 0 <= t <= self.params.horizons:
            raise IndexError(f"level {t} outside 0..{self.params.horizons}")
        start = t * (t + 1) // 2
        return self.nodes[start : start + t + 1]


def build_lattice(params: LatticeParams, exercise_cost: float = 0.0) -> Lattice:
    """Populate the multiplicative value grid. Each node also carries its
    intrinsic payoff max(0, s - exercise_cost)."""
    s0 = params.s0
    nodes = []
    for t in range(params.horizons + 1):
        for j in range(t + 1):
            s = s0 * params.u**j * params.d ** (t - j)
            nodes.append(LatticeNode(t=t, j=j, s=s, payoff=max(0.0, s - exercise_cost)))
    return Lattice(params=params, exercise_cost=exercise_cost, nodes=tuple(nodes))


def terminal_payoffs(lattice: Lattice, exercise_cost: float, horizon: int) -> list[float]:
    """Exercise payoffs max(0, s - cost) across one level, ordered by j."""
    if not 1 <= horizon <= lattice.params.horizons:
        raise IndexError(
            f"horizon {horizon} outside 1..{lattice.params.horizons}"
        )
    return [max(0.0, node.s - exercise_cost) for node in lattice.level(horizon)]


@dataclass(frozen=True)
class ValuedNode:
    t: int
    j: int
    s: float
    value: float


@dataclass(frozen=True)
class HorizonValuation:
    """Backward-induced option values for an option expiring at ``horizon``.

    ``nodes`` covers levels 0..horizon ordered by (t, j); the price is the
    root value.
    """

    horizon: int
    price: float
    nodes: tuple[ValuedNode, ...]

    def node(self, t: int, j: int) -> ValuedNode:
        if not (0 <= t <= self.horizon and 0 <= j <= t):
            raise IndexError(f"node ({t}, {j}) outside valuation grid")
        return self.nodes[t * (t + 1) // 2 + j]

    def level(self, t: int) -> tuple[ValuedNode, ...]:
        start = t * (t + 1) // 2
        return self.nodes[start : start + t + 1]

    def as_grid(self) -> list[dict]:
        return [
            {"t": n.t, "j": n.j, "s": n.s, "f": n.value} for n in self.nodes
        ]


def value_option_single_horizon(
    params: LatticeParams, exercise_cost: float, horizon: int
) -> HorizonValuation:
    """Price the call option expiring at ``horizon`` steps.

    Terminal values are the exercise payoffs; each interior node carries
    (p * f_up + (1 - p) * f_down) / D, where D is 1 - r or 1 + r depending
    on the convention. Under american style the node value is the maximum
    of that continuation and the node's own exercise payoff.
    """
    if not 1 <= horizon <= params.horizons:
        raise IndexError(f"horizon {horizon} outside 1..{params.horizons}")
    if exercise_cost < 0:
        raise DomainError(f"exercise_cost must be >= 0, got {exercise_cost}")
    p = risk_neutral_prob(params.u, params.d, params.r)
    disc = params.discount
    american = params.style is ExerciseStyle.AMERICAN

    s0 = params.s0

    def s_at(t: int, j: int) -> float:
        return s0 * params.u**j * params.d ** (t - j)

    values = [max(0.0, s_at(horizon, j) - exercise_cost) for j in range(horizon + 1)]
    levels = [values]
    for t in range(horizon - 1, -1, -1):
        level = []
        for j in range(t + 1):
            cont = (p * values[j + 1] + (1.0 - p) * values[j]) / disc
            if american:
                cont = max(cont, max(0.0, s_at(t, j) - exercise_cost))
            level.append(cont)
        values = level
        levels.append(level)
    levels.reverse()

    nodes = tuple(
        ValuedNode(t=t, j=j, s=s_at(t, j), value=levels[t][j])
        for t in range(horizon + 1)
        for j in range(t + 1)
    )
    return HorizonValuation(horizon=horizon, price=levels[0][0], nodes=nodes)


def grid_to_dot(grid: Lattice | HorizonValuation) -> str:
    """Render a lattice or a valuation grid as DOT, nodes labeled with S and
    f, edges labeled u/d. Output is byte-stable for equal inputs."""
    rows = _grid_rows(grid)
    depth = max(t for t, _, _, _ in rows)
    lines = ["digraph lattice {", "  rankdir=LR;"]
    for t, j, s, f in rows:
        lines.append(f'  n_{t}_{j} [label="S={s!r}\\nf={f!r}"];')
    for t, j, _, _ in rows:
        if t < depth:
            lines.append(f"  n_{t}_{j} -> n_{t + 1}_{j + 1} [label=\"u\"];")
            lines.append(f"  n_{t}_{j} -> n_{t + 1}_{j} [label=\"d\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def grid_to_json_obj(grid: Lattice | HorizonValuation) -> dict:
    """Lattice/valuation grid as a plain JSON-ready object."""
    rows = _grid_rows(grid)
    depth = max(t for t, _, _, _ in rows)
    return {
        "levels": depth,
        "nodes": [{"t": t, "j": j, "s": s, "f": f} for t, j, s, f in rows],
    }


def _grid_rows(grid: Lattice | HorizonValuation) -> list[tuple[int, int, float, float]]:
    if isinstance(grid, Lattice):
        return [(n.t, n.j, n.s, n.payoff) for n in grid.nodes]
    return [(n.t, n.j, n.s, n.value) for n in grid.nodes]
