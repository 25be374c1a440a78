"""dcbam: diversified cost-benefit analysis with real-options valuation.

Scores diversified architectural decisions against weighted quality
attributes, prices decision portfolios as call options on a binomial
lattice, and recommends switch / wait / abandon actions.
"""

__version__ = "0.1.0"

from .concordance import RatingMatrix, consistency_report, kendalls_w
from .errors import DcbamError
from .lattice import (
    DiscountConvention,
    ExerciseStyle,
    Lattice,
    LatticeParams,
    build_lattice,
    initial_system_value,
    risk_neutral_prob,
    terminal_payoffs,
    value_option_single_horizon,
)
from .model import (
    ArchitecturalStrategy,
    DiversifiedDecision,
    Portfolio,
    QualityAttributeWeights,
    Scenario,
    check_budget,
    compute_benefit,
    compute_scaled_benefit,
    rank_dads,
    validate_qa_scores,
)
from .valuation import (
    OptionValuation,
    PortfolioValuationRequest,
    Recommendation,
    compare_portfolios,
    diversification_delta,
    value_portfolio,
    whatif_sweep,
)

__all__ = [
    "__version__",
    "ArchitecturalStrategy",
    "DcbamError",
    "DiscountConvention",
    "DiversifiedDecision",
    "ExerciseStyle",
    "Lattice",
    "LatticeParams",
    "OptionValuation",
    "Portfolio",
    "PortfolioValuationRequest",
    "QualityAttributeWeights",
    "RatingMatrix",
    "Recommendation",
    "Scenario",
    "build_lattice",
    "check_budget",
    "compare_portfolios",
    "compute_benefit",
    "compute_scaled_benefit",
    "consistency_report",
    "diversification_delta",
    "initial_system_value",
    "kendalls_w",
    "rank_dads",
    "risk_neutral_prob",
    "terminal_payoffs",
    "validate_qa_scores",
    "value_option_single_horizon",
    "value_portfolio",
    "whatif_sweep",
]
