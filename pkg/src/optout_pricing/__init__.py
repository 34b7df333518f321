"""Revenue-optimal pricing of privacy opt-out options for one or two providers."""

from .decision import (
    Abstain,
    Offer,
    OptOut,
    Shares,
    Targeted,
    shares_duopoly,
    shares_exact,
    shares_monte_carlo,
    shares_single,
    user_choice,
)
from .duopoly import (
    CostGrid,
    Converged,
    Cycle,
    DuopolyParams,
    MaxIter,
    PayoffMatrix,
    ProviderParams,
    best_response_dynamics,
    best_responses,
    payoff_matrix,
    pure_nash,
    regret,
)
from .population import Empirical, Exponential, PointMass, Uniform
from .single_provider import (
    MarketParams,
    choose_tool,
    optimal_cost,
    oracle_optimal_cost,
    revenue,
    revenue_no_optout,
)
from .sweep import SweepSpec, duopoly_sweep, single_sweep

__version__ = "0.1.0"
