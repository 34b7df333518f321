"""Revenue of a single provider as a function of the opt-out cost.

A targeted user is worth ``revenue_rate``; a user who opted out is worth the
fraction ``gamma`` of that. Costs are searched on a grid: the coarse grid,
then a fine grid around the coarse winner.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Optional

from .decision import Offer, Shares, shares_single
from .population import ValuationDistribution

# Revenue yields within this distance count as tied (yields live in [0, 1]).
TIE_TOL = 1e-12
ORACLE_STEP = 1e-4
REFINE_FACTOR = 100


@dataclass(frozen=True)
class MarketParams:
    revenue_rate: float
    gamma: float
    dist: ValuationDistribution
    benefit: float

    def __post_init__(self):
        if not (self.revenue_rate > 0 and math.isfinite(self.revenue_rate)):
            raise ValueError(f"revenue_rate must be > 0, got {self.revenue_rate}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not (self.benefit >= 0 and math.isfinite(self.benefit)):
            raise ValueError(f"benefit must be >= 0, got {self.benefit}")

    def with_(self, **changes) -> "MarketParams":
        return replace(self, **changes)


@dataclass(frozen=True)
class SingleSolution:
    c_star: Optional[float]
    revenue_star: float
    baseline_no_optout: float
    shares_at_opt: Shares


@dataclass(frozen=True)
class ToolChoice:
    chosen: str  # "low" or "high"
    revenue_low: float
    revenue_high: float

    @property
    def chose_low(self) -> bool:
        return self.chosen == "low"


def revenue_yield(shares: Shares, gamma: float, provider: int = 1) -> float:
    """Revenue per unit of ``revenue_rate``: targeted mass plus ``gamma`` times opted-out mass."""
    return shares.targeted[provider - 1] + gamma * shares.optout[provider - 1]


def _yield(params: MarketParams, c: Optional[float]) -> float:
    return revenue_yield(shares_single(params.dist, Offer(params.benefit, c)), params.gamma)


def revenue(params: MarketParams, c: Optional[float]) -> float:
    if c is not None and c < 0:
        raise ValueError(f"opt-out cost must be >= 0, got {c}")
    return params.revenue_rate * _yield(params, c)


def revenue_no_optout(params: MarketParams) -> float:
    return revenue(params, None)


def default_c_max(params: MarketParams) -> float:
    """Beyond both the benefit and (practically) the whole support, revenue is flat."""
    top = params.dist.quantile(1.0 - 1e-9)
    c_max = max(params.benefit, top)
    return c_max if c_max > 0 else 1.0


def _grid(c_max: float, step: float) -> list[float]:
    count = math.floor(c_max / step + 1e-9)
    pts = [k * step for k in range(count + 1)]
    if c_max - pts[-1] > 1e-9 * step:
        pts.append(c_max)
    return pts


def _select(params: MarketParams, candidates: Iterable[Optional[float]]) -> SingleSolution:
    # The argmax runs on the yield, so it does not depend on revenue_rate.
    costs = sorted({c for c in candidates if c is not None})
    scored = [(c, _yield(params, c)) for c in costs]
    scored.append((None, _yield(params, None)))
    best = max(y for _, y in scored)
    c_star = next(c for c, y in scored if y >= best - TIE_TOL)
    return SingleSolution(
        c_star=c_star,
        revenue_star=revenue(params, c_star),
        baseline_no_optout=revenue_no_optout(params),
        shares_at_opt=shares_single(params.dist, Offer(params.benefit, c_star)),
    )


def _kinks(params: MarketParams, c_max: float) -> list[float]:
    # Revenue jumps or peaks only at the benefit and at atoms of the law.
    pts = [params.benefit, *params.dist.atoms()]
    return [c for c in pts if 0.0 <= c <= c_max]


def optimal_cost(
    params: MarketParams, c_max: Optional[float] = None, step: float = 0.01
) -> SingleSolution:
    """Revenue-maximizing opt-out cost by two-stage grid search.

    The coarse grid ``0, step, ..., c_max`` (plus "no opt-out", the benefit and
    any atoms of the valuation law) is refined on ``[c0 - step, c0 + step]`` at
    spacing ``step / 100`` around the coarse winner ``c0``. Among candidates
    within ``TIE_TOL`` of the best yield the smallest cost wins, and offering
    an opt-out wins over not offering one.
    """
    if c_max is None:
        c_max = default_c_max(params)
    if not c_max > 0:
        raise ValueError(f"c_max must be > 0, got {c_max}")
    if not 0 < step <= c_max:
        raise ValueError(f"step must satisfy 0 < step <= c_max, got {step}")

    coarse = _grid(c_max, step) + _kinks(params, c_max)
    first = _select(params, coarse)
    if first.c_star is None:
        return first
    fine_step = step / REFINE_FACTOR
    c0 = first.c_star
    fine = [c0 + j * fine_step for j in range(-REFINE_FACTOR, REFINE_FACTOR + 1)]
    fine = [c for c in fine if 0.0 <= c <= c_max]
    return _select(params, coarse + fine)


def oracle_optimal_cost(params: MarketParams, c_max: Optional[float] = None) -> SingleSolution:
    """Exhaustive search on the fixed grid of spacing 1e-4; no refinement, no kink candidates."""
    if c_max is None:
        c_max = default_c_max(params)
    if not c_max > 0:
        raise ValueError(f"c_max must be > 0, got {c_max}")
    return _select(params, _grid(c_max, ORACLE_STEP))


def choose_tool(params: MarketParams, c_low: float, c_high: float) -> ToolChoice:
    """Pick the more profitable of two opt-out tools; ties go to the cheaper one."""
    if not 0 <= c_low < c_high:
        raise ValueError(f"need 0 <= c_low < c_high, got {c_low}, {c_high}")
    y_low, y_high = _yield(params, c_low), _yield(params, c_high)
    chosen = "high" if y_high > y_low + TIE_TOL else "low"
    return ToolChoice(chosen, revenue(params, c_low), revenue(params, c_high))
