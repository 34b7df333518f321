"""One-dimensional comparative statics over gamma, benefit or the exponential rate."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional, Union

from .duopoly import CostGrid, DuopolyParams, payoff_matrix, pure_nash
from .population import Exponential
from .single_provider import MarketParams, optimal_cost

AXES = ("gamma", "benefit", "rate")


class SweepError(ValueError):
    """A solver failure at one axis value; ``axis_value`` names it."""

    def __init__(self, axis: str, axis_value: float, cause: Exception):
        super().__init__(f"{axis}={axis_value}: {cause}")
        self.axis = axis
        self.axis_value = axis_value


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple[float, ...]
    base: Union[MarketParams, DuopolyParams]
    c_max: Optional[float] = None
    step: float = 0.01
    grid: Optional[CostGrid] = None

    def __post_init__(self):
        if self.axis not in AXES:
            raise ValueError(f"axis must be one of {AXES}, got {self.axis!r}")
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals:
            raise ValueError("sweep needs at least one axis value")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("axis values must be strictly increasing")
        for v in vals:
            if self.axis == "gamma" and not 0 <= v <= 1:
                raise ValueError(f"gamma value {v} outside [0, 1]")
            if self.axis == "benefit" and not (v >= 0 and math.isfinite(v)):
                raise ValueError(f"benefit value {v} must be >= 0")
            if self.axis == "rate" and not (v > 0 and math.isfinite(v)):
                raise ValueError(f"rate value {v} must be > 0")
        if self.axis == "rate" and not isinstance(self.base.dist, Exponential):
            raise ValueError("the rate axis needs an exponential valuation distribution")


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    c_star: Optional[float]
    revenue_star: float
    revenue_no_optout: float
    optout_share: float


@dataclass(frozen=True)
class DuopolySweepRow:
    axis_value: float
    nash_costs: tuple[tuple[Optional[float], Optional[float]], ...]
    payoffs: tuple[tuple[float, float], ...]


def _single_at(base: MarketParams, axis: str, value: float) -> MarketParams:
    if axis == "rate":
        return replace(base, dist=Exponential(value))
    return replace(base, **{axis: value})


def _duopoly_at(base: DuopolyParams, axis: str, value: float) -> DuopolyParams:
    if axis == "rate":
        return replace(base, dist=Exponential(value))
    return base.with_both(**{axis: value})


def single_sweep(spec: SweepSpec) -> list[SweepRow]:
    if not isinstance(spec.base, MarketParams):
        raise TypeError("single_sweep needs a MarketParams base")
    rows = []
    for value in spec.values:
        try:
            sol = optimal_cost(_single_at(spec.base, spec.axis, value), spec.c_max, spec.step)
        except ValueError as exc:
            raise SweepError(spec.axis, value, exc) from exc
        rows.append(
            SweepRow(
                axis_value=value,
                c_star=sol.c_star,
                revenue_star=sol.revenue_star,
                revenue_no_optout=sol.baseline_no_optout,
                optout_share=sol.shares_at_opt.optout[0],
            )
        )
    return rows


def duopoly_sweep(spec: SweepSpec) -> list[DuopolySweepRow]:
    """Pure Nash cost pairs per axis value; the axis change applies to both providers."""
    if not isinstance(spec.base, DuopolyParams):
        raise TypeError("duopoly_sweep needs a DuopolyParams base")
    if spec.grid is None:
        raise ValueError("duopoly sweep needs a cost grid")
    rows = []
    for value in spec.values:
        try:
            matrix = payoff_matrix(_duopoly_at(spec.base, spec.axis, value), spec.grid)
        except ValueError as exc:
            raise SweepError(spec.axis, value, exc) from exc
        cells = pure_nash(matrix).pure_cells
        rows.append(
            DuopolySweepRow(
                axis_value=value,
                nash_costs=tuple(matrix.cost_pair(c) for c in cells),
                payoffs=tuple((float(matrix.u1[c]), float(matrix.u2[c])) for c in cells),
            )
        )
    return rows

