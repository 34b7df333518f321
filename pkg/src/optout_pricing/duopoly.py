"""Two providers choosing opt-out costs on a shared grid.

Payoffs come from the exact duopoly shares. Pure equilibria are found by an
exhaustive scan; ``regret`` certifies any cell and best-response dynamics
offer a second, constructive route to equilibria.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence, Union

import numpy as np

from .decision import Offer, Shares, shares_duopoly
from .population import ValuationDistribution
from .single_provider import revenue_yield

# Payoffs within REL_TOL * (largest |payoff| of that player) count as equal.
REL_TOL = 1e-12


@dataclass(frozen=True)
class ProviderParams:
    revenue_rate: float
    gamma: float
    benefit: float

    def __post_init__(self):
        if not (self.revenue_rate > 0 and math.isfinite(self.revenue_rate)):
            raise ValueError(f"revenue_rate must be > 0, got {self.revenue_rate}")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError(f"gamma must lie in [0, 1], got {self.gamma}")
        if not (self.benefit >= 0 and math.isfinite(self.benefit)):
            raise ValueError(f"benefit must be >= 0, got {self.benefit}")


@dataclass(frozen=True)
class DuopolyParams:
    provider1: ProviderParams
    provider2: ProviderParams
    dist: ValuationDistribution

    @classmethod
    def symmetric(cls, provider: ProviderParams, dist: ValuationDistribution) -> "DuopolyParams":
        return cls(provider, provider, dist)

    def with_both(self, **changes) -> "DuopolyParams":
        """Apply the same field changes to both providers."""
        return replace(
            self,
            provider1=replace(self.provider1, **changes),
            provider2=replace(self.provider2, **changes),
        )


@dataclass(frozen=True)
class CostGrid:
    """Strictly increasing costs, optionally followed by a "no opt-out" strategy."""

    values: tuple[float, ...]
    no_optout: bool = False

    def __post_init__(self):
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if not vals and not self.no_optout:
            raise ValueError("cost grid is empty")
        if any(not (v >= 0 and math.isfinite(v)) for v in vals):
            raise ValueError("grid costs must be finite and >= 0")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ValueError("grid costs must be strictly increasing")

    @classmethod
    def from_range(cls, lo: float, hi: float, step: float, no_optout: bool = False) -> "CostGrid":
        from .ranges import inclusive_range

        return cls(tuple(inclusive_range(lo, hi, step)), no_optout)

    @property
    def entries(self) -> tuple[Optional[float], ...]:
        return self.values + ((None,) if self.no_optout else ())

    def __len__(self) -> int:
        return len(self.values) + int(self.no_optout)


@dataclass(frozen=True, eq=False)
class PayoffMatrix:
    """``u1[i, j]``, ``u2[i, j]``: payoffs when provider 1 plays row ``i`` and provider 2 column ``j``."""

    u1: np.ndarray
    u2: np.ndarray
    grid: Optional[CostGrid] = None
    shares: Optional[list] = field(default=None, repr=False)

    def __post_init__(self):
        u1 = np.asarray(self.u1, dtype=float)
        u2 = np.asarray(self.u2, dtype=float)
        if u1.ndim != 2 or u1.shape[0] != u1.shape[1] or u1.shape != u2.shape:
            raise ValueError(f"payoff arrays must be equal square matrices, got {u1.shape}, {u2.shape}")
        if self.grid is not None and len(self.grid) != u1.shape[0]:
            raise ValueError("payoff matrix size does not match the grid")
        object.__setattr__(self, "u1", u1)
        object.__setattr__(self, "u2", u2)

    @property
    def n(self) -> int:
        return self.u1.shape[0]

    def tolerances(self) -> tuple[float, float]:
        return (
            REL_TOL * float(np.abs(self.u1).max(initial=0.0)),
            REL_TOL * float(np.abs(self.u2).max(initial=0.0)),
        )

    def cost_pair(self, cell: tuple[int, int]) -> tuple[Optional[float], Optional[float]]:
        if self.grid is None:
            raise ValueError("matrix has no cost grid attached")
        e = self.grid.entries
        return e[cell[0]], e[cell[1]]


@dataclass(frozen=True)
class NashResult:
    pure_cells: tuple[tuple[int, int], ...]
    regret: dict[tuple[int, int], float]


@dataclass(frozen=True)
class Converged:
    cell: tuple[int, int]


@dataclass(frozen=True)
class Cycle:
    cells: tuple[tuple[int, int], ...]


@dataclass(frozen=True)
class MaxIter:
    pass


Outcome = Union[Converged, Cycle, MaxIter]


@dataclass(frozen=True)
class DynamicsResult:
    path: tuple[tuple[int, int], ...]
    outcome: Outcome


def cell_shares(params: DuopolyParams, c1: Optional[float], c2: Optional[float]) -> Shares:
    return shares_duopoly(
        params.dist,
        Offer(params.provider1.benefit, c1),
        Offer(params.provider2.benefit, c2),
    )


def payoff_matrix(params: DuopolyParams, grid: CostGrid, keep_shares: bool = False) -> PayoffMatrix:
    p1, p2 = params.provider1, params.provider2
    entries = grid.entries
    n = len(entries)
    u1 = np.empty((n, n))
    u2 = np.empty((n, n))
    kept = [] if keep_shares else None
    for i, c1 in enumerate(entries):
        row = []
        for j, c2 in enumerate(entries):
            s = cell_shares(params, c1, c2)
            u1[i, j] = p1.revenue_rate * revenue_yield(s, p1.gamma, 1)
            u2[i, j] = p2.revenue_rate * revenue_yield(s, p2.gamma, 2)
            row.append(s)
        if kept is not None:
            kept.append(row)
    return PayoffMatrix(u1, u2, grid, kept)


def regret(matrix: PayoffMatrix, cell: tuple[int, int]) -> float:
    """Largest gain either provider could get by deviating alone from ``cell``."""
    i, j = _check_cell(matrix, cell)
    gain1 = matrix.u1[:, j].max() - matrix.u1[i, j]
    gain2 = matrix.u2[i, :].max() - matrix.u2[i, j]
    return float(max(gain1, gain2, 0.0))


def pure_nash(matrix: PayoffMatrix) -> NashResult:
    tol1, tol2 = matrix.tolerances()
    best1 = matrix.u1 >= matrix.u1.max(axis=0, keepdims=True) - tol1
    best2 = matrix.u2 >= matrix.u2.max(axis=1, keepdims=True) - tol2
    cells = tuple((int(i), int(j)) for i, j in zip(*np.nonzero(best1 & best2)))
    return NashResult(cells, {c: regret(matrix, c) for c in cells})


def best_responses(matrix: PayoffMatrix, player: int, opponent_move: int) -> tuple[int, ...]:
    """Indices maximizing ``player``'s payoff against ``opponent_move``, ascending."""
    if player not in (1, 2):
        raise ValueError(f"player must be 1 or 2, got {player}")
    if not 0 <= opponent_move < matrix.n:
        raise IndexError(f"opponent move {opponent_move} out of range for {matrix.n} strategies")
    tol1, tol2 = matrix.tolerances()
    if player == 1:
        payoff, tol = matrix.u1[:, opponent_move], tol1
    else:
        payoff, tol = matrix.u2[opponent_move, :], tol2
    return tuple(int(k) for k in np.flatnonzero(payoff >= payoff.max() - tol))


def best_response_dynamics(
    matrix: PayoffMatrix, start: tuple[int, int], max_iter: int = 1000
) -> DynamicsResult:
    """Alternating best responses, provider 1 first.

    A provider already playing a best response stays put; otherwise it moves
    to its smallest-index best response. One round is a move by each
    provider. The path lists the cell after every round, starting with
    ``start``, and never grows beyond ``max_iter`` cells.
    """
    if max_iter < 1:
        raise ValueError(f"max_iter must be >= 1, got {max_iter}")
    cell = _check_cell(matrix, start)
    path = [cell]
    seen = {cell: 0}
    while True:
        i, j = cell
        br1 = best_responses(matrix, 1, j)
        i = i if i in br1 else br1[0]
        br2 = best_responses(matrix, 2, i)
        j = j if j in br2 else br2[0]
        nxt = (i, j)
        if nxt == cell:
            return DynamicsResult(tuple(path), Converged(cell))
        if nxt in seen:
            return DynamicsResult(tuple(path), Cycle(tuple(path[seen[nxt]:])))
        if len(path) >= max_iter:
            return DynamicsResult(tuple(path), MaxIter())
        seen[nxt] = len(path)
        path.append(nxt)
        cell = nxt


def _check_cell(matrix: PayoffMatrix, cell: Sequence[int]) -> tuple[int, int]:
    i, j = int(cell[0]), int(cell[1])
    if not (0 <= i < matrix.n and 0 <= j < matrix.n):
        raise IndexError(f"cell {tuple(cell)} out of range for a {matrix.n}x{matrix.n} matrix")
    return i, j
