"""Privacy-valuation distributions.

Each family exposes exact CDF queries (``prob_le`` / ``prob_lt``), a
generalized inverse (``quantile``), its mean, and reproducible
inverse-transform sampling.

Sampling uses NumPy's PCG64 bit generator seeded through ``SeedSequence``.
Only the raw 64-bit stream is consumed (``random_raw``), which NumPy keeps
stable across versions and platforms; the top 53 bits become a uniform
double in [0, 1).
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from itertools import accumulate
from typing import Any, Sequence, Union

import numpy as np

_UINT64_MASK = (1 << 64) - 1


def uniform_stream(seed: int, n: int) -> np.ndarray:
    """Return ``n`` doubles in [0, 1) determined by ``seed`` alone."""
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    bitgen = np.random.PCG64(np.random.SeedSequence(int(seed) & _UINT64_MASK))
    raw = bitgen.random_raw(n)
    return (raw >> np.uint64(11)).astype(np.float64) * (1.0 / 9007199254740992.0)


def _check_prob(p: float) -> None:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability must lie in [0, 1], got {p}")


@dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo < self.hi) or not math.isfinite(self.hi):
            raise ValueError(f"uniform needs 0 <= lo < hi, got lo={self.lo}, hi={self.hi}")

    def prob_le(self, x: float) -> float:
        if x <= self.lo:
            return 0.0
        if x >= self.hi:
            return 1.0
        return (x - self.lo) / (self.hi - self.lo)

    prob_lt = prob_le

    def quantile(self, p: float) -> float:
        _check_prob(p)
        return self.lo + p * (self.hi - self.lo)

    def mean(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def atoms(self) -> tuple[float, ...]:
        return ()

    def _from_uniform(self, u: np.ndarray) -> np.ndarray:
        return self.lo + u * (self.hi - self.lo)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "uniform", "lo": self.lo, "hi": self.hi}


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self):
        if not (self.rate > 0.0 and math.isfinite(self.rate)):
            raise ValueError(f"exponential rate must be > 0, got {self.rate}")

    def prob_le(self, x: float) -> float:
        if x <= 0.0:
            return 0.0
        return -math.expm1(-self.rate * x)

    prob_lt = prob_le

    def quantile(self, p: float) -> float:
        _check_prob(p)
        if p == 1.0:
            return math.inf
        return -math.log1p(-p) / self.rate

    def mean(self) -> float:
        return 1.0 / self.rate

    def atoms(self) -> tuple[float, ...]:
        return ()

    def _from_uniform(self, u: np.ndarray) -> np.ndarray:
        return -np.log1p(-u) / self.rate

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "exponential", "rate": self.rate}


@dataclass(frozen=True)
class PointMass:
    at: float

    def __post_init__(self):
        if not (self.at >= 0.0 and math.isfinite(self.at)):
            raise ValueError(f"point mass location must be >= 0, got {self.at}")

    def prob_le(self, x: float) -> float:
        return 1.0 if x >= self.at else 0.0

    def prob_lt(self, x: float) -> float:
        return 1.0 if x > self.at else 0.0

    def quantile(self, p: float) -> float:
        _check_prob(p)
        return self.at

    def mean(self) -> float:
        return self.at

    def atoms(self) -> tuple[float, ...]:
        return (self.at,)

    def _from_uniform(self, u: np.ndarray) -> np.ndarray:
        return np.full(u.shape, self.at, dtype=np.float64)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "pointmass", "at": self.at}


@dataclass(frozen=True)
class Empirical:
    """Finite discrete law given as ``(value, weight)`` pairs.

    Values must be strictly increasing and non-negative; weights positive and
    summing to one within 1e-12.
    """

    points: tuple[tuple[float, float], ...]
    _values: tuple[float, ...] = field(init=False, repr=False, compare=False)
    _cum: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = tuple((float(v), float(w)) for v, w in self.points)
        if not pts:
            raise ValueError("empirical distribution needs at least one point")
        values = tuple(v for v, _ in pts)
        weights = [w for _, w in pts]
        if any(not (math.isfinite(v) and v >= 0.0) for v in values):
            raise ValueError("empirical values must be finite and >= 0")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValueError("empirical values must be strictly increasing")
        if any(not (w > 0.0) for w in weights):
            raise ValueError("empirical weights must be > 0")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise ValueError(f"empirical weights must sum to 1, got {math.fsum(weights)!r}")
        cum = list(accumulate(weights))
        cum[-1] = 1.0
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "_values", values)
        object.__setattr__(self, "_cum", tuple(min(c, 1.0) for c in cum))

    def prob_le(self, x: float) -> float:
        k = bisect.bisect_right(self._values, x)
        return self._cum[k - 1] if k else 0.0

    def prob_lt(self, x: float) -> float:
        k = bisect.bisect_left(self._values, x)
        return self._cum[k - 1] if k else 0.0

    def quantile(self, p: float) -> float:
        _check_prob(p)
        k = bisect.bisect_left(self._cum, p)
        return self._values[min(k, len(self._values) - 1)]

    def mean(self) -> float:
        return math.fsum(v * w for v, w in self.points)

    def atoms(self) -> tuple[float, ...]:
        return self._values

    def _from_uniform(self, u: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(np.asarray(self._cum), u, side="left")
        idx = np.minimum(idx, len(self._values) - 1)
        return np.asarray(self._values)[idx]

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "empirical", "points": [[v, w] for v, w in self.points]}


ValuationDistribution = Union[Uniform, Exponential, PointMass, Empirical]


def prob_le(dist: ValuationDistribution, x: float) -> float:
    """P[v <= x]."""
    return dist.prob_le(x)


def prob_lt(dist: ValuationDistribution, x: float) -> float:
    """P[v < x]; differs from ``prob_le`` only at atoms."""
    return dist.prob_lt(x)


def quantile(dist: ValuationDistribution, p: float) -> float:
    """Generalized inverse CDF, ``inf{x : P[v <= x] >= p}``."""
    return dist.quantile(p)


def mean(dist: ValuationDistribution) -> float:
    return dist.mean()


def sample(dist: ValuationDistribution, seed: int, n: int) -> np.ndarray:
    """Draw ``n`` valuations by inverse transform of :func:`uniform_stream`."""
    return dist._from_uniform(uniform_stream(seed, n))


def from_dict(data: dict[str, Any]) -> ValuationDistribution:
    """Build a distribution from its JSON fragment, e.g. ``{"kind": "uniform", "lo": 0, "hi": 1}``."""
    if not isinstance(data, dict):
        raise ValueError("distribution must be a JSON object")
    kind = data.get("kind")
    expected = {
        "uniform": {"kind", "lo", "hi"},
        "exponential": {"kind", "rate"},
        "pointmass": {"kind", "at"},
        "empirical": {"kind", "points"},
    }
    if kind not in expected:
        raise ValueError(f"distribution.kind must be one of {sorted(expected)}, got {kind!r}")
    keys = set(data)
    if keys != expected[kind]:
        extra = sorted(keys - expected[kind])
        missing = sorted(expected[kind] - keys)
        name = (extra or missing)[0]
        what = "unknown" if extra else "missing"
        raise ValueError(f"distribution.{name}: {what} field for kind {kind!r}")
    for name in expected[kind] - {"kind", "points"}:
        if not _is_number(data[name]):
            raise ValueError(f"distribution.{name} must be a number")
    if kind == "uniform":
        return Uniform(float(data["lo"]), float(data["hi"]))
    if kind == "exponential":
        return Exponential(float(data["rate"]))
    if kind == "pointmass":
        return PointMass(float(data["at"]))
    pts = data["points"]
    if not isinstance(pts, list) or not all(
        isinstance(p, list) and len(p) == 2 and all(_is_number(x) for x in p) for p in pts
    ):
        raise ValueError("distribution.points must be a list of [value, weight] pairs")
    return Empirical(tuple((float(v), float(w)) for v, w in pts))


def to_dict(dist: ValuationDistribution) -> dict[str, Any]:
    return dist.to_dict()


def _is_number(x: Any) -> bool:
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def empirical(values: Sequence[float], weights: Sequence[float] | None = None) -> Empirical:
    """Convenience constructor; equal weights when ``weights`` is omitted."""
    if weights is None:
        weights = [1.0 / len(values)] * len(values)
    return Empirical(tuple(zip(values, weights)))
