"""User choice among targeted use, opted-out use and abstention.

Utilities for a user with privacy valuation ``v`` facing provider ``i``:

* targeted use: ``b_i - v``
* opted-out use: ``b_i - c_i`` (only when an opt-out is offered)
* abstain: ``0``

At equal utility, participating beats abstaining and targeted beats
opted-out. A tie between providers goes to the lower index for a single
user (``user_choice``) but splits the tied mass evenly in the aggregate
share computations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .population import ValuationDistribution, sample


@dataclass(frozen=True)
class Offer:
    benefit: float
    opt_out_cost: Optional[float] = None

    def __post_init__(self):
        if not (self.benefit >= 0.0 and math.isfinite(self.benefit)):
            raise ValueError(f"benefit must be >= 0, got {self.benefit}")
        if self.opt_out_cost is not None and not (self.opt_out_cost >= 0.0):
            raise ValueError(f"opt_out_cost must be >= 0, got {self.opt_out_cost}")


@dataclass(frozen=True)
class Targeted:
    provider: int


@dataclass(frozen=True)
class OptOut:
    provider: int


@dataclass(frozen=True)
class Abstain:
    pass


Choice = Union[Targeted, OptOut, Abstain]


@dataclass(frozen=True)
class Shares:
    """Population masses; ``targeted[k]`` and ``optout[k]`` belong to provider ``k + 1``."""

    targeted: tuple[float, ...]
    optout: tuple[float, ...]
    abstain: float

    def total(self) -> float:
        return math.fsum(self.targeted) + math.fsum(self.optout) + self.abstain

    def provider_mass(self, provider: int) -> float:
        return self.targeted[provider - 1] + self.optout[provider - 1]

    def as_dict(self) -> dict[str, float]:
        out = {}
        for k in range(len(self.targeted)):
            out[f"targeted_{k + 1}"] = self.targeted[k]
            out[f"optout_{k + 1}"] = self.optout[k]
        out["abstain"] = self.abstain
        return out

    def max_abs_diff(self, other: "Shares") -> float:
        a, b = self.as_dict(), other.as_dict()
        if a.keys() != b.keys():
            raise ValueError("shares cover different provider counts")
        return max(abs(a[k] - b[k]) for k in a)


def _check_offers(offers: Sequence[Offer]) -> None:
    if not 1 <= len(offers) <= 2:
        raise ValueError(f"expected 1 or 2 offers, got {len(offers)}")


# Options are listed in pointwise priority order: every targeted option, then
# every opt-out, then abstain; provider index ascending within a kind.
def _options(offers: Sequence[Offer]) -> list[tuple[str, int]]:
    opts = [("T", i + 1) for i in range(len(offers))]
    opts += [("O", i + 1) for i, o in enumerate(offers) if o.opt_out_cost is not None]
    return opts


def _utility(kind: str, offer: Offer, v: float) -> float:
    if kind == "T":
        return offer.benefit - v
    return offer.benefit - offer.opt_out_cost


def _winners(offers: Sequence[Offer], v: float) -> tuple[str, tuple[int, ...]]:
    """Kind of the chosen option ('T', 'O' or 'A') and the providers tied for it."""
    best = 0.0
    tied: list[tuple[str, int]] = []
    for kind, i in _options(offers):
        u = _utility(kind, offers[i - 1], v)
        if u > best:
            best, tied = u, [(kind, i)]
        elif u == best:
            tied.append((kind, i))
    if not tied:
        return "A", ()
    kind = "T" if any(k == "T" for k, _ in tied) else "O"
    return kind, tuple(i for k, i in tied if k == kind)


def user_choice(v: float, offers: Sequence[Offer]) -> Choice:
    """Choice of one user with valuation ``v``; provider ties go to the lower index."""
    _check_offers(offers)
    if v < 0:
        raise ValueError(f"valuation must be >= 0, got {v}")
    kind, providers = _winners(offers, v)
    if kind == "A":
        return Abstain()
    return Targeted(providers[0]) if kind == "T" else OptOut(providers[0])


def shares_single(dist: ValuationDistribution, offer: Offer) -> Shares:
    """Exact masses for one provider, atoms resolved per the tie rules."""
    b, c = offer.benefit, offer.opt_out_cost
    if c is not None and c <= b:
        t = dist.prob_le(c)
        return Shares((t,), (1.0 - t,), 0.0)
    t = dist.prob_le(b)
    return Shares((t,), (0.0,), 1.0 - t)


def _breakpoints(dist: ValuationDistribution, offers: Sequence[Offer]) -> list[float]:
    pts = set(dist.atoms())
    for a in offers:
        pts.add(a.benefit)
        for o in offers:
            if o.opt_out_cost is not None:
                pts.add(a.benefit - (o.benefit - o.opt_out_cost))
    return sorted(pts)


def _accumulate(kind: str, providers: tuple[int, ...], mass: float, t: list, o: list) -> float:
    if kind == "A":
        return mass
    share = mass / len(providers)
    target = t if kind == "T" else o
    for i in providers:
        target[i - 1] += share
    return 0.0


def shares_exact(dist: ValuationDistribution, offers: Sequence[Offer]) -> Shares:
    """Exact masses for one or two providers.

    The v-axis is cut at every utility crossing point and every atom of the
    distribution. The choice rule is constant on each open piece, so its mass
    goes to the choice at the midpoint; each cut point carries its own atom.
    """
    _check_offers(offers)
    cuts = _breakpoints(dist, offers)
    t = [0.0] * len(offers)
    o = [0.0] * len(offers)
    abstain = 0.0
    lower_le = 0.0
    prev = None
    for p in cuts:
        mass = dist.prob_lt(p) - lower_le
        if mass > 0.0:
            rep = p - 1.0 if prev is None else 0.5 * (prev + p)
            abstain += _accumulate(*_winners(offers, rep), mass, t, o)
        le = dist.prob_le(p)
        atom = le - dist.prob_lt(p)
        if atom > 0.0:
            abstain += _accumulate(*_winners(offers, p), atom, t, o)
        lower_le, prev = le, p
    tail = 1.0 - lower_le
    if tail > 0.0:
        rep = 1.0 if prev is None else prev + 1.0
        abstain += _accumulate(*_winners(offers, rep), tail, t, o)
    return Shares(tuple(t), tuple(o), abstain)


def shares_duopoly(dist: ValuationDistribution, offer1: Offer, offer2: Offer) -> Shares:
    return shares_exact(dist, (offer1, offer2))


def shares_monte_carlo(
    dist: ValuationDistribution, offers: Sequence[Offer], n: int, seed: int
) -> Shares:
    """Frequencies of ``user_choice`` over ``sample(dist, seed, n)``.

    Samples tied exactly between providers alternate between provider 1 and
    provider 2 in sample order, starting with provider 1.
    """
    _check_offers(offers)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    v = sample(dist, seed, n)
    opts = _options(offers)
    util = np.full((n, len(opts) + 1), -np.inf)
    for col, (kind, i) in enumerate(opts):
        offer = offers[i - 1]
        util[:, col] = offer.benefit - v if kind == "T" else offer.benefit - offer.opt_out_cost
    util[:, -1] = 0.0
    is_max = util == util.max(axis=1, keepdims=True)
    # first maximizer in priority order is the pointwise choice
    chosen = np.argmax(is_max, axis=1)

    counts = np.zeros(len(opts) + 1, dtype=np.int64)
    if len(offers) == 2:
        col_of = {opt: k for k, opt in enumerate(opts)}
        for kind in ("T", "O"):
            c1, c2 = col_of.get((kind, 1)), col_of.get((kind, 2))
            if c1 is None or c2 is None:
                continue
            tied = np.flatnonzero((chosen == c1) & is_max[:, c2])
            chosen[tied[1::2]] = c2
    counts += np.bincount(chosen, minlength=len(opts) + 1)

    t = [0.0] * len(offers)
    o = [0.0] * len(offers)
    for col, (kind, i) in enumerate(opts):
        (t if kind == "T" else o)[i - 1] = int(counts[col]) / n
    return Shares(tuple(t), tuple(o), int(counts[-1]) / n)
