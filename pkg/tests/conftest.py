import numpy as np
from optout_pricing.decision import Offer
from optout_pricing.population import Empirical, Exponential, PointMass, Uniform

FAMILIES = ("uniform", "exponential", "pointmass", "empirical")


def random_dist(rng: np.random.Generator, family: str):
    if family == "uniform":
        lo = float(rng.uniform(0, 0.5))
        return Uniform(lo, lo + float(rng.uniform(0.2, 1.5)))
    if family == "exponential":
        return Exponential(float(rng.uniform(0.5, 4.0)))
    if family == "pointmass":
        return PointMass(float(rng.uniform(0, 1.5)))
    k = int(rng.integers(1, 6))
    values = np.sort(rng.choice(np.arange(0, 2.0, 0.05), size=k, replace=False))
    weights = rng.dirichlet(np.ones(k))
    weights[-1] = 1.0 - weights[:-1].sum()
    return Empirical(tuple((float(v), float(w)) for v, w in zip(values, weights)))


def random_offer(rng: np.random.Generator, allow_none: bool = True) -> Offer:
    b = float(rng.uniform(0, 2))
    if allow_none and rng.random() < 0.2:
        return Offer(b)
    return Offer(b, float(rng.uniform(0, 1.5)))


def ks_distance(dist, xs: np.ndarray) -> float:
    """Sup-distance between the empirical CDF of ``xs`` and ``dist``, checked on both sides of each jump."""
    xs = np.sort(xs)
    n = len(xs)
    uniq, counts = np.unique(xs, return_counts=True)
    cum = np.cumsum(counts) / n
    worst = 0.0
    prev = 0.0
    for x, fn in zip(uniq, cum):
        worst = max(worst, abs(fn - dist.prob_le(float(x))), abs(prev - dist.prob_lt(float(x))))
        prev = fn
    for a in getattr(dist, "atoms", lambda: ())():
        k = np.searchsorted(xs, a, side="right") / n
        k_lt = np.searchsorted(xs, a, side="left") / n
        worst = max(worst, abs(k - dist.prob_le(a)), abs(k_lt - dist.prob_lt(a)))
    return worst


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
