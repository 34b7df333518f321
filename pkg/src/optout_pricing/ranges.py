"""``lo:hi:step`` value ranges shared by grids, sweeps and the CLI."""

from __future__ import annotations

import math


class EmptyRangeError(ValueError):
    pass


def inclusive_range(lo: float, hi: float, step: float) -> list[float]:
    """``lo, lo + step, ...`` up to ``hi``.

    ``hi`` is included when ``step`` divides the span within 1e-9. Values are
    rounded to 12 decimals so that e.g. ``0:1:0.1`` yields ``0.3`` rather than
    ``0.30000000000000004``.
    """
    if not all(math.isfinite(x) for x in (lo, hi, step)):
        raise EmptyRangeError("range bounds and step must be finite")
    if step <= 0:
        raise EmptyRangeError(f"range step must be > 0, got {step}")
    if hi < lo:
        raise EmptyRangeError(f"empty range: hi {hi} < lo {lo}")
    count = math.floor((hi - lo) / step + 1e-9)
    values = [round(lo + k * step, 12) for k in range(count + 1)]
    if abs(lo + count * step - hi) <= 1e-9:
        values[-1] = hi
    return values


def parse_range(text: str) -> list[float]:
    """Parse ``lo:hi:step`` (or a single number) into :func:`inclusive_range` values."""
    parts = text.split(":")
    try:
        nums = [float(p) for p in parts]
    except ValueError:
        raise ValueError(f"malformed range {text!r}; expected lo:hi:step") from None
    if len(nums) == 1:
        return nums
    if len(nums) != 3:
        raise ValueError(f"malformed range {text!r}; expected lo:hi:step")
    return inclusive_range(*nums)
