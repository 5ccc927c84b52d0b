"""Rank statistics: Pearson and Spearman correlation with midrank ties.

Both return ``None`` (the undefined marker) when either input is constant,
so degenerate benchmark units can be excluded rather than silently biasing
averages.
"""

from __future__ import annotations

import math
from collections.abc import Sequence

import numpy as np
from scipy.stats import rankdata


def _check(xs: Sequence[float], ys: Sequence[float]) -> tuple[np.ndarray, np.ndarray]:
    if len(xs) != len(ys):
        raise ValueError(f"length mismatch: {len(xs)} vs {len(ys)}")
    if len(xs) < 2:
        raise ValueError("correlation needs at least 2 observations")
    return np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)


def pearson(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Product-moment correlation; ``None`` on zero variance."""
    x, y = _check(xs, ys)
    dx = x - x.mean()
    dy = y - y.mean()
    denom_sq = float(dx @ dx) * float(dy @ dy)
    if denom_sq <= 0.0:
        return None
    r = float(dx @ dy) / math.sqrt(denom_sq)
    # Guard against rounding just past the theoretical bounds.
    return max(-1.0, min(1.0, r))


def spearman(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Pearson correlation of average ranks (ties get their midrank)."""
    x, y = _check(xs, ys)
    return pearson(rankdata(x, method="average"), rankdata(y, method="average"))
