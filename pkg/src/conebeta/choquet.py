"""Choquet integrals of nonnegative functions on a cloud against a monotone content.

The convention has no leading factor p:

    ∫ f^p dmu = ∫_0^inf mu({f > t}) t^(p-1) dt.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloud import PointCloud


@dataclass(frozen=True, eq=False)
class ValuedCloud:
    """A cloud together with one nonnegative value per point."""

    base: PointCloud
    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float, copy=True).ravel()
        if v.shape[0] != self.base.size:
            raise ValueError("one value per point is required")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ValueError("values must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


def superlevel_breakpoints(vc: ValuedCloud) -> np.ndarray:
    """Sorted distinct values; {f > t} only changes when t crosses one of them."""
    return np.unique(vc.values)


def layer_cake(values: np.ndarray, indices: np.ndarray, p: float, mu) -> float:
    """Exact integral for values on ``indices`` using nested prefix contents.

    With f sorted decreasingly, {f > t} is the first j points for
    f_(j+1) <= t < f_(j), so the integral is
    sum_j mu(first j) (f_(j)^p - f_(j+1)^p) / p with f_(N+1) = 0.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        return 0.0
    order = np.argsort(-values, kind="stable")
    f = values[order]
    if f[0] <= 0.0:
        return 0.0
    # points with f = 0 never enter a superlevel set
    keep = int(np.searchsorted(-f, 0.0, side="left"))
    f = f[:keep]
    prefix = mu.prefix(np.asarray(indices)[order[:keep]])
    fp = f ** p
    steps = fp - np.append(fp[1:], 0.0)
    return float(np.dot(prefix, steps) / p)


def choquet_integral(vc: ValuedCloud, A, p: float, mu) -> float:
    """∫_A f^p dmu for the values of ``vc`` restricted to the selector ``A``."""
    from .content import _selector

    if p < 1:
        raise ValueError("p must be >= 1")
    idx = _selector(vc.base, A)
    return layer_cake(vc.values[idx], idx, p, mu)


def choquet_quadrature(vc: ValuedCloud, A, p: float, mu, n_grid: int = 1_000_000) -> float:
    """Midpoint-rule reference for the same integral on a uniform t-grid."""
    from .content import _selector

    idx = _selector(vc.base, A)
    vals = vc.values[idx]
    top = float(vals.max()) if vals.size else 0.0
    if top == 0.0:
        return 0.0
    order = np.argsort(-vals, kind="stable")
    prefix = np.concatenate([[0.0], mu.prefix(idx[order])])
    desc = vals[order]
    t = (np.arange(n_grid) + 0.5) * (top / n_grid)
    # number of points with value > t
    count = np.searchsorted(-desc, -t, side="left")
    return float(np.sum(prefix[count] * t ** (p - 1)) * (top / n_grid))
