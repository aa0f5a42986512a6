"""Finite samples of a set E in R^n together with a resolution scale."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.spatial import ConvexHull, QhullError, cKDTree


def point_set_diameter(points: np.ndarray) -> float:
    """Exact diameter of a finite point set (hull vertices when possible)."""
    pts = np.asarray(points, dtype=float)
    m, n = pts.shape
    if m < 2:
        return 0.0
    if n == 1:
        return float(pts[:, 0].max() - pts[:, 0].min())
    cand = pts
    if m > n + 1:
        try:
            cand = pts[ConvexHull(pts).vertices]
        except QhullError:
            cand = pts
    best = 0.0
    # blockwise to keep memory bounded on degenerate inputs
    for start in range(0, len(cand), 512):
        block = cand[start:start + 512]
        d2 = ((block[:, None, :] - cand[None, :, :]) ** 2).sum(-1)
        best = max(best, float(d2.max()))
    return float(np.sqrt(best))


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Sample of a set E with guaranteed covering radius ``resolution``.

    Every point of the underlying set lies within ``resolution`` of a sample
    point.  Statements quantified over all radii are only evaluated for
    ``r >= r_min = 4 * resolution``.
    """

    points: np.ndarray
    resolution: float
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float, copy=True)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0 or pts.shape[1] == 0:
            raise ValueError("points must be a non-empty (m, n) array")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        h = float(self.resolution)
        if not np.isfinite(h) or h <= 0:
            raise ValueError("resolution must be a positive finite number")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "resolution", h)
        if len(pts) > 1:
            dist, _ = self.tree.query(pts, k=2)
            if np.any(dist[:, 1] <= 0.0):
                raise ValueError("points must be distinct")
            if h >= self.diameter:
                raise ValueError("resolution must be smaller than the cloud diameter")

    # basic shape ---------------------------------------------------------
    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def size(self) -> int:
        return self.points.shape[0]

    def __len__(self) -> int:
        return self.size

    @property
    def r_min(self) -> float:
        return 4.0 * self.resolution

    @cached_property
    def tree(self) -> cKDTree:
        return cKDTree(self.points)

    @cached_property
    def diameter(self) -> float:
        return point_set_diameter(self.points)

    # queries -------------------------------------------------------------
    def ball_indices(self, center, radius: float) -> np.ndarray:
        """Sorted indices of sample points in the open ball B(center, radius)."""
        c = np.asarray(center, dtype=float)
        idx = np.asarray(self.tree.query_ball_point(c, radius), dtype=np.intp)
        if idx.size:
            keep = np.linalg.norm(self.points[idx] - c, axis=1) < radius
            idx = np.sort(idx[keep])
        return idx

    def distance_to(self, y) -> np.ndarray:
        """Distance from each query point to the sample."""
        d, _ = self.tree.query(np.atleast_2d(np.asarray(y, dtype=float)))
        return d

    def nearest_index(self, y) -> int:
        _, i = self.tree.query(np.asarray(y, dtype=float))
        return int(i)

    def is_centered(self, center) -> bool:
        """True when ``center`` lies within the resolution of the sample."""
        return bool(self.distance_to(center)[0] <= self.resolution * (1 + 1e-12))

    def subset(self, indices) -> "PointCloud":
        return PointCloud(self.points[np.asarray(indices)], self.resolution)

    def transformed(self, rotation: np.ndarray, translation, scale: float = 1.0) -> "PointCloud":
        """Image under y -> scale * rotation @ y + translation."""
        pts = scale * self.points @ np.asarray(rotation).T + np.asarray(translation)
        return PointCloud(pts, scale * self.resolution)

    def cached(self, key, factory):
        """Per-cloud memo used by content structures (keyed, insertion-order free)."""
        val = self._cache.get(key)
        if val is None:
            val = factory()
            val = self._cache.setdefault(key, val)
        return val

    def __getstate__(self):
        return {"points": np.asarray(self.points), "resolution": self.resolution}

    def __setstate__(self, state):
        object.__setattr__(self, "points", state["points"])
        object.__setattr__(self, "resolution", state["resolution"])
        object.__setattr__(self, "_cache", {})
