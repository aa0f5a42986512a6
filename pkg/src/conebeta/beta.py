"""Jones-type beta numbers and the plane search behind their infima.

Kinds:

* ``beta_inf``: sup over E ∩ B of dist(y, L) / r_B.
* ``beta_bar``: ((1/r^d) ∫ (dist/r)^p dH^d_inf)^(1/p).
* ``beta_content``: the same with the modified content M^d_inf(., E, B).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.spatial import ConvexHull, QhullError

from .choquet import layer_cake
from .cloud import PointCloud
from .content import HausdorffContent, ModifiedContent, cell_hierarchy
from .geom import AffinePlane, Ball, complement_basis, orthonormalize

KINDS = ("beta_content", "beta_bar", "beta_inf")


def p_limit(d: int) -> float:
    """Upper end of the admissible exponent range: inf for d <= 2, else 2d/(d-2)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    if d in (1, 2):
        return math.inf
    return 2.0 * d / (d - 2)


@dataclass(frozen=True)
class BetaValue:
    kind: str
    value: float
    plane: AffinePlane
    p: float
    d: int
    ball: Ball


def _check_kind(kind: str, p: float) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown beta kind {kind!r}")
    if kind == "beta_inf":
        return
    if not np.isfinite(p):
        raise ValueError("p = inf is only available for beta_inf")
    if p < 1:
        raise ValueError("p must be >= 1")


class BetaObjective:
    """beta(ball, L) as a function of the plane L, with the ball data precomputed."""

    def __init__(self, E: PointCloud, ball: Ball, d: int, p: float, kind: str,
                 c1: float | None = None, c2: float | None = None):
        _check_kind(kind, p)
        if not 1 <= d < E.dim:
            raise ValueError("plane dimension must satisfy 1 <= d < n")
        if ball.center.shape[0] != E.dim:
            raise ValueError("ball and cloud dimensions differ")
        if not E.is_centered(ball.center):
            raise ValueError("ball must be centered on E (within the resolution)")
        self.E, self.ball, self.d, self.p, self.kind = E, ball, d, p, kind
        self.idx = E.ball_indices(ball.center, ball.radius)
        if self.idx.size == 0:
            raise ValueError("E does not meet the ball")
        self.pts = E.points[self.idx]
        self.mu = None
        if kind == "beta_bar":
            self.mu = HausdorffContent(E, d)
        elif kind == "beta_content":
            self.mu = ModifiedContent(E, ball, d, c1, c2)
        self.evaluations = 0

    def __call__(self, plane: AffinePlane) -> float:
        self.evaluations += 1
        r = self.ball.radius
        f = plane.distance(self.pts) / r
        if self.kind == "beta_inf":
            return float(f.max())
        integral = layer_cake(f, self.idx, self.p, self.mu)
        return float((integral / r ** self.d) ** (1.0 / self.p))


def beta_with_plane(E: PointCloud, ball: Ball, d: int, p: float, L: AffinePlane, kind: str,
                    c1: float | None = None, c2: float | None = None) -> float:
    """beta(ball, L) for a fixed plane."""
    if L.dim != d or L.ambient != E.dim:
        raise ValueError("plane dimension mismatch")
    return BetaObjective(E, ball, d, p, kind, c1, c2)(L)


# ---------------------------------------------------------------------------
# plane charts


class PlaneChart:
    """Local graph chart of affine d-planes around a reference plane.

    Parameters are a (n-d) x d tilt matrix A and a normal shift b (in units of
    ``scale``): basis rows u_i + sum_j A[j, i] w_j, offset o + scale * b @ W.
    """

    def __init__(self, plane: AffinePlane, scale: float, through=None):
        self.ref = plane
        self.U = plane.basis
        self.W = complement_basis(plane.basis)
        self.scale = scale
        self.through = None if through is None else np.asarray(through, dtype=float)
        self.d, self.n = self.U.shape
        self.n_tilt = (self.n - self.d) * self.d
        self.nparams = self.n_tilt + (0 if through is not None else self.n - self.d)

    def __call__(self, theta) -> AffinePlane:
        theta = np.asarray(theta, dtype=float)
        A = theta[:self.n_tilt].reshape(self.n - self.d, self.d)
        basis = orthonormalize(self.U + A.T @ self.W)
        if self.through is not None:
            return AffinePlane(basis, self.through)
        b = theta[self.n_tilt:]
        return AffinePlane(basis, self.ref.offset + self.scale * (b @ self.W))


def plane_chart(plane: AffinePlane, scale: float, through=None) -> PlaneChart:
    return PlaneChart(plane, scale, through)


def _plane_key(plane: AffinePlane) -> tuple:
    """Canonical description of a plane used to break ties deterministically."""
    proj = plane.basis.T @ plane.basis
    foot = plane.project(np.zeros(plane.ambient))
    return tuple(np.round(np.concatenate([proj.ravel(), foot]), 12))


# ---------------------------------------------------------------------------
# seeds


def _weighted_pca(pts: np.ndarray, weights: np.ndarray, d: int, center=None) -> AffinePlane:
    w = weights / weights.sum()
    mean = w @ pts if center is None else np.asarray(center, dtype=float)
    X = (pts - mean) * np.sqrt(w)[:, None]
    _, _, vt = np.linalg.svd(X, full_matrices=X.shape[0] < d)
    return AffinePlane(vt[:d].copy(), mean)


def _content_weights(E: PointCloud, idx: np.ndarray, d: int) -> np.ndarray:
    """Per-point share of the finest cell's cover cost, a proxy for content density."""
    cells = cell_hierarchy(E)
    K = cells.depth
    lab = cells.labels[K, idx]
    sizes = np.bincount(cells.labels[K], minlength=lab.max() + 1)
    cost = (cells.radii[cells.level_start[K] + lab] + E.resolution) ** d
    return cost / sizes[lab]


def min_width_line(pts: np.ndarray) -> tuple[AffinePlane, float]:
    """Exact minimax line in the plane: the midline of the narrowest strip."""
    if len(pts) == 1:
        return AffinePlane(np.array([[1.0, 0.0]]), pts[0]), 0.0
    try:
        hull = pts[ConvexHull(pts).vertices]
    except QhullError:
        hull = None
    if hull is None or len(hull) < 3:
        # collinear input: the line through the two extreme points
        c = pts.mean(axis=0)
        _, _, vt = np.linalg.svd(pts - c, full_matrices=False)
        plane = AffinePlane(vt[:1].copy(), c)
        return plane, float(plane.distance(pts).max())
    e = np.roll(hull, -1, axis=0) - hull
    ln = np.linalg.norm(e, axis=1)
    ok = ln > 0
    u = e[ok] / ln[ok, None]
    nrm = np.column_stack([-u[:, 1], u[:, 0]])
    a = hull[ok]
    best_w, best_plane_ = np.inf, None
    # all edge directions against all hull vertices, in blocks to bound memory
    for lo in range(0, len(u), 512):
        s = hull @ nrm[lo:lo + 512].T - np.sum(a[lo:lo + 512] * nrm[lo:lo + 512], axis=1)
        smax, smin = s.max(axis=0), s.min(axis=0)
        width = smax - smin
        j = int(np.argmin(width))
        if width[j] < best_w:
            i = lo + j
            best_w = width[j]
            mid = a[i] + nrm[i] * (smax[j] + smin[j]) / 2
            best_plane_ = AffinePlane(u[i][None, :], mid)
    plane = best_plane_
    return plane, float(plane.distance(pts).max())


def _seed_planes(E: PointCloud, obj: BetaObjective, rng: np.random.Generator, n_random: int, through=None) -> list:
    pts, d = obj.pts, obj.d
    seeds = []
    if len(pts) > d:
        w = _content_weights(E, obj.idx, d)
        seeds.append(_weighted_pca(pts, w, d, through))
        seeds.append(_weighted_pca(pts, np.ones(len(pts)), d, through if through is not None else obj.ball.center))
    else:
        seeds.append(AffinePlane(np.eye(E.dim)[:d], obj.ball.center if through is None else through))
    if len(pts) >= d + 1:
        for _ in range(n_random):
            pick = rng.choice(len(pts), size=d + 1, replace=False)
            tup = pts[pick]
            try:
                plane = AffinePlane.through_points(tup)
            except ValueError:
                continue
            if through is not None:
                plane = plane.translated_to(through)
            seeds.append(plane)
    return seeds


def best_plane(E: PointCloud, ball: Ball, d: int, p: float, kind: str, seed: int = 0, n_random: int = 8,
               through=None, c1: float | None = None, c2: float | None = None,
               max_iter: int = 500, patience: int = 25, rel_tol: float = 1e-6,
               extra_seeds=()) -> BetaValue:
    """Approximate inf over d-planes of beta(ball, L); the result is an upper bound.

    Seeds: content-weighted PCA, PCA through the ball center and random planes
    through (d+1)-tuples of sample points; the best seed is refined with
    Nelder-Mead in a local plane chart.  Refinement stops when the relative
    improvement over ``patience`` iterations drops below ``rel_tol`` or after
    ``max_iter`` iterations.  For beta_inf with n = 2, d = 1 the narrowest
    strip gives the exact optimum.  ``through`` pins the plane to a point and
    ``extra_seeds`` adds caller-supplied planes (e.g. from a neighbouring scale).
    """
    obj = BetaObjective(E, ball, d, p, kind, c1, c2)
    if kind == "beta_inf" and E.dim == 2 and d == 1 and through is None:
        plane, width = min_width_line(obj.pts)
        return BetaValue(kind, obj(plane), plane, p, d, ball)
    rng = np.random.default_rng(seed)
    seeds = _seed_planes(E, obj, rng, n_random, through)
    for pl in extra_seeds:
        seeds.append(pl if through is None else pl.translated_to(through))
    cands = [(obj(pl), _plane_key(pl), pl) for pl in seeds]
    cands.sort(key=lambda c: (c[0], c[1]))
    best_val, _, best = cands[0]
    if best_val <= 1e-15:
        return BetaValue(kind, best_val, best, p, d, ball)
    chart = plane_chart(best, ball.radius, through)
    history = []

    def stop_rule(intermediate_result):
        history.append(float(intermediate_result.fun))
        if len(history) > patience:
            old = history[-patience - 1]
            if old - history[-1] <= rel_tol * max(abs(old), 1e-300):
                raise StopIteration

    f = lambda th: obj(chart(th))
    x0 = np.zeros(chart.nparams)
    simplex = np.vstack([x0, np.eye(chart.nparams) * 0.05])
    res = minimize(f, x0, method="Nelder-Mead", callback=stop_rule,
                   options={"maxiter": max_iter, "initial_simplex": simplex, "xatol": 1e-10, "fatol": 0.0})
    refined = chart(res.x)
    val = obj(refined)
    if val < best_val or (val == best_val and _plane_key(refined) < _plane_key(best)):
        best_val, best = val, refined
    return BetaValue(kind, float(best_val), best, p, d, ball)
