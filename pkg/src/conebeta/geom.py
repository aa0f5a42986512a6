"""Euclidean primitives: balls, affine planes, cones, local Hausdorff distances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .cloud import PointCloud

ORTHO_TOL = 1e-12


@dataclass(frozen=True)
class Ball:
    """Open ball B(center, radius)."""

    center: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.array(self.center, dtype=float, copy=True).ravel()
        r = float(self.radius)
        if not np.all(np.isfinite(c)):
            raise ValueError("ball center must be finite")
        if not (np.isfinite(r) and r > 0):
            raise ValueError("ball radius must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "radius", r)

    def scaled(self, factor: float) -> "Ball":
        return Ball(self.center, self.radius * factor)

    def contains_ball(self, other: "Ball", tol: float = 1e-12) -> bool:
        gap = np.linalg.norm(self.center - other.center) + other.radius
        return bool(gap <= self.radius * (1 + tol))

    def key(self) -> tuple:
        return (tuple(self.center.tolist()), self.radius)


def orthonormalize(vectors: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the same space as the rows of ``vectors``."""
    v = np.atleast_2d(np.asarray(vectors, dtype=float))
    q, r = np.linalg.qr(v.T)
    if np.any(np.abs(np.diag(r)) < 1e-14 * max(1.0, np.abs(v).max())):
        raise ValueError("directions are linearly dependent")
    # fix signs so the result is a deterministic function of the input
    q = q * np.sign(np.diag(r))
    return q.T.copy()


def complement_basis(basis: np.ndarray) -> np.ndarray:
    """Orthonormal rows spanning the orthogonal complement of ``basis`` rows."""
    d, n = basis.shape
    if d == n:
        return np.zeros((0, n))
    _, _, vt = np.linalg.svd(basis, full_matrices=True)
    return vt[d:].copy()


@dataclass(frozen=True)
class AffinePlane:
    """d-plane {offset + t @ basis : t in R^d} with orthonormal ``basis`` rows."""

    basis: np.ndarray
    offset: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float, copy=True)
        if b.ndim == 1:
            b = b[None, :]
        o = np.array(self.offset, dtype=float, copy=True).ravel()
        if b.shape[1] != o.shape[0]:
            raise ValueError("basis and offset dimensions differ")
        d, n = b.shape
        if not 1 <= d < n:
            raise ValueError("plane dimension must satisfy 1 <= d < n")
        if np.abs(b @ b.T - np.eye(d)).max() > ORTHO_TOL:
            raise ValueError("basis must be orthonormal to 1e-12")
        b.setflags(write=False)
        o.setflags(write=False)
        object.__setattr__(self, "basis", b)
        object.__setattr__(self, "offset", o)

    @classmethod
    def from_directions(cls, offset, directions) -> "AffinePlane":
        return cls(orthonormalize(directions), offset)

    @classmethod
    def through_points(cls, points) -> "AffinePlane":
        """Plane spanned by d+1 affinely independent points."""
        pts = np.asarray(points, dtype=float)
        return cls.from_directions(pts[0], pts[1:] - pts[0])

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient(self) -> int:
        return self.basis.shape[1]

    @property
    def normals(self) -> np.ndarray:
        return complement_basis(self.basis)

    def translated_to(self, point) -> "AffinePlane":
        return AffinePlane(self.basis, point)

    def project(self, y) -> np.ndarray:
        y = np.asarray(y, dtype=float)
        rel = y - self.offset
        return self.offset + (rel @ self.basis.T) @ self.basis

    def distance(self, y) -> np.ndarray:
        """dist(y, plane) for one point or an (m, n) array of points."""
        y = np.asarray(y, dtype=float)
        rel = y - self.offset
        par = rel @ self.basis.T
        perp2 = np.einsum("...i,...i->...", rel, rel) - np.einsum("...i,...i->...", par, par)
        perp = np.sqrt(np.maximum(perp2, 0.0))
        # cancellation guard: recompute explicitly where the difference is tiny
        small = perp2 < 1e-8 * np.einsum("...i,...i->...", rel, rel)
        if np.any(small):
            resid = rel - par @ self.basis
            exact = np.linalg.norm(resid, axis=-1)
            perp = np.where(small, exact, perp)
        return perp

    def transformed(self, rotation: np.ndarray, translation, scale: float = 1.0) -> "AffinePlane":
        rot = np.asarray(rotation, dtype=float)
        return AffinePlane(orthonormalize(self.basis @ rot.T), scale * rot @ self.offset + translation)


def project(y, plane: AffinePlane) -> tuple[np.ndarray, float]:
    """Orthogonal projection of a single point onto ``plane`` and its distance."""
    y = np.asarray(y, dtype=float).ravel()
    if y.shape[0] != plane.ambient:
        raise ValueError("dimension mismatch between point and plane")
    onto = plane.project(y)
    return onto, float(np.linalg.norm(y - onto))


def cone_components(apex, plane: AffinePlane, y) -> tuple[np.ndarray, np.ndarray]:
    """(|Pi_V(apex - y)|, |Pi_{V^perp}(apex - y)|) using the linear part of ``plane``."""
    v = np.asarray(apex, dtype=float) - np.atleast_2d(np.asarray(y, dtype=float))
    par_vec = v @ plane.basis.T
    par = np.linalg.norm(par_vec, axis=1)
    perp = np.linalg.norm(v - par_vec @ plane.basis, axis=1)
    return par, perp


@dataclass(frozen=True)
class ConeSpec:
    """Truncated cone (alpha = 0) or paraboloid X_alpha(apex, V, aperture, radius)."""

    apex: np.ndarray
    axis: AffinePlane
    aperture: float
    radius: float
    alpha: float = 0.0

    def __post_init__(self):
        if not self.aperture > 0:
            raise ValueError("aperture must be positive")
        if not self.radius > 0:
            raise ValueError("radius must be positive")
        if not 0.0 <= self.alpha < 1.0:
            raise ValueError("alpha must lie in [0, 1)")
        a = np.array(self.apex, dtype=float, copy=True).ravel()
        a.setflags(write=False)
        object.__setattr__(self, "apex", a)


def in_truncated_cone(y, spec: ConeSpec) -> np.ndarray | bool:
    """Membership in the open truncated cone / paraboloid (ties count as outside)."""
    y_arr = np.asarray(y, dtype=float)
    single = y_arr.ndim == 1
    par, perp = cone_components(spec.apex, spec.axis, y_arr)
    dist = np.linalg.norm(np.atleast_2d(y_arr) - spec.apex, axis=1)
    inside = (perp < spec.aperture * par ** (1.0 + spec.alpha)) & (dist < spec.radius)
    return bool(inside[0]) if single else inside


def _as_points(a) -> np.ndarray:
    if isinstance(a, PointCloud):
        return a.points
    arr = np.asarray(a, dtype=float)
    return arr.reshape(-1, arr.shape[-1]) if arr.size else arr.reshape(0, arr.shape[-1] if arr.ndim > 1 else 0)


def local_hausdorff_distance(A, Bset, ball: Ball) -> float:
    """Normalized local Hausdorff distance d_{x,r}(A, Bset).

    Each one-sided sup runs over the part of one set inside ``ball`` but measures
    distance to the whole other set.  A sup over an empty set contributes 0; a
    nonempty side facing an empty set gives infinity.
    """
    a = _as_points(A)
    b = _as_points(Bset)
    r = ball.radius

    def tree_of(src, pts):
        return src.tree if isinstance(src, PointCloud) else cKDTree(pts)

    def one_side(p, q, q_src):
        inside = p[np.linalg.norm(p - ball.center, axis=1) < r] if p.shape[0] else p
        if inside.shape[0] == 0:
            return 0.0
        if q.shape[0] == 0:
            return np.inf
        dist, _ = tree_of(q_src, q).query(inside)
        return float(dist.max())

    s1 = one_side(a, b, Bset)
    s2 = one_side(b, a, A)
    return max(s1, s2) / r


def plane_disc(plane: AffinePlane, ball: Ball) -> tuple[np.ndarray, float] | None:
    """Center and radius of the d-disc plane ∩ ball, or None when empty."""
    c = plane.project(ball.center)
    off = np.linalg.norm(c - ball.center)
    if off >= ball.radius:
        return None
    return c, float(np.sqrt(ball.radius ** 2 - off ** 2))


def sample_plane_in_ball(plane: AffinePlane, ball: Ball, spacing: float, max_points: int = 20000) -> np.ndarray:
    """Grid points of plane ∩ ball with the given spacing (coarsened to max_points)."""
    disc = plane_disc(plane, ball)
    if disc is None:
        return np.zeros((0, plane.ambient))
    c, rho = disc
    d = plane.dim
    spacing = max(spacing, rho * (np.pi ** (d / 2) / max_points) ** (1.0 / d) * 1.05)
    m = int(np.ceil(rho / spacing))
    axes = [np.arange(-m, m + 1) * spacing] * d
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
    grid = grid[np.linalg.norm(grid, axis=1) < rho]
    return c + grid @ plane.basis


def plane_distance_in_ball(L1: AffinePlane, L2: AffinePlane, ball: Ball, samples: int = 720) -> float:
    """d_ball(L1, L2) for two planes.

    dist(., L2) restricted to L1 is convex, so the sup over the disc L1 ∩ ball is
    attained on its boundary sphere; for d = 1 that is the two endpoints.
    """

    def side(P, Q):
        disc = plane_disc(P, ball)
        if disc is None:
            return 0.0
        c, rho = disc
        d = P.dim
        if d == 1:
            u = np.array([[1.0], [-1.0]])
        else:
            rng = np.random.default_rng(0)
            u = rng.normal(size=(samples * d, d))
            u /= np.linalg.norm(u, axis=1, keepdims=True)
            u = np.vstack([u, np.eye(d), -np.eye(d)])
        pts = c + rho * (u @ P.basis)
        return float(Q.distance(pts).max())

    return max(side(L1, L2), side(L2, L1)) / ball.radius


def reifenberg_theta(E: PointCloud, ball: Ball, d: int, seed: int = 0) -> float:
    """theta^d_E(ball): best normalized local Hausdorff distance from E to a d-plane."""
    from scipy.optimize import minimize

    from .beta import best_plane, plane_chart

    idx = E.ball_indices(ball.center, ball.radius)
    if idx.size == 0:
        raise ValueError("E does not meet the ball")
    spacing = min(E.resolution / 2, ball.radius / 64)

    inside = E.points[idx]

    def theta(plane: AffinePlane) -> float:
        # E side exactly against the plane, plane side against a fine grid of L ∩ ball
        e_side = float(plane.distance(inside).max())
        grid = sample_plane_in_ball(plane, ball, spacing)
        l_side = float(E.tree.query(grid)[0].max()) if len(grid) else 0.0
        return max(e_side, l_side) / ball.radius

    cands = []
    fit = best_plane(E, ball, d, np.inf, "beta_inf", seed=seed)
    cands.append(fit.plane)
    cands.append(fit.plane.translated_to(ball.center))
    pts = E.points[idx]
    if len(pts) > d:
        centered = pts - pts.mean(axis=0)
        _, _, vt = np.linalg.svd(centered, full_matrices=False)
        cands.append(AffinePlane(vt[:d], pts.mean(axis=0)))
    vals = [theta(c) for c in cands]
    best_i = int(np.argmin(vals))
    best, best_val = cands[best_i], vals[best_i]
    chart = plane_chart(best, ball.radius)
    res = minimize(lambda t: theta(chart(t)), np.zeros(chart.nparams), method="Nelder-Mead",
                   options={"maxiter": 200 * chart.nparams, "xatol": 1e-6, "fatol": 1e-9})
    if res.fun < best_val:
        best_val = float(res.fun)
    return float(best_val)
