"""Synthetic sets with known cone and paraboloid points."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .cloud import PointCloud

FAMILIES = ("plane", "lipschitz_graph", "cusp_graph", "cantor4", "koch", "spiral", "two_lines")

DEFAULT_SLOPES = (0.5, -0.3, 0.8, 0.0)


@dataclass(frozen=True)
class SynthSpec:
    family: str
    n: int = 2
    d: int = 1
    sample_count: int | None = None
    noise: float = 0.0
    seed: int = 0
    alpha0: float = 0.5
    depth: int = 4
    angle: float = math.pi / 3
    slopes: tuple = DEFAULT_SLOPES
    rate: float = 0.3
    turns: float = 3.0
    line_angle: float = math.pi / 2

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if not 1 <= self.d < self.n:
            raise ValueError("need 1 <= d < n")
        if self.family in ("cantor4", "koch", "spiral", "two_lines", "cusp_graph") and (self.d != 1 or self.n < 2):
            raise ValueError(f"{self.family} is a one-dimensional set in the plane (d = 1, n >= 2)")
        if self.family == "lipschitz_graph" and self.d != self.n - 1 and self.d != 1:
            raise ValueError("lipschitz_graph needs d = 1 or d = n - 1")
        if self.noise < 0:
            raise ValueError("noise must be nonnegative")
        if self.family in ("cantor4", "koch") and self.depth < 0:
            raise ValueError("depth must be nonnegative")
        if not 0.0 < self.alpha0 < 1.0:
            raise ValueError("alpha0 must lie in (0, 1)")
        count = self.resolved_count()
        if count < self.d + 2:
            raise ValueError("sample_count must be at least d + 2")
        if self.noise > base_resolution(self) / 4:
            raise ValueError("noise must not exceed a quarter of the resolution")

    def resolved_count(self) -> int:
        if self.family == "cantor4":
            return 4 ** self.depth
        if self.family == "koch":
            return 4 ** self.depth + 1
        if self.sample_count is None:
            return 1000
        return int(self.sample_count)


@dataclass(frozen=True)
class GroundTruth:
    """Per-point labels: cone point, and the largest alpha for paraboloid points.

    ``paraboloid_max[i] = 1`` means a paraboloid point for every alpha in [0, 1);
    non-cone points carry -1.
    """

    cone: np.ndarray
    paraboloid_max: np.ndarray
    notes: dict = field(default_factory=dict)

    def paraboloid(self, alpha: float) -> np.ndarray:
        return self.cone & (alpha <= self.paraboloid_max)


def _per_axis(count: int, d: int) -> int:
    return max(2, int(round(count ** (1.0 / d))))


def _cusp_params(m: int) -> tuple[np.ndarray, float]:
    step = 2.0 / (m - 1)
    return (np.arange(m) - m // 2) * step, step


def base_resolution(spec: SynthSpec) -> float:
    """Covering radius of the noiseless sample with respect to the ideal set."""
    fam = spec.family
    m = spec.resolved_count()
    if fam == "plane":
        k = _per_axis(m, spec.d)
        return math.sqrt(spec.d) / (2 * (k - 1))
    if fam == "lipschitz_graph":
        if spec.d == 1:
            step = 2.0 / (m - 1)
            return step / 2 * math.sqrt(1 + max(abs(s) for s in spec.slopes) ** 2)
        k = _per_axis(m, spec.d)
        step = 2.0 / (k - 1)
        return math.sqrt(spec.d) * step / 2 * math.sqrt(1 + max(abs(s) for s in spec.slopes) ** 2)
    if fam == "cusp_graph":
        _, step = _cusp_params(m)
        slope = (1 + spec.alpha0) * (1 + step) ** spec.alpha0
        return step / 2 * math.sqrt(1 + slope ** 2)
    if fam == "cantor4":
        return 4.0 ** (-spec.depth) * math.sqrt(2) / 2
    if fam == "koch":
        return _koch_edge(spec.angle, spec.depth) * 1.5
    if fam == "spiral":
        return _spiral_step(spec) / 2
    if fam == "two_lines":
        # each arm samples [-1, 1] with spacing 2 / per
        per = (m - 1) // 2
        return 1.0 / per
    raise AssertionError(fam)


def resolution_of(spec: SynthSpec) -> float:
    """Declared resolution of the generated cloud (noise included)."""
    return base_resolution(spec) + spec.noise


def _koch_edge(angle: float, depth: int) -> float:
    return (1.0 / (2.0 * (1.0 + math.cos(angle)))) ** depth


def _koch(angle: float, depth: int) -> np.ndarray:
    pts = np.array([[0.0, 0.0], [1.0, 0.0]])
    c, s = math.cos(angle), math.sin(angle)
    scale = 1.0 / (2.0 * (1.0 + c))
    for _ in range(depth):
        a, b = pts[:-1], pts[1:]
        v = (b - a) * scale
        rot = np.stack([v[:, 0] * c - v[:, 1] * s, v[:, 0] * s + v[:, 1] * c], axis=1)
        p1 = a + v
        p2 = p1 + rot
        p3 = b - v
        new = np.stack([a, p1, p2, p3], axis=1).reshape(-1, 2)
        pts = np.vstack([new, pts[-1:]])
    return pts


def _spiral_step(spec: SynthSpec) -> float:
    m = spec.resolved_count()
    phi_max = 2 * math.pi * spec.turns
    # arc length of r = exp(-rate phi) from 0 to phi_max
    length = math.sqrt(1 + spec.rate ** 2) / spec.rate * (1 - math.exp(-spec.rate * phi_max))
    return length / (m - 2)


def _embed(pts2: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros((len(pts2), n))
    out[:, :pts2.shape[1]] = pts2
    return out


def generate(spec: SynthSpec) -> tuple[PointCloud, GroundTruth]:
    """Sample the family deterministically; noise (if any) is seeded by ``spec.seed``."""
    fam = spec.family
    m = spec.resolved_count()
    n, d = spec.n, spec.d
    notes: dict = {}
    if fam == "plane":
        k = _per_axis(m, d)
        axes = [np.linspace(0.0, 1.0, k)] * d
        grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        pts = _embed(grid, n)
        cone = np.ones(len(pts), dtype=bool)
        pmax = np.ones(len(pts))
    elif fam == "lipschitz_graph":
        slopes = np.asarray(spec.slopes, dtype=float)
        knots = np.linspace(-1.0, 1.0, len(slopes) + 1)
        heights = np.concatenate([[0.0], np.cumsum(slopes * np.diff(knots))])

        def f(t):
            return np.interp(t, knots, heights)

        if d == 1:
            t = np.linspace(-1.0, 1.0, m)[:, None]
        else:
            k = _per_axis(m, d)
            axes = [np.linspace(-1.0, 1.0, k)] * d
            t = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, d)
        graph = np.column_stack([t, f(t[:, 0])])
        pts = _embed(graph, n)
        corners = knots[1:-1][np.abs(np.diff(slopes)) > 0]
        on_corner = np.isclose(t[:, 0][:, None], corners[None, :], atol=1e-12).any(axis=1)
        cone = ~on_corner
        pmax = np.where(cone, 1.0, -1.0)
        notes["corners"] = corners.tolist()
    elif fam == "cusp_graph":
        t, _ = _cusp_params(m)
        pts = _embed(np.column_stack([t, np.abs(t) ** (1 + spec.alpha0)]), n)
        cone = np.ones(m, dtype=bool)
        pmax = np.ones(m)
        origin = int(np.argmin(np.abs(t)))
        pmax[origin] = spec.alpha0
        notes["origin_index"] = origin
    elif fam == "cantor4":
        offsets = np.array([[0.0, 0.0]])
        for level in range(spec.depth):
            side = 4.0 ** (-level)
            corners = np.array([[0, 0], [3, 0], [0, 3], [3, 3]]) * (side / 4)
            offsets = (offsets[:, None, :] + corners[None, :, :]).reshape(-1, 2)
        cell = 4.0 ** (-spec.depth)
        pts = _embed(offsets + cell / 2, n)
        cone = np.zeros(len(pts), dtype=bool)
        pmax = -np.ones(len(pts))
    elif fam == "koch":
        pts = _embed(_koch(spec.angle, spec.depth), n)
        cone = np.zeros(len(pts), dtype=bool) if spec.angle > 0 else np.ones(len(pts), dtype=bool)
        pmax = np.where(cone, 1.0, -1.0)
    elif fam == "spiral":
        phi_max = 2 * math.pi * spec.turns
        # parameterise by arc length so samples are evenly spaced
        rate = spec.rate
        scale = math.sqrt(1 + rate ** 2) / rate
        total = scale * (1 - math.exp(-rate * phi_max))
        s = np.linspace(0.0, total, m - 1)
        phi = -np.log(1 - s / scale) / rate
        r = np.exp(-rate * phi)
        spiral = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
        pts = _embed(np.vstack([spiral, [[0.0, 0.0]]]), n)
        cone = np.ones(len(pts), dtype=bool)
        # the spiral keeps winding around its center
        cone[-1] = False
        pmax = np.where(cone, 1.0, -1.0)
        notes["center_index"] = len(pts) - 1
    elif fam == "two_lines":
        per = (m - 1) // 2
        t = np.linspace(-1.0, 1.0, per + 1)
        t = t[np.abs(t) > 1e-12]
        u = np.array([math.cos(spec.line_angle), math.sin(spec.line_angle)])
        first = np.column_stack([t, np.zeros_like(t)])
        second = t[:, None] * u[None, :]
        pts = _embed(np.vstack([[[0.0, 0.0]], first, second]), n)
        cone = np.ones(len(pts), dtype=bool)
        cone[0] = False
        pmax = np.where(cone, 1.0, -1.0)
        notes["crossing_index"] = 0
    else:  # pragma: no cover - guarded by SynthSpec
        raise AssertionError(fam)
    if spec.noise > 0:
        rng = np.random.default_rng(spec.seed)
        dirs = rng.normal(size=pts.shape)
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
        pts = pts + dirs * (spec.noise * rng.random(len(pts)))[:, None]
    return PointCloud(pts, resolution_of(spec)), GroundTruth(cone, pmax, notes)
