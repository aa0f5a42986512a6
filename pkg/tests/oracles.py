"""Brute-force reference computations, independent of the package algorithms."""

from __future__ import annotations

import math

import numpy as np


def strip_halfwidths(pts: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    """Half the width of the point set projected on the normal of each line direction."""
    nrm = np.column_stack([-np.sin(thetas), np.cos(thetas)])
    s = pts @ nrm.T
    return (s.max(axis=0) - s.min(axis=0)) / 2


def grid_beta_inf(points: np.ndarray, center, r: float, n_angles: int = 3600) -> tuple[float, float]:
    """Grid search for beta_inf of a planar set in the open ball B(center, r).

    For a fixed direction the best offset is the midline, so only the angle is
    gridded.  Returns (grid minimum, rigorous lower bound); the half-width is
    Lipschitz in the angle with constant max |y - center| <= r.
    """
    c = np.asarray(center, dtype=float)
    pts = points[np.linalg.norm(points - c, axis=1) < r]
    thetas = np.arange(n_angles) * (math.pi / n_angles)
    w = strip_halfwidths(pts - c, thetas)
    spread = np.linalg.norm(pts - c, axis=1).max()
    step = math.pi / n_angles
    g = float(w.min()) / r
    return g, max(0.0, g - spread * step / 2 / r)


def grid_line_offset_min(points: np.ndarray, center, r: float, n_angles: int = 100, n_offsets: int = 100) -> float:
    """beta_inf minimum over an explicit angle x offset grid of lines (10^4 lines)."""
    c = np.asarray(center, dtype=float)
    pts = points[np.linalg.norm(points - c, axis=1) < r]
    best = math.inf
    for th in np.arange(n_angles) * (math.pi / n_angles):
        nrm = np.array([-math.sin(th), math.cos(th)])
        s = (pts - c) @ nrm
        for off in np.linspace(-r, r, n_offsets):
            best = min(best, float(np.abs(s - off).max()) / r)
    return best


def min_cover_bruteforce(cells: list, costs: list, target: set) -> float:
    """Cheapest sub-collection of ``cells`` (sets of point indices) covering ``target``.

    Exact set-cover DP over the bitmasks of ``target`` (exponential in its size).
    """
    if not target:
        return 0.0
    pos = {p: i for i, p in enumerate(sorted(target))}
    full = (1 << len(pos)) - 1
    masks = {}
    for c, w in zip(cells, costs):
        m = sum(1 << pos[p] for p in c if p in pos)
        if m:
            masks[m] = min(w, masks.get(m, math.inf))
    best = [math.inf] * (full + 1)
    best[0] = 0.0
    for s in range(full + 1):
        if best[s] == math.inf:
            continue
        for m, w in masks.items():
            t = s | m
            if t != s and best[s] + w < best[t]:
                best[t] = best[s] + w
    return best[full]


def density_level_ok(points: np.ndarray, domain: np.ndarray, labels_k: np.ndarray, Rk: float, d: int,
                     grid: np.ndarray, c1: float, c2: float) -> bool:
    """Lower and upper density sums for the uniform collection of one level, by brute force."""
    for x in domain:
        dist = np.linalg.norm(points - points[x], axis=1)
        for r in grid:
            count = len(np.unique(labels_k[dist < r]))
            if count * Rk ** d < c1 * r ** d:
                return False
            if Rk <= r and count * Rk ** d > c2 * r ** d:
                return False
    return True


def choquet_by_superlevels(values: np.ndarray, p: float, content_of) -> float:
    """Sum over breakpoint intervals of content({f > t}) (t_{j+1}^p - t_j^p) / p."""
    levels = np.concatenate([[0.0], np.unique(values[values > 0])])
    total = 0.0
    for lo, hi in zip(levels[:-1], levels[1:]):
        sup = np.nonzero(values > lo)[0]
        total += content_of(sup) * (hi ** p - lo ** p) / p
    return total


def riemann_choquet(values: np.ndarray, p: float, n_grid: int = 1_000_000) -> float:
    """Midpoint quadrature of #{f > t} t^(p-1) for the counting measure."""
    top = values.max()
    t = (np.arange(n_grid) + 0.5) * (top / n_grid)
    counts = (values[None, :] > t[:, None]).sum(axis=1) if len(values) * n_grid <= 5e7 else \
        np.array([(values > s).sum() for s in t])
    return float(np.sum(counts * t ** (p - 1)) * top / n_grid)


def cone_emptiness_angles(x, pts: np.ndarray, lam: float, alpha: float = 0.0, n_angles: int = 3600) -> np.ndarray:
    """Angles of lines through x whose open cone/paraboloid contains every point of ``pts``."""
    v = np.asarray(pts, dtype=float) - np.asarray(x, dtype=float)
    ok = []
    for th in np.arange(n_angles) * (math.pi / n_angles):
        u = np.array([math.cos(th), math.sin(th)])
        par = np.abs(v @ u)
        perp = np.abs(v @ np.array([-u[1], u[0]]))
        if np.all(perp < lam * par ** (1 + alpha)):
            ok.append(th)
    return np.array(ok)


def pairwise_min(points: np.ndarray) -> float:
    d = np.linalg.norm(points[:, None, :] - points[None, :, :], axis=2)
    d[np.diag_indices_from(d)] = np.inf
    return float(d.min())


def rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.normal(size=(n, n)))
    return q * np.sign(np.diag(r))
