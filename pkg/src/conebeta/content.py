"""Hausdorff content H^d_inf and the modified content M^d_inf on finite clouds.

Both estimators work on one laminar family of cells per cloud: the cube
hierarchy built from nested maximal nets with rho = 1/2, plus singleton cells.

* ``HausdorffContent`` is the exact minimum cost of a cover of A by cells of
  that family, where a cell Q costs (rad(Q) + h)^d and rad(Q) is the largest
  distance from its center to a member; the enlarged ball covers the part of
  the underlying set sampled by Q.  Being a min over covers it is monotone
  and subadditive.
* ``ModifiedContent`` for a host ball B minimises the weighted count over
  uniform-scale collections: all level-k cells, each given the common radius
  R_k.  A level is admissible when the lower and upper density sums hold on the
  dyadic radius grid r_j = h 2^j below r_B.  One covering ball of radius
  R* = max(R_0, c1^(1/d) r_B) is always admissible when c2 >= 1.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from numba import njit

from .cloud import PointCloud
from .geom import Ball

CONTENT_RHO = 0.5


@dataclass(frozen=True)
class ContentEstimate:
    value: float
    method: str
    scale_used: float | None


# ---------------------------------------------------------------------------
# shared cell hierarchy


@dataclass(eq=False)
class CellHierarchy:
    cloud: PointCloud
    labels: np.ndarray        # (K+1, m) level-local cell id of each point
    level_start: np.ndarray   # first global node id of each level
    radii: np.ndarray         # (C,) cell radius about its center
    parent: np.ndarray        # (C + m,) parent node, -1 at the root
    level_radius: np.ndarray  # (K+1,) common ball radius R_k of level k
    scales: np.ndarray
    centers: np.ndarray       # (C, n) cell centers

    @property
    def n_cells(self) -> int:
        return len(self.radii)

    @property
    def depth(self) -> int:
        return self.labels.shape[0] - 1


def cell_hierarchy(E: PointCloud) -> CellHierarchy:
    return E.cached(("cells",), lambda: _build_hierarchy(E))


def _build_hierarchy(E: PointCloud) -> CellHierarchy:
    from .nets_cubes import build_cubes, build_nets

    tree = build_cubes(build_nets(E, CONTENT_RHO))
    K = tree.depth
    m = E.size
    C = len(tree.cubes)
    level_start = np.array([ids[0] for ids in tree.levels] + [C], dtype=np.int64)
    labels = tree.labels - level_start[:-1, None]
    radii = np.empty(C)
    parent = np.full(C + m, -1, dtype=np.int64)
    for q in tree.cubes:
        radii[q.id] = np.linalg.norm(E.points[q.members] - q.center, axis=1).max()
        parent[q.id] = q.parent
    parent[C:] = tree.labels[K]
    level_radius = np.empty(K + 1)
    for k in range(K + 1):
        rk = radii[level_start[k]:level_start[k + 1]].max() + E.resolution
        level_radius[k] = max(rk, tree.scales[k] / 2)
    centers = np.array([q.center for q in tree.cubes])
    return CellHierarchy(E, labels.astype(np.int64), level_start, radii, parent, level_radius, tree.scales,
                         centers)


# ---------------------------------------------------------------------------
# Hausdorff content


@njit(cache=True)
def _cover_prefix(order, leaf_base, parent, cost, root):
    """Root value of the cover DP after each insertion of ``order``."""
    n_nodes = parent.shape[0]
    val = np.zeros(n_nodes)
    childsum = np.zeros(n_nodes)
    out = np.empty(order.shape[0])
    for t in range(order.shape[0]):
        node = leaf_base + order[t]
        delta = cost[node] - val[node]
        val[node] = cost[node]
        par = parent[node]
        # propagate the change upwards until some cell absorbs it
        while par >= 0 and delta != 0.0:
            childsum[par] += delta
            old = val[par]
            new = min(cost[par], childsum[par])
            val[par] = new
            delta = new - old
            par = parent[par]
        out[t] = val[root]
    return out


class HausdorffContent:
    """Cover-DP estimator of H^d_inf over subsets of the cloud."""

    method = "dyadic_greedy"

    def __init__(self, E: PointCloud, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.E = E
        self.d = d
        self.cells = cell_hierarchy(E)
        h = E.resolution
        self.cost = np.concatenate([(self.cells.radii + h) ** d, np.full(E.size, h ** d)])

    def prefix(self, order) -> np.ndarray:
        """Content of every prefix of ``order`` (nested sets)."""
        order = np.asarray(order, dtype=np.int64)
        if order.size == 0:
            return np.zeros(0)
        return _cover_prefix(order, self.cells.n_cells, self.cells.parent, self.cost, 0)

    def value(self, indices) -> float:
        """Minimum cover cost of a subset, computed level by level from the leaves."""
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        if idx.size == 0:
            return 0.0
        cells = self.cells
        K = cells.depth
        # finest level: min(cell cost, number of points * h^d)
        leaf = np.full(idx.size, self.cost[cells.n_cells])
        lab = cells.labels[K, idx]
        n_k = cells.level_start[K + 1] - cells.level_start[K]
        summed = np.bincount(lab, weights=leaf, minlength=n_k)
        present = np.bincount(lab, minlength=n_k) > 0
        own = self.cost[cells.level_start[K]:cells.level_start[K + 1]]
        val = np.where(present, np.minimum(own, summed), 0.0)
        for k in range(K - 1, -1, -1):
            lo, hi = cells.level_start[k], cells.level_start[k + 1]
            child_par = cells.parent[cells.level_start[k + 1]:cells.level_start[k + 2]] - lo
            summed = np.bincount(child_par, weights=val, minlength=hi - lo)
            present = np.bincount(child_par, weights=(val > 0).astype(float), minlength=hi - lo) > 0
            val = np.where(present, np.minimum(self.cost[lo:hi], summed), 0.0)
        return float(val[0])

    def estimate(self, indices) -> ContentEstimate:
        return ContentEstimate(self.value(indices), self.method, None)


def hausdorff_content(E: PointCloud, A, d: int) -> ContentEstimate:
    """Estimate of H^d_inf(A) for a subset A of the sample (indices or mask)."""
    idx = _selector(E, A)
    if idx.size == 0:
        return ContentEstimate(0.0, HausdorffContent.method, None)
    return HausdorffContent(E, d).estimate(idx)


def _selector(E: PointCloud, A) -> np.ndarray:
    if A is None:
        return np.arange(E.size)
    arr = np.asarray(A)
    if arr.dtype == bool:
        if arr.shape != (E.size,):
            raise ValueError("boolean selector must have one entry per point")
        return np.nonzero(arr)[0]
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    arr = arr.astype(np.int64).ravel()
    if arr.min() < 0 or arr.max() >= E.size:
        raise ValueError("selector index out of range")
    return np.unique(arr)


# ---------------------------------------------------------------------------
# modified content


@njit(cache=True)
def _fail_rows(xs, points, grid, labels, level_rd, grid_rd, c1, c2, out):
    """First grid index at which each level fails the density sums around each x.

    For radius grid[j] the lower sum is (number of level-k cells meeting
    E ∩ B(x, grid[j])) * R_k^d; the upper sum counts the same cells when
    R_k <= grid[j].  ``out[i, k] = J + 1`` when no grid radius fails.
    """
    m, n = points.shape
    K1 = labels.shape[0]
    J = grid.shape[0] - 1
    big = J + 1
    width = 0
    for k in range(K1):
        for i in range(m):
            if labels[k, i] + 1 > width:
                width = labels[k, i] + 1
    first = np.full(width, big, dtype=np.int64)
    bins = np.empty(m, dtype=np.int64)
    cnt = np.zeros(J + 2, dtype=np.int64)
    rmax = grid[J]
    for ii in range(xs.shape[0]):
        x = xs[ii]
        for i in range(m):
            s = 0.0
            for c in range(n):
                diff = points[i, c] - points[x, c]
                s += diff * diff
            dist = np.sqrt(s)
            if dist >= rmax:
                bins[i] = big
            else:
                j = 0
                while dist >= grid[j]:
                    j += 1
                bins[i] = j
        for k in range(K1):
            for i in range(m):
                b = bins[i]
                if b < big:
                    lab = labels[k, i]
                    if b < first[lab]:
                        first[lab] = b
            for j in range(J + 2):
                cnt[j] = 0
            for i in range(m):
                if bins[i] < big:
                    lab = labels[k, i]
                    if first[lab] < big:
                        cnt[first[lab]] += 1
                        first[lab] = big
            running = 0
            res = big
            rk_d = level_rd[k]
            for j in range(J + 1):
                running += cnt[j]
                total = running * rk_d
                if total < c1 * grid_rd[j]:
                    res = j
                    break
                # the upper sum only sees balls no larger than r_j
                if rk_d <= grid_rd[j] and total > c2 * grid_rd[j]:
                    res = j
                    break
            out[ii, k] = res


@njit(cache=True)
def _distinct_prefix(order, labels, valid_levels, level_rd, cap, scratch):
    n = order.shape[0]
    best = np.full(n, cap)
    for kk in range(valid_levels.shape[0]):
        k = valid_levels[kk]
        count = 0
        for t in range(n):
            lab = labels[k, order[t]]
            if scratch[lab] != kk + 1:
                scratch[lab] = kk + 1
                count += 1
            v = count * level_rd[k]
            if v < best[t]:
                best[t] = v
        for t in range(n):
            scratch[labels[k, order[t]]] = 0
    return best


class _FailTable:
    """Lazily filled table fail[x, k]: first dyadic radius where level k stops being good at x."""

    def __init__(self, E: PointCloud, d: int, c1: float, c2: float):
        self.E = E
        self.cells = cell_hierarchy(E)
        self.d = d
        self.c1 = c1
        self.c2 = c2
        K1 = self.cells.depth + 1
        self.fail = np.zeros((E.size, K1), dtype=np.int64)
        self.checked = np.full(E.size, -1, dtype=np.int64)
        self.level_rd = self.cells.level_radius ** d
        self.lock = threading.Lock()

    def grid_index(self, r_B: float) -> int:
        """Largest j with h 2^j < r_B (-1 when r_B <= h)."""
        h = self.E.resolution
        j = -1
        while h * 2.0 ** (j + 1) < r_B:
            j += 1
        return j

    def ensure(self, points: np.ndarray, J: int) -> None:
        if J < 0:
            return
        need = points[self.checked[points] < J]
        if need.size == 0:
            return
        with self.lock:
            need = need[self.checked[need] < J]
            grid = self.E.resolution * 2.0 ** np.arange(J + 1)
            out = np.empty((need.size, self.cells.depth + 1), dtype=np.int64)
            _fail_rows(need.astype(np.int64), np.ascontiguousarray(self.E.points), grid, self.cells.labels,
                       self.level_rd, grid ** self.d, self.c1, self.c2, out)
            self.fail[need] = out
            self.checked[need] = J

    def valid_levels(self, points: np.ndarray, r_B: float) -> np.ndarray:
        J = self.grid_index(r_B)
        if J < 0:
            return np.arange(self.cells.depth + 1)
        self.ensure(points, J)
        worst = self.fail[points].min(axis=0)
        return np.nonzero(worst > J)[0]


def default_c1(d: int) -> float:
    return 4.0 ** (-d)


def default_c2(d: int) -> float:
    return 8.0 ** d


class ModifiedContent:
    """M^d_inf(., E, B) restricted to uniform-scale cell collections."""

    method = "net_uniform_scale"

    def __init__(self, E: PointCloud, ball: Ball, d: int, c1: float | None = None, c2: float | None = None):
        c1 = default_c1(d) if c1 is None else float(c1)
        c2 = default_c2(d) if c2 is None else float(c2)
        if not 0 < c1 <= c2:
            raise ValueError("constants must satisfy 0 < c1 <= c2")
        if c1 > 1:
            raise ValueError("c1 must be <= 1 so radii below the resolution stay admissible")
        self.E = E
        self.ball = ball
        self.d = d
        self.c1 = c1
        self.c2 = c2
        self.domain = E.ball_indices(ball.center, ball.radius)
        table = E.cached(("mfail", d, c1, c2), lambda: _FailTable(E, d, c1, c2))
        self.cells = table.cells
        self.level_rd = table.level_rd
        self.levels = table.valid_levels(self.domain, ball.radius) if self.domain.size else np.zeros(0, np.int64)
        self.single_radius = max(self.cells.level_radius[0], c1 ** (1.0 / d) * ball.radius)
        self.single_ok = c2 >= 1.0 or self.single_radius >= ball.radius
        if not self.single_ok and self.levels.size == 0:
            raise ValueError("no admissible collection: constants c1/c2 are incompatible with the sample")
        self.cap = self.single_radius ** d if self.single_ok else np.inf

    def _check_subset(self, idx: np.ndarray) -> None:
        if idx.size and not np.all(np.isin(idx, self.domain)):
            raise ValueError("subset must lie in E ∩ B")

    def prefix(self, order) -> np.ndarray:
        order = np.asarray(order, dtype=np.int64)
        if order.size == 0:
            return np.zeros(0)
        width = int(self.cells.labels.max()) + 1
        scratch = np.zeros(width, dtype=np.int64)
        return _distinct_prefix(order, self.cells.labels, self.levels.astype(np.int64), self.level_rd,
                                float(self.cap), scratch)

    def value(self, indices) -> float:
        return self.estimate(indices).value

    def estimate(self, indices) -> ContentEstimate:
        idx = np.unique(np.asarray(indices, dtype=np.int64))
        self._check_subset(idx)
        if idx.size == 0:
            return ContentEstimate(0.0, self.method, None)
        best, scale = self.cap, (self.single_radius if self.single_ok else None)
        for k in self.levels:
            v = len(np.unique(self.cells.labels[k, idx])) * self.level_rd[k]
            if v < best:
                best, scale = v, float(self.cells.level_radius[k])
        return ContentEstimate(float(best), self.method, scale)

    def collection(self, level: int | None = None) -> list:
        """Balls of the collection at ``level`` (None: the single covering ball)."""
        cells = self.cells
        if level is None:
            return [Ball(cells.centers[0], self.single_radius)]
        lo = cells.level_start[level]
        members = np.unique(cells.labels[level, self.domain])
        return [Ball(cells.centers[lo + j], cells.level_radius[level]) for j in members]


def modified_content(E: PointCloud, B: Ball, A, d: int, c1: float | None = None,
                     c2: float | None = None) -> ContentEstimate:
    """Upper estimate of M^d_inf(A, E, B) over uniform-scale collections."""
    mu = ModifiedContent(E, B, d, c1, c2)
    return mu.estimate(_selector(E, A))


# ---------------------------------------------------------------------------
# good collections


def validate_good_collection(E: PointCloud, B: Ball, balls, c1: float, c2: float, d: int):
    """Check the covering, lower and upper density sums of a ball collection.

    Radii are tested on {2^-j r_B : j >= 0, 2^-j r_B >= h}.  Returns
    ``(True, None)`` or ``(False, (x_index, r, condition))`` for the first failure.
    """
    if len(balls) == 0:
        raise ValueError("collection must be nonempty")
    centers = np.array([np.asarray(b.center, dtype=float) for b in balls])
    radii = np.array([float(b.radius) for b in balls])
    idx = E.ball_indices(B.center, B.radius)
    if idx.size == 0:
        return True, None
    P = E.points[idx]
    inc = np.linalg.norm(P[None, :, :] - centers[:, None, :], axis=2) < radii[:, None]
    uncovered = np.nonzero(~inc.any(axis=0))[0]
    if uncovered.size:
        return False, (int(idx[uncovered[0]]), 0.0, "cover")
    rd = radii ** d
    pair = np.linalg.norm(P[:, None, :] - P[None, :, :], axis=2)
    r = B.radius
    grid = []
    while r >= E.resolution:
        grid.append(r)
        r /= 2.0
    for a, x in enumerate(idx):
        for r in grid:
            near = pair[a] < r
            hit = inc[:, near].any(axis=1)
            if rd[hit].sum() < c1 * r ** d:
                return False, (int(x), r, "LRi")
            if rd[hit & (radii <= r)].sum() > c2 * r ** d:
                return False, (int(x), r, "URi")
    return True, None


class CountingContent:
    """Counting measure, a trivial monotone set function for testing integrals."""

    method = "counting"

    def prefix(self, order) -> np.ndarray:
        return np.arange(1, len(order) + 1, dtype=float)

    def value(self, indices) -> float:
        return float(len(np.unique(np.asarray(indices))))
