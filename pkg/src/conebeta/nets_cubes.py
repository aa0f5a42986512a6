"""Separated nets, Christ-David cube trees and the stopping-time construction."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .cloud import PointCloud
from .geom import AffinePlane, Ball, plane_distance_in_ball

# ---------------------------------------------------------------------------
# nets


@dataclass(frozen=True, eq=False)
class NetHierarchy:
    """Nested maximal separated nets X_0 ⊆ X_1 ⊆ ... of a cloud.

    ``scales[k]`` is the separation of X_k: distinct net points are at distance
    >= scales[k] and every cloud point is at distance < scales[k] from X_k.
    """

    cloud: PointCloud
    rho: float
    scales: np.ndarray
    nets: tuple

    @property
    def k_max(self) -> int:
        return len(self.nets) - 1


def top_scale(E: PointCloud) -> float:
    """Level-0 net scale, strictly above the diameter so X_0 is a single point."""
    return E.diameter + E.resolution


def default_k_max(E: PointCloud, rho: float) -> int:
    if E.size == 1:
        return 0
    return max(0, int(math.floor(math.log(E.diameter / E.resolution) / math.log(1.0 / rho))))


def maximal_net(points: np.ndarray, scale: float, seed_net=None, tree: cKDTree | None = None) -> np.ndarray:
    """Greedy maximal ``scale``-separated subset containing ``seed_net``.

    Points are scanned in index order; a point joins the net unless it lies at
    distance < scale from a point already chosen.
    """
    pts = np.asarray(points, dtype=float)
    tree = tree if tree is not None else cKDTree(pts)
    m = len(pts)
    covered = np.zeros(m, dtype=bool)
    chosen = []

    def mark(i):
        nb = np.asarray(tree.query_ball_point(pts[i], scale), dtype=np.intp)
        if nb.size:
            nb = nb[np.linalg.norm(pts[nb] - pts[i], axis=1) < scale]
            covered[nb] = True

    if seed_net is not None:
        for i in np.asarray(seed_net, dtype=np.intp):
            chosen.append(int(i))
            mark(i)
    for i in range(m):
        if not covered[i]:
            chosen.append(i)
            mark(i)
    return np.array(sorted(chosen), dtype=np.intp)


def build_nets(E: PointCloud, rho: float = 0.5, k_max: int | None = None) -> NetHierarchy:
    """Nested maximal nets at scales (diam + h) * rho**k, k = 0..k_max."""
    if not 0 < rho <= 0.5:
        raise ValueError("rho must lie in (0, 1/2]")
    if k_max is None:
        k_max = default_k_max(E, rho)
    if k_max < 0:
        raise ValueError("k_max must be non-negative")
    scales = top_scale(E) * rho ** np.arange(k_max + 1)
    nets = []
    prev = None
    for s in scales:
        prev = maximal_net(E.points, s, prev, E.tree)
        nets.append(prev)
    return NetHierarchy(E, rho, scales, tuple(nets))


# ---------------------------------------------------------------------------
# cubes


@dataclass
class Cube:
    id: int
    level: int
    center_index: int
    center: np.ndarray
    side: float
    members: np.ndarray
    parent: int = -1
    children: list = field(default_factory=list)

    @property
    def ball(self) -> Ball:
        return Ball(self.center, self.side)


def _nearest_with_ties(tree: cKDTree, center_ids: np.ndarray, queries: np.ndarray) -> np.ndarray:
    """Index (into center_ids) of the nearest center, ties to the smaller point index."""
    kq = min(4, len(center_ids))
    dist, j = tree.query(queries, k=kq)
    if kq == 1:
        return np.asarray(j).reshape(-1)
    dist = np.atleast_2d(dist)
    j = np.atleast_2d(j)
    best = j[:, 0].copy()
    tie = dist[:, 1] == dist[:, 0]
    for row in np.nonzero(tie)[0]:
        cand = j[row][dist[row] == dist[row, 0]]
        best[row] = cand[np.argmin(center_ids[cand])]
    return best


@dataclass(eq=False)
class CubeTree:
    """Christ-David style cube hierarchy of a cloud.

    ``labels[k, i]`` is the id of the level-k cube containing point i.  The side
    length of a level-k cube is ``5 * scales[k]``.
    """

    cloud: PointCloud
    rho: float
    c0: float
    scales: np.ndarray
    nets: tuple
    cubes: list
    levels: list
    labels: np.ndarray
    c0_measured: float
    warnings: list = field(default_factory=list)

    @property
    def root(self) -> Cube:
        return self.cubes[self.levels[0][0]]

    @property
    def depth(self) -> int:
        return len(self.levels) - 1

    def side(self, k: int) -> float:
        return 5.0 * float(self.scales[k])

    def descendants(self, cube_id: int, generations: int) -> list:
        out = [cube_id]
        for _ in range(generations):
            out = [c for q in out for c in self.cubes[q].children]
        return out

    def is_ancestor(self, a: int, b: int) -> bool:
        """True when cube ``a`` contains cube ``b`` (a cube contains itself)."""
        ca, cb = self.cubes[a], self.cubes[b]
        if ca.level > cb.level:
            return False
        return self.labels[ca.level, cb.center_index] == a


def _assign_bottom_up(E: PointCloud, nets: tuple) -> list:
    """Per-level arrays mapping each point to the cloud index of its cube center."""
    K = len(nets) - 1
    pts = E.points
    owner = [None] * (K + 1)
    fine = nets[K]
    owner[K] = fine[_nearest_with_ties(cKDTree(pts[fine]), fine, pts)]
    for k in range(K - 1, -1, -1):
        coarse = nets[k]
        child = nets[k + 1]
        in_coarse = np.isin(child, coarse)
        parent_of = np.empty(len(child), dtype=np.intp)
        parent_of[in_coarse] = child[in_coarse]
        if np.any(~in_coarse):
            sel = child[~in_coarse]
            parent_of[~in_coarse] = coarse[_nearest_with_ties(cKDTree(pts[coarse]), coarse, pts[sel])]
        lookup = np.full(len(pts), -1, dtype=np.intp)
        lookup[child] = parent_of
        owner[k] = lookup[owner[k + 1]]
    return owner


def measure_c0(E: PointCloud, labels: np.ndarray, cubes: list) -> float:
    """Largest c such that B(x_Q, c l(Q)) ∩ cloud ⊆ Q for every cube Q."""
    best = np.inf
    pts = E.points
    for q in cubes:
        if len(q.members) == E.size:
            continue
        # the nearest non-member bounds the admissible inner radius
        radius = q.side
        while True:
            nb = np.asarray(E.tree.query_ball_point(q.center, radius), dtype=np.intp)
            outside = nb[labels[q.level, nb] != q.id]
            if outside.size:
                d = np.linalg.norm(pts[outside] - q.center, axis=1).min()
                best = min(best, d / q.side)
                break
            radius *= 2.0
    return float(best)


def build_cubes(nets: NetHierarchy, rho: float | None = None, c0: float | None = None) -> CubeTree:
    """Cube hierarchy from nested nets with nearest-center assignment.

    Points at the finest level go to their nearest net point (ties to the
    smaller index); each net point of level k+1 is then attached to the nearest
    net point of level k, which makes the levels nested.  The inner constant of
    the ball sandwich is measured and ``c0`` is shrunk to it when necessary.
    """
    rho = nets.rho if rho is None else rho
    if rho != nets.rho:
        raise ValueError("rho must match the net hierarchy")
    requested = rho / 2 if c0 is None else float(c0)
    if not 0 < requested <= rho / 2:
        raise ValueError("c0 must lie in (0, rho/2]")
    E = nets.cloud
    owner = _assign_bottom_up(E, nets.nets)
    K = len(owner) - 1
    cubes: list = []
    levels: list = []
    labels = np.empty((K + 1, E.size), dtype=np.int64)
    for k in range(K + 1):
        centers, inverse = np.unique(owner[k], return_inverse=True)
        ids = []
        order = np.argsort(inverse, kind="stable")
        bounds = np.searchsorted(inverse[order], np.arange(len(centers) + 1))
        for j, c in enumerate(centers):
            cid = len(cubes)
            members = np.sort(order[bounds[j]:bounds[j + 1]])
            cubes.append(Cube(cid, k, int(c), E.points[c].copy(), 5.0 * float(nets.scales[k]), members))
            ids.append(cid)
        labels[k] = np.asarray(ids)[inverse]
        levels.append(ids)
        if k > 0:
            for cid in ids:
                q = cubes[cid]
                par = int(labels[k - 1, q.members[0]])
                q.parent = par
                cubes[par].children.append(cid)
    measured = measure_c0(E, labels, cubes)
    effective = min(requested, measured * (1 - 1e-9))
    notes = []
    if measured < requested:
        notes.append(f"sandwich inner constant shrunk from {requested:.6g} to measured {measured:.6g}")
        if c0 is not None:
            warnings.warn(notes[-1], RuntimeWarning, stacklevel=2)
    return CubeTree(E, rho, effective, nets.scales, nets.nets, cubes, levels, labels, measured, notes)


def christ_violations(tree: CubeTree, c0: float | None = None) -> dict:
    """Exhaustive check of partition, nesting and the ball sandwich per level."""
    E = tree.cloud
    c0 = tree.c0 if c0 is None else c0
    out = {"partition": 0, "nesting": 0, "sandwich_inner": 0, "sandwich_outer": 0}
    m = E.size
    for k, ids in enumerate(tree.levels):
        seen = np.zeros(m, dtype=np.int64)
        for cid in ids:
            seen[tree.cubes[cid].members] += 1
        out["partition"] += int(np.sum(seen != 1))
        if k > 0:
            pairs = np.unique(np.stack([tree.labels[k], tree.labels[k - 1]]), axis=1)
            out["nesting"] += int(len(pairs[0]) - len(np.unique(pairs[0])))
    for q in tree.cubes:
        d = np.linalg.norm(E.points[q.members] - q.center, axis=1)
        if d.max() >= q.side:
            out["sandwich_outer"] += 1
        inner = E.ball_indices(q.center, c0 * q.side)
        if inner.size and np.any(tree.labels[q.level, inner] != q.id):
            out["sandwich_inner"] += 1
    return out


# ---------------------------------------------------------------------------
# separated points and angles


@dataclass(frozen=True)
class SeparationWitness:
    indices: tuple
    points: np.ndarray
    kappa: float
    margins: np.ndarray
    radius: float


def affine_margin(points: np.ndarray, y: np.ndarray) -> np.ndarray:
    """dist(y, affine span of ``points``) for one or many y."""
    base = points[0]
    y = np.atleast_2d(y) - base
    if len(points) == 1:
        return np.linalg.norm(y, axis=1)
    dirs = points[1:] - base
    q, r = np.linalg.qr(dirs.T)
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-14 * max(1.0, np.abs(dirs).max())))
    q = q[:, :rank]
    resid = y - (y @ q) @ q.T
    return np.linalg.norm(resid, axis=1)


def _greedy_witness(P: np.ndarray, start: int, d: int, need: float):
    chosen = [start]
    margins = []
    for _ in range(d):
        m = affine_margin(P[chosen], P)
        j = int(np.argmax(m))
        if m[j] < need:
            return None
        chosen.append(j)
        margins.append(float(m[j]))
    return chosen, margins


def _exhaustive_witness(P: np.ndarray, d: int, need: float):
    def extend(chosen):
        if len(chosen) == d + 1:
            return chosen
        m = affine_margin(P[chosen], P)
        for j in np.nonzero(m >= need)[0]:
            got = extend(chosen + [int(j)])
            if got is not None:
                return got
        return None

    for i in range(len(P)):
        got = extend([i])
        if got is not None:
            margins = [float(affine_margin(P[got[:t + 1]], P[got[t + 1]])[0]) for t in range(d)]
            return got, margins
    return None


def separated_points_in_ball(E: PointCloud, ball: Ball, kappa: float, d: int, exhaustive_limit: int = 50):
    """(d+1, kappa)-separated points of E inside ``ball`` or None.

    A greedy farthest-point search runs first; when the ball holds at most
    ``exhaustive_limit`` points an exhaustive search settles the negative case.
    """
    if not 0 < kappa < 1:
        raise ValueError("kappa must lie in (0, 1)")
    idx = E.ball_indices(ball.center, ball.radius)
    if idx.size < d + 1:
        return None
    P = E.points[idx]
    need = kappa * ball.radius
    center_local = int(np.argmin(np.linalg.norm(P - ball.center, axis=1)))
    starts = [center_local]
    far = int(np.argmax(np.linalg.norm(P - P[center_local], axis=1)))
    if far != center_local:
        starts.append(far)
    found = None
    for s in starts:
        found = _greedy_witness(P, s, d, need)
        if found is not None:
            break
    if found is None and idx.size <= exhaustive_limit:
        found = _exhaustive_witness(P, d, need)
    if found is None:
        return None
    chosen, margins = found
    return SeparationWitness(tuple(int(idx[c]) for c in chosen), P[chosen].copy(), kappa,
                             np.asarray(margins), ball.radius)


def separated_points(E: PointCloud, Q: Cube, kappa: float, d: int, C1: float = 8.0):
    """Witness that C1 B_Q has (d+1, kappa)-separated points, searched in all of E."""
    return separated_points_in_ball(E, Ball(Q.center, C1 * Q.side), kappa, d)


def angle_diagnostic(Bprime: Ball, B: Ball, L: AffinePlane, Lprime: AffinePlane, witness: SeparationWitness,
                     E: PointCloud, d: int, **content_kw) -> tuple[float, float]:
    """Both sides of the plane-angle estimate for nested balls with separated points."""
    from .beta import beta_with_plane

    lhs = plane_distance_in_ball(L, Lprime, Bprime)
    b_big = beta_with_plane(E, B.scaled(2.0), d, 1.0, L, "beta_content", **content_kw)
    b_small = beta_with_plane(E, Bprime.scaled(2.0), d, 1.0, Lprime, "beta_content", **content_kw)
    ratio = B.radius / Bprime.radius
    rhs = witness.kappa ** (-(2 * d + 2)) * (ratio ** (d + 1) * b_big + b_small)
    return float(lhs), float(rhs)


# ---------------------------------------------------------------------------
# stopping-time regions


def coherence_constant(C1: float, C2: float) -> float:
    """M = 2 + 4 C2 + 4 C1 C2, the enlargement making neighbour balls nest."""
    return 2.0 + 4.0 * C2 + 4.0 * C1 * C2


def k_star(rho: float, c0: float, C1: float, kappa: float, rule: str = "largest", cap: int = 64) -> int:
    """Generation gap for Next: integers k >= 1 with rho**-k <= c0 / (2 C1 kappa rho).

    The admissible k form an initial segment {1, ..., K}.  The packing argument
    needs rho**k* small, so the default takes the largest admissible k; the
    ``smallest`` rule returns 1 whenever anything is admissible.
    """
    bound = c0 / (2.0 * C1 * kappa * rho)
    ok = [k for k in range(1, cap + 1) if rho ** (-k) <= bound]
    if not ok:
        raise ValueError(
            "no generation gap k >= 1 satisfies rho**-k <= c0/(2*C1*kappa*rho) "
            f"(rho={rho}, c0={c0:.4g}, C1={C1}, kappa={kappa}); decrease kappa")
    if rule == "largest":
        return ok[-1]
    if rule == "smallest":
        return ok[0]
    raise ValueError("rule must be 'largest' or 'smallest'")


@dataclass
class Region:
    top: int
    tree: list
    stop: list
    stop_bad: list
    next: list
    partial_sums: dict
    singleton: bool


@dataclass
class StoppingForest:
    cube_tree: CubeTree
    regions: dict
    top_layers: list
    bad: set
    witnesses: dict
    betas: dict
    params: dict
    clamped: int

    @property
    def top(self) -> list:
        seen = []
        for layer in self.top_layers:
            seen.extend(layer)
        return seen


def build_stopping_forest(tree: CubeTree, E: PointCloud | None = None, E0=None, d: int = 1, p: float = 1.0,
                          alpha: float = 0.0, delta: float = 0.1, kappa: float = 1e-4, C1: float = 8.0,
                          C2: float = 4.0, kstar_rule: str = "largest", c1: float | None = None,
                          c2: float | None = None, seed: int = 0) -> StoppingForest:
    """Tree/Stop/Next/Top decomposition driven by beta^{d,1}(M^2 B_T).

    ``E0`` is a boolean mask or index array selecting the points of interest
    (default: all).  Balls M^2 B_T larger than the cloud are clamped to radius
    diam + h, which already contains every point; clamps are counted.
    """
    from .beta import best_plane

    E = tree.cloud if E is None else E
    if E is not tree.cloud:
        raise ValueError("the cube tree must be built on E")
    if p != 1.0:
        raise ValueError("the stopping rule uses p = 1")
    if not (0 < delta < 1 and 0 < kappa < 1):
        raise ValueError("delta and kappa must lie in (0, 1)")
    if not 0 <= alpha < 1:
        raise ValueError("alpha must lie in [0, 1)")
    mask = np.zeros(E.size, dtype=bool)
    if E0 is None:
        mask[:] = True
    else:
        e0 = np.asarray(E0)
        if e0.dtype == bool:
            mask = e0.copy()
        else:
            mask[e0] = True
    M = coherence_constant(C1, C2)
    ks = k_star(tree.rho, tree.c0, C1, kappa, kstar_rule)
    clamp_radius = E.diameter + E.resolution
    cubes = tree.cubes

    meets = {q.id: bool(mask[q.members].any()) for q in cubes}
    witnesses: dict = {}
    bad: set = set()
    sep_cache: dict = {}

    def is_bad(cid: int) -> bool:
        if cid not in sep_cache:
            q = cubes[cid]
            w = separated_points(E, q, kappa, d, C1)
            sep_cache[cid] = w
            if w is not None:
                witnesses[cid] = w
            elif meets[cid]:
                bad.add(cid)
        return meets[cid] and sep_cache[cid] is None

    beta_cache: dict = {}
    betas: dict = {}
    clamped = [0]
    content_kw = {} if c1 is None else {"c1": c1}
    if c2 is not None:
        content_kw["c2"] = c2

    def term(cid: int) -> float:
        if cid in betas:
            return betas[cid][1]
        q = cubes[cid]
        radius = M * M * q.side
        if radius > clamp_radius:
            radius = clamp_radius
            clamped[0] += 1
        idx = E.ball_indices(q.center, radius)
        key = (radius, idx.tobytes())
        if key not in beta_cache:
            beta_cache[key] = best_plane(E, Ball(q.center, radius), d, 1.0, "beta_content", seed=seed,
                                         **content_kw).value
        b = beta_cache[key]
        t = b * b / q.side ** (2 * alpha)
        betas[cid] = (b, t)
        return t

    regions: dict = {}

    def run_region(qid: int) -> Region:
        if is_bad(qid):
            return Region(qid, [qid], [qid], [qid], tree.descendants(qid, ks), {qid: None}, True)
        in_tree, stop, stop_bad, sums = [], [], [], {}
        stack = [(qid, term(qid))]
        while stack:
            cid, s = stack.pop()
            in_tree.append(cid)
            sums[cid] = s
            kids = cubes[cid].children
            kid_bad = [c for c in kids if is_bad(c)]
            stops = bool(kid_bad)
            if not stops:
                stops = any(s + term(c) >= delta * delta for c in kids)
            if stops:
                stop.append(cid)
                if kid_bad:
                    stop_bad.append(cid)
                continue
            for c in reversed(kids):
                stack.append((c, s + term(c)))
        singleton = in_tree == [qid]
        nxt = [r for t in stop_bad for r in tree.descendants(t, ks) if meets[r]]
        return Region(qid, sorted(in_tree), sorted(stop), sorted(stop_bad), sorted(nxt), sums, singleton)

    root = tree.root.id
    layers = [[root]]
    frontier = [root]
    while frontier:
        nxt_layer = []
        for qid in frontier:
            if not meets[qid] or qid in regions:
                continue
            reg = run_region(qid)
            regions[qid] = reg
            nxt_layer.extend(reg.next)
        nxt_layer = sorted(set(nxt_layer) - set(regions))
        if nxt_layer:
            layers.append(nxt_layer)
        frontier = nxt_layer
    params = {"d": d, "p": p, "alpha": alpha, "delta": delta, "kappa": kappa, "C1": C1, "C2": C2, "M": M,
              "k_star": ks, "k_star_rule": kstar_rule, "rho": tree.rho, "c0": tree.c0}
    return StoppingForest(tree, regions, layers, bad, witnesses, betas, params, clamped[0])


def packing_ratio(forest: StoppingForest, d: int | None = None) -> float:
    """Sum of l(Q)^d over Top divided by l(Q_0)^d."""
    d = forest.params["d"] if d is None else d
    cubes = forest.cube_tree.cubes
    root = forest.top_layers[0][0]
    total = sum(cubes[q].side ** d for q in forest.top)
    return float(total / cubes[root].side ** d)


def region_violations(forest: StoppingForest) -> dict:
    """Stopping-region axioms and the partial-sum bound, counted over all regions."""
    tree = forest.cube_tree
    cubes = tree.cubes
    delta2 = forest.params["delta"] ** 2
    out = {"top": 0, "ancestors": 0, "siblings": 0, "stop_condition": 0, "witness": 0}
    for qid, reg in forest.regions.items():
        members = set(reg.tree)
        if qid not in members:
            out["top"] += 1
        for cid in reg.tree:
            if not tree.is_ancestor(qid, cid):
                out["top"] += 1
                continue
            cur = cubes[cid]
            while cur.id != qid:
                cur = cubes[cur.parent]
                if cur.id not in members:
                    out["ancestors"] += 1
                    break
            q = cubes[cid]
            if cid != qid and any(s not in members for s in cubes[q.parent].children):
                out["siblings"] += 1
            if not reg.singleton:
                if not reg.partial_sums[cid] < delta2:
                    out["stop_condition"] += 1
                if cid not in forest.witnesses:
                    out["witness"] += 1
    return out


def epsilon_numbers(forest: StoppingForest, region_top: int, seed: int = 0) -> dict:
    """eps(Q) = max over R ~ Q in the region of d_{C1 B_Q}(L_Q, L_R).

    L_T is the best beta^{d,1}(M^2 B_T) plane constrained through x_T.
    """
    from .beta import best_plane

    tree = forest.cube_tree
    E = tree.cloud
    cubes = tree.cubes
    reg = forest.regions[region_top]
    C1, C2, M, d = (forest.params[k] for k in ("C1", "C2", "M", "d"))
    clamp_radius = E.diameter + E.resolution
    planes = {}
    for cid in reg.tree:
        q = cubes[cid]
        radius = min(M * M * q.side, clamp_radius)
        planes[cid] = best_plane(E, Ball(q.center, radius), d, 1.0, "beta_content", seed=seed,
                                 through=q.center).plane
    ids = list(reg.tree)
    pts = {cid: E.points[cubes[cid].members] for cid in ids}
    eps = {}
    for cid in ids:
        q = cubes[cid]
        ball = Ball(q.center, C1 * q.side)
        best = 0.0
        for rid in ids:
            r = cubes[rid]
            if not (q.side / C2 <= r.side <= C2 * q.side):
                continue
            gap = cKDTree(pts[rid]).query(pts[cid])[0].min()
            if gap > C2 * min(q.side, r.side):
                continue
            best = max(best, plane_distance_in_ball(planes[cid], planes[rid], ball))
        eps[cid] = best
    return eps


def forest_to_json(forest: StoppingForest) -> dict:
    """Plain-data layout: cubes with parent links, per-cube beta and witness margins."""
    tree = forest.cube_tree
    cube_rows = []
    for q in tree.cubes:
        b = forest.betas.get(q.id)
        w = forest.witnesses.get(q.id)
        cube_rows.append({
            "id": q.id, "level": q.level, "parent": q.parent, "center_index": q.center_index,
            "side": q.side, "size": int(len(q.members)),
            "beta": None if b is None else b[0],
            "witness": None if w is None else {"indices": list(w.indices), "margins": w.margins.tolist()},
            "bad": q.id in forest.bad,
        })
    regions = [{
        "top": r.top, "tree": r.tree, "stop": r.stop, "stop_bad": r.stop_bad, "next": r.next,
        "singleton": r.singleton,
    } for _, r in sorted(forest.regions.items())]
    return {
        "params": forest.params, "rho": tree.rho, "c0_effective": tree.c0, "c0_measured": tree.c0_measured,
        "clamped_balls": forest.clamped, "cubes": cube_rows, "regions": regions,
        "top_layers": forest.top_layers, "packing_ratio": packing_ratio(forest),
    }


def tree_to_json(tree: CubeTree) -> dict:
    return {
        "rho": tree.rho, "c0_effective": tree.c0, "c0_measured": tree.c0_measured,
        "scales": tree.scales.tolist(), "warnings": tree.warnings,
        "cubes": [{"id": q.id, "level": q.level, "parent": q.parent, "center_index": q.center_index,
                   "side": q.side, "members": q.members.tolist()} for q in tree.cubes],
    }


__all__ = [
    "NetHierarchy", "build_nets", "maximal_net", "Cube", "CubeTree", "build_cubes", "christ_violations",
    "measure_c0", "SeparationWitness", "separated_points", "separated_points_in_ball", "angle_diagnostic",
    "coherence_constant", "k_star", "Region", "StoppingForest", "build_stopping_forest", "packing_ratio",
    "region_violations", "epsilon_numbers", "forest_to_json", "tree_to_json",
]
