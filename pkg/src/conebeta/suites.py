"""Property suites behind ``conebeta verify``.

Exact inequalities are counted as violations; inequalities that only hold up
to a constant are reported as fitted constants (max of lhs / rhs) computed at
two sample sizes, and pass when the constant does not grow by more than
``GROWTH_LIMIT`` when the sample size doubles.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .beta import best_plane, beta_with_plane
from .choquet import ValuedCloud, choquet_integral
from .cloud import PointCloud
from .content import HausdorffContent
from .geom import Ball
from .nets_cubes import (angle_diagnostic, build_cubes, build_nets, build_stopping_forest, christ_violations,
                         packing_ratio, region_violations, separated_points_in_ball)
from .synth import SynthSpec, generate

GROWTH_LIMIT = 1.5
REL_TOL = 1e-12


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    violations: int = 0
    constants: dict = field(default_factory=dict)
    growth: dict = field(default_factory=dict)
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0 and all(g <= GROWTH_LIMIT for g in self.growth.values())

    def as_dict(self) -> dict:
        return {"suite": self.name, "passed": self.passed, "checks": self.checks, "violations": self.violations,
                "constants": self.constants, "growth": self.growth, "seconds": round(self.seconds, 3),
                "notes": self.notes}


def random_cloud(rng: np.random.Generator, n: int, m: int) -> PointCloud:
    """Uniform points in the unit cube; resolution = largest nearest-neighbour gap."""
    pts = rng.random((m, n))
    cloud = PointCloud(pts, 1.0)
    gaps, _ = cloud.tree.query(pts, k=2)
    return PointCloud(pts, float(gaps[:, 1].max()))


def _curves(size: int) -> list:
    """Lower content regular test sets in the plane (d = 1)."""
    return [generate(SynthSpec("lipschitz_graph", sample_count=size))[0],
            generate(SynthSpec("cusp_graph", sample_count=size, alpha0=0.5))[0],
            generate(SynthSpec("spiral", sample_count=size, turns=1.0))[0]]


def _centers(E: PointCloud, rng: np.random.Generator, count: int) -> np.ndarray:
    return E.points[rng.choice(E.size, size=min(count, E.size), replace=False)]


def _fit(ratios: list) -> float:
    vals = [r for r in ratios if np.isfinite(r)]
    return float(max(vals)) if vals else 0.0


def _ratio(lhs: float, rhs: float) -> float:
    if rhs > 0:
        return lhs / rhs
    return 0.0 if lhs <= 0 else math.inf


def _two_sizes(result: SuiteResult, label: str, fn, size: int) -> None:
    """Record fn(size) and fn(2 size) and their growth."""
    small, large = fn(size), fn(2 * size)
    result.constants[f"{label}@{size}"] = small
    result.constants[f"{label}@{2 * size}"] = large
    result.growth[label] = large / small if small > 0 else (1.0 if large == 0 else math.inf)


# ---------------------------------------------------------------------------
# exact suites


def monotonicity_suite(n_clouds: int = 200, outer: int = 5, inner: int = 10, seed: int = 0) -> SuiteResult:
    """beta(B', L_B) <= (r_B / r_B')^(1 + d/p) beta(B, L_B) for nested balls centred on E.

    L_B is the optimiser's plane for B; every cloud contributes outer * inner pairs.
    beta_inf runs on every cloud, beta_bar (p = 2) on every 10th and
    beta_content (p = 2) on every 20th.
    """
    res = SuiteResult("monotonicity")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    for c in range(n_clouds):
        n = 2 if c % 2 == 0 else 3
        E = random_cloud(rng, n, int(rng.integers(40, 120)))
        d = 1 if n == 2 or c % 4 == 1 else 2
        kinds = [("beta_inf", math.inf)]
        if c % 10 == 0:
            kinds.append(("beta_bar", 2.0))
        if c % 20 == 0:
            kinds.append(("beta_content", 2.0))
        for kind, p in kinds:
            q = 1.0 if not np.isfinite(p) else 1.0 + d / p
            for x in _centers(E, rng, outer):
                r = float(rng.uniform(0.3, 0.9))
                B = Ball(x, r)
                bv = best_plane(E, B, d, p, kind, seed=seed)
                inside = E.ball_indices(x, r)
                for _ in range(inner):
                    y = E.points[rng.choice(inside)]
                    room = r - float(np.linalg.norm(y - x))
                    rp = float(rng.uniform(0.05, 1.0)) * room
                    if rp <= 0:
                        continue
                    val = beta_with_plane(E, Ball(y, rp), d, p, bv.plane, kind)
                    bound = (r / rp) ** q * bv.value
                    res.checks += 1
                    if val > bound * (1 + REL_TOL) + 1e-300:
                        res.violations += 1
    res.seconds = time.perf_counter() - t0
    return res


def bar_vs_content_suite(size: int = 300, balls: int = 6, p: float = 2.0, seed: int = 0) -> SuiteResult:
    """bar-beta(B, L) <= beta(B, L) exactly; beta(B, L) <= C bar-beta(2B, L) fitted."""
    res = SuiteResult("bar_vs_content")
    t0 = time.perf_counter()

    def run(m: int) -> float:
        rng = np.random.default_rng(seed)
        ratios = []
        for E in _curves(m):
            for x in _centers(E, rng, balls):
                for r in (0.4, 0.2, 0.1):
                    B = Ball(x, r)
                    L = best_plane(E, B, 1, p, "beta_content", seed=seed).plane
                    content = beta_with_plane(E, B, 1, p, L, "beta_content")
                    bar = beta_with_plane(E, B, 1, p, L, "beta_bar")
                    res.checks += 1
                    if bar > content * (1 + REL_TOL) + 1e-300:
                        res.violations += 1
                    ratios.append(_ratio(content, beta_with_plane(E, B.scaled(2.0), 1, p, L, "beta_bar")))
        return _fit(ratios)

    _two_sizes(res, "C", run, size)
    res.seconds = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# fitted-constant suites


def p_comparison_suite(size: int = 300, balls: int = 6, ps=(2.0, 4.0), seed: int = 0) -> SuiteResult:
    """beta^{d,1}(B, L) <= C beta^{d,p}(B, L) with L optimal for the p-number."""
    res = SuiteResult("p_comparison")
    t0 = time.perf_counter()
    for p in ps:
        def run(m: int, p=p) -> float:
            rng = np.random.default_rng(seed)
            ratios = []
            for E in _curves(m):
                for x in _centers(E, rng, balls):
                    for r in (0.4, 0.2, 0.1):
                        B = Ball(x, r)
                        bv = best_plane(E, B, 1, p, "beta_content", seed=seed)
                        one = beta_with_plane(E, B, 1, 1.0, bv.plane, "beta_content")
                        res.checks += 1
                        ratios.append(_ratio(one, bv.value))
            return _fit(ratios)

        _two_sizes(res, f"C(p={p:g})", run, size)
    res.seconds = time.perf_counter() - t0
    return res


def betainf_suite(size: int = 300, balls: int = 6, alphas=(0.0, 0.3, 0.7), seed: int = 0) -> SuiteResult:
    """r^-alpha beta_inf(B/2) <= C (r^-alpha beta^{d,1}(B))^(1/(d+1)), d = 1."""
    res = SuiteResult("beta_inf_bound")
    t0 = time.perf_counter()
    d = 1

    def pairs(m: int) -> list:
        rng = np.random.default_rng(seed)
        out = []
        for E in _curves(m):
            for x in _centers(E, rng, balls):
                for r in (0.4, 0.2, 0.1):
                    B = Ball(x, r)
                    b_inf = best_plane(E, B.scaled(0.5), d, math.inf, "beta_inf", seed=seed).value
                    b_one = best_plane(E, B, d, 1.0, "beta_content", seed=seed).value
                    out.append((r, b_inf, b_one))
        return out

    cache = {m: pairs(m) for m in (size, 2 * size)}
    for a in alphas:
        def run(m: int, a=a) -> float:
            ratios = []
            for r, b_inf, b_one in cache[m]:
                res.checks += 1
                ratios.append(_ratio(r ** -a * b_inf, (r ** -a * b_one) ** (1.0 / (d + 1))))
            return _fit(ratios)

        _two_sizes(res, f"C(alpha={a:g})", run, size)
    res.seconds = time.perf_counter() - t0
    return res


def jensen_suite(size: int = 300, functions: int = 8, ps=(2.0, 3.0, math.inf), seed: int = 0) -> SuiteResult:
    """(1/H(E)) ∫ f dH <= C ((1/H(E)) ∫ f^p dH)^(1/p), the p = inf case being sup f."""
    res = SuiteResult("jensen")
    t0 = time.perf_counter()
    for p in ps:
        def run(m: int, p=p) -> float:
            rng = np.random.default_rng(seed)
            ratios = []
            for E in _curves(m):
                H = HausdorffContent(E, 1)
                total = H.value(np.arange(E.size))
                for _ in range(functions):
                    w = rng.normal(size=E.dim)
                    f = np.abs(np.sin(E.points @ w * rng.uniform(1, 6) + rng.uniform(0, math.pi)))
                    vc = ValuedCloud(E, f)
                    lhs = choquet_integral(vc, None, 1.0, H) / total
                    if np.isfinite(p):
                        rhs = (choquet_integral(vc, None, p, H) / total) ** (1.0 / p)
                    else:
                        rhs = float(f.max())
                    res.checks += 1
                    ratios.append(_ratio(lhs, rhs))
            return _fit(ratios)

        _two_sizes(res, f"C(p={p:g})", run, size)
    res.seconds = time.perf_counter() - t0
    return res


def _holes(E: PointCloud, windows=((-0.62, -0.55), (0.18, 0.26), (0.7, 0.75))) -> np.ndarray:
    t = E.points[:, 0]
    keep = np.ones(E.size, dtype=bool)
    for a, b in windows:
        keep &= ~((t > a) & (t < b))
    return np.nonzero(keep)[0]


def _graphs(m: int) -> list:
    return [generate(SynthSpec("lipschitz_graph", sample_count=m))[0],
            generate(SynthSpec("cusp_graph", sample_count=m, alpha0=0.5))[0]]


def _distance_term(E1: PointCloud, H1: HausdorffContent, E2: PointCloud, center, radius: float, r: float,
                   p: float) -> float:
    """((1/r^d) ∫_{E1 ∩ B(center, radius)} (dist(., E2)/r)^p dH)^(1/p), d = 1."""
    idx = E1.ball_indices(center, radius)
    vals = np.zeros(E1.size)
    vals[idx] = E2.distance_to(E1.points[idx]) / r
    return (choquet_integral(ValuedCloud(E1, vals), idx, p, H1) / r) ** (1.0 / p)


def graph_transfer_suite(size: int = 300, balls: int = 6, p: float = 2.0, seed: int = 0) -> SuiteResult:
    """bar-beta_{E1}(x, r) <= C [bar-beta_{E2}(y, 2r) + distance term] on (graph, graph minus holes) pairs."""
    res = SuiteResult("graph_transfer")
    t0 = time.perf_counter()

    def run(m: int) -> float:
        rng = np.random.default_rng(seed)
        ratios = []
        for F in _graphs(m):
            G = F.subset(_holes(F))
            for E1, E2 in ((F, G), (G, F)):
                H1 = HausdorffContent(E1, 1)
                for x in _centers(E1, rng, balls):
                    for r in (0.4, 0.2, 0.1):
                        y = E2.points[E2.nearest_index(x)]
                        if np.linalg.norm(y - x) > r:
                            continue
                        lhs = best_plane(E1, Ball(x, r), 1, p, "beta_bar", seed=seed).value
                        b2 = best_plane(E2, Ball(y, 2 * r), 1, p, "beta_bar", seed=seed).value
                        rhs = b2 + _distance_term(E1, H1, E2, x, 2 * r, r, p)
                        res.checks += 1
                        ratios.append(_ratio(lhs, rhs))
        return _fit(ratios)

    _two_sizes(res, "C", run, size)
    res.seconds = time.perf_counter() - t0
    return res


def subset_transfer_suite(size: int = 300, balls: int = 6, p: float = 2.0, seed: int = 0) -> SuiteResult:
    """beta_E(B, L) <= C [beta_F(2B, L) + distance term] for E = F minus holes."""
    res = SuiteResult("subset_transfer")
    t0 = time.perf_counter()

    def run(m: int) -> float:
        rng = np.random.default_rng(seed)
        ratios = []
        for F in _graphs(m):
            E = F.subset(_holes(F))
            HF = HausdorffContent(F, 1)
            for x in _centers(E, rng, balls):
                for r in (0.4, 0.2, 0.1):
                    B = Ball(x, r)
                    L = best_plane(F, B.scaled(2.0), 1, p, "beta_content", seed=seed).plane
                    lhs = beta_with_plane(E, B, 1, p, L, "beta_content")
                    rhs = beta_with_plane(F, B.scaled(2.0), 1, p, L, "beta_content") \
                        + _distance_term(F, HF, E, x, 2 * r, r, p)
                    res.checks += 1
                    ratios.append(_ratio(lhs, rhs))
        return _fit(ratios)

    _two_sizes(res, "C", run, size)
    res.seconds = time.perf_counter() - t0
    return res


def angle_suite(size: int = 300, balls: int = 6, kappa: float = 0.1, seed: int = 0) -> SuiteResult:
    """d_{B'}(L, L') <= C kappa^-(2d+2) [(r_B/r_B')^(d+1) beta(2B, L) + beta(2B', L')]."""
    res = SuiteResult("angle")
    t0 = time.perf_counter()

    def run(m: int) -> float:
        rng = np.random.default_rng(seed)
        ratios = []
        for E in _curves(m):
            for x in _centers(E, rng, balls):
                B = Ball(x, 0.4)
                L = best_plane(E, B.scaled(2.0), 1, 1.0, "beta_content", seed=seed).plane
                for rp in (0.2, 0.1, 0.05):
                    Bp = Ball(x, rp)
                    wit = separated_points_in_ball(E, Bp, kappa, 1)
                    if wit is None:
                        continue
                    Lp = best_plane(E, Bp.scaled(2.0), 1, 1.0, "beta_content", seed=seed).plane
                    lhs, rhs = angle_diagnostic(Bp, B, L, Lp, wit, E, 1)
                    res.checks += 1
                    ratios.append(_ratio(lhs, rhs))
        return _fit(ratios)

    _two_sizes(res, "C", run, size)
    res.seconds = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# structural suites


def christ_suite(n_clouds: int = 20, max_points: int = 2000, seed: int = 0) -> SuiteResult:
    """Partition, nesting and sandwich properties on random clouds and every synthetic family."""
    from .synth import FAMILIES

    res = SuiteResult("christ")
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    clouds = [random_cloud(rng, 2 + (i % 2), int(rng.integers(200, max_points + 1))) for i in range(n_clouds)]
    clouds += [generate(SynthSpec(f))[0] for f in FAMILIES]
    for E in clouds:
        tree = build_cubes(build_nets(E))
        bad = christ_violations(tree)
        res.checks += 1
        res.violations += sum(bad.values())
        res.constants[f"c0(n={E.dim},m={E.size})"] = tree.c0
    res.seconds = time.perf_counter() - t0
    return res


def plane_with_mast(m: int = 25, mast: int = 600, height: float = 6.0) -> PointCloud:
    """A grid on the unit square in R^3 with a long vertical segment over its centre.

    For d = 2 the cubes high up the segment lack three separated points, so the
    stopping forest has bad cubes and several Top layers.
    """
    g = np.linspace(0.0, 1.0, m)
    grid = np.array([[a, b, 0.0] for a in g for b in g])
    seg = np.column_stack([np.full(mast, 0.5), np.full(mast, 0.5), np.linspace(0.05, height, mast)])
    return PointCloud(np.vstack([grid, seg]), 0.03)


def forest_suite(seed: int = 0) -> SuiteResult:
    """Stopping-time invariants on synthetic sets and packing monotone over Cantor depths."""
    res = SuiteResult("forest")
    t0 = time.perf_counter()
    mast = build_stopping_forest(build_cubes(build_nets(plane_with_mast())), d=2, seed=seed)
    bad = region_violations(mast)
    res.checks += len(mast.regions)
    res.violations += sum(bad.values())
    res.constants["packing[plane_with_mast]"] = packing_ratio(mast)
    res.constants["regions[plane_with_mast]"] = len(mast.regions)
    specs = [SynthSpec("lipschitz_graph"), SynthSpec("cusp_graph"), SynthSpec("two_lines"),
             SynthSpec("cantor4", depth=4), SynthSpec("cantor4", depth=5), SynthSpec("cantor4", depth=6)]
    packing = {}
    for spec in specs:
        E, _ = generate(spec)
        forest = build_stopping_forest(build_cubes(build_nets(E)), d=1, seed=seed)
        bad = region_violations(forest)
        res.checks += len(forest.regions)
        res.violations += sum(bad.values())
        ratio = packing_ratio(forest)
        key = spec.family if spec.family != "cantor4" else f"cantor4(depth={spec.depth})"
        packing[key] = ratio
        if ratio > 50:
            res.violations += 1
            res.notes.append(f"packing ratio {ratio:.3g} exceeds 50 for {key}")
    depths = [packing[f"cantor4(depth={k})"] for k in (4, 5, 6)]
    if any(b > a * (1 + REL_TOL) for a, b in zip(depths, depths[1:])):
        res.violations += 1
        res.notes.append("Cantor packing ratio increased with depth")
    res.constants.update({f"packing[{k}]": v for k, v in packing.items()})
    res.seconds = time.perf_counter() - t0
    return res


SUITES = {
    "monotonicity": monotonicity_suite,
    "p_comparison": p_comparison_suite,
    "beta_inf_bound": betainf_suite,
    "jensen": jensen_suite,
    "bar_vs_content": bar_vs_content_suite,
    "graph_transfer": graph_transfer_suite,
    "subset_transfer": subset_transfer_suite,
    "angle": angle_suite,
    "christ": christ_suite,
    "forest": forest_suite,
}


def run_suites(names=None, seed: int = 0) -> list:
    names = list(SUITES) if names is None else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suite(s) {unknown}; available: {sorted(SUITES)}")
    return [SUITES[n](seed=seed) for n in names]
