"""Beta profiles, square functions and cone / paraboloid point classification."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .beta import BetaValue, _weighted_pca, beta_with_plane, best_plane, p_limit, plane_chart
from .cloud import PointCloud
from .geom import AffinePlane, Ball, ConeSpec, cone_components, in_truncated_cone
from .parallel import ordered_map, worker_count

VERDICTS = ("summable", "divergent", "indeterminate")
DEFAULT_LAMBDAS = (0.1, 0.25, 0.5, 1.0)


# ---------------------------------------------------------------------------
# profiles


@dataclass(frozen=True, eq=False)
class BetaProfile:
    point: np.ndarray
    base: float
    ks: np.ndarray
    scales: np.ndarray
    values: tuple
    kind: str
    p: float
    d: int
    checked_pairs: int = 0
    monotonicity_violations: int = 0

    @property
    def betas(self) -> np.ndarray:
        return np.array([v.value for v in self.values])

    def __len__(self) -> int:
        return len(self.values)


def scale_range(E: PointCloud, base: float, k_lo: int = 0) -> tuple[int, int]:
    """(k_lo, k_hi) with k_hi the largest k such that base^-k >= r_min."""
    if not base > 1:
        raise ValueError("base must exceed 1")
    k_hi = math.floor(math.log(1.0 / E.r_min) / math.log(base) + 1e-12)
    if base ** (-k_hi) < E.r_min:
        k_hi -= 1
    if k_hi < k_lo:
        raise ValueError(f"no scale base^-k with k >= {k_lo} lies above r_min = {E.r_min:.3g}")
    return k_lo, k_hi


def _profile_at(E: PointCloud, x, scales, d: int, p: float, kind: str, seed: int = 0,
                c1=None, c2=None) -> tuple[list, int, int]:
    """best_plane at decreasing radii, each also seeded with the previous scale's plane.

    Returns the values together with the number of adjacent pairs checked against
    monotonicity (the coarser plane reused in the finer ball) and the violations.
    """
    x = np.asarray(x, dtype=float)
    values: list = []
    violations = 0
    q = 1.0 if not np.isfinite(p) else 1.0 + d / p
    for r in scales:
        ball = Ball(x, float(r))
        prev = values[-1] if values else None
        extra = (prev.plane,) if prev is not None else ()
        bv = best_plane(E, ball, d, p, kind, seed=seed, extra_seeds=extra, c1=c1, c2=c2)
        if prev is not None:
            reused = beta_with_plane(E, ball, d, p, prev.plane, kind, c1, c2)
            bound = (prev.ball.radius / r) ** q * prev.value
            if reused > bound * (1 + 1e-12) + 1e-300:
                violations += 1
            if reused < bv.value:
                bv = BetaValue(kind, reused, prev.plane, p, d, ball)
        values.append(bv)
    return values, max(len(values) - 1, 0), violations


def beta_profile(E: PointCloud, x, d: int, p: float = math.inf, kind: str = "beta_inf", base: float = 10.0,
                 k_lo: int = 0, k_hi: int | None = None, seed: int = 0, c1=None, c2=None) -> BetaProfile:
    """beta(x, base^-k) for k = k_lo..k_hi, finest scale no smaller than r_min."""
    if not base > 1:
        raise ValueError("base must exceed 1")
    if k_hi is None:
        k_lo, k_hi = scale_range(E, base, k_lo)
    if k_hi < k_lo:
        raise ValueError("k_hi must be >= k_lo")
    if base ** (-k_hi) < E.r_min * (1 - 1e-12):
        raise ValueError(f"finest scale {base ** (-k_hi):.3g} is below r_min = {E.r_min:.3g}")
    x = np.asarray(x, dtype=float)
    if not E.is_centered(x):
        raise ValueError("x must lie within the resolution of E")
    ks = np.arange(k_lo, k_hi + 1)
    scales = base ** (-ks.astype(float))
    values, pairs, bad = _profile_at(E, x, scales, d, p, kind, seed, c1, c2)
    return BetaProfile(x.copy(), float(base), ks, scales, tuple(values), kind, p, d, pairs, bad)


# ---------------------------------------------------------------------------
# square functions


@dataclass(frozen=True)
class SquareThresholds:
    """Verdict configuration; defaults come from the synthetic calibration runs."""

    ratio: float = 0.9
    floor: float = 1e-2
    zero: float = 1e-12
    tail_fraction: float = 1.0 / 3.0
    min_tail: int = 2


@dataclass(frozen=True, eq=False)
class SquareFunctionResult:
    alpha: float
    increments: np.ndarray
    partial_sums: np.ndarray
    tail_slope: float
    ratio: float
    tail_start: int
    verdict: str

    @property
    def total(self) -> float:
        return float(self.partial_sums[-1])


def _tail_length(K: int, th: SquareThresholds) -> int:
    return min(K, max(th.min_tail, math.ceil(K * th.tail_fraction)))


def square_function(profile: BetaProfile, alpha: float, thresholds: SquareThresholds | None = None,
                    betas=None) -> SquareFunctionResult:
    """Partial sums of beta(x, r_k)^2 / r_k^(2 alpha) and a finite-scale verdict.

    The tail is the last third of the increments.  Summable when every tail beta
    is below ``zero``; divergent when every tail increment is at least ``floor``
    (a positive lower bound, the fitted constant being the tail minimum);
    otherwise summable when the log-linear fit of the tail increments decays with
    ratio <= ``ratio`` per step, and indeterminate if it does not.  The floor is
    tested before the decay fit because short tails of self-similar sets can fit
    a spurious decay while staying far from zero.
    """
    th = thresholds or SquareThresholds()
    if not 0.0 <= alpha < 1.0:
        raise ValueError("alpha must lie in [0, 1)")
    b = profile.betas if betas is None else np.asarray(betas, dtype=float)
    if b.size == 0:
        raise ValueError("empty profile")
    r = np.asarray(profile.scales, dtype=float)
    inc = b ** 2 / r ** (2 * alpha)
    sums = np.cumsum(inc)
    K = len(b)
    T = _tail_length(K, th)
    start = K - T
    tb, tr = b[start:], r[start:]
    if T >= 2:
        # log of the increments, regularised so zero betas stay finite; linear in alpha
        y = np.log(tb ** 2 + 1e-300) - 2 * alpha * np.log(tr)
        slope = float(np.polyfit(np.arange(T, dtype=float), y, 1)[0])
    else:
        slope = 0.0
    ratio = math.exp(min(slope, 700.0))
    if np.all(tb <= th.zero):
        verdict = "summable"
    elif np.all(inc[start:] >= th.floor):
        verdict = "divergent"
    elif T >= 2 and ratio <= th.ratio:
        verdict = "summable"
    else:
        verdict = "indeterminate"
    return SquareFunctionResult(float(alpha), inc, sums, slope, ratio, start, verdict)


def discretization_constant(base: float, alpha: float, d: int, p: float) -> float:
    """C = base^(2(alpha+1+d/p)) / ln(base): the dyadic sum is at most C times the integral."""
    q = 0.0 if not np.isfinite(p) else d / p
    return base ** (2 * (alpha + 1 + q)) / math.log(base)


@dataclass(frozen=True)
class DiscretizationCheck:
    dyadic: float
    integral: float
    constant: float

    @property
    def ratio(self) -> float:
        if self.integral == 0.0:
            return 1.0 if self.dyadic == 0.0 else math.inf
        return self.dyadic / self.integral

    @property
    def ok(self) -> bool:
        return 1.0 / self.constant <= self.ratio <= self.constant

    @property
    def dyadic_bounded(self) -> bool:
        """The guaranteed direction: dyadic <= C * integral (up to rounding)."""
        return self.dyadic <= self.constant * self.integral * (1 + 1e-9)


def discretization_check(E: PointCloud, x, d: int, alpha: float, p: float = math.inf, kind: str = "beta_inf",
                         base: float = 2.0, k_lo: int = 0, k_hi: int | None = None, substeps: int = 8,
                         seed: int = 0, c1=None, c2=None) -> DiscretizationCheck:
    """Dyadic sum over k_lo..k_hi against the trapezoid integral of beta^2 / r^(2 alpha) dr/r.

    The integral runs over [r_{k_hi}, base * r_{k_lo}], so every dyadic term is
    paired with the interval just above its scale.  With that pairing
    dyadic <= C * integral holds for every profile; the reverse bound is not
    guaranteed (a point can see new parts of E only between two dyadic radii).
    """
    if k_hi is None:
        k_lo, k_hi = scale_range(E, base, k_lo)
    steps = (k_hi - k_lo + 1) * substeps
    u = (k_lo - 1) + np.arange(steps + 1) / substeps
    scales = base ** (-u)
    values, _, _ = _profile_at(E, x, scales, d, p, kind, seed, c1, c2)
    b = np.array([v.value for v in values])
    g = b ** 2 / scales ** (2 * alpha)
    du = math.log(base) / substeps
    integral = float(np.sum((g[1:] + g[:-1]) / 2) * du)
    dyadic = float(np.sum(g[substeps::substeps]))
    return DiscretizationCheck(dyadic, integral, discretization_constant(base, alpha, d, p))


# ---------------------------------------------------------------------------
# tangent defect and certificates


def tangent_defect(E: PointCloud, x, V: AffinePlane, r: float, alpha: float) -> float:
    """sup over E ∩ B(x, r) of dist(y, V) / r^(1 + alpha)."""
    idx = E.ball_indices(x, r)
    if idx.size == 0:
        raise ValueError("E does not meet B(x, r)")
    return float(V.distance(E.points[idx]).max() / r ** (1 + alpha))


@dataclass(frozen=True)
class Certificate:
    """E ∩ B(x, r) minus x lies in the open cone / paraboloid X_alpha(x, plane, aperture, r)."""

    plane: AffinePlane
    aperture: float
    radius: float
    alpha: float
    score: float


def certificate_radii(E: PointCloud, r0: float, factor: float = 2.0) -> np.ndarray:
    """Geometric grid r0, r0/factor, ... down to r_min."""
    out = [r0]
    while out[-1] / factor >= E.r_min:
        out.append(out[-1] / factor)
    return np.array(out)


def _cone_score(x, pts: np.ndarray, plane: AffinePlane, alpha: float) -> float:
    if len(pts) == 0:
        return 0.0
    par, perp = cone_components(x, plane, pts)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(perp > 0, perp / par ** (1 + alpha), 0.0)
    return float(ratio.max())


def _line(theta: float, x) -> AffinePlane:
    return AffinePlane(np.array([[math.cos(theta), math.sin(theta)]]), x)


def _angular_gap_line(x, pts: np.ndarray) -> AffinePlane:
    """Line through x minimising the largest angle to the points (exact in the plane)."""
    v = pts - x
    phi = np.sort(np.mod(np.arctan2(v[:, 1], v[:, 0]), math.pi))
    gaps = np.diff(np.append(phi, phi[0] + math.pi))
    j = int(np.argmax(gaps))
    start = phi[(j + 1) % len(phi)]
    return _line(start + (math.pi - gaps[j]) / 2, x)


def best_cone_plane(E: PointCloud, x, d: int, alpha: float, r0: float, planes=(), seed: int = 0,
                    n_random: int = 8) -> tuple[float, AffinePlane]:
    """Plane V through x minimising max perp / par^(1+alpha) over E ∩ B(x, r0) minus x.

    A certificate at aperture lambda exists for V iff the score is < lambda.
    """
    x = np.asarray(x, dtype=float)
    n = E.dim
    idx = E.ball_indices(x, r0)
    pts = E.points[idx]
    pts = pts[np.linalg.norm(pts - x, axis=1) > 0]
    if len(pts) == 0:
        return 0.0, AffinePlane(np.eye(n)[:d], x)
    score = lambda pl: _cone_score(x, pts, pl, alpha)
    if n == 2 and d == 1:
        if alpha == 0.0:
            pl = _angular_gap_line(x, pts)
            return score(pl), pl
        thetas = np.linspace(0.0, math.pi, 2048, endpoint=False)
        vals = np.array([score(_line(t, x)) for t in thetas])
        i = int(np.argmin(vals))
        step = thetas[1] - thetas[0]
        res = minimize_scalar(lambda t: score(_line(t, x)), bounds=(thetas[i] - step, thetas[i] + step),
                              method="bounded", options={"xatol": 1e-12})
        t = float(res.x) if res.fun < vals[i] else float(thetas[i])
        pl = _line(t, x)
        return score(pl), pl
    rng = np.random.default_rng(seed)
    seeds = [pl.translated_to(x) for pl in planes]
    if len(pts) > d:
        seeds.append(_weighted_pca(pts, np.ones(len(pts)), d, x))
        for _ in range(n_random):
            pick = rng.choice(len(pts), size=d, replace=False)
            try:
                seeds.append(AffinePlane.through_points(np.vstack([x, pts[pick]])))
            except ValueError:
                continue
    if not seeds:
        seeds.append(AffinePlane(np.eye(n)[:d], x))
    cands = sorted(((score(pl), i, pl) for i, pl in enumerate(seeds)), key=lambda c: (c[0], c[1]))
    best_val, _, best = cands[0]
    if best_val <= 1e-15:
        return best_val, best
    chart = plane_chart(best, r0, through=x)
    x0 = np.zeros(chart.nparams)
    res = minimize(lambda th: score(chart(th)), x0, method="Nelder-Mead",
                   options={"maxiter": 400, "initial_simplex": np.vstack([x0, np.eye(chart.nparams) * 0.05]),
                            "xatol": 1e-10, "fatol": 0.0})
    refined = chart(res.x)
    val = score(refined)
    if val < best_val:
        return val, refined
    return best_val, best


def verify_certificate(E: PointCloud, x, cert: Certificate) -> bool:
    """Direct membership check of E ∩ B(x, r) minus x on the radius grid below cert.radius."""
    x = np.asarray(x, dtype=float)
    for r in certificate_radii(E, cert.radius):
        idx = E.ball_indices(x, r)
        pts = E.points[idx]
        pts = pts[np.linalg.norm(pts - x, axis=1) > 0]
        if len(pts) == 0:
            continue
        spec = ConeSpec(x, cert.plane, cert.aperture, r, cert.alpha)
        if not np.all(in_truncated_cone(pts, spec)):
            return False
    return True


def cone_certificate(E: PointCloud, x, d: int, lam: float, alpha: float = 0.0, r0: float | None = None,
                     planes=(), seed: int = 0) -> Certificate | None:
    """A verified certificate at aperture ``lam`` or None (no certificate found, not a disproof)."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    if r0 is None:
        r0 = E.r_min
    if not E.r_min * (1 - 1e-12) <= r0:
        raise ValueError("r0 must be at least r_min")
    score, plane = best_cone_plane(E, x, d, alpha, r0, planes, seed)
    if not score < lam:
        return None
    cert = Certificate(plane, float(lam), float(r0), float(alpha), score)
    return cert if verify_certificate(E, x, cert) else None


def smallest_certificate(E: PointCloud, x, d: int, alpha: float, r0: float, lambdas=DEFAULT_LAMBDAS,
                         planes=(), seed: int = 0) -> Certificate | None:
    """Certificate at the smallest aperture of the grid that succeeds."""
    score, plane = best_cone_plane(E, x, d, alpha, r0, planes, seed)
    for lam in sorted(lambdas):
        if score < lam:
            cert = Certificate(plane, float(lam), float(r0), float(alpha), score)
            if verify_certificate(E, x, cert):
                return cert
    return None


# ---------------------------------------------------------------------------
# batch classification


@dataclass(frozen=True)
class ClassifyParams:
    d: int = 1
    p: float | None = None
    kind: str | None = None
    alphas: tuple = (0.0,)
    base: float = 10.0
    k_lo: int = 0
    k_hi: int | None = None
    thresholds: SquareThresholds = field(default_factory=SquareThresholds)
    lambdas: tuple = DEFAULT_LAMBDAS
    verdict_lambda: float = 0.5
    seed: int = 0
    force: bool = False
    c1: float | None = None
    c2: float | None = None

    def resolved(self) -> "ClassifyParams":
        p = p_limit(self.d) if self.p is None else float(self.p)
        if p > p_limit(self.d):
            if not self.force:
                raise ValueError(f"p = {p} exceeds p(d) = {p_limit(self.d)}")
            warnings.warn(f"p = {p} exceeds p(d) = {p_limit(self.d)}; proceeding because force is set")
        kind = self.kind or ("beta_inf" if not np.isfinite(p) else "beta_content")
        alphas = tuple(sorted({float(a) for a in self.alphas} | {0.0}))
        for a in alphas:
            if not 0.0 <= a < 1.0:
                raise ValueError("alpha must lie in [0, 1)")
        if not self.base > 1:
            raise ValueError("base must exceed 1")
        if not all(lam > 0 for lam in self.lambdas):
            raise ValueError("apertures must be positive")
        return ClassifyParams(self.d, p, kind, alphas, self.base, self.k_lo, self.k_hi, self.thresholds,
                              tuple(sorted(self.lambdas)), self.verdict_lambda, self.seed, self.force, self.c1, self.c2)


_TRUTH = {"summable": True, "divergent": False, "indeterminate": None}


@dataclass(frozen=True, eq=False)
class PointLabel:
    """Square-function verdicts per alpha, certificates per alpha and their agreement.

    ``verdicts['cone']`` and ``verdicts['paraboloid'][alpha]`` are True/False/None;
    a certificate at aperture <= verdict_lambda forces True.
    """

    index: int
    profile: BetaProfile
    squares: dict
    certificates: dict
    verdicts: dict
    agreement: dict

    @property
    def certificate(self) -> Certificate | None:
        return self.certificates.get(0.0)


@dataclass(frozen=True, eq=False)
class ClassifyReport:
    params: ClassifyParams
    labels: list
    errors: list
    summary: dict


def label_point(E: PointCloud, i: int, params: ClassifyParams) -> PointLabel:
    x = E.points[i]
    prof = beta_profile(E, x, params.d, params.p, params.kind, params.base, params.k_lo, params.k_hi,
                        params.seed, params.c1, params.c2)
    planes = [v.plane for v in prof.values]
    squares, certs, agreement = {}, {}, {}
    paraboloid = {}
    for a in params.alphas:
        sq = square_function(prof, a, params.thresholds)
        squares[a] = sq
        r0 = float(prof.scales[sq.tail_start])
        cert = smallest_certificate(E, x, params.d, a, r0, params.lambdas, planes[::-1], params.seed)
        certs[a] = cert
        geometric = cert is not None and cert.aperture <= params.verdict_lambda
        agreement[a] = (sq.verdict == "summable") == geometric
        paraboloid[a] = True if geometric else _TRUTH[sq.verdict]
    verdicts = {"cone": paraboloid[0.0], "paraboloid": paraboloid}
    return PointLabel(int(i), prof, squares, certs, verdicts, agreement)


_WORKER_STATE: dict = {}


def _init_worker(E, params):
    _WORKER_STATE["E"] = E
    _WORKER_STATE["params"] = params


def _label_task(i):
    try:
        return label_point(_WORKER_STATE["E"], i, _WORKER_STATE["params"])
    except Exception as exc:  # collected by the caller
        return (int(i), f"{type(exc).__name__}: {exc}")


def summarize(labels: list, alphas) -> dict:
    n = len(labels)
    out = {"points": n}
    if n == 0:
        return out
    for a in alphas:
        verdicts = [lab.squares[a].verdict for lab in labels]
        out[f"alpha={a:g}"] = {
            "summable": sum(v == "summable" for v in verdicts) / n,
            "divergent": sum(v == "divergent" for v in verdicts) / n,
            "indeterminate": sum(v == "indeterminate" for v in verdicts) / n,
            "certified": sum(lab.certificates[a] is not None for lab in labels) / n,
            "agreement": sum(lab.agreement[a] for lab in labels) / n,
        }
    return out


def classify_points(E: PointCloud, params: ClassifyParams | None = None, indices=None,
                    workers: int | None = None) -> ClassifyReport:
    """Label the requested points; per-point failures are collected, never raised."""
    params = (params or ClassifyParams()).resolved()
    if params.k_hi is None:
        k_lo, k_hi = scale_range(E, params.base, params.k_lo)
        params = ClassifyParams(**{**params.__dict__, "k_lo": k_lo, "k_hi": k_hi})
    idx = list(range(E.size)) if indices is None else [int(i) for i in indices]
    workers = worker_count() if workers is None else workers
    results = ordered_map(_label_task, idx, workers, _init_worker, (E, params))
    labels = [r for r in results if isinstance(r, PointLabel)]
    errors = [r for r in results if not isinstance(r, PointLabel)]
    return ClassifyReport(params, labels, errors, summarize(labels, params.alphas))
