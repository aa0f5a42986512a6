import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conebeta.beta import best_plane
from conebeta.classify import (BetaProfile, Certificate, ClassifyParams, SquareThresholds, beta_profile,
                               classify_points, cone_certificate, discretization_check, discretization_constant,
                               scale_range, smallest_certificate, square_function, tangent_defect,
                               verify_certificate)
from conebeta.cloud import PointCloud
from conebeta.geom import AffinePlane, Ball, ConeSpec, in_truncated_cone
from conebeta.synth import SynthSpec, generate
from oracles import cone_emptiness_angles, grid_beta_inf

VERDICT_RANK = {"summable": 0, "indeterminate": 1, "divergent": 2}


def sq(betas, alpha, base=2.0, thresholds=None):
    """Square function of a hand-made profile beta(base^-k), k = 0, 1, ..."""
    ks = np.arange(len(betas))
    prof = BetaProfile(np.zeros(2), base, ks, base ** -ks.astype(float), (), "beta_inf", math.inf, 1)
    return square_function(prof, alpha, thresholds, betas=betas)


def cusp(m=2001, alpha0=0.5):
    E, gt = generate(SynthSpec("cusp_graph", sample_count=m, alpha0=alpha0))
    return E, E.points[gt.notes["origin_index"]]


def two_lines(m=801):
    E, gt = generate(SynthSpec("two_lines", sample_count=m))
    return E, E.points[gt.notes["crossing_index"]]


# profiles -----------------------------------------------------------------


def test_scale_range(rng):
    E = PointCloud(rng.random((50, 2)), 1e-3)
    assert scale_range(E, 10) == (0, 2)
    assert scale_range(E, 2) == (0, 7)
    with pytest.raises(ValueError):
        scale_range(E, 1.0)
    with pytest.raises(ValueError):
        scale_range(E, 10, k_lo=5)


def test_plane_profile_vanishes():
    E, _ = generate(SynthSpec("plane", n=3, d=2, sample_count=900))
    prof = beta_profile(E, E.points[100], 2, base=2)
    assert prof.betas.max() <= 1e-9
    assert prof.monotonicity_violations == 0


def test_cusp_rate_matches_grid_oracle():
    E, x = cusp()
    prof = beta_profile(E, x, 1, base=2, k_lo=1, k_hi=8)
    lows, highs = zip(*[grid_beta_inf(E.points, x, r)[::-1] for r in prof.scales])
    assert np.all(prof.betas >= np.array(lows) - 1e-12)
    assert np.all(prof.betas <= np.array(highs) + 1e-12)
    oracle_slope = np.polyfit(np.log(prof.scales), np.log(highs), 1)[0]
    slope = np.polyfit(np.log(prof.scales), np.log(prof.betas), 1)[0]
    assert 0.4 <= oracle_slope <= 0.6 and 0.4 <= slope <= 0.6


def test_cantor_profile_stays_large():
    E, _ = generate(SynthSpec("cantor4", depth=6))
    for i in (0, 1000, 2222, 4095):
        prof = beta_profile(E, E.points[i], 1, base=2)
        mid = prof.betas[1:-1]
        assert mid.min() >= 0.1


def test_profile_errors_and_determinism(rng):
    E = PointCloud(rng.random((60, 2)), 0.01)
    with pytest.raises(ValueError):
        beta_profile(E, E.points[0], 1, base=2, k_lo=0, k_hi=9)
    with pytest.raises(ValueError):
        beta_profile(E, [5.0, 5.0], 1)
    a = beta_profile(E, E.points[0], 1, 2.0, "beta_content", base=2)
    b = beta_profile(E, E.points[0], 1, 2.0, "beta_content", base=2)
    assert np.array_equal(a.betas, b.betas)


# square functions ---------------------------------------------------------


def test_square_function_examples():
    zero = sq(np.zeros(10), 0.0)
    assert zero.total == 0.0 and zero.verdict == "summable"
    k = np.arange(12)
    geo = sq(2.0 ** (-k / 2), 0.0)
    assert geo.verdict == "summable" and geo.ratio == pytest.approx(0.5)
    assert geo.total == pytest.approx(2.0 * (1 - 0.5 ** 12))
    const = sq(np.full(10, 0.5), 0.0)
    assert const.verdict == "divergent" and np.allclose(const.increments, 0.25)
    # a constant below the divergence floor is reported, not guessed
    faint = sq(np.full(10, 0.05), 0.0)
    assert faint.verdict == "indeterminate"
    assert sq(np.full(10, 0.05), 0.0, thresholds=SquareThresholds(floor=1e-3)).verdict == "divergent"


def test_square_function_alpha_weights():
    k = np.arange(10)
    b = 2.0 ** (-k / 2)
    # beta^2 / r^(2 alpha) = 2^(-k (1 - 2 alpha))
    assert sq(b, 0.25).ratio == pytest.approx(2 ** -0.5)
    assert sq(b, 0.75).verdict == "divergent"
    with pytest.raises(ValueError):
        sq(b, 1.0)


@given(st.lists(st.floats(0.0, 1.0), min_size=3, max_size=14), st.floats(0.0, 0.95), st.floats(0.0, 0.95),
       st.sampled_from([2.0, 10.0]))
def test_partial_sums_and_alpha_monotonicity(betas, a1, a2, base):
    lo, hi = sorted((a1, a2))
    s_lo, s_hi = sq(np.array(betas), lo, base), sq(np.array(betas), hi, base)
    assert np.all(np.diff(s_lo.partial_sums) >= 0)
    assert np.all(s_lo.partial_sums <= s_hi.partial_sums * (1 + 1e-12) + 1e-300)
    assert VERDICT_RANK[s_lo.verdict] <= VERDICT_RANK[s_hi.verdict]


def test_discretization_constant_and_bounds():
    assert discretization_constant(2.0, 0.0, 1, math.inf) == pytest.approx(4 / math.log(2))
    assert discretization_constant(2.0, 0.5, 1, 2.0) == pytest.approx(2 ** 4 / math.log(2))
    E, x = cusp()
    for a in (0.0, 0.5):
        chk = discretization_check(E, x, 1, a, k_lo=1, k_hi=7)
        assert chk.ok and chk.dyadic <= chk.constant * chk.integral


# tangent defects and certificates ----------------------------------------


def test_tangent_defect_examples():
    t = np.linspace(-1, 1, 201)
    flat = PointCloud(np.column_stack([t, 0 * t]), 0.005)
    V = AffinePlane([[1.0, 0.0]], [0.0, 0.0])
    assert tangent_defect(flat, [0.0, 0.0], V, 0.5, 0.3) == 0.0
    E = PointCloud([[0.0, 0.0], [0.1, 0.02], [0.9, 0.0]], 0.05)
    assert tangent_defect(E, [0.0, 0.0], V, 0.5, 0.0) == pytest.approx(0.02 / 0.5)
    C, x = cusp(4001)
    vals = [tangent_defect(C, x, V, r, 0.5) for r in (0.1, 0.05, 0.025)]
    assert all(0.8 <= v <= 1.0 for v in vals)
    with pytest.raises(ValueError):
        tangent_defect(flat, [5.0, 5.0], V, 0.1, 0.0)


def test_flat_set_is_certified_at_every_aperture():
    t = np.linspace(-1, 1, 401)
    E = PointCloud(np.column_stack([t, 0 * t]), 0.0025)
    for lam in (0.01, 0.1, 1.0):
        cert = cone_certificate(E, E.points[200], 1, lam, r0=0.5)
        assert cert is not None and cert.score == 0.0


def test_orthogonal_lines_have_no_certificate_below_one():
    E, x = two_lines()
    r0 = 0.2
    pts = E.points[E.ball_indices(x, r0)]
    pts = pts[np.linalg.norm(pts - x, axis=1) > 0]
    for lam in (0.1, 0.5, 0.99):
        assert cone_certificate(E, x, 1, lam, r0=r0) is None
        assert cone_emptiness_angles(x, pts, lam).size == 0
    # lines at 45 degrees to both arms sit exactly on the boundary, so even lambda = 1 fails
    assert cone_certificate(E, x, 1, 1.0, r0=r0) is None
    assert cone_certificate(E, x, 1, 1.5, r0=r0) is not None


def test_cusp_paraboloid_certificate_is_horizontal():
    E, x = cusp(4001)
    cert = cone_certificate(E, x, 1, 1.0, alpha=0.4, r0=0.2)
    assert cert is not None
    assert abs(cert.plane.basis[0, 1]) < 1e-6
    pts = E.points[E.ball_indices(x, 0.2)]
    pts = pts[np.linalg.norm(pts - x, axis=1) > 0]
    assert np.all(in_truncated_cone(pts, ConeSpec(x, AffinePlane([[1.0, 0.0]], x), 1.0, 0.2, 0.4)))
    assert cone_emptiness_angles(x, pts, 1.0, 0.4).size > 0


def test_certificate_verification_rejects_bad_planes():
    E, x = cusp()
    vertical = Certificate(AffinePlane([[0.0, 1.0]], x), 0.5, 0.2, 0.0, 0.0)
    assert not verify_certificate(E, x, vertical)
    with pytest.raises(ValueError):
        cone_certificate(E, x, 1, 0.0)
    with pytest.raises(ValueError):
        cone_certificate(E, x, 1, 0.5, r0=E.r_min / 2)


def test_smallest_certificate_picks_the_smallest_aperture():
    E, x = cusp()
    cert = smallest_certificate(E, x, 1, 0.0, 0.05)
    assert cert is not None and cert.score < cert.aperture
    smaller = [lam for lam in (0.1, 0.25, 0.5, 1.0) if lam < cert.aperture]
    assert all(cone_certificate(E, x, 1, lam, r0=0.05) is None for lam in smaller)


# batch classification ----------------------------------------------------


def test_params_resolution():
    p = ClassifyParams(d=3).resolved()
    assert p.p == 6.0 and p.kind == "beta_content" and p.alphas == (0.0,)
    assert ClassifyParams(alphas=(0.5,)).resolved().alphas == (0.0, 0.5)
    with pytest.raises(ValueError):
        ClassifyParams(d=3, p=8.0).resolved()
    with pytest.warns(UserWarning):
        ClassifyParams(d=3, p=8.0, force=True).resolved()
    with pytest.raises(ValueError):
        ClassifyParams(alphas=(1.2,)).resolved()
    with pytest.raises(ValueError):
        ClassifyParams(lambdas=(0.0,)).resolved()


def test_plane_is_fully_certified():
    E, _ = generate(SynthSpec("plane", n=2, d=1, sample_count=300))
    rep = classify_points(E, ClassifyParams(alphas=(0.0, 0.5)))
    s = rep.summary
    for a in ("alpha=0", "alpha=0.5"):
        assert s[a]["summable"] == 1.0 and s[a]["certified"] == 1.0 and s[a]["agreement"] == 1.0
    assert all(lab.verdicts["cone"] is True for lab in rep.labels)


def test_mixed_set_separates_its_parts():
    C, _ = generate(SynthSpec("cantor4", depth=5))
    m = 1025
    t = np.linspace(0, 1, m)
    E = PointCloud(np.vstack([np.column_stack([t, np.full(m, -1.0)]), C.points]), max(C.resolution, 0.5 / (m - 1)))
    truth = np.r_[np.ones(m, bool), np.zeros(C.size, bool)]
    rep = classify_points(E)
    verdict = np.array([lab.verdicts["cone"] for lab in rep.labels])
    assert np.mean(verdict == truth) >= 0.9


def test_errors_are_collected(rng):
    E = PointCloud(rng.random((30, 2)), 0.01)
    rep = classify_points(E, ClassifyParams(base=2, k_lo=0, k_hi=9), indices=[0, 1])
    assert rep.labels == [] and [i for i, _ in rep.errors] == [0, 1]
    assert "r_min" in rep.errors[0][1]


def test_parallel_matches_serial(monkeypatch):
    E, _ = generate(SynthSpec("lipschitz_graph", sample_count=200))
    idx = list(range(0, 200, 20))
    serial = classify_points(E, indices=idx, workers=1)
    monkeypatch.setenv("CONEBETA_THREADS", "2")
    parallel = classify_points(E, indices=idx, workers=2)
    assert [lab.index for lab in parallel.labels] == idx
    for a, b in zip(serial.labels, parallel.labels):
        assert np.array_equal(a.profile.betas, b.profile.betas)
        assert a.squares[0.0].verdict == b.squares[0.0].verdict


def test_profile_planes_seed_the_next_scale():
    E, x = cusp()
    prof = beta_profile(E, x, 1, base=2, k_lo=1, k_hi=6)
    for prev, cur in zip(prof.values, prof.values[1:]):
        fresh = best_plane(E, cur.ball, 1, math.inf, "beta_inf").value
        assert cur.value <= fresh + 1e-15
        assert cur.value <= 2 * prev.value * (1 + 1e-12) + 1e-300
