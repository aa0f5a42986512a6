import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conebeta.beta import beta_with_plane, best_plane, min_width_line, p_limit
from conebeta.cloud import PointCloud
from conebeta.content import HausdorffContent
from conebeta.geom import AffinePlane, Ball, reifenberg_theta
from conebeta.suites import random_cloud
from conebeta.synth import SynthSpec, generate
from oracles import choquet_by_superlevels, grid_beta_inf, grid_line_offset_min, rotation

# beta_inf of the depth-4 Cantor sample in B(corner point, 1), frozen from the strip oracle
CANTOR4_CORNER_BETA = 0.42260678719352257


def test_p_limit():
    assert p_limit(1) == math.inf and p_limit(2) == math.inf
    assert p_limit(4) == 4.0
    with pytest.raises(ValueError):
        p_limit(0)


@pytest.mark.parametrize("kind,p", [("beta_inf", math.inf), ("beta_bar", 2.0), ("beta_content", 2.0)])
def test_flat_set_has_zero_beta(kind, p):
    E, _ = generate(SynthSpec("plane", n=3, d=2, sample_count=400))
    ball = Ball(E.points[200], 0.5)
    L = AffinePlane(np.eye(3)[:2], np.zeros(3))
    assert beta_with_plane(E, ball, 2, p, L, kind) == 0.0
    assert best_plane(E, ball, 2, p, kind).value <= 1e-9


def test_two_point_set():
    r = 1.0
    E = PointCloud([[0.0, 0.0], [0.0, r * (1 - 1e-9)]], 0.1)
    L = AffinePlane([[1.0, 0.0]], [0.0, 0.0])
    assert beta_with_plane(E, Ball([0.0, 0.0], r), 1, math.inf, L, "beta_inf") == pytest.approx(1.0)
    # the ball is open, so the far point at distance exactly r does not count
    F = PointCloud([[0.0, 0.0], [0.0, r]], 0.1)
    assert beta_with_plane(F, Ball([0.0, 0.0], r), 1, math.inf, L, "beta_inf") == 0.0


def test_beta_bar_is_a_layer_cake_of_distances():
    rng = np.random.default_rng(7)
    E = PointCloud(rng.random((50, 2)), 0.02)
    ball = Ball(E.points[0], 0.6)
    L = AffinePlane([[0.6, 0.8]], E.points[0])
    idx = E.ball_indices(ball.center, ball.radius)
    f = L.distance(E.points[idx]) / ball.radius
    H = HausdorffContent(E, 1)
    expect = (choquet_by_superlevels(f, 2.0, lambda s: H.value(idx[s])) / ball.radius) ** 0.5
    assert beta_with_plane(E, ball, 1, 2.0, L, "beta_bar") == pytest.approx(expect, rel=1e-12)


def test_coplanar_fit_recovers_the_plane(rng):
    basis = np.linalg.qr(rng.normal(size=(3, 2)))[0].T
    pts = rng.random((200, 2)) @ basis + np.array([0.1, 0.2, 0.3])
    E = PointCloud(pts, 0.08)
    bv = best_plane(E, Ball(pts[0], 0.6), 2, math.inf, "beta_inf")
    assert bv.value <= 1e-9
    # angle between normals
    n_true = np.cross(basis[0], basis[1])
    n_fit = np.cross(bv.plane.basis[0], bv.plane.basis[1])
    assert math.acos(min(1.0, abs(float(n_true @ n_fit)))) <= 1e-6


def test_three_points_against_line_grid():
    P = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 0.1]])
    # the ball centre (0.5, 0) is 0.1 away from the sample, so h = 0.1 keeps it centred on E
    E = PointCloud(P, 0.1)
    val = best_plane(E, Ball([0.5, 0.0], 1.0), 1, math.inf, "beta_inf").value
    assert 0 <= val <= grid_line_offset_min(P, [0.5, 0.0], 1.0) + 1e-3
    assert val == pytest.approx(0.05, abs=1e-12)


def test_cantor_depth4_unit_ball():
    E, _ = generate(SynthSpec("cantor4", depth=4))
    x = E.points[0]
    val = best_plane(E, Ball(x, 1.0), 1, math.inf, "beta_inf").value
    grid_min, lower = grid_beta_inf(E.points, x, 1.0)
    assert val >= 0.15 and val >= lower
    assert val == pytest.approx(CANTOR4_CORNER_BETA, rel=1e-9)
    assert val <= grid_min + 1e-12
    assert reifenberg_theta(E, Ball(x, 1.0), 1) >= 0.2


def test_single_point_in_ball_is_bounded():
    E = PointCloud([[0.0, 0.0], [5.0, 0.0]], 0.1)
    assert 0.0 <= best_plane(E, Ball([0.0, 0.0], 1.0), 1, math.inf, "beta_inf").value <= 1.0


@given(st.integers(0, 10_000))
def test_exact_strip_beats_the_grid_lower_bound(seed):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(int(rng.integers(3, 60)), 2)) * [1.0, rng.uniform(0.01, 1.0)]
    _, width = min_width_line(pts)
    grid_min, lower = grid_beta_inf(pts, np.zeros(2), 1e9)
    assert lower * 1e9 <= width * (1 + 1e-9) <= grid_min * 1e9 * (1 + 1e-9)


@given(st.integers(0, 10_000))
def test_beta_inf_invariant_under_rigid_motions_and_scaling(seed):
    rng = np.random.default_rng(seed)
    E = random_cloud(rng, 2, int(rng.integers(20, 80)))
    x, r = E.points[0], float(rng.uniform(0.2, 0.8))
    base = best_plane(E, Ball(x, r), 1, math.inf, "beta_inf").value
    Q, shift = rotation(2, rng), rng.normal(size=2)
    F = E.transformed(Q, shift)
    moved = best_plane(F, Ball(Q @ x + shift, r), 1, math.inf, "beta_inf").value
    assert moved == pytest.approx(base, abs=1e-10)
    G = E.transformed(np.eye(2), np.zeros(2), 2.0)
    assert best_plane(G, Ball(2 * x, 2 * r), 1, math.inf, "beta_inf").value == pytest.approx(base, abs=1e-12)


@given(st.integers(0, 10_000), st.sampled_from([("beta_inf", math.inf), ("beta_bar", 2.0),
                                               ("beta_content", 2.0)]))
def test_nested_ball_monotonicity(seed, kind_p):
    kind, p = kind_p
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 4))
    E = random_cloud(rng, n, 60)
    d = 1
    q = 1.0 if not np.isfinite(p) else 1.0 + d / p
    x, r = E.points[0], float(rng.uniform(0.3, 0.9))
    bv = best_plane(E, Ball(x, r), d, p, kind)
    for y in E.points[E.ball_indices(x, r)][:5]:
        room = r - float(np.linalg.norm(y - x))
        rp = float(rng.uniform(0.05, 1.0)) * room
        val = beta_with_plane(E, Ball(y, rp), d, p, bv.plane, kind)
        assert val <= (r / rp) ** q * bv.value * (1 + 1e-12) + 1e-300


def test_best_plane_is_deterministic(rng):
    E = random_cloud(rng, 3, 80)
    a = best_plane(E, Ball(E.points[0], 0.5), 1, 2.0, "beta_content", seed=3)
    b = best_plane(E, Ball(E.points[0], 0.5), 1, 2.0, "beta_content", seed=3)
    assert a.value == b.value and np.array_equal(a.plane.basis, b.plane.basis)


def test_argument_errors(rng):
    E = random_cloud(rng, 2, 30)
    ball = Ball(E.points[0], 0.5)
    with pytest.raises(ValueError):
        best_plane(E, ball, 1, math.inf, "beta_bar")
    with pytest.raises(ValueError):
        best_plane(E, ball, 1, 0.5, "beta_content")
    with pytest.raises(ValueError):
        best_plane(E, ball, 2, math.inf, "beta_inf")
    with pytest.raises(ValueError):
        best_plane(E, Ball([5.0, 5.0], 0.5), 1, math.inf, "beta_inf")
    with pytest.raises(ValueError):
        best_plane(E, ball, 1, 2.0, "nope")
