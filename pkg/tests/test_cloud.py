import pickle

import numpy as np
import pytest

from conebeta.cloud import PointCloud, point_set_diameter


def test_diameter_matches_pairwise(rng):
    pts = rng.normal(size=(300, 3))
    brute = np.linalg.norm(pts[:, None] - pts[None], axis=2).max()
    assert point_set_diameter(pts) == pytest.approx(brute, rel=1e-14)


def test_diameter_degenerate_inputs():
    assert point_set_diameter(np.zeros((1, 2))) == 0.0
    line = np.column_stack([np.linspace(0, 2, 50), np.zeros(50)])
    assert point_set_diameter(line) == pytest.approx(2.0)


@pytest.mark.parametrize("points,h", [
    (np.zeros((0, 2)), 0.1),
    ([[0.0, 0.0], [0.0, 0.0]], 0.1),
    ([[0.0, np.nan], [1.0, 0.0]], 0.1),
    ([[0.0, 0.0], [1.0, 0.0]], 0.0),
    ([[0.0, 0.0], [1.0, 0.0]], 2.0),
])
def test_invalid_clouds(points, h):
    with pytest.raises(ValueError):
        PointCloud(points, h)


def test_ball_indices_are_open_and_sorted():
    E = PointCloud(np.column_stack([np.arange(5.0), np.zeros(5)]), 0.5)
    assert E.ball_indices([0.0, 0.0], 2.0).tolist() == [0, 1]
    assert E.ball_indices([2.0, 0.0], 1.0 + 1e-9).tolist() == [1, 2, 3]
    assert E.r_min == 2.0


def test_centering_and_transform(rng):
    E = PointCloud(rng.random((50, 2)), 0.05)
    assert E.is_centered(E.points[3])
    assert not E.is_centered([10.0, 10.0])
    rot = np.array([[0.0, -1.0], [1.0, 0.0]])
    F = E.transformed(rot, [1.0, 2.0], 2.0)
    assert F.resolution == 0.1
    assert F.diameter == pytest.approx(2 * E.diameter)


def test_pickle_drops_cache(rng):
    E = PointCloud(rng.random((20, 2)), 0.05)
    E.cached(("x",), lambda: 1)
    F = pickle.loads(pickle.dumps(E))
    assert np.array_equal(F.points, E.points) and F._cache == {}
