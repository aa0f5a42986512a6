import pytest

from conebeta import suites


SMALL = {
    "monotonicity": dict(n_clouds=5),
    "p_comparison": dict(size=120, balls=3),
    "beta_inf_bound": dict(size=120, balls=3),
    "jensen": dict(size=120, functions=4),
    "bar_vs_content": dict(size=120, balls=3),
    "graph_transfer": dict(size=120, balls=3),
    "subset_transfer": dict(size=120, balls=3),
    "angle": dict(size=120, balls=3),
    "christ": dict(n_clouds=2, max_points=400),
}


@pytest.mark.parametrize("name", sorted(SMALL))
def test_small_suites_pass(name):
    res = suites.SUITES[name](seed=1, **SMALL[name])
    assert res.checks > 0
    assert res.passed, res.as_dict()


def test_unknown_suite_is_rejected():
    with pytest.raises(ValueError):
        suites.run_suites(["nope"])


def test_growth_limit_fails_a_suite():
    res = suites.SuiteResult("x", checks=3, growth={"C": suites.GROWTH_LIMIT * 2})
    assert not res.passed and res.as_dict()["passed"] is False


def test_plane_with_mast_shape():
    E = suites.plane_with_mast(m=5, mast=10)
    assert E.size == 35 and E.dim == 3
