import numpy as np
import pytest

from crembed.errors import InputError, StepTooLarge, StepTooSmall
from crembed.fd import FDSpec, GridSpec, jacobian


def test_step_bounds():
    with pytest.raises(StepTooSmall):
        FDSpec(step=1e-9)
    with pytest.raises(StepTooLarge):
        FDSpec(step=0.1)
    with pytest.raises(InputError):
        FDSpec(mode="symbolic")
    assert FDSpec(step=1e-2).halved().step == 5e-3


def test_jacobian_of_polynomial_is_exact_with_richardson():
    def f(t):
        return np.array([t[0] ** 3 * t[1], t[1] ** 2])
    t = np.array([0.3, -0.7])
    d, diags = jacobian(f, t, FDSpec(step=1e-2, richardson_levels=1))
    np.testing.assert_allclose(d[0], [3 * 0.09 * -0.7, 0], atol=1e-13)
    np.testing.assert_allclose(d[1], [0.027, -1.4], atol=1e-13)
    assert diags == []


def test_central_difference_is_second_order():
    t = np.array([0.4])
    errs = []
    for h in (1e-2, 5e-3):
        d, _ = jacobian(lambda x: np.exp(x), t, FDSpec(step=h, richardson_levels=0))
        errs.append(abs(d[0, 0] - np.exp(0.4)))
    assert errs[0] / errs[1] == pytest.approx(4.0, rel=1e-3)


def test_step_too_large_diagnostic():
    _, diags = jacobian(lambda x: np.sin(300 * x), np.array([0.1]), FDSpec(step=1e-2))
    assert diags and diags[0]["kind"] == "StepTooLarge"


def test_step_too_small_diagnostic():
    _, diags = jacobian(lambda x: np.exp(x), np.array([0.1]), FDSpec(step=1e-8))
    assert diags and diags[0]["kind"] == "StepTooSmall"


def test_grid_points():
    g = GridSpec(half_width=0.5, points_per_axis=3)
    pts = g.points(2)
    assert pts.shape == (9, 2)
    assert np.abs(pts).max() == 0.5
    r = GridSpec(random_samples=7, seed=1).points(6)
    assert r.shape == (7, 6)
    np.testing.assert_array_equal(r, GridSpec(random_samples=7, seed=1).points(6))
    assert GridSpec(sampling="random", random_samples=4).points(2).shape == (4, 2)
