import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crembed.continuation import (bracket_form_residual, check_triangular_dependence, compare_forms,
                                  flatness_residual, lambda_at, lambda_values, verify_flatness)
from crembed.fd import FDSpec, GridSpec
from crembed.lie_core import restrict
from crembed.mc_engine import omega_values
from conftest import REPRESENTATIONS, abelian, group_omega

coords = st.floats(min_value=-0.5, max_value=0.5, allow_nan=False)


def test_heisenberg_closed_form(h3):
    lam = lambda_values(h3, np.array([0.3, -0.2, 0.1]))
    np.testing.assert_allclose(lam, [[1, 0, 0], [0, 1, 0], [0, 0.3j, 1]], atol=1e-15)


@given(coords, coords)
def test_axb_closed_form(t1, t2):
    from crembed import catalog
    lam = lambda_values(catalog.get("axb").algebra, np.array([t1, t2]))
    np.testing.assert_allclose(lam, [[1, 0], [0, np.exp(1j * t1)]], rtol=1e-14, atol=1e-15)


@pytest.mark.parametrize("name", sorted(REPRESENTATIONS))
def test_matches_group_oracle_at_imaginary_argument(cat, name):
    alg = cat[name].algebra
    rng = np.random.default_rng(5)
    for _ in range(10):
        t = rng.uniform(-0.5, 0.5, alg.dim)
        np.testing.assert_allclose(lambda_values(alg, t), group_omega(REPRESENTATIONS[name], -1j * t),
                                   atol=1e-12)


def test_axb_flatness_at_point(axb):
    res = flatness_residual(axb, [0.3, 0.7])
    assert res.max_abs() < 1e-9


@pytest.mark.parametrize("name", ["heisenberg3", "n4", "axb", "sl2", "su2"])
def test_flatness_small_grid(cat, name):
    rep = verify_flatness(cat[name].algebra, GridSpec(points_per_axis=3), tol=1e-8)
    assert rep.passed, rep.summary()


@settings(max_examples=30, deadline=None)
@given(st.lists(coords, min_size=3, max_size=3))
def test_conjugation_symmetry(pt):
    # real structure constants: conj(lam(t)) = lam(-t) = om(i t)
    from crembed import catalog
    for name in ("sl2", "su2", "heisenberg3"):
        alg = catalog.get(name).algebra
        t = np.array(pt)
        np.testing.assert_allclose(np.conj(lambda_values(alg, t)), lambda_values(alg, -t), atol=1e-13)
        np.testing.assert_allclose(lambda_values(alg, t), omega_values(alg, -1j * t), atol=0)


def test_forms_agree(cat):
    for name in ("sl2", "su2", "n5", "axb"):
        rep = compare_forms(cat[name].algebra, GridSpec(points_per_axis=2))
        assert rep["passed"], (name, rep)
    res_i = flatness_residual(cat["sl2"].algebra, [0.1, 0.2, -0.3])
    res_b = bracket_form_residual(cat["sl2"].algebra, [0.1, 0.2, -0.3])
    np.testing.assert_allclose(res_i.values, res_b.values, atol=1e-12)


def test_second_order_convergence(sl2):
    t = [0.31, -0.27, 0.44]
    r1 = flatness_residual(sl2, t, FDSpec(step=1e-2, richardson_levels=0)).max_abs()
    r2 = flatness_residual(sl2, t, FDSpec(step=5e-3, richardson_levels=0)).max_abs()
    assert r1 / r2 == pytest.approx(4.0, rel=0.05)


def test_exact_mode_matches(n4):
    pt = [0.2, -0.3, 0.4, 0.1]
    assert flatness_residual(n4, pt, FDSpec(mode="exact_polynomial")).max_abs() == 0
    assert flatness_residual(n4, pt).max_abs() < 1e-10


def test_restriction_consistency(axb):
    # the first l columns only see the subalgebra on xi_1..xi_l
    sub = restrict(axb, 1)
    lam_full = lambda_values(axb, np.array([0.4, -0.2]))
    lam_sub = lambda_values(sub, np.array([0.4]))
    np.testing.assert_allclose(lam_full[:1, :1], lam_sub)


def test_lambda_at_origin(cat):
    for entry in cat.values():
        s = entry.algebra.dim
        np.testing.assert_array_equal(lambda_at(entry.algebra, np.zeros(s)).values, np.eye(s))


def test_one_dimensional_degenerate():
    alg = abelian(1)
    assert verify_flatness(alg).max_residual == 0
    assert check_triangular_dependence(alg, samples=3).passed


@pytest.mark.parametrize("name", ["heisenberg3", "n5", "axb", "sl2", "su2", "abelian4"])
def test_triangular_dependence(cat, name):
    rep = check_triangular_dependence(cat[name].algebra, samples=10, seed=2)
    assert rep.passed and rep.trials == 10 * cat[name].algebra.dim
    assert rep.max_deviation == 0.0


def test_triangular_dependence_json(h3):
    data = check_triangular_dependence(h3, samples=2).to_json()
    assert data["kind"] == "triangular_dependence" and data["passed"]
