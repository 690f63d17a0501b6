import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crembed.errors import AntisymmetryViolation, IndexOutOfRange, InputError, JacobiViolation
from crembed.lie_core import (StructureConstants, adjoint_matrix, build_algebra, classify,
                              is_subalgebra_prefix, jacobi_tensor, lower_central_series, restrict)
from conftest import abelian


def loop_jacobi(c):
    """Plain-loop Jacobi tensor, independent of the einsum implementation."""
    s = c.shape[0]
    out = np.zeros((s,) * 4, dtype=complex)
    for a, b, g, n in itertools.product(range(s), repeat=4):
        total = 0
        for m in range(s):
            total += c[a, b, m] * c[m, g, n] + c[b, g, m] * c[m, a, n] + c[g, a, m] * c[m, b, n]
        out[a, b, g, n] = total
    return out


def test_heisenberg_brackets(h3):
    assert h3.dim == 3
    assert h3.c[0, 1, 2] == 1 and h3.c[1, 0, 2] == -1
    assert h3.jacobi_residual == 0
    assert h3.exact[(0, 1, 2)].re == 1


def test_adjoint_examples(h3, sl2):
    ad_x = adjoint_matrix(h3, 0)
    expected = np.zeros((3, 3))
    expected[2, 1] = 1
    np.testing.assert_array_equal(ad_x, expected)
    np.testing.assert_array_equal(adjoint_matrix(sl2, 0), np.diag([0, 2, -2]))


def test_adjoint_is_bracket(sl2):
    rng = np.random.default_rng(3)
    for i in range(3):
        v = rng.normal(size=3)
        e = np.eye(3)[i]
        np.testing.assert_allclose(adjoint_matrix(sl2, i) @ v, sl2.bracket(e, v), atol=1e-14)


def test_adjoint_index_checked(h3):
    with pytest.raises(IndexOutOfRange):
        adjoint_matrix(h3, 3)


def test_jacobi_violation_detected():
    # [x,y]=z plus an inconsistent [x,z]=x breaks Jacobi at (x, y, z)
    bad = StructureConstants.from_brackets(3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    with pytest.raises(JacobiViolation) as info:
        build_algebra(bad)
    assert info.value.max_residual > 0


def test_float_jacobi_uses_scaled_tolerance(sl2):
    big = build_algebra(StructureConstants(sl2.c * 1e3))
    assert big.jacobi_residual <= 1e-12 * 1e6
    with pytest.raises(JacobiViolation):
        build_algebra(StructureConstants(np.asarray(sl2.c) + 1e-3 * np.asarray(
            StructureConstants.from_brackets(3, {(0, 1): {0: 1.0}}).tensor)))


def test_antisymmetry_enforced():
    t = np.zeros((2, 2, 2))
    t[0, 1, 1] = 1
    with pytest.raises(AntisymmetryViolation):
        StructureConstants.from_tensor(t)
    t[1, 0, 1] = -1
    assert StructureConstants.from_tensor(t).exact == {
        (0, 1, 1): StructureConstants.from_brackets(2, {(0, 1): {1: 1}}).exact[(0, 1, 1)],
        (1, 0, 1): StructureConstants.from_brackets(2, {(0, 1): {1: 1}}).exact[(1, 0, 1)]}


def test_from_brackets_rejects_lower_pairs():
    with pytest.raises(InputError):
        StructureConstants.from_brackets(3, {(1, 0): {2: 1}})
    with pytest.raises(IndexOutOfRange):
        StructureConstants.from_brackets(3, {(0, 1): {3: 1}})


def test_rational_strings_kept_exact():
    sc = StructureConstants.from_brackets(2, {(0, 1): {1: "1/3"}})
    assert sc.exact[(0, 1, 1)].re == Fraction(1, 3)
    assert sc.tensor[0, 1, 1] == pytest.approx(1 / 3)


def test_jacobi_tensor_matches_loops(cat):
    for name in ("sl2", "su2", "n5", "axb"):
        c = np.asarray(cat[name].algebra.c)
        np.testing.assert_allclose(jacobi_tensor(c), loop_jacobi(c), atol=1e-14)


def test_jacobi_tensor_detects_random_perturbation(h3):
    c = np.array(h3.c)
    c[0, 2, 0], c[2, 0, 0] = 1, -1
    assert np.abs(loop_jacobi(c)).max() > 0
    np.testing.assert_allclose(jacobi_tensor(c), loop_jacobi(c))


@pytest.mark.parametrize("name, kind, step", [
    ("abelian3", "abelian", 1), ("heisenberg3", "nilpotent", 2), ("n4", "nilpotent", 3),
    ("n5", "nilpotent", 4), ("axb", "solvable", None), ("sl2", "general", None),
    ("su2", "general", None),
])
def test_classify_catalog(cat, name, kind, step):
    cls = classify(cat[name].algebra)
    assert cls.kind == kind
    assert cls.step == step


def test_lower_central_series_n5(cat):
    assert lower_central_series(cat["n5"].algebra) == [5, 3, 2, 1, 0]


@pytest.mark.parametrize("name", ["heisenberg3", "n4", "n5"])
def test_nilpotent_ad_powers_vanish(cat, name):
    alg = cat[name].algebra
    step = classify(alg).step
    for mu in range(alg.dim):
        assert not np.any(np.linalg.matrix_power(alg.ad[mu], step))


@given(st.floats(min_value=-5, max_value=5).filter(lambda x: abs(x) > 1e-3))
def test_adjoint_scales_linearly(factor):
    base = StructureConstants.from_brackets(3, {(0, 1): {1: 2.0}, (0, 2): {2: -2.0}, (1, 2): {0: 1.0}})
    alg = build_algebra(base)
    scaled = build_algebra(base.scaled(factor))
    for i in range(3):
        np.testing.assert_allclose(adjoint_matrix(scaled, i), factor * adjoint_matrix(alg, i), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_random_antisymmetric_tensors_rejected(seed):
    rng = np.random.default_rng(seed)
    s = 3
    c = np.zeros((s, s, s))
    for a in range(s):
        for b in range(a + 1, s):
            c[a, b] = rng.normal(size=s)
            c[b, a] = -c[a, b]
    # generic random constants violate Jacobi by O(1)
    if np.abs(loop_jacobi(c)).max() > 1e-6 * np.abs(c).max() ** 2:
        with pytest.raises(JacobiViolation):
            build_algebra(StructureConstants(c))


def test_permutation_invariance_of_jacobi(cat):
    alg = cat["n5"].algebra
    perm = [4, 2, 0, 3, 1]
    p = alg.permuted(perm)
    assert p.exact is not None
    # ad of new index i equals conjugated ad of old perm[i]
    P = np.eye(5)[:, perm]
    for i, old in enumerate(perm):
        np.testing.assert_allclose(p.ad[i], P.T @ alg.ad[old] @ P)


def test_restrict_to_subalgebra(axb, h3):
    assert is_subalgebra_prefix(axb, 1)
    sub = restrict(axb, 1)
    assert sub.dim == 1 and classify(sub).kind == "abelian"
    assert is_subalgebra_prefix(h3, 1)
    assert not is_subalgebra_prefix(h3, 2)
    with pytest.raises(InputError):
        restrict(h3, 2)


def test_abelian_helper():
    a = abelian(4)
    assert not np.any(a.c)
    assert classify(a).kind == "abelian"
