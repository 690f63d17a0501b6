import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from crembed.errors import ExpConvergenceFailure
from crembed.linalg import expm, nilpotency_index, numerical_rank, orthonormal_basis, taylor_exp


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 6), st.floats(0.01, 30))
def test_expm_matches_scipy(seed, n, scale):
    rng = np.random.default_rng(seed)
    a = scale * (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / n
    ref = scipy.linalg.expm(a)
    np.testing.assert_allclose(expm(a), ref, rtol=1e-11, atol=1e-12 * np.abs(ref).max())


def test_expm_real_input_stays_real():
    a = np.array([[0.0, 1.0], [-1.0, 0.0]])
    out = expm(a)
    assert out.dtype == float
    np.testing.assert_allclose(out, [[np.cos(1), np.sin(1)], [-np.sin(1), np.cos(1)]], atol=1e-15)


def test_expm_rejects_nonfinite():
    with pytest.raises(ExpConvergenceFailure):
        expm(np.array([[np.inf]]))
    with pytest.raises(ExpConvergenceFailure):
        expm(np.array([[1e300]]))


def test_nilpotency_index():
    n = np.diag([1.0, 1.0], k=1)
    assert nilpotency_index(n) == 3
    assert nilpotency_index(np.zeros((2, 2))) == 1
    assert nilpotency_index(np.eye(2)) is None


def test_taylor_exp_exact_for_nilpotent():
    n = np.diag([2.0, 3.0], k=1)
    np.testing.assert_allclose(taylor_exp(n, 3), scipy.linalg.expm(n), atol=1e-14)
    assert taylor_exp(n, 3)[0, 2] == 3.0


def test_rank_and_basis():
    a = np.array([[1, 2], [2, 4], [0, 0]], dtype=complex)
    assert numerical_rank(a) == 1
    q = orthonormal_basis(a)
    assert q.shape == (3, 1)
    np.testing.assert_allclose(q.conj().T @ q, np.eye(1), atol=1e-14)
    assert numerical_rank(np.zeros((3, 0))) == 0
    assert numerical_rank(np.diag([1, 1e-12])) == 1
    assert numerical_rank(np.diag([1, 1e-12]), rtol=1e-14) == 2
