import numpy as np
import pytest
import scipy.linalg

from crembed import catalog
from crembed.lie_core import StructureConstants, build_algebra

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def cat():
    return catalog.load_catalog()


@pytest.fixture(scope="session")
def h3(cat):
    return cat["heisenberg3"].algebra


@pytest.fixture(scope="session")
def sl2(cat):
    return cat["sl2"].algebra


@pytest.fixture(scope="session")
def axb(cat):
    return cat["axb"].algebra


@pytest.fixture(scope="session")
def n4(cat):
    return cat["n4"].algebra


def abelian(s):
    return build_algebra(StructureConstants.from_brackets(s, {}))


# Faithful matrix representations of catalog algebras, used as an oracle
# that never touches adjoint matrices.
REPRESENTATIONS = {
    "heisenberg3": [np.array(m, dtype=complex) for m in (
        [[0, 1, 0], [0, 0, 0], [0, 0, 0]],
        [[0, 0, 0], [0, 0, 1], [0, 0, 0]],
        [[0, 0, 1], [0, 0, 0], [0, 0, 0]])],
    "axb": [np.array([[1, 0], [0, 0]], dtype=complex), np.array([[0, 1], [0, 0]], dtype=complex)],
    "sl2": [np.array([[1, 0], [0, -1]], dtype=complex), np.array([[0, 1], [0, 0]], dtype=complex),
            np.array([[0, 0], [1, 0]], dtype=complex)],
    "su2": [-0.5j * np.array([[0, 1], [1, 0]]), -0.5j * np.array([[0, -1j], [1j, 0]]),
            -0.5j * np.array([[1, 0], [0, -1]])],
}


def group_omega(rep, t):
    """Coefficient matrix from g^-1 dg with g = exp(t_s X_s) ... exp(t_1 X_1).

    d g / d t_a = A exp(t_a X_a) X_a B, so g^-1 d_a g = B^-1 X_a B with
    B = exp(t_(a-1) X_(a-1)) ... exp(t_1 X_1); coordinates by least squares.
    """
    s = len(rep)
    basis = np.array([x.ravel() for x in rep]).T
    out = np.zeros((s, s), dtype=complex)
    b = np.eye(rep[0].shape[0], dtype=complex)
    for a in range(s):
        m = np.linalg.solve(b, rep[a] @ b)
        coeffs, *_ = np.linalg.lstsq(basis, m.ravel(), rcond=None)
        out[:, a] = coeffs
        b = scipy.linalg.expm(t[a] * rep[a]) @ b
    return out
