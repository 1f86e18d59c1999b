import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lambheat.model import (
    HierarchyWarning,
    SystemParams,
    check_hierarchy,
    eigensystem,
    eigenvector_matrix,
    hamiltonian_product_basis,
    jump_operators,
    sigma_x_product_basis,
)
from lambheat.spectral import BathSpec

positive = st.floats(min_value=0.05, max_value=20.0)
params_st = st.builds(SystemParams, positive, positive, st.floats(min_value=1e-3, max_value=5.0))


def test_reference_eigensystem(eig):
    assert eig.alpha == pytest.approx(math.sqrt(0.5), rel=1e-15)
    assert eig.beta == pytest.approx(math.sqrt(6.5), rel=1e-15)
    assert eig.omega[0] == pytest.approx(1.84240297560984489, rel=1e-14)
    assert eig.omega[1] == pytest.approx(3.25661653798293994, rel=1e-14)
    assert eig.theta == pytest.approx(math.pi / 4, rel=1e-15)
    assert eig.phi == pytest.approx(math.atan(0.2), rel=1e-15)


def test_uncoupled_limit():
    e = eigensystem(SystemParams(3.0, 2.0, 1e-12))
    assert e.alpha == pytest.approx(0.5)
    assert e.beta == pytest.approx(2.5)
    np.testing.assert_allclose(e.omega, [2.0, 3.0], rtol=1e-12)
    ops = jump_operators(e)
    # the sin phi+ and sin phi- channels close
    assert abs(ops[(1, 1)].amplitude) < 1e-11
    assert abs(ops[(2, 2)].amplitude) < 1e-11
    np.testing.assert_allclose(np.abs(eigenvector_matrix(e)), np.eye(4), atol=1e-11)


def test_degenerate_qubits():
    e = eigensystem(SystemParams(2.5, 2.5, 0.5))
    assert e.theta == math.pi / 2
    assert e.alpha == 0.5


@pytest.mark.parametrize("bad", [(0.0, 1.0, 0.5), (1.0, -1.0, 0.5), (1.0, 1.0, 0.0), (math.nan, 1.0, 1.0)])
def test_rejects_nonpositive(bad):
    with pytest.raises(ValueError):
        SystemParams(*bad)


def test_label_swap():
    a = SystemParams(3.0, 2.0, 0.5)
    b = SystemParams(2.0, 3.0, 0.5)
    assert not a.swapped and b.swapped
    assert (b.eps1, b.eps2) == (3.0, 2.0)
    ea, eb = eigensystem(a), eigensystem(b)
    np.testing.assert_array_equal(ea.omega, eb.omega)
    np.testing.assert_array_equal(ea.weights, eb.weights)


def test_eigenvectors_diagonalize(eig):
    M = eigenvector_matrix(eig)
    np.testing.assert_allclose(M.T @ M, np.eye(4), atol=1e-14)
    H = hamiltonian_product_basis(eig.params)
    np.testing.assert_allclose(M.T @ H @ M, np.diag(eig.levels), atol=1e-14)


@settings(max_examples=200, deadline=None)
@given(params_st)
def test_transition_gap(params):
    e = eigensystem(params)
    assert e.omega[1] - e.omega[0] == pytest.approx(2 * e.alpha, rel=1e-14)
    assert e.omega[0] > 0


@settings(max_examples=200, deadline=None)
@given(params_st)
def test_eigenoperator_commutator(params):
    e = eigensystem(params)
    H = np.diag(e.levels)
    for (j, mu), V in jump_operators(e).matrices().items():
        np.testing.assert_allclose(H @ V - V @ H, -e.omega[mu - 1] * V, atol=1e-12 * max(1.0, e.beta))


@settings(max_examples=200, deadline=None)
@given(params_st)
def test_sigma_x_reconstruction(params):
    e = eigensystem(params)
    M = eigenvector_matrix(e)
    ops = jump_operators(e).matrices()
    for j in (1, 2):
        total = sum(ops[(j, mu)] + ops[(j, mu)].T for mu in (1, 2))
        np.testing.assert_allclose(total, M.T @ sigma_x_product_basis(j) @ M, atol=1e-12)


def test_weights_are_squared_amplitudes(eig):
    ops = jump_operators(eig)
    for (j, mu), op in ops.operators.items():
        assert op.amplitude**2 == pytest.approx(eig.weights[j - 1, mu - 1], rel=1e-14)


def test_hierarchy_warning(eig):
    good = (BathSpec(1.0, 0.01, 50.0), BathSpec(2.0, 0.01, 50.0))
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert check_hierarchy(eig, good) == []
    with pytest.warns(HierarchyWarning):
        problems = check_hierarchy(eig, (BathSpec(1.0, 0.5, 2.0), BathSpec(1.0, 0.01, 50.0)))
    assert len(problems) == 2
