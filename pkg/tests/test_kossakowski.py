import numpy as np
import pytest

from conftest import random_blocks
from indirect_control.errors import NonHermitianError, SingularSigma
from indirect_control.kossakowski import (
    assemble, collective_form, diagonalize, involution_decompose, lindblad_set,
    pauli_coefficients, require_involution,
)
from indirect_control.operators import IDENTITY2, PAULIS, SIGMA_1, SIGMA_2, SIGMA_3, dagger
from indirect_control.presets import case1_blocks, eq30_blocks


def test_assemble_block_layout():
    A, B = eq30_blocks(1.0, 0.5)
    m = assemble(A, B)
    assert m.C.shape == (6, 6)
    assert np.array_equal(m.C[:3, 3:], B)
    assert np.array_equal(m.C[3:, :3], dagger(B))
    assert np.array_equal(m.C[3:, 3:], A)


def test_assemble_rejects_bad_shape():
    with pytest.raises(ValueError):
        assemble(np.eye(2), np.eye(3))


def test_assemble_reports_non_hermitian_entries():
    A = np.eye(3, dtype=complex)
    A[0, 2] = 1.0
    with pytest.raises(NonHermitianError) as exc:
        assemble(A, np.zeros((3, 3)))
    assert "(1,3)" in str(exc.value)
    assert (0, 2) in exc.value.entries


@pytest.mark.parametrize("a,b,ok", [(1, 0.5, True), (1, 1, True), (0.5, 1, False), (1, 1.1, False)])
def test_eq30_complete_positivity(a, b, ok):
    assert assemble(*eq30_blocks(a, b)).is_completely_positive() is ok


def test_eq30_plus_spectrum():
    # A + B = 2A has eigenvalues 2(a - b), 2a, 2(a + b); A - B = 0
    d = diagonalize(assemble(*eq30_blocks(1.0, 0.5)))
    assert np.allclose(d.lam_plus, [1.0, 2.0, 3.0])
    assert np.allclose(d.lam_minus, 0.0)
    assert (d.n_plus, d.n_minus) == (3, 0)
    d1 = diagonalize(assemble(*eq30_blocks(1.0, 1.0)))
    assert d1.n_plus == 2


def test_structured_diagonalization(rng):
    for _ in range(10):
        m = assemble(*random_blocks(rng))
        d = diagonalize(m)
        assert np.allclose(d.U @ dagger(d.U), np.eye(6))
        assert np.allclose(d.U @ m.C @ dagger(d.U), np.diag(d.eigenvalues), atol=1e-10)
        assert np.allclose(np.sort(d.eigenvalues), m.c_eigenvalues, atol=1e-10)


def test_lindblad_operators_have_collective_form(rng):
    for _ in range(10):
        lset = lindblad_set(diagonalize(assemble(*random_blocks(rng))))
        for t in lset:
            V = np.sqrt(t.rate) * collective_form(t.sigma, t.kind)
            assert np.allclose(t.V, V)
            assert np.trace(t.sigma @ dagger(t.sigma)).real == pytest.approx(1.0)


def test_zero_eigenvalues_dropped():
    lset = lindblad_set(diagonalize(assemble(*case1_blocks())))
    assert len(lset) == 1
    t = lset.terms[0]
    assert t.kind == "plus" and t.rate == pytest.approx(2.0)
    assert np.allclose(t.sigma, SIGMA_3 / np.sqrt(2))


def test_involution_decompose(rng):
    for _ in range(20):
        c = rng.normal(size=3) + 1j * rng.normal(size=3)
        sigma = np.einsum("k,kij->ij", c, PAULIS)
        inv = involution_decompose(sigma)
        assert np.allclose(inv.R @ inv.R, IDENTITY2)
        assert np.allclose(inv.mu * inv.R @ SIGMA_3 @ inv.R, sigma)
        assert np.allclose(pauli_coefficients(sigma), c)


def test_involution_identity_for_sigma3():
    inv = involution_decompose(2 * SIGMA_3)
    assert inv.mu == pytest.approx(2.0)
    assert np.array_equal(inv.R, IDENTITY2)


def test_involution_of_minus_sigma3():
    inv = involution_decompose(-SIGMA_3)
    assert np.allclose(inv.mu * inv.R @ SIGMA_3 @ inv.R, -SIGMA_3)


def test_singular_sigma():
    raising = (SIGMA_1 + 1j * SIGMA_2) / 2
    assert involution_decompose(raising) is None
    lset = lindblad_set(diagonalize(assemble(*eq30_blocks(1.0, 1.0))))
    singular = [t for t in lset if t.singular]
    assert singular
    with pytest.raises(SingularSigma):
        require_involution(singular[0])


def test_involution_rejects_trace():
    with pytest.raises(ValueError):
        involution_decompose(IDENTITY2)
