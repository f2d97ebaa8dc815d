"""Dense complex matrix kernel for one- and two-qubit operators.

Conventions used across the package:

* Pauli matrices in the standard representation, sigma_3 = diag(1, -1).
  |up> is the +1 eigenvector of sigma_3 and comes first.
* Two-qubit basis order |up up>, |up down>, |down up>, |down down>.
  The first tensor factor is the target T, the second the ancilla A.
* Local operators F_i = sigma_i (x) 1 (i = 1..3) and 1 (x) sigma_{i-3}
  (i = 4..6) are kept *unnormalized*: Tr(F_i F_j^dag) = 4 delta_ij.  The
  Kossakowski rates are used exactly as given against this basis.
* Superoperators act on column-stacked density matrices,
  vec(X A Y) = (Y^T (x) X) vec(A).
"""
from __future__ import annotations

import math

import numpy as np

from .errors import InvalidStateError, NonHermitianError
from .tolerances import DEFAULT_TOL


def _frozen(a):
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


IDENTITY2 = _frozen(np.eye(2))
IDENTITY4 = _frozen(np.eye(4))
SIGMA_1 = _frozen([[0, 1], [1, 0]])
SIGMA_2 = _frozen([[0, -1j], [1j, 0]])
SIGMA_3 = _frozen([[1, 0], [0, -1]])
PAULIS = _frozen([SIGMA_1, SIGMA_2, SIGMA_3])

# F_1..F_6 stored 0-based as LOCAL_BASIS[0..5]
LOCAL_BASIS = _frozen(
    [np.kron(s, IDENTITY2) for s in PAULIS] + [np.kron(IDENTITY2, s) for s in PAULIS]
)

UP = _frozen([1, 0])
DOWN = _frozen([0, 1])
SINGLET = _frozen((np.kron(UP, DOWN) - np.kron(DOWN, UP)) / math.sqrt(2))


def kron(m1, m2):
    return np.kron(np.asarray(m1, dtype=complex), np.asarray(m2, dtype=complex))


def dagger(m):
    return np.conj(np.swapaxes(m, -1, -2))


def projector(ket):
    ket = np.asarray(ket, dtype=complex)
    return np.outer(ket, ket.conj())


def vec(m):
    """Column-stack a square matrix."""
    return np.asarray(m, dtype=complex).reshape(-1, order="F")


def unvec(v, dim=None):
    v = np.asarray(v)
    if dim is None:
        dim = math.isqrt(v.size)
    return v.reshape((dim, dim), order="F")


def partial_trace_ancilla(rho):
    """Trace out the second (ancilla) qubit of a 4x4 operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit operator, got shape {rho.shape}")
    return np.trace(rho.reshape(2, 2, 2, 2), axis1=1, axis2=3)


def partial_trace_target(rho):
    """Trace out the first (target) qubit of a 4x4 operator."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 two-qubit operator, got shape {rho.shape}")
    return np.trace(rho.reshape(2, 2, 2, 2), axis1=0, axis2=2)


def hermitian_residual(m):
    m = np.asarray(m)
    return float(np.abs(m - dagger(m)).max()) if m.size else 0.0


def _fix_phase(v):
    """Rotate v so its first non-negligible component is real positive."""
    mags = np.abs(v)
    idx = int(np.argmax(mags > 1e-9 * mags.max()))
    return v * (np.conj(v[idx]) / mags[idx])


def _canonical_basis(block):
    """Basis of span(block) that depends only on the subspace.

    Pivoted Gram-Schmidt on the projector columns P e_j; the pivot is the
    lowest index among columns whose residual norm is maximal (relative
    slack 1e-8), so exact ties resolve to the standard basis order.
    """
    k = block.shape[1]
    cand = block @ dagger(block)
    basis = []
    for _ in range(k):
        norms = np.linalg.norm(cand, axis=0)
        j = int(np.argmax(norms >= (1 - 1e-8) * norms.max()))
        q = cand[:, j] / norms[j]
        for b in basis:
            q = q - b * (b.conj() @ q)
        q = q / np.linalg.norm(q)
        basis.append(q)
        cand = cand - np.outer(q, q.conj() @ cand)
    return np.column_stack(basis)


def hermitian_eig(m, tol=DEFAULT_TOL.hermitian):
    """Eigendecomposition of a Hermitian matrix with deterministic output.

    Returns ``(eigenvalues, U)`` with eigenvalues ascending and ``U`` unitary
    such that ``U @ m @ U^dag`` is diagonal.  Row k of ``U`` is the conjugate
    of the k-th eigenvector.  Degenerate eigenspaces get a canonical basis
    (see ``_canonical_basis``) and every row has its first non-negligible
    component real positive.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.abs(m).max()))
    resid = np.abs(m - dagger(m))
    if resid.max() > tol * scale:
        bad = [tuple(int(x) for x in ij) for ij in np.argwhere(resid > tol * scale)]
        raise NonHermitianError(f"matrix is not Hermitian (residual {resid.max():.3e})", bad)
    h = (m + dagger(m)) / 2
    w, v = np.linalg.eigh(h)
    gap = 1e-10 * max(1.0, float(np.abs(w).max()))
    vecs = []
    i, n = 0, len(w)
    while i < n:
        j = i + 1
        while j < n and w[j] - w[j - 1] <= gap:
            j += 1
        block = v[:, i:j] if j - i == 1 else _canonical_basis(v[:, i:j])
        vecs.extend(_fix_phase(block[:, c]) for c in range(block.shape[1]))
        i = j
    u = np.conj(np.array(vecs))
    return np.asarray(w, dtype=float), u


def expm(m):
    """Matrix exponential by scaling and squaring with a Taylor core.

    The matrix is scaled by 2**-s so its 1-norm is at most 0.5; the Taylor
    series is summed until terms fall below double precision.
    """
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    norm = float(np.abs(m).sum(axis=0).max()) if m.size else 0.0
    s = 0 if norm <= 0.5 else int(math.ceil(math.log2(norm / 0.5)))
    a = m / (2.0 ** s)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 40):
        term = term @ a / k
        result = result + term
        if np.abs(term).max() <= 1e-18 * np.abs(result).max():
            break
    for _ in range(s):
        result = result @ result
    return result


def null_space(m, tol=DEFAULT_TOL.null_rel, scale=None):
    """Orthonormal basis (as columns) of the right null space of ``m``.

    Singular directions with value below ``tol * sigma_max`` count as null.
    Passing ``scale`` replaces sigma_max by a fixed reference, which keeps a
    matrix made only of rounding noise from being read as full rank.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.atleast_2d(np.asarray(m, dtype=complex))
    n = m.shape[1]
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    smax = float(s.max()) if s.size else 0.0
    ref = smax if scale is None else float(scale)
    if ref == 0.0:
        return np.eye(n, dtype=complex)
    rank = int(np.sum(s > tol * ref))
    return np.conj(vh[rank:]).T


def bloch_to_density(v, tol=1e-10):
    v = np.asarray(v, dtype=float)
    if v.shape != (3,):
        raise ValueError(f"Bloch vector must have 3 components, got shape {v.shape}")
    norm = float(np.linalg.norm(v))
    if norm > 1 + tol:
        raise InvalidStateError(f"Bloch vector norm {norm:.6g} exceeds 1")
    return (IDENTITY2 + np.einsum("k,kij->ij", v, PAULIS)) / 2


def density_to_bloch(rho):
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (2, 2):
        raise ValueError(f"expected a 2x2 density matrix, got shape {rho.shape}")
    return np.real(np.einsum("ij,kji->k", rho, PAULIS))


def check_density(rho, hermitian=DEFAULT_TOL.hermitian, trace=DEFAULT_TOL.trace,
                  psd=DEFAULT_TOL.psd):
    """Raise InvalidStateError unless ``rho`` is a 2x2 or 4x4 density matrix."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape not in ((2, 2), (4, 4)):
        raise InvalidStateError(f"density matrix must be 2x2 or 4x4, got {rho.shape}")
    h = hermitian_residual(rho)
    if h > hermitian:
        raise InvalidStateError(f"not Hermitian (residual {h:.3e})")
    tr = abs(np.trace(rho) - 1)
    if tr > trace:
        raise InvalidStateError(f"trace differs from 1 by {tr:.3e}")
    lo = float(np.linalg.eigvalsh((rho + dagger(rho)) / 2).min())
    if lo < -psd:
        raise InvalidStateError(f"negative eigenvalue {lo:.3e}")
    return rho


def is_density(rho, **tols):
    try:
        check_density(rho, **tols)
    except InvalidStateError:
        return False
    return True


def trace_distance(r1, r2):
    d = np.asarray(r1, dtype=complex) - np.asarray(r2, dtype=complex)
    return 0.5 * float(np.abs(np.linalg.eigvalsh((d + dagger(d)) / 2)).sum())


def purity(rho):
    rho = np.asarray(rho, dtype=complex)
    return float(np.real(np.trace(rho @ rho)))


def hs_inner(x, y):
    """Hilbert-Schmidt inner product Tr(x^dag y)."""
    return complex(np.vdot(np.asarray(x), np.asarray(y)))
