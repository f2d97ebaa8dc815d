"""Commutant algebras of the Lindblad operators, numerically and in closed form.

Subspaces of 4x4 matrices are stored as Hilbert-Schmidt orthonormal bases.
The numerical commutant of a generator set {G} is the null space of the
stacked maps X -> [G, X] and X -> [G^dag, X]; closed forms follow the
involution decomposition of the effective Paulis.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import SingularSigma
from .kossakowski import LindbladOperatorSet, involution_decompose
from .operators import IDENTITY2, IDENTITY4, PAULIS, dagger, kron, null_space, unvec, vec
from .tolerances import DEFAULT_TOL

S1, S2, S3 = PAULIS

OMEGA_PLUS = kron(S1, S1) + kron(S2, S2) + kron(S3, S3)
ANTISYM_12 = kron(S1, S2) - kron(S2, S1)
SYM_12 = kron(S1, S2) + kron(S2, S1)
DIFF_11_22 = kron(S1, S1) - kron(S2, S2)

# computational basis order |up up>, |up down>, |down up>, |down down>
PI = tuple(np.diag(np.eye(4, dtype=complex)[k]) for k in range(4))
PI_MINUS = (IDENTITY4 - OMEGA_PLUS) / 4      # singlet projector, rank 1
PI_PLUS = IDENTITY4 - PI_MINUS               # triplet projector, rank 3


def conjugate_pair(R, X):
    """(R (x) R) X (R (x) R) for a 2x2 involution R."""
    RR = kron(R, R)
    return RR @ X @ RR


def delta_minus(R):
    return conjugate_pair(R, ANTISYM_12)


def omega_minus(S):
    return conjugate_pair(S, DIFF_11_22)


def delta_plus(S):
    return conjugate_pair(S, SYM_12)


@dataclass(frozen=True)
class OperatorAlgebra:
    basis: np.ndarray    # (dim, 4, 4), orthonormal in Tr(x^dag y)
    label: str = "custom"

    @property
    def dim(self):
        return int(self.basis.shape[0])

    def vectors(self):
        """Basis as columns of vec'd matrices, shape (16, dim)."""
        if self.dim == 0:
            return np.zeros((16, 0), dtype=complex)
        return np.column_stack([vec(b) for b in self.basis])

    def projector(self):
        Q = self.vectors()
        return Q @ dagger(Q)

    def defect(self, X):
        """Norm of the part of X outside the subspace, relative to ||X||."""
        x = vec(X)
        nx = np.linalg.norm(x)
        if nx == 0:
            return 0.0
        Q = self.vectors()
        return float(np.linalg.norm(x - Q @ (dagger(Q) @ x)) / nx)

    def gram_error(self):
        Q = self.vectors()
        return float(np.abs(dagger(Q) @ Q - np.eye(self.dim)).max()) if self.dim else 0.0


def orthonormalize(mats, label="custom", tol=1e-10):
    """Orthonormal basis of span(mats); elements need not be independent."""
    mats = [np.asarray(m, dtype=complex) for m in mats]
    if not mats:
        return OperatorAlgebra(np.zeros((0, 4, 4), dtype=complex), label)
    M = np.column_stack([vec(m) for m in mats])
    u, s, _ = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return OperatorAlgebra(np.zeros((0, 4, 4), dtype=complex), label)
    rank = int(np.sum(s > tol * s[0]))
    return _from_columns(u[:, :rank], label)


def _from_columns(Q, label):
    basis = np.array([unvec(Q[:, k], 4) for k in range(Q.shape[1])]).reshape(-1, 4, 4)
    basis.setflags(write=False)
    return OperatorAlgebra(basis, label)


def full_algebra(label="custom"):
    return _from_columns(np.eye(16, dtype=complex), label)


def commutator_map(G):
    """Matrix of X -> G X - X G on column-stacked X."""
    G = np.asarray(G, dtype=complex)
    eye = np.eye(G.shape[0])
    return np.kron(eye, G) - np.kron(G.T, eye)


def numerical_commutant(generators, label="custom", tol=DEFAULT_TOL):
    """{G, G^dag : G in generators}' as an orthonormal basis.

    Each generator is rescaled to unit norm before stacking, then one SVD
    gives the joint null space; the rank cutoff is absolute at that scale.
    """
    blocks = []
    for G in generators:
        G = np.asarray(G, dtype=complex)
        norm = np.linalg.norm(G)
        if norm == 0:
            continue
        G = G / norm
        blocks.append(commutator_map(G))
        blocks.append(commutator_map(dagger(G)))
    if not blocks:
        return full_algebra(label)
    return _from_columns(null_space(np.vstack(blocks), tol.null_rel, scale=1.0), label)


def commutant_M(lset: LindbladOperatorSet, tol=DEFAULT_TOL):
    if len(lset) == 0:
        warnings.warn("empty Lindblad set: the commutant is the full matrix algebra",
                      stacklevel=2)
        return full_algebra("M")
    return numerical_commutant(lset.operators, "M", tol)


def commutant_prime(algebra: OperatorAlgebra, tol=DEFAULT_TOL):
    return numerical_commutant(algebra.basis, "Mprime", tol)


def intersection(*algebras, label="custom", tol=DEFAULT_TOL):
    """Common subspace: null space of the stacked complements 1 - P_k."""
    eye = np.eye(16)
    stacked = np.vstack([eye - a.projector() for a in algebras])
    return _from_columns(null_space(stacked, tol.null_rel, scale=1.0), label)


def center(M: OperatorAlgebra, Mprime: OperatorAlgebra, tol=DEFAULT_TOL):
    return intersection(M, Mprime, label="Z", tol=tol)


def _is_hermitian(sigma, tol):
    return float(np.abs(sigma - dagger(sigma)).max()) <= tol


def _need_involution(sigma, involution):
    if involution is None:
        involution = involution_decompose(sigma)
    if involution is None:
        raise SingularSigma("effective Pauli is singular; use numerical_commutant instead")
    return involution


def analytic_commutant_plus(sigma, involution=None, tol=1e-10):
    """Closed-form {V, V^dag}' for V = 1 (x) sigma + sigma (x) 1.

    Hermitian sigma gives the six-element span
    {1, 1 (x) s, s (x) 1, s (x) s, Omega+, R(s1 s2 - s2 s1)R}; otherwise the
    span reduces to {1, Omega+}.
    """
    sigma = np.asarray(sigma, dtype=complex)
    inv = _need_involution(sigma, involution)
    if not _is_hermitian(sigma, tol):
        return orthonormalize([IDENTITY4, OMEGA_PLUS], "analytic-plus")
    return orthonormalize([
        IDENTITY4, kron(IDENTITY2, sigma), kron(sigma, IDENTITY2), kron(sigma, sigma),
        OMEGA_PLUS, delta_minus(inv.R)], "analytic-plus")


def analytic_commutant_minus(sigma, involution=None, tol=1e-10):
    """Closed-form {V, V^dag}' for V = 1 (x) sigma - sigma (x) 1.

    Hermitian sigma gives {1, 1 (x) s, s (x) 1, s (x) s, S(s1 s1 - s2 s2)S,
    S(s1 s2 + s2 s1)S}; otherwise the closed form states span{1}.
    """
    sigma = np.asarray(sigma, dtype=complex)
    inv = _need_involution(sigma, involution)
    if not _is_hermitian(sigma, tol):
        return orthonormalize([IDENTITY4], "analytic-minus")
    return orthonormalize([
        IDENTITY4, kron(IDENTITY2, sigma), kron(sigma, IDENTITY2), kron(sigma, sigma),
        omega_minus(inv.R), delta_plus(inv.R)], "analytic-minus")


def per_generator_commutant(term, tol=DEFAULT_TOL):
    """Closed form when the effective Pauli is nonsingular, else numerical."""
    if term.involution is None:
        return numerical_commutant([term.V], "custom", tol)
    if term.kind == "plus":
        return analytic_commutant_plus(term.sigma, term.involution)
    return analytic_commutant_minus(term.sigma, term.involution)


def analytic_commutant_M(lset: LindbladOperatorSet, tol=DEFAULT_TOL):
    """Intersection of the per-generator commutants."""
    if len(lset) == 0:
        return full_algebra("analytic")
    parts = [per_generator_commutant(t, tol) for t in lset]
    return intersection(*parts, label="analytic", tol=tol)


def span_equal(X: OperatorAlgebra, Y: OperatorAlgebra, tol=DEFAULT_TOL.span_defect):
    """(equal, defect) with defect the largest mutual projection residual."""
    d = 0.0
    for a, b in ((X, Y), (Y, X)):
        for m in a.basis:
            d = max(d, b.defect(m))
    return d <= tol, d


def is_abelian(algebra: OperatorAlgebra, tol=1e-9):
    B = algebra.basis
    return all(np.abs(B[i] @ B[j] - B[j] @ B[i]).max() <= tol
               for i in range(len(B)) for j in range(i + 1, len(B)))


@dataclass(frozen=True)
class CommutantReport:
    M: OperatorAlgebra
    Mprime: OperatorAlgebra
    Z: OperatorAlgebra
    analytic: OperatorAlgebra
    agree: bool
    defect: float


def commutant_report(lset: LindbladOperatorSet, tol=DEFAULT_TOL) -> CommutantReport:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        M = commutant_M(lset, tol)
    Mp = commutant_prime(M, tol)
    Z = center(M, Mp, tol)
    an = analytic_commutant_M(lset, tol)
    ok, d = span_equal(M, an, tol.span_defect)
    return CommutantReport(M, Mp, Z, an, ok, d)
