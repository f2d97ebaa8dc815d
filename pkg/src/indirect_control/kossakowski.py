"""Block Kossakowski matrix, its structured diagonalization and Lindblad operators.

The joint 6x6 coefficient matrix is C = [[A, B], [B^dag, A]] against the
local basis of ``operators.LOCAL_BASIS``.  The generator convention is

    L[rho] = sum_ij c_ij (F_j rho F_i^dag - 1/2 {F_i^dag F_j, rho})

i.e. c_ij weights the jump F_j . F_i^dag.  With U C U^dag = diag(lambda)
the diagonal form uses V_m = sqrt(lambda_m) sum_k u_mk F_k.  Under this
convention the collective example A = B = [[a, ib, 0], [-ib, a, 0], [0, 0, a]]
pumps towards |up up>, and its full-rank stationary state has <sigma_3> = b/a
per qubit.

Effective Paulis carry the normalization Tr(s_i s_j^dag) = delta_ij:
sigma~_m = sum_k u~_mk sigma_k / sqrt(2), so that V_m / sqrt(lambda_m) is
exactly 1 (x) sigma~_m + sigma~_m (x) 1 (plus kind) or
1 (x) sigma^_m - sigma^_m (x) 1 (minus kind).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NonHermitianError, SingularSigma
from .operators import IDENTITY2, LOCAL_BASIS, PAULIS, hermitian_eig, kron
from .tolerances import DEFAULT_TOL


def _readonly(a, dtype=complex):
    a = np.array(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class KossakowskiModel:
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    c_eigenvalues: np.ndarray

    @property
    def min_eigenvalue(self) -> float:
        return float(self.c_eigenvalues[0])

    def is_completely_positive(self, tol=DEFAULT_TOL) -> bool:
        scale = max(1.0, float(np.abs(self.c_eigenvalues).max()))
        return self.min_eigenvalue >= -tol.psd * scale


def _hermitian_check(name, m, tol):
    scale = max(1.0, float(np.abs(m).max()))
    resid = np.abs(m - m.conj().T)
    bad = np.argwhere(resid > tol * scale)
    if len(bad):
        entries = [tuple(int(x) for x in ij) for ij in bad]
        shown = ", ".join(f"({i + 1},{j + 1})" for i, j in entries)
        raise NonHermitianError(
            f"block {name} is not Hermitian at entries {shown} "
            f"(max residual {resid.max():.3e})", entries)


def assemble(A, B, tol=DEFAULT_TOL) -> KossakowskiModel:
    """Build C = [[A, B], [B^dag, A]] from Hermitian 3x3 blocks.

    Complete positivity is not enforced here; inspect ``min_eigenvalue`` or
    ``is_completely_positive``.
    """
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    for name, m in (("A", A), ("B", B)):
        if m.shape != (3, 3):
            raise ValueError(f"block {name} must be 3x3, got shape {m.shape}")
    _hermitian_check("A", A, tol.hermitian)
    _hermitian_check("B", B, tol.hermitian)
    C = np.block([[A, B], [B.conj().T, A]])
    w = np.linalg.eigvalsh((C + C.conj().T) / 2)
    return KossakowskiModel(_readonly(A), _readonly(B), _readonly(C), _readonly(w, float))


@dataclass(frozen=True)
class StructuredDiagonalization:
    U_plus: np.ndarray    # U~, diagonalizes A + B
    U_minus: np.ndarray   # U^, diagonalizes A - B
    lam_plus: np.ndarray
    lam_minus: np.ndarray
    U: np.ndarray         # 6x6, U C U^dag = diag(lam_plus, lam_minus)
    n_plus: int
    n_minus: int
    threshold: float

    @property
    def eigenvalues(self):
        return np.concatenate([self.lam_plus, self.lam_minus])

    @property
    def nonzero_plus(self):
        return [i for i in range(3) if self.lam_plus[i] > self.threshold]

    @property
    def nonzero_minus(self):
        return [i for i in range(3) if self.lam_minus[i] > self.threshold]


def diagonalize(model: KossakowskiModel, tol=DEFAULT_TOL) -> StructuredDiagonalization:
    lp, up = hermitian_eig(model.A + model.B, tol.hermitian)
    lm, um = hermitian_eig(model.A - model.B, tol.hermitian)
    U = np.block([[up, up], [-um, um]]) / math.sqrt(2)
    top = max(float(lp.max()), float(lm.max()), 0.0)
    thr = tol.zero_rel * top if top > 0 else 0.0
    n_plus = int(np.sum(lp > thr)) if top > 0 else 0
    n_minus = int(np.sum(lm > thr)) if top > 0 else 0
    return StructuredDiagonalization(
        _readonly(up), _readonly(um), _readonly(lp, float), _readonly(lm, float),
        _readonly(U), n_plus, n_minus, thr)


@dataclass(frozen=True)
class Involution:
    mu: complex
    R: np.ndarray


def pauli_coefficients(sigma):
    sigma = np.asarray(sigma, dtype=complex)
    return np.einsum("ij,kji->k", sigma, PAULIS) / 2


def involution_decompose(sigma, tol=1e-10):
    """Write a traceless 2x2 operator as mu * R sigma_3 R with R @ R = 1.

    With Pauli coefficients c, mu^2 = sum_k c_k^2 (bilinear, no conjugation).
    Returns ``None`` when mu^2 vanishes (nilpotent sigma).  R is the
    reflection through the bisector of e_3 and n = c / mu,
    R = (e_3 + n).sigma / sqrt(2 (1 + n_3)); the sign of mu is picked so that
    |1 + n_3| >= |1 - n_3|, and R = 1 when n = e_3.
    """
    sigma = np.asarray(sigma, dtype=complex)
    scale = max(1.0, float(np.abs(sigma).max()))
    if abs(np.trace(sigma)) > tol * scale:
        raise ValueError(f"operator is not traceless (trace {np.trace(sigma):.3e})")
    c = pauli_coefficients(sigma)
    norm2 = float(np.sum(np.abs(c) ** 2))
    if norm2 == 0.0:
        return None
    mu2 = complex(np.sum(c * c))
    if abs(mu2) <= tol * norm2:
        return None
    mu = complex(np.sqrt(mu2))
    n = c / mu
    if abs(1 + n[2]) < abs(1 - n[2]):
        mu, n = -mu, -n
    if np.abs(n - np.array([0, 0, 1])).max() <= tol:
        return Involution(mu, _readonly(IDENTITY2))
    m = n + np.array([0, 0, 1])
    R = np.einsum("k,kij->ij", m, PAULIS) / np.sqrt(2 * (1 + n[2]))
    return Involution(mu, _readonly(R))


@dataclass(frozen=True)
class LindbladTerm:
    rate: float
    V: np.ndarray
    kind: str          # "plus" or "minus"
    index: int         # 0-based row of U~ (plus) or U^ (minus)
    sigma: np.ndarray  # effective Pauli, sigma~ or sigma^
    involution: Involution | None = field(default=None)

    @property
    def mu(self):
        return None if self.involution is None else self.involution.mu

    @property
    def singular(self):
        return self.involution is None

    def is_self_adjoint(self, tol=1e-10):
        return float(np.abs(self.sigma - self.sigma.conj().T).max()) <= tol


@dataclass(frozen=True)
class LindbladOperatorSet:
    terms: tuple
    diagonalization: StructuredDiagonalization | None = None

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    @property
    def operators(self):
        if not self.terms:
            return np.zeros((0, 4, 4), dtype=complex)
        return np.array([t.V for t in self.terms])

    @property
    def rates(self):
        return np.array([t.rate for t in self.terms])

    @property
    def max_rate(self):
        return float(self.rates.max()) if self.terms else 0.0

    def of_kind(self, kind):
        return [t for t in self.terms if t.kind == kind]


def effective_sigma(row):
    """sum_k row_k sigma_k / sqrt(2) for a 3-component row of U~ or U^."""
    return np.einsum("k,kij->ij", np.asarray(row, dtype=complex), PAULIS) / math.sqrt(2)


def lindblad_set(diag: StructuredDiagonalization) -> LindbladOperatorSet:
    """Lindblad operators for the eigenvalues above the zero threshold."""
    terms = []
    for kind, lam, Urows, offset in (
            ("plus", diag.lam_plus, diag.U_plus, 0),
            ("minus", diag.lam_minus, diag.U_minus, 3)):
        for i in range(3):
            if not lam[i] > diag.threshold or lam[i] <= 0:
                continue
            rate = float(lam[i])
            V = math.sqrt(rate) * np.einsum("k,kab->ab", diag.U[offset + i], LOCAL_BASIS)
            sigma = effective_sigma(Urows[i])
            terms.append(LindbladTerm(rate, _readonly(V), kind, i, _readonly(sigma),
                                      involution_decompose(sigma)))
    return LindbladOperatorSet(tuple(terms), diag)


def collective_form(sigma, kind):
    """1 (x) s + s (x) 1 for kind 'plus', 1 (x) s - s (x) 1 for kind 'minus'."""
    sign = 1.0 if kind == "plus" else -1.0
    return kron(IDENTITY2, sigma) + sign * kron(sigma, IDENTITY2)


def require_involution(term: LindbladTerm) -> Involution:
    if term.involution is None:
        raise SingularSigma(
            f"effective Pauli of {term.kind} term {term.index} is singular (mu^2 = 0); "
            "its commutant has no closed form and must be computed numerically")
    return term.involution


__all__ = [
    "KossakowskiModel", "StructuredDiagonalization", "LindbladTerm", "LindbladOperatorSet",
    "Involution", "assemble", "diagonalize", "lindblad_set", "involution_decompose",
    "effective_sigma", "collective_form", "pauli_coefficients", "require_involution",
]
