"""Generator superoperator, time evolution and spectral asymptotics.

The spectral projection onto the peripheral eigenspace is the reference
("oracle") for every closed-form statement about asymptotic states; the
matrix-exponential and RK4 evolutions cross-check it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    DefectiveSpectrum, InvalidStateError, OscillatoryAsymptotics, PositivityViolation,
)
from .kossakowski import KossakowskiModel, LindbladOperatorSet
from .operators import LOCAL_BASIS, check_density, dagger, expm, null_space, unvec, vec
from .tolerances import DEFAULT_TOL


@dataclass(frozen=True)
class LiouvilleOperator:
    matrix: np.ndarray          # (dim^2, dim^2), acts on column-stacked states
    dim: int = 4
    hamiltonian: np.ndarray | None = None
    max_rate: float = 0.0       # largest Lindblad rate, sets the time scale

    def __call__(self, rho):
        return unvec(self.matrix @ vec(rho), self.dim)

    def trace_defect(self):
        """max |Tr L[E_ij]| over matrix units; zero for trace-preserving L."""
        tr = vec(np.eye(self.dim))
        return float(np.abs(tr.conj() @ self.matrix).max())


def generator_action(lset: LindbladOperatorSet, rho):
    """Diagonal-form generator sum_i V_i rho V_i^dag - 1/2 {V_i^dag V_i, rho}."""
    return kernels.dissipator_action(lset.operators, rho)


def kossakowski_action(model: KossakowskiModel, rho):
    """Double-sum generator sum_ij c_ij (F_j rho F_i^dag - 1/2 {F_i^dag F_j, rho})."""
    return kernels.kossakowski_action(model.C, LOCAL_BASIS, rho)


def build_superoperator(lset: LindbladOperatorSet, hamiltonian=None, dim=4):
    eye = np.eye(dim, dtype=complex)
    S = np.zeros((dim * dim, dim * dim), dtype=complex)
    K = np.zeros((dim, dim), dtype=complex)
    for V in lset.operators:
        S += np.kron(V.conj(), V)
        K += dagger(V) @ V
    S -= 0.5 * (np.kron(eye, K) + np.kron(K.T, eye))
    if hamiltonian is not None:
        H = np.asarray(hamiltonian, dtype=complex)
        S += -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    S.setflags(write=False)
    return LiouvilleOperator(S, dim, hamiltonian, lset.max_rate)


def kossakowski_superoperator(model: KossakowskiModel, hamiltonian=None):
    """Superoperator straight from the double sum over the local basis.

    Unlike ``build_superoperator`` it keeps every direction of C, including
    negative ones, so it also represents models that are not completely
    positive (used to exhibit their positivity violations).
    """
    dim = 4
    eye = np.eye(dim, dtype=complex)
    F = LOCAL_BASIS
    S = np.zeros((dim * dim, dim * dim), dtype=complex)
    K = np.zeros((dim, dim), dtype=complex)
    C = np.asarray(model.C)
    for i in range(6):
        for j in range(6):
            if C[i, j] == 0:
                continue
            S += C[i, j] * np.kron(F[i].conj(), F[j])
            K += C[i, j] * dagger(F[i]) @ F[j]
    S -= 0.5 * (np.kron(eye, K) + np.kron(K.T, eye))
    if hamiltonian is not None:
        H = np.asarray(hamiltonian, dtype=complex)
        S += -1j * (np.kron(eye, H) - np.kron(H.T, eye))
    S.setflags(write=False)
    rate = max(float(model.c_eigenvalues.max()), 0.0)   # C has the Lindblad rates as spectrum
    return LiouvilleOperator(S, dim, hamiltonian, rate)


def _validated(rho, tol, t):
    rho = (rho + dagger(rho)) / 2
    lo = float(np.linalg.eigvalsh(rho).min())
    if lo < -tol.evolved:
        raise PositivityViolation(
            f"evolved state at t={t:g} has eigenvalue {lo:.3e}; "
            "the generator is not completely positive", lo)
    try:
        check_density(rho, hermitian=tol.evolved, trace=tol.evolved, psd=tol.evolved)
    except InvalidStateError as exc:
        raise PositivityViolation(f"evolved state at t={t:g} is invalid: {exc}", lo) from exc
    return rho


def propagator(L: LiouvilleOperator, t):
    return expm(L.matrix * float(t))


def evolve(L: LiouvilleOperator, rho0, t, tol=DEFAULT_TOL, check=True):
    if t < 0:
        raise ValueError("t must be non-negative")
    rho0 = np.asarray(rho0, dtype=complex)
    if t == 0:
        return rho0.copy()
    rho = unvec(propagator(L, t) @ vec(rho0), L.dim)
    return _validated(rho, tol, t) if check else rho


def evolve_rk(L, rho0, t, dt=1e-3, max_steps=10_000_000):
    """Fixed-step classical RK4 integration of d rho/dt = L[rho].

    ``L`` may be a LiouvilleOperator or a LindbladOperatorSet.  The step is
    shrunk slightly so an integer number of steps lands exactly on ``t``.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if t < 0:
        raise ValueError("t must be non-negative")
    if isinstance(L, LindbladOperatorSet):
        L = build_superoperator(L)
    nsteps = int(math.ceil(t / dt - 1e-9)) if t > 0 else 0
    if nsteps > max_steps:
        raise OverflowError(f"{nsteps} RK4 steps exceed the limit of {max_steps}")
    rho0 = np.asarray(rho0, dtype=complex)
    if nsteps == 0:
        return rho0.copy()
    y = kernels.rk4_propagate(L.matrix, vec(rho0), t / nsteps, nsteps)
    return unvec(y, L.dim)


@dataclass(frozen=True)
class SpectralAsymptotics:
    eigenvalues: np.ndarray
    peripheral: np.ndarray        # one entry per peripheral eigenvector
    right: np.ndarray             # columns, vec'd right eigenvectors
    left: np.ndarray              # columns, biorthogonal: left^H right = 1
    projection: np.ndarray        # projection onto the kernel (limit map)
    oscillatory: bool
    threshold: float

    @property
    def kernel_dimension(self):
        return int(np.sum(np.abs(self.peripheral) <= self.threshold))

    def biorthogonality_error(self):
        k = self.right.shape[1]
        return float(np.abs(dagger(self.left) @ self.right - np.eye(k)).max()) if k else 0.0

    def idempotence_error(self):
        P = self.projection
        return float(np.abs(P @ P - P).max())


def _cluster(values, gap):
    order = np.argsort(values.imag, kind="stable")
    groups, current = [], [order[0]]
    for a, b in zip(order[:-1], order[1:]):
        if abs(values[b] - values[a]) <= gap:
            current.append(b)
        else:
            groups.append(current)
            current = [b]
    groups.append(current)
    return [values[g] for g in groups]


def spectral_asymptotics(L: LiouvilleOperator, tol=DEFAULT_TOL) -> SpectralAsymptotics:
    """Peripheral eigenspace of the superoperator and the limit projection.

    Eigenvalues with |Re| <= peripheral_rel * (largest Lindblad rate) are
    peripheral; without dissipation the largest |eigenvalue| sets the scale.
    For each peripheral cluster the right and left null spaces of
    (L - mu) are taken from an SVD; a geometric multiplicity that differs
    from the cluster size signals a Jordan block and is refused.
    """
    S = np.asarray(L.matrix)
    n = S.shape[0]
    ev = np.linalg.eigvals(S)
    scale = float(np.abs(ev).max())
    thr = tol.peripheral_rel * (L.max_rate if L.max_rate > 0 else scale)
    peri = ev[np.abs(ev.real) <= thr]
    if scale == 0.0:
        eye = np.eye(n, dtype=complex)
        return SpectralAsymptotics(ev, np.zeros(n, complex), eye, eye, eye, False, 0.0)
    rights, lefts, mus = [], [], []
    oscillatory = False
    kernel_R = kernel_W = None
    for cluster in _cluster(peri, max(thr, 1e-12 * scale)):
        mu = 1j * float(np.mean(cluster.imag))
        shifted = S - mu * np.eye(n)
        R = null_space(shifted, tol.null_rel)
        W = null_space(dagger(shifted), tol.null_rel)
        if R.shape[1] != len(cluster) or W.shape[1] != len(cluster):
            raise DefectiveSpectrum(
                f"peripheral eigenvalue {mu:.3g}: algebraic multiplicity {len(cluster)}, "
                f"geometric multiplicity {R.shape[1]}")
        M = dagger(W) @ R
        W = W @ np.linalg.inv(M).conj().T
        rights.append(R)
        lefts.append(W)
        mus.extend([mu] * R.shape[1])
        if abs(mu.imag) > thr:
            oscillatory = True
        else:
            kernel_R, kernel_W = R, W
    right = np.hstack(rights)
    left = np.hstack(lefts)
    if kernel_R is None:
        raise DefectiveSpectrum("no zero eigenvalue found; generator is not trace preserving")
    P = kernel_R @ dagger(kernel_W)
    return SpectralAsymptotics(ev, np.array(mus), right, left, P, oscillatory, thr)


def asymptotic_state(L: LiouvilleOperator, rho0, spectral: SpectralAsymptotics | None = None,
                     tol=DEFAULT_TOL):
    """lim_{t->oo} of the evolution of rho0, via the spectral projection."""
    if spectral is None:
        spectral = spectral_asymptotics(L, tol)
    if spectral.oscillatory:
        raise OscillatoryAsymptotics(
            "peripheral spectrum has nonzero imaginary parts; the evolution has no limit")
    rho = unvec(spectral.projection @ vec(rho0), L.dim)
    return (rho + dagger(rho)) / 2


def stationary_residual(L: LiouvilleOperator, rho):
    return float(np.abs(L(rho)).max())


__all__ = [
    "LiouvilleOperator", "SpectralAsymptotics", "generator_action", "kossakowski_action",
    "build_superoperator", "kossakowski_superoperator", "propagator", "evolve", "evolve_rk", "spectral_asymptotics",
    "asymptotic_state", "stationary_residual",
]
