"""Named model families and initial states used by the CLI and the tests."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import SINGLET, bloch_to_density, check_density, kron, projector


def eq30_blocks(a, b):
    """Collective model A = B = [[a, ib, 0], [-ib, a, 0], [0, 0, a]]."""
    A = np.array([[a, 1j * b, 0], [-1j * b, a, 0], [0, 0, a]], dtype=complex)
    return A, A.copy()


def unit_axis(axis):
    n = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(n)
    if n.shape != (3,) or norm == 0:
        raise ValueError(f"axis must be a nonzero 3-vector, got {axis!r}")
    return n / norm


def case1_blocks(g=1.0, axis=(0.0, 0.0, 1.0)):
    """A = B = g n n^T: a single collective operator along the real axis n."""
    n = unit_axis(axis)
    A = g * np.outer(n, n).astype(complex)
    return A, A.copy()


def case3_blocks(g=1.0, alpha=0.5, axis=(0.0, 0.0, 1.0)):
    """A = g n n^T, B = alpha A with alpha in (-1, 1)."""
    n = unit_axis(axis)
    A = g * np.outer(n, n).astype(complex)
    return A, alpha * A


def decoupled_blocks(g=1.0):
    """A = g 1, B = 0: independent unital noise on each qubit."""
    return g * np.eye(3, dtype=complex), np.zeros((3, 3), dtype=complex)


def match_eq30(A, B, tol=1e-10):
    """Return (a, b) if the blocks have the collective eq30 form, else None."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    a = A[0, 0].real
    b = A[0, 1].imag
    ref, _ = eq30_blocks(a, b)
    scale = max(1.0, float(np.abs(A).max()))
    if np.abs(A - ref).max() <= tol * scale and np.abs(B - ref).max() <= tol * scale:
        return float(a), float(b)
    return None


def product_stationary_state(a, b):
    """Product state (1 + beta 1(x)s3 + beta s3(x)1 + beta^2 s3(x)s3)/4, beta = b/a."""
    from .operators import IDENTITY2, SIGMA_3
    beta = b / a
    return (np.eye(4) + beta * (kron(IDENTITY2, SIGMA_3) + kron(SIGMA_3, IDENTITY2))
            + beta ** 2 * kron(SIGMA_3, SIGMA_3)) / 4


@dataclass(frozen=True)
class InitialState:
    """Joint initial state with the description it was built from.

    kind is "product" (Bloch vectors of target and ancilla), "entangled"
    (sqrt(P)|up up> + sqrt(1-P)|down down>) or "raw".
    """
    kind: str
    rho: np.ndarray
    bloch_t: tuple | None = None
    bloch_a: tuple | None = None
    P: float | None = None

    @classmethod
    def product(cls, bloch_t=(0.0, 0.0, 0.0), bloch_a=(0.0, 0.0, 0.0)):
        bt = tuple(float(x) for x in bloch_t)
        ba = tuple(float(x) for x in bloch_a)
        rho = kron(bloch_to_density(bt), bloch_to_density(ba))
        return cls("product", rho, bloch_t=bt, bloch_a=ba)

    @classmethod
    def entangled(cls, P):
        P = float(P)
        if not 0.0 <= P <= 1.0:
            raise ValueError(f"P must lie in [0, 1], got {P}")
        psi = np.zeros(4, dtype=complex)
        psi[0] = math.sqrt(P)
        psi[3] = math.sqrt(1.0 - P)
        return cls("entangled", projector(psi), P=P)

    @classmethod
    def raw(cls, rho):
        rho = check_density(np.array(rho, dtype=complex))
        if rho.shape != (4, 4):
            raise ValueError("raw initial state must be 4x4")
        return cls("raw", rho)

    @classmethod
    def maximally_mixed(cls):
        return cls.product()

    @classmethod
    def singlet(cls):
        return cls("raw", projector(SINGLET))

    def describe(self):
        if self.kind == "product":
            return "product T=({:g} {:g} {:g}) A=({:g} {:g} {:g})".format(
                *self.bloch_t, *self.bloch_a)
        if self.kind == "entangled":
            return f"entangled P={self.P:g}"
        return "raw"
