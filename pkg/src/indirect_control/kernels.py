"""Hot loops: dissipator actions and the fixed-step RK4 propagator.

Each kernel exists twice.  The ``*_loop`` functions are explicit loops
written for numba's nopython mode; the ``*_numpy`` functions are the
vectorized reference path.  The public names (``dissipator_action``,
``kossakowski_action``, ``rk4_propagate``) point at the compiled loops when
numba imports and ``INDIRECT_CONTROL_DISABLE_JIT`` is unset (or "0"),
otherwise at the numpy path.  Both paths agree to rounding error.
"""
from __future__ import annotations

import os

import numpy as np

_flag = os.environ.get("INDIRECT_CONTROL_DISABLE_JIT", "").strip().lower()
JIT_REQUESTED = _flag in ("", "0", "false", "no")

try:
    if not JIT_REQUESTED:
        raise ImportError("JIT disabled by INDIRECT_CONTROL_DISABLE_JIT")
    from numba import njit
    JIT_ENABLED = True
except ImportError:
    JIT_ENABLED = False

    def njit(*args, **kwargs):
        if len(args) == 1 and callable(args[0]) and not kwargs:
            return args[0]
        return lambda f: f


# ---------------------------------------------------------------- numpy path

def dissipator_action_numpy(ops, rho):
    """sum_i V_i rho V_i^dag - 1/2 {V_i^dag V_i, rho} for ops of shape (k, n, n)."""
    if len(ops) == 0:
        return np.zeros_like(rho)
    vd = np.conj(np.swapaxes(ops, 1, 2))
    jump = np.einsum("kab,bc,kcd->ad", ops, rho, vd)
    k = np.einsum("kab,kbc->ac", vd, ops)
    return jump - 0.5 * (k @ rho + rho @ k)


def kossakowski_action_numpy(c, basis, rho):
    """sum_ij c_ij (F_j rho F_i^dag - 1/2 {F_i^dag F_j, rho})."""
    bd = np.conj(np.swapaxes(basis, 1, 2))
    jump = np.einsum("ij,jab,bc,icd->ad", c, basis, rho, bd)
    k = np.einsum("ij,iab,jbc->ac", c, bd, basis)
    return jump - 0.5 * (k @ rho + rho @ k)


def rk4_propagate_numpy(s, y0, h, nsteps):
    """Classical RK4 for dy/dt = s @ y with constant step h."""
    y = np.array(y0, dtype=np.complex128)
    for _ in range(nsteps):
        k1 = s @ y
        k2 = s @ (y + 0.5 * h * k1)
        k3 = s @ (y + 0.5 * h * k2)
        k4 = s @ (y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y


# ----------------------------------------------------------------- loop path

def _matvec(s, y, out):
    n = s.shape[0]
    for i in range(n):
        acc = 0j
        for j in range(n):
            acc += s[i, j] * y[j]
        out[i] = acc


def _matmul(a, b, out):
    n = a.shape[0]
    for i in range(n):
        for j in range(n):
            acc = 0j
            for k in range(n):
                acc += a[i, k] * b[k, j]
            out[i, j] = acc


def dissipator_action_loop(ops, rho):
    n = rho.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    kk = np.zeros((n, n), dtype=np.complex128)
    tmp = np.zeros((n, n), dtype=np.complex128)
    for m in range(ops.shape[0]):
        v = ops[m]
        _matmul(v, rho, tmp)
        for i in range(n):
            for j in range(n):
                acc = 0j
                for k in range(n):
                    acc += tmp[i, k] * np.conj(v[j, k])
                out[i, j] += acc
        for i in range(n):
            for j in range(n):
                acc = 0j
                for k in range(n):
                    acc += np.conj(v[k, i]) * v[k, j]
                kk[i, j] += acc
    for i in range(n):
        for j in range(n):
            acc = 0j
            for k in range(n):
                acc += kk[i, k] * rho[k, j] + rho[i, k] * kk[k, j]
            out[i, j] -= 0.5 * acc
    return out


def kossakowski_action_loop(c, basis, rho):
    n = rho.shape[0]
    d = basis.shape[0]
    out = np.zeros((n, n), dtype=np.complex128)
    kk = np.zeros((n, n), dtype=np.complex128)
    frho = np.zeros((d, n, n), dtype=np.complex128)
    for j in range(d):
        _matmul(basis[j], rho, frho[j])
    for i in range(d):
        fi = basis[i]
        for j in range(d):
            cij = c[i, j]
            if cij == 0:
                continue
            fj = basis[j]
            for a in range(n):
                for b in range(n):
                    acc = 0j
                    kacc = 0j
                    for k in range(n):
                        acc += frho[j][a, k] * np.conj(fi[b, k])
                        kacc += np.conj(fi[k, a]) * fj[k, b]
                    out[a, b] += cij * acc
                    kk[a, b] += cij * kacc
    for a in range(n):
        for b in range(n):
            acc = 0j
            for k in range(n):
                acc += kk[a, k] * rho[k, b] + rho[a, k] * kk[k, b]
            out[a, b] -= 0.5 * acc
    return out


def rk4_propagate_loop(s, y0, h, nsteps):
    n = y0.shape[0]
    y = y0.copy()
    k1 = np.empty(n, dtype=np.complex128)
    k2 = np.empty(n, dtype=np.complex128)
    k3 = np.empty(n, dtype=np.complex128)
    k4 = np.empty(n, dtype=np.complex128)
    tmp = np.empty(n, dtype=np.complex128)
    for _ in range(nsteps):
        _matvec(s, y, k1)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * h * k1[i]
        _matvec(s, tmp, k2)
        for i in range(n):
            tmp[i] = y[i] + 0.5 * h * k2[i]
        _matvec(s, tmp, k3)
        for i in range(n):
            tmp[i] = y[i] + h * k3[i]
        _matvec(s, tmp, k4)
        for i in range(n):
            y[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return y


if JIT_ENABLED:
    _matvec = njit(cache=True)(_matvec)
    _matmul = njit(cache=True)(_matmul)
    dissipator_action_jit = njit(cache=True)(dissipator_action_loop)
    kossakowski_action_jit = njit(cache=True)(kossakowski_action_loop)
    rk4_propagate_jit = njit(cache=True)(rk4_propagate_loop)
else:
    dissipator_action_jit = None
    kossakowski_action_jit = None
    rk4_propagate_jit = None


def _c128(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def dissipator_action(ops, rho):
    ops, rho = _c128(ops), _c128(rho)
    if JIT_ENABLED:
        if ops.shape[0] == 0:
            return np.zeros_like(rho)
        return dissipator_action_jit(ops, rho)
    return dissipator_action_numpy(ops, rho)


def kossakowski_action(c, basis, rho):
    c, basis, rho = _c128(c), _c128(basis), _c128(rho)
    if JIT_ENABLED:
        return kossakowski_action_jit(c, basis, rho)
    return kossakowski_action_numpy(c, basis, rho)


def rk4_propagate(s, y0, h, nsteps):
    s, y0 = _c128(s), _c128(y0)
    if JIT_ENABLED:
        return rk4_propagate_jit(s, y0, float(h), int(nsteps))
    return rk4_propagate_numpy(s, y0, float(h), int(nsteps))
