"""Time the numba-compiled loops against the numpy reference path.

    python benchmarks/bench_kernels.py [--repeat N] [--steps N]

The numba column is skipped when numba is missing or
INDIRECT_CONTROL_DISABLE_JIT is set.  Each row also reports the largest
entrywise difference between the two paths.
"""
import argparse
import time

import numpy as np

from indirect_control import kernels
from indirect_control.asymptotics import analyse
from indirect_control.operators import LOCAL_BASIS, vec
from indirect_control.presets import eq30_blocks


def best_of(fn, repeat):
    fn()  # warm-up (includes compilation for the jit path)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=20)
    ap.add_argument("--steps", type=int, default=20000, help="RK4 steps per call")
    args = ap.parse_args()

    model, diag, lset, cls, L = analyse(*eq30_blocks(1.0, 0.5))
    rng = np.random.default_rng(7)
    g = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    rho = g @ g.conj().T
    rho /= np.trace(rho)
    ops = np.ascontiguousarray(lset.operators)
    C = np.ascontiguousarray(model.C)
    basis = np.ascontiguousarray(LOCAL_BASIS)
    S = np.ascontiguousarray(L.matrix)
    y0 = vec(rho)
    h = 1e-3

    cases = [
        ("dissipator_action", lambda: kernels.dissipator_action_numpy(ops, rho),
         kernels.dissipator_action_jit and (lambda: kernels.dissipator_action_jit(ops, rho))),
        ("kossakowski_action", lambda: kernels.kossakowski_action_numpy(C, basis, rho),
         kernels.kossakowski_action_jit and (lambda: kernels.kossakowski_action_jit(C, basis, rho))),
        (f"rk4_propagate x{args.steps}", lambda: kernels.rk4_propagate_numpy(S, y0, h, args.steps),
         kernels.rk4_propagate_jit and (lambda: kernels.rk4_propagate_jit(S, y0, h, args.steps))),
    ]

    print(f"numba enabled: {kernels.JIT_ENABLED}")
    print(f"{'kernel':<24}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}{'max diff':>12}")
    for name, f_np, f_jit in cases:
        t_np = best_of(f_np, args.repeat)
        if f_jit:
            t_jit = best_of(f_jit, args.repeat)
            diff = float(np.abs(f_np() - f_jit()).max())
            print(f"{name:<24}{t_np:>12.3e}{t_jit:>12.3e}{t_np / t_jit:>10.1f}{diff:>12.1e}")
        else:
            print(f"{name:<24}{t_np:>12.3e}{'-':>12}{'-':>10}{'-':>12}")


if __name__ == "__main__":
    main()
