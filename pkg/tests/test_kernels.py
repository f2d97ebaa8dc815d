import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_blocks, random_density
from indirect_control import kernels
from indirect_control.kossakowski import assemble, diagonalize, lindblad_set
from indirect_control.liouvillian import build_superoperator
from indirect_control.operators import LOCAL_BASIS, vec


@pytest.fixture
def problem(rng):
    model = assemble(*random_blocks(rng))
    lset = lindblad_set(diagonalize(model))
    return model, lset, random_density(rng)


def test_loop_and_numpy_dissipator_agree(problem):
    _, lset, rho = problem
    ops = np.ascontiguousarray(lset.operators)
    ref = kernels.dissipator_action_numpy(ops, rho)
    assert np.abs(kernels.dissipator_action_loop(ops, rho) - ref).max() <= 1e-12
    assert np.abs(kernels.dissipator_action(ops, rho) - ref).max() <= 1e-12


def test_loop_and_numpy_kossakowski_agree(problem):
    model, _, rho = problem
    C = np.ascontiguousarray(model.C)
    basis = np.ascontiguousarray(LOCAL_BASIS)
    ref = kernels.kossakowski_action_numpy(C, basis, rho)
    assert np.abs(kernels.kossakowski_action_loop(C, basis, rho) - ref).max() <= 1e-12
    assert np.abs(kernels.kossakowski_action(C, basis, rho) - ref).max() <= 1e-12


def test_loop_and_numpy_rk4_agree(problem):
    _, lset, rho = problem
    S = np.ascontiguousarray(build_superoperator(lset).matrix)
    y0 = vec(rho)
    ref = kernels.rk4_propagate_numpy(S, y0, 1e-3, 200)
    assert np.abs(kernels.rk4_propagate_loop(S, y0, 1e-3, 200) - ref).max() <= 1e-12
    assert np.abs(kernels.rk4_propagate(S, y0, 1e-3, 200) - ref).max() <= 1e-12


def test_empty_operator_set():
    rho = np.eye(4, dtype=complex) / 4
    assert np.array_equal(kernels.dissipator_action(np.zeros((0, 4, 4)), rho), np.zeros((4, 4)))


@pytest.mark.parametrize("flag,expected", [("1", "False"), ("0", None)])
def test_env_flag_selects_path(flag, expected):
    env = dict(os.environ, INDIRECT_CONTROL_DISABLE_JIT=flag)
    out = subprocess.run(
        [sys.executable, "-c", "from indirect_control import kernels; print(kernels.JIT_ENABLED)"],
        env=env, capture_output=True, text=True, check=True).stdout.strip()
    if expected is None:
        pytest.importorskip("numba")
        expected = "True"
    assert out == expected
