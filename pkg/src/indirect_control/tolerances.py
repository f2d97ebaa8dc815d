"""Numerical thresholds shared by every module."""
from __future__ import annotations

from dataclasses import dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    # eigenvalue counted as zero when below zero_rel * max eigenvalue
    zero_rel: float = 1e-10
    hermitian: float = 1e-12
    trace: float = 1e-12
    psd: float = 1e-10
    # density checks after time evolution
    evolved: float = 1e-8
    # A = A^T, B = A, B = alpha*A tests, relative to ||A||_F
    structure_rel: float = 1e-10
    # |Re lambda| <= peripheral_rel * spectral scale of the superoperator
    peripheral_rel: float = 1e-9
    span_defect: float = 1e-8
    null_rel: float = 1e-9
    stationary: float = 1e-9
    max_rank_min_eig: float = 1e-8

    def override(self, **kwargs: float) -> "Tolerances":
        known = {f.name for f in fields(self)}
        unknown = set(kwargs) - known
        if unknown:
            raise KeyError(f"unknown tolerance(s): {', '.join(sorted(unknown))}")
        return replace(self, **{k: float(v) for k, v in kwargs.items()})


DEFAULT_TOL = Tolerances()
