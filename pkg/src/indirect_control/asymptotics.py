"""Case taxonomy, projector families and asymptotic target states.

The spectral projection of ``liouvillian`` is the reference.  Theorem
branches and the closed-form Bloch formulas are evaluated as stated and
compared to it; deviations are reported, never patched over.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .commutant import PI, PI_MINUS, PI_PLUS
from .errors import OscillatoryAsymptotics, SingularSigma
from .kossakowski import (
    KossakowskiModel, LindbladOperatorSet, StructuredDiagonalization, assemble, diagonalize,
    lindblad_set, require_involution,
)
from .liouvillian import (
    LiouvilleOperator, SpectralAsymptotics, asymptotic_state, build_superoperator,
    spectral_asymptotics, stationary_residual,
)
from .operators import (
    IDENTITY4, dagger, density_to_bloch, kron, partial_trace_ancilla, trace_distance,
)
from .presets import InitialState, match_eq30, product_stationary_state
from .tolerances import DEFAULT_TOL

CASES = ("Case1", "Case2", "Case3", "Trivial")


@dataclass(frozen=True)
class CaseClassification:
    case: str
    xi: int | None          # 0-based row of U~ (and U^ in Case 3)
    alpha: float | None
    n_plus: int
    n_minus: int
    residuals: dict = field(default_factory=dict)


def classify(model: KossakowskiModel, diag: StructuredDiagonalization,
             tol=DEFAULT_TOL) -> CaseClassification:
    """Assign exactly one of Case1, Case2, Case3, Trivial.

    Structural equalities are Frobenius residuals relative to ||A||; the
    residuals are kept in the result so borderline inputs can be audited.
    """
    A = np.asarray(model.A)
    B = np.asarray(model.B)
    normA = float(np.linalg.norm(A))
    ref = normA if normA > 0 else 1.0
    sym = float(np.linalg.norm(A - A.T)) / ref
    eq = float(np.linalg.norm(B - A)) / ref
    alpha = float(np.real(np.vdot(A, B)) / normA ** 2) if normA > 0 else 0.0
    prop = float(np.linalg.norm(B - alpha * A)) / ref
    res = {"A-A^T": sym, "B-A": eq, "B-alpha*A": prop}
    t = tol.structure_rel
    npl, nmi = diag.n_plus, diag.n_minus

    if normA > 0 and eq <= t:
        if npl == 1 and sym <= t:
            return CaseClassification("Case1", diag.nonzero_plus[0], None, npl, nmi, res)
        if npl > 1 or (npl >= 1 and sym > t):
            return CaseClassification("Case2", None, None, npl, nmi, res)
    elif (normA > 0 and npl == 1 and nmi == 1 and sym <= t and prop <= t
          and abs(alpha - 1) > t and abs(alpha + 1) > t):
        common = set(diag.nonzero_plus) & set(diag.nonzero_minus)
        if common:
            return CaseClassification("Case3", min(common), alpha, npl, nmi, res)
    return CaseClassification("Trivial", None, None, npl, nmi, res)


@dataclass(frozen=True)
class ProjectorFamily:
    projectors: np.ndarray      # (k, 4, 4)
    case: str

    def __len__(self):
        return len(self.projectors)

    def ranks(self):
        return [int(round(float(np.real(np.trace(p))))) for p in self.projectors]

    def errors(self):
        """Largest violations of orthogonality, completeness, idempotence, Hermiticity."""
        P = self.projectors
        orth = max((float(np.abs(P[m] @ P[n]).max())
                    for m in range(len(P)) for n in range(len(P)) if m != n), default=0.0)
        return {
            "orthogonality": orth,
            "completeness": float(np.abs(P.sum(axis=0) - IDENTITY4).max()),
            "idempotence": max(float(np.abs(p @ p - p).max()) for p in P),
            "hermiticity": max(float(np.abs(p - dagger(p)).max()) for p in P),
        }


def projectors_for(cls: CaseClassification, lset: LindbladOperatorSet) -> ProjectorFamily:
    if cls.case == "Trivial":
        raise ValueError("the trivial case has no projector family; the stationary state is unique")
    if cls.case == "Case2":
        return ProjectorFamily(np.array([PI_MINUS, PI_PLUS]), "Case2")
    term = next((t for t in lset.of_kind("plus") if t.index == cls.xi), None)
    if term is None:
        raise ValueError(f"no plus-kind Lindblad term with index {cls.xi}")
    R = require_involution(term).R
    RR = kron(R, R)
    if cls.case == "Case1":
        blocks = [PI[0], PI[3], PI[1] + PI[2]]
    else:
        blocks = list(PI)
    return ProjectorFamily(np.array([RR @ p @ RR for p in blocks]), cls.case)


def max_rank_stationary(L: LiouvilleOperator, spectral: SpectralAsymptotics | None = None,
                        tol=DEFAULT_TOL):
    """Full-rank stationary state reached from 1/4, or None."""
    candidate = asymptotic_state(L, IDENTITY4 / 4, spectral, tol)
    if stationary_residual(L, candidate) > tol.stationary:
        return None
    if float(np.linalg.eigvalsh(candidate).min()) <= tol.max_rank_min_eig:
        return None
    return candidate


def theorem_asymptotic(family: ProjectorFamily, rho0, rho_init, branch):
    """Branch '2i': sum_n Tr(P rho P) P rho0 P / Tr(P rho0 P); '2ii': sum_n P rho P."""
    rho_init = np.asarray(rho_init, dtype=complex)
    out = np.zeros((4, 4), dtype=complex)
    if branch == "2ii":
        for P in family.projectors:
            out += P @ rho_init @ P
    elif branch == "2i":
        if rho0 is None:
            raise ValueError("branch 2i needs a maximal-rank stationary state")
        for n, P in enumerate(family.projectors):
            den = float(np.real(np.trace(P @ rho0 @ P)))
            if den <= 1e-14:
                raise ValueError(f"vanishing denominator Tr(P_{n} rho0 P_{n}) = {den:.3e}")
            out += np.real(np.trace(P @ rho_init @ P)) * (P @ rho0 @ P) / den
    else:
        raise ValueError(f"unknown branch {branch!r}; expected '2i' or '2ii'")
    return (out + dagger(out)) / 2


def _realify(v):
    v = np.asarray(v, dtype=complex)
    return v.real.copy() if float(np.abs(v.imag).max()) <= 1e-12 else v


def formula_case13(u_row, bloch=None, P=None):
    """Closed-form target Bloch vector for Cases 1 and 3, evaluated as stated.

    With a product input s = r1 u1 - r2 u2 + r3 u3 and the result is
    (u1 s, -u2 s, u3 s); with the entangled input s becomes (2P - 1) u3.
    """
    u = np.asarray(u_row, dtype=complex)
    if (bloch is None) == (P is None):
        raise ValueError("give exactly one of bloch or P")
    if P is not None:
        s = (2.0 * float(P) - 1.0) * u[2]
    else:
        r = np.asarray(bloch, dtype=float)
        s = r[0] * u[0] - r[1] * u[1] + r[2] * u[2]
    return _realify([u[0] * s, -u[1] * s, u[2] * s])


def tau_closed_form(a, b):
    return a * b / (3 * a ** 2 + 2 * b ** 2)


def tau_recomputed(a, b):
    """Coefficient obtained from branch 2i with the product stationary state."""
    return a * b / (3 * a ** 2 + b ** 2)


def formula_case2_example(a, b, bloch_t=None, bloch_a=None, P=None):
    """(tau, Bloch) of the collective example, closed forms evaluated as stated."""
    if not a > 0 or a * a < b * b:
        raise ValueError(f"complete positivity requires a > 0 and a^2 >= b^2 (a={a}, b={b})")
    tau = tau_closed_form(a, b)
    if P is not None:
        z = 4 * tau * (1 + math.sqrt(P * (1 - P)))
    else:
        bt = np.zeros(3) if bloch_t is None else np.asarray(bloch_t, dtype=float)
        ba = np.zeros(3) if bloch_a is None else np.asarray(bloch_a, dtype=float)
        z = tau * (3 + float(bt @ ba))
    return tau, np.array([0.0, 0.0, z])


@dataclass
class AsymptoticReport:
    classification: CaseClassification
    initial: InitialState
    oscillatory: bool
    rho_inf: np.ndarray | None
    bloch_oracle: np.ndarray | None
    theorem: dict                 # branch -> joint state
    theorem_bloch: dict
    theorem_deviation: dict       # branch -> trace distance to oracle
    formula_bloch: np.ndarray | None
    formula_deviation: float | None
    rho0: np.ndarray | None
    tau: float | None
    tau_recomputed: float | None
    rho0_closed_form: np.ndarray | None = None
    rho0_closed_form_residual: float | None = None
    rho0_closed_form_distance: float | None = None
    notes: list = field(default_factory=list)


def target_bloch(rho):
    return density_to_bloch(partial_trace_ancilla(rho))


def _branches(case):
    return {"Trivial": ("1",), "Case1": ("2ii",), "Case3": ("2i",),
            "Case2": ("2i", "2ii")}[case]


def verify_against_oracle(model: KossakowskiModel, initial: InitialState,
                          tol=DEFAULT_TOL) -> AsymptoticReport:
    diag = diagonalize(model, tol)
    lset = lindblad_set(diag)
    cls = classify(model, diag, tol)
    L = build_superoperator(lset)
    spec = spectral_asymptotics(L, tol)
    notes = []
    rho = initial.rho

    rho_inf = bloch_oracle = rho0 = None
    if spec.oscillatory:
        notes.append("oscillatory peripheral spectrum: no limit state, oracle fields empty")
    else:
        rho_inf = asymptotic_state(L, rho, spec, tol)
        bloch_oracle = target_bloch(rho_inf)
        rho0 = max_rank_stationary(L, spec, tol)

    theorem, tb, tdev = {}, {}, {}
    family = None
    if cls.case != "Trivial":
        try:
            family = projectors_for(cls, lset)
        except SingularSigma as exc:
            notes.append(f"no projector family: {exc}")
    for br in _branches(cls.case):
        try:
            if br == "1":
                if rho0 is None:
                    raise ValueError("no maximal-rank stationary state")
                out = rho0
            elif family is None:
                continue
            elif br == "2i" and cls.case == "Case3":
                out = theorem_asymptotic(family, IDENTITY4 / 4, rho, "2i")
            else:
                out = theorem_asymptotic(family, rho0, rho, br)
        except ValueError as exc:
            notes.append(f"branch {br} skipped: {exc}")
            continue
        theorem[br] = out
        tb[br] = target_bloch(out)
        if rho_inf is not None:
            tdev[br] = trace_distance(out, rho_inf)

    formula = fdev = tau = tau_re = None
    rho0_cf = cf_res = cf_dist = None
    if cls.case in ("Case1", "Case3"):
        u_row = diag.U_plus[cls.xi]
        if initial.kind == "product":
            formula = formula_case13(u_row, bloch=initial.bloch_t)
        elif initial.kind == "entangled":
            formula = formula_case13(u_row, P=initial.P)
    elif cls.case == "Case2":
        ab = match_eq30(model.A, model.B)
        if ab is not None:
            a, b = ab
            tau_re = tau_recomputed(a, b)
            if initial.kind == "product":
                tau, formula = formula_case2_example(a, b, initial.bloch_t, initial.bloch_a)
            elif initial.kind == "entangled":
                tau, formula = formula_case2_example(a, b, P=initial.P)
            else:
                tau = tau_closed_form(a, b)
            rho0_cf = product_stationary_state(a, b)
            cf_res = stationary_residual(L, rho0_cf)
            if rho0 is not None:
                cf_dist = trace_distance(rho0_cf, rho0)
            else:
                notes.append("no maximal-rank stationary state (closed-form rho0 is rank deficient)")
    if formula is not None and bloch_oracle is not None:
        fdev = float(np.abs(np.asarray(formula) - bloch_oracle).max())

    return AsymptoticReport(cls, initial, spec.oscillatory, rho_inf, bloch_oracle, theorem, tb,
                            tdev, formula, fdev, rho0, tau, tau_re, rho0_cf, cf_res, cf_dist,
                            notes)


def analyse(A, B, tol=DEFAULT_TOL):
    """Convenience: model, diagonalization, Lindblad set, classification, superoperator."""
    model = assemble(A, B, tol)
    diag = diagonalize(model, tol)
    lset = lindblad_set(diag)
    return model, diag, lset, classify(model, diag, tol), build_superoperator(lset)


__all__ = [
    "CaseClassification", "ProjectorFamily", "AsymptoticReport", "classify", "projectors_for",
    "max_rank_stationary", "theorem_asymptotic", "formula_case13", "formula_case2_example",
    "tau_closed_form", "tau_recomputed", "verify_against_oracle", "target_bloch", "analyse",
    "OscillatoryAsymptotics",
]
