"""Command line front end: validate | classify | stationary | evolve | sweep | verify-paper.

Exit codes: 0 success (deviations from closed forms are findings, not
failures), 1 physically invalid model or state, 2 parse or usage error.
Floats are written as '%.11e' (12 significant digits) so identical configs
give byte-identical output.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys

import numpy as np

from . import presets
from .asymptotics import analyse, projectors_for, target_bloch, verify_against_oracle
from .commutant import commutant_report
from .config import load_config
from .errors import ConfigError, InvalidStateError, NonHermitianError, PositivityViolation
from .liouvillian import asymptotic_state, evolve, spectral_asymptotics, stationary_residual
from .operators import (
    density_to_bloch, partial_trace_ancilla, partial_trace_target, purity, trace_distance,
)
from .presets import InitialState

EVOLVE_COLUMNS = ["t", "blochT_x", "blochT_y", "blochT_z", "blochA_x", "blochA_y", "blochA_z",
                  "purity_joint", "trace_dist_to_asymptote"]
VERIFY_COLUMNS = ["scenario", "case", "input", "source", "bloch_x", "bloch_y", "bloch_z",
                  "deviation", "joint_trace_distance", "tau"]
# representative product input used by the verification suites
SUITE_PRODUCT = ((0.3, -0.4, 0.5), (0.1, 0.6, -0.2))


class PhysicsError(Exception):
    """Model or state is well-formed but physically invalid (exit 1)."""


def fmt(x):
    if x is None:
        return ""
    v = float(np.real(x))
    if math.isnan(v):
        return ""
    if v == 0.0:
        v = 0.0     # drop the sign of negative zero
    return format(v, ".11e")


def fmt_complex(z):
    z = complex(z)
    return f"{fmt(z.real)}{'+' if z.imag >= 0 else '-'}{fmt(abs(z.imag))}j"


def csv_text(header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _bloch_cells(v):
    return ["", "", ""] if v is None else [fmt(x) for x in v]


def _model(cfg, **override):
    """Assembled and CP-checked model pieces for the config (or a sweep point)."""
    A, B = cfg.blocks(**override)
    model, diag, lset, cls, L = analyse(A, B, cfg.tol)
    if not model.is_completely_positive(cfg.tol):
        raise PhysicsError(f"Kossakowski matrix is not positive semidefinite "
                           f"(smallest eigenvalue {fmt(model.min_eigenvalue)})")
    return model, diag, lset, cls, L


# commands -----------------------------------------------------------------

def cmd_validate(cfg, args):
    from .kossakowski import assemble
    A, B = cfg.blocks()
    model = assemble(A, B, cfg.tol)
    lines = ["C eigenvalues [oracle]: " + " ".join(fmt(x) for x in model.c_eigenvalues),
             f"min eigenvalue [oracle]: {fmt(model.min_eigenvalue)}"]
    ok = model.is_completely_positive(cfg.tol)
    lines.append("completely positive: " + ("yes" if ok else "no"))
    return "\n".join(lines) + "\n", 0 if ok else 1


def cmd_classify(cfg, args):
    model, diag, lset, cls, L = _model(cfg)
    rep = commutant_report(lset, cfg.tol)
    lines = [
        f"case [theorem]: {cls.case}",
        f"n_plus [oracle]: {cls.n_plus}",
        f"n_minus [oracle]: {cls.n_minus}",
        f"xi [theorem]: {'-' if cls.xi is None else cls.xi}",
        f"alpha [theorem]: {'-' if cls.alpha is None else fmt(cls.alpha)}",
    ]
    lines += [f"residual {k} [oracle]: {fmt(v)}" for k, v in cls.residuals.items()]
    lines += [
        "lambda_plus [oracle]: " + " ".join(fmt(x) for x in diag.lam_plus),
        "lambda_minus [oracle]: " + " ".join(fmt(x) for x in diag.lam_minus),
        f"dim M [oracle]: {rep.M.dim}",
        f"dim M [paper-formula]: {rep.analytic.dim}",
        f"dim M' [oracle]: {rep.Mprime.dim}",
        f"dim Z [oracle]: {rep.Z.dim}",
        f"span_equal M [oracle vs paper-formula]: {rep.agree} (defect {fmt(rep.defect)})",
    ]
    if cls.case == "Trivial":
        lines.append("stationary state [theorem]: unique")
    else:
        try:
            ranks = projectors_for(cls, lset).ranks()
            lines.append("projector ranks [theorem]: " + " ".join(str(r) for r in ranks))
        except Exception as exc:  # singular effective Pauli
            lines.append(f"projector ranks [theorem]: unavailable ({exc})")
    return "\n".join(lines) + "\n", 0


def _matrix_lines(label, m):
    return [f"{label} row {i + 1}: " + " ".join(fmt_complex(z) for z in row)
            for i, row in enumerate(np.asarray(m))]


def cmd_stationary(cfg, args):
    from .asymptotics import max_rank_stationary
    model, diag, lset, cls, L = _model(cfg)
    spec = spectral_asymptotics(L, cfg.tol)
    lines = [f"case [theorem]: {cls.case}",
             f"kernel dimension [oracle]: {spec.kernel_dimension}",
             "peripheral eigenvalues [oracle]: "
             + " ".join(fmt_complex(z) for z in sorted(spec.peripheral, key=lambda z: z.imag)),
             f"oscillatory [oracle]: {spec.oscillatory}"]
    if spec.oscillatory:
        return "\n".join(lines) + "\n", 0
    rho0 = max_rank_stationary(L, spec, cfg.tol)
    if rho0 is None:
        lines.append("max-rank stationary state [oracle]: none")
    else:
        lines += _matrix_lines("max-rank stationary state [oracle]", rho0)
    rho_inf = asymptotic_state(L, cfg.initial.rho, spec, cfg.tol)
    lines.append(f"initial state: {cfg.initial.describe()}")
    lines += _matrix_lines("asymptotic state [oracle]", rho_inf)
    lines.append("target Bloch [oracle]: " + " ".join(fmt(x) for x in target_bloch(rho_inf)))
    lines.append(f"stationary residual [oracle]: {fmt(stationary_residual(L, rho_inf))}")
    return "\n".join(lines) + "\n", 0


def _time_grid(t_max, dt):
    if t_max == 0:
        return [0.0]
    n = int(math.ceil(t_max / dt - 1e-9))
    return [k * dt for k in range(n)] + [t_max]


def cmd_evolve(cfg, args):
    model, diag, lset, cls, L = _model(cfg)
    rate = lset.max_rate
    t_max = args.tmax if args.tmax is not None else cfg.t_max
    if t_max is None:
        t_max = 50.0 / rate if rate > 0 else 0.0
    dt = args.dt if args.dt is not None else cfg.dt
    if dt is None:
        dt = t_max / 100 if t_max > 0 else 1.0
    if t_max < 0 or dt <= 0:
        raise ConfigError("need t_max >= 0 and dt > 0")
    spec = spectral_asymptotics(L, cfg.tol)
    rho_inf = None
    if spec.oscillatory:
        print("warning: oscillatory asymptotics, trace_dist_to_asymptote left empty",
              file=sys.stderr)
    else:
        rho_inf = asymptotic_state(L, cfg.initial.rho, spec, cfg.tol)
    rows = []
    for t in _time_grid(t_max, dt):
        rho = evolve(L, cfg.initial.rho, t, cfg.tol)
        bt = density_to_bloch(partial_trace_ancilla(rho))
        ba = density_to_bloch(partial_trace_target(rho))
        td = None if rho_inf is None else trace_distance(rho, rho_inf)
        rows.append([fmt(t), *_bloch_cells(bt), *_bloch_cells(ba), fmt(purity(rho)), fmt(td)])
    return csv_text(EVOLVE_COLUMNS, rows), 0


def _sweep_point(cfg, param, v):
    """(model override, initial state) for one sweep grid value."""
    if param == "P":
        return {}, InitialState.entangled(v)
    if param.startswith("blochA_"):
        k = "xyz".index(param[-1])
        ini = cfg.initial
        bt = ini.bloch_t if ini.kind == "product" else (0.0, 0.0, 0.0)
        ba = list(ini.bloch_a) if ini.kind == "product" else [0.0, 0.0, 0.0]
        ba[k] = v
        return {}, InitialState.product(bt, ba)
    return {param: v}, cfg.initial


def cmd_sweep(cfg, args):
    if cfg.sweep is None:
        raise ConfigError("sweep needs a [sweep] section")
    sw = cfg.sweep
    header = [sw.parameter, "oracle_x", "oracle_y", "oracle_z",
              "formula_x", "formula_y", "formula_z", "deviation"]
    rows = []
    for v in sw.grid():
        override, ini = _sweep_point(cfg, sw.parameter, float(v))
        model, *_ = _model(cfg, **override)
        rep = verify_against_oracle(model, ini, cfg.tol)
        rows.append([fmt(v), *_bloch_cells(rep.bloch_oracle), *_bloch_cells(rep.formula_bloch),
                     fmt(rep.formula_deviation)])
    return csv_text(header, rows), 0


def _suites(cfg):
    mixed = InitialState.maximally_mixed()
    prod = InitialState.product(*SUITE_PRODUCT)
    ent = [InitialState.entangled(P) for P in (0.0, 0.5, 1.0)]
    yield "case1", presets.case1_blocks(), [mixed, prod, *ent]
    yield "case3", presets.case3_blocks(), [mixed, prod, *ent]
    yield "eq30 a=1 b=0.5", presets.eq30_blocks(1.0, 0.5), [mixed, prod, ent[1]]
    yield "eq30 a=1 b=1", presets.eq30_blocks(1.0, 1.0), [mixed, prod, ent[1]]
    yield "config", cfg.blocks(), [cfg.initial]


def verify_rows(cfg):
    rows = []
    for name, (A, B), inputs in _suites(cfg):
        model, *_ = analyse(A, B, cfg.tol)
        if not model.is_completely_positive(cfg.tol):
            raise PhysicsError(f"scenario {name}: Kossakowski matrix is not positive semidefinite")
        for ini in inputs:
            rep = verify_against_oracle(model, ini, cfg.tol)
            head = [name, rep.classification.case, ini.describe()]
            rows.append(head + ["oracle", *_bloch_cells(rep.bloch_oracle), "", "", ""])
            for br, rho in rep.theorem.items():
                dev = None
                if rep.bloch_oracle is not None:
                    dev = float(np.abs(rep.theorem_bloch[br] - rep.bloch_oracle).max())
                tau = rep.tau_recomputed if br == "2i" else None
                rows.append(head + [f"theorem-{br}", *_bloch_cells(rep.theorem_bloch[br]),
                                    fmt(dev), fmt(rep.theorem_deviation.get(br)), fmt(tau)])
            if rep.formula_bloch is not None:
                rows.append(head + ["paper-formula", *_bloch_cells(np.real(rep.formula_bloch)),
                                    fmt(rep.formula_deviation), "", fmt(rep.tau)])
    return rows


def cmd_verify_paper(cfg, args):
    return csv_text(VERIFY_COLUMNS, verify_rows(cfg)), 0


COMMANDS = {
    "validate": cmd_validate,
    "classify": cmd_classify,
    "stationary": cmd_stationary,
    "evolve": cmd_evolve,
    "sweep": cmd_sweep,
    "verify-paper": cmd_verify_paper,
}


def build_parser():
    p = argparse.ArgumentParser(
        prog="indirect-control",
        description="Asymptotic states of two-qubit dissipative semigroups.")
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--config", required=True, help="INI run configuration")
    p.add_argument("--out", default=None, help="output file (default: standard output)")
    p.add_argument("--tmax", type=float, default=None, help="evolution horizon")
    p.add_argument("--dt", type=float, default=None, help="time sample spacing")
    p.add_argument("--tol", action="append", default=[], metavar="KEY=VALUE",
                   help="tolerance override, repeatable")
    return p


def _write(text, path):
    if path is None:
        sys.stdout.write(text)
        sys.stdout.flush()
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, args.tol)
        text, code = COMMANDS[args.command](cfg, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (PhysicsError, NonHermitianError, InvalidStateError, PositivityViolation) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    _write(text, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
