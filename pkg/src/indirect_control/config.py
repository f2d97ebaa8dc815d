"""INI run configuration: model blocks or preset, initial state, horizon, sweep.

Matrices are written row by row, rows separated by ';', entries by spaces;
an entry is "re" or "re,im".  Comments start with '#'.  See README.md for
the full schema and examples.
"""
from __future__ import annotations

import configparser
import dataclasses
import re
from dataclasses import dataclass

import numpy as np

from . import presets
from .errors import ConfigError
from .presets import InitialState
from .tolerances import DEFAULT_TOL, Tolerances

PRESETS = ("eq30", "case1", "case3", "decoupled")
SWEEP_PARAMETERS = ("P", "blochA_x", "blochA_y", "blochA_z", "a", "b", "alpha")
PRESET_PARAMS = {
    "eq30": {"a": 1.0, "b": 0.5},
    "case1": {"g": 1.0},
    "case3": {"g": 1.0, "alpha": 0.5},
    "decoupled": {"g": 1.0},
}


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    start: float
    stop: float
    num: int

    def grid(self):
        return np.linspace(self.start, self.stop, self.num)


@dataclass(frozen=True)
class ModelConfig:
    preset: str | None
    params: dict
    axis: tuple
    A: np.ndarray | None
    B: np.ndarray | None
    initial: InitialState
    tol: Tolerances = DEFAULT_TOL
    t_max: float | None = None
    dt: float | None = None
    sweep: SweepSpec | None = None

    def blocks(self, **override):
        """(A, B) for this model, with preset parameters optionally replaced."""
        if self.preset is None:
            if override:
                raise ConfigError(
                    f"[sweep] parameter {next(iter(override))!r} needs a preset model")
            return self.A, self.B
        p = dict(self.params)
        for k, v in override.items():
            if k not in p:
                raise ConfigError(
                    f"[sweep] parameter {k!r} does not apply to preset {self.preset!r}")
            p[k] = v
        if self.preset == "eq30":
            return presets.eq30_blocks(p["a"], p["b"])
        if self.preset == "case1":
            return presets.case1_blocks(p["g"], self.axis)
        if self.preset == "case3":
            return presets.case3_blocks(p["g"], p["alpha"], self.axis)
        return presets.decoupled_blocks(p["g"])


def _line_of(text, section, key):
    """1-based line of ``key`` inside ``[section]``, or None."""
    current = None
    for n, line in enumerate(text.splitlines(), 1):
        s = line.strip()
        m = re.match(r"\[(.+)\]$", s)
        if m:
            current = m.group(1).strip().lower()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", s, re.I):
            return n
    return None


class _Reader:
    def __init__(self, text, source):
        self.text = text
        self.source = source
        self.cp = configparser.ConfigParser(inline_comment_prefixes=("#",),
                                            delimiters=("=",))
        self.cp.optionxform = str
        try:
            self.cp.read_string(text, source=source)
        except configparser.Error as exc:
            raise ConfigError(f"{source}: {exc}") from exc
        # case-insensitive section lookup
        self.sections = {s.lower(): s for s in self.cp.sections()}

    def where(self, section, key):
        line = _line_of(self.text, section, key)
        loc = f"{self.source}:{line}" if line else self.source
        return f"{loc}: [{section}] {key}"

    def has(self, section, key):
        sec = self.sections.get(section)
        return sec is not None and self._key(sec, key) is not None

    def _key(self, sec, key):
        for k in self.cp[sec]:
            if k.lower() == key.lower():
                return k
        return None

    def raw(self, section, key, default=None):
        sec = self.sections.get(section)
        if sec is None:
            return default
        k = self._key(sec, key)
        return default if k is None else self.cp[sec][k].strip()

    def float(self, section, key, default=None):
        v = self.raw(section, key)
        if v is None:
            return default
        try:
            return float(v)
        except ValueError:
            raise ConfigError(f"{self.where(section, key)}: expected a number, got {v!r}") from None

    def int(self, section, key, default=None):
        v = self.raw(section, key)
        if v is None:
            return default
        try:
            return int(v)
        except ValueError:
            raise ConfigError(f"{self.where(section, key)}: expected an integer, got {v!r}") from None

    def vector(self, section, key, default=None):
        v = self.raw(section, key)
        if v is None:
            return default
        parts = v.replace(",", " ").split()
        try:
            out = tuple(float(x) for x in parts)
        except ValueError:
            raise ConfigError(f"{self.where(section, key)}: expected 3 numbers, got {v!r}") from None
        if len(out) != 3:
            raise ConfigError(f"{self.where(section, key)}: expected 3 numbers, got {len(out)}")
        return out

    def matrix(self, section, key, n):
        v = self.raw(section, key)
        if v is None:
            return None
        rows = [row.strip() for row in v.split(";") if row.strip()]
        if len(rows) != n:
            raise ConfigError(f"{self.where(section, key)}: expected {n} rows, got {len(rows)}")
        out = np.zeros((n, n), dtype=complex)
        for i, row in enumerate(rows):
            entries = row.split()
            if len(entries) != n:
                raise ConfigError(f"{self.where(section, key)}: row {i + 1} has "
                                  f"{len(entries)} entries, expected {n}")
            for j, e in enumerate(entries):
                parts = e.split(",")
                try:
                    if len(parts) == 1:
                        out[i, j] = float(parts[0])
                    elif len(parts) == 2:
                        out[i, j] = complex(float(parts[0]), float(parts[1]))
                    else:
                        raise ValueError
                except ValueError:
                    raise ConfigError(f"{self.where(section, key)}: entry ({i + 1},{j + 1}) "
                                      f"{e!r} is not 're' or 're,im'") from None
        return out


def _model(r: _Reader):
    if "model" not in r.sections:
        raise ConfigError(f"{r.source}: missing [model] section")
    preset = r.raw("model", "preset")
    if preset is not None:
        preset = preset.lower()
        if preset not in PRESETS:
            raise ConfigError(f"{r.where('model', 'preset')}: unknown preset {preset!r} "
                              f"(choose from {', '.join(PRESETS)})")
        params = {k: r.float("model", k, d) for k, d in PRESET_PARAMS[preset].items()}
        axis = r.vector("model", "axis", (0.0, 0.0, 1.0))
        if preset in ("case1", "case3") and not any(axis):
            raise ConfigError(f"{r.where('model', 'axis')}: axis must be nonzero")
        return preset, params, axis, None, None
    A = r.matrix("model", "A", 3)
    B = r.matrix("model", "B", 3)
    if A is None or B is None:
        raise ConfigError(f"{r.source}: [model] needs either preset or both A and B")
    return None, {}, (0.0, 0.0, 1.0), A, B


def _initial(r: _Reader):
    """Initial state; an unphysical state (e.g. Bloch norm > 1) raises InvalidStateError."""
    kind = (r.raw("initial", "kind") or "mixed").lower()
    if kind == "product":
        return InitialState.product(r.vector("initial", "blochT", (0.0, 0.0, 0.0)),
                                    r.vector("initial", "blochA", (0.0, 0.0, 0.0)))
    if kind == "entangled":
        P = r.float("initial", "P")
        if P is None or not 0.0 <= P <= 1.0:
            raise ConfigError(f"{r.where('initial', 'P')}: kind = entangled needs P in [0, 1]")
        return InitialState.entangled(P)
    if kind == "mixed":
        return InitialState.maximally_mixed()
    if kind == "singlet":
        return InitialState.singlet()
    if kind == "raw":
        rho = r.matrix("initial", "rho", 4)
        if rho is None:
            raise ConfigError(f"{r.where('initial', 'rho')}: required for kind = raw")
        return InitialState.raw(rho)
    raise ConfigError(f"{r.where('initial', 'kind')}: unknown kind {kind!r}")


def _tolerances(r: _Reader, extra=()):
    tol = DEFAULT_TOL
    names = {f.name for f in dataclasses.fields(Tolerances)}
    overrides = {}
    sec = r.sections.get("tolerances")
    if sec is not None:
        for k in r.cp[sec]:
            if k not in names:
                raise ConfigError(f"{r.where('tolerances', k)}: unknown tolerance {k!r}")
            overrides[k] = r.float("tolerances", k)
    for item in extra:
        if "=" not in item:
            raise ConfigError(f"--tol {item!r}: expected KEY=VALUE")
        k, v = (x.strip() for x in item.split("=", 1))
        if k not in names:
            raise ConfigError(f"--tol {item!r}: unknown tolerance {k!r}")
        try:
            overrides[k] = float(v)
        except ValueError:
            raise ConfigError(f"--tol {item!r}: expected a number") from None
    return tol.override(**overrides) if overrides else tol


def _sweep(r: _Reader):
    if "sweep" not in r.sections:
        return None
    param = r.raw("sweep", "parameter")
    if param not in SWEEP_PARAMETERS:
        raise ConfigError(f"{r.where('sweep', 'parameter')}: unknown parameter {param!r} "
                          f"(choose from {', '.join(SWEEP_PARAMETERS)})")
    start = r.float("sweep", "start")
    stop = r.float("sweep", "stop")
    num = r.int("sweep", "num", 11)
    if start is None or stop is None:
        raise ConfigError(f"{r.source}: [sweep] needs start and stop")
    if num < 1:
        raise ConfigError(f"{r.where('sweep', 'num')}: must be at least 1")
    return SweepSpec(param, start, stop, num)


def parse_config(text, source="<config>", tol_overrides=()):
    r = _Reader(text, source)
    preset, params, axis, A, B = _model(r)
    initial = _initial(r)
    tol = _tolerances(r, tol_overrides)
    t_max = r.float("evolve", "t_max")
    dt = r.float("evolve", "dt")
    if t_max is not None and t_max < 0:
        raise ConfigError(f"{r.where('evolve', 't_max')}: must be non-negative")
    if dt is not None and dt <= 0:
        raise ConfigError(f"{r.where('evolve', 'dt')}: must be positive")
    return ModelConfig(preset, params, axis, A, B, initial, tol, t_max, dt, _sweep(r))


def load_config(path, tol_overrides=()):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from exc
    return parse_config(text, str(path), tol_overrides)
