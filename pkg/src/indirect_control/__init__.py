"""Asymptotic states of two-qubit dissipative semigroups and indirect control
of a target qubit through an ancilla sharing its environment."""
from .asymptotics import (
    AsymptoticReport, CaseClassification, ProjectorFamily, classify, formula_case13,
    formula_case2_example, max_rank_stationary, projectors_for, theorem_asymptotic,
    verify_against_oracle,
)
from .commutant import commutant_report, numerical_commutant, span_equal
from .errors import (
    ConfigError, DefectiveSpectrum, InvalidStateError, NonHermitianError,
    OscillatoryAsymptotics, PositivityViolation, SingularSigma,
)
from .kossakowski import assemble, diagonalize, lindblad_set
from .liouvillian import (
    asymptotic_state, build_superoperator, evolve, evolve_rk, spectral_asymptotics,
)
from .presets import InitialState
from .tolerances import DEFAULT_TOL, Tolerances

__version__ = "0.1.0"

__all__ = [
    "AsymptoticReport", "CaseClassification", "ProjectorFamily", "classify", "formula_case13",
    "formula_case2_example", "max_rank_stationary", "projectors_for", "theorem_asymptotic",
    "verify_against_oracle", "commutant_report", "numerical_commutant", "span_equal",
    "ConfigError", "DefectiveSpectrum", "InvalidStateError", "NonHermitianError",
    "OscillatoryAsymptotics", "PositivityViolation", "SingularSigma", "assemble", "diagonalize",
    "lindblad_set", "asymptotic_state", "build_superoperator", "evolve", "evolve_rk",
    "spectral_asymptotics", "InitialState", "DEFAULT_TOL", "Tolerances",
]
