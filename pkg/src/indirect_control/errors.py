"""Exception types raised by the library."""


class NonHermitianError(ValueError):
    """A block or operator that must be Hermitian is not.

    ``entries`` lists the offending ``(row, col)`` index pairs.
    """

    def __init__(self, message, entries=()):
        super().__init__(message)
        self.entries = list(entries)


class InvalidStateError(ValueError):
    pass


class PositivityViolation(RuntimeError):
    """Evolved state left the positive cone by more than the allowed slack."""

    def __init__(self, message, min_eigenvalue):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class OscillatoryAsymptotics(RuntimeError):
    """Peripheral spectrum contains eigenvalues with nonzero imaginary part."""


class DefectiveSpectrum(RuntimeError):
    """A peripheral eigenvalue has a Jordan block; no spectral projection exists."""


class SingularSigma(ValueError):
    """Effective Pauli operator is singular, so no involution decomposition exists."""


class ConfigError(ValueError):
    pass
