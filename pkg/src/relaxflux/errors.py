"""Exception types shared by all solver modules."""


class RelaxFluxError(Exception):
    """Base class for all errors raised by this package."""


class NonRealSpectrum(RelaxFluxError):
    """A frozen block has complex eigenvalues beyond tolerance.

    Signals a violated entropy / subcharacteristic condition.
    """


class DefectiveMatrix(RelaxFluxError):
    """Eigenvector solve is rank-deficient beyond tolerance."""


class NonPositiveBlock(RelaxFluxError):
    """A squared wave speed sigma^2 <= 0 in a block decomposition."""


class ZeroWaveSpeed(RelaxFluxError):
    """The maximum signal speed is zero; no CFL time step exists."""


class NonPhysicalState(RelaxFluxError):
    """Gas state with rho <= 0 or p <= 0 (equivalently T <= 0)."""


class NonFiniteState(RelaxFluxError):
    """NaN or Inf appeared in a state array."""


class StateOutOfRange(RelaxFluxError):
    """Scalar state left the declared admissible range."""


class CFLViolation(RelaxFluxError):
    """Supplied dt exceeds the recomputed stable step by more than 5%."""


class VacuumFormation(RelaxFluxError):
    """Exact Riemann pressure function has no positive root."""


class ShootingNoConvergence(RelaxFluxError):
    """Boundary-layer shooting iteration failed to converge."""


class BlowUp(RelaxFluxError):
    """A finite-difference oracle exceeded its growth guard."""


class GridMismatch(RelaxFluxError):
    """Grids are not in the 2:1 ratio required for observed orders."""


class MissingResource(RelaxFluxError):
    """A required data resource file was not found."""


class SchemaError(RelaxFluxError):
    """A resource or config file failed schema validation."""


class NoVortexFound(RelaxFluxError):
    """No recirculation region found in the supplied field."""


class ConfigError(RelaxFluxError):
    """Invalid or inconsistent run configuration."""
