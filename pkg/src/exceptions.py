"""Custom exceptions for the Mendelian diploid simulator."""


class MendelError(Exception):
    """Base exception for all simulator and analysis errors."""

    pass


class ParameterError(MendelError):
    """Raised when a model or analysis parameter violates an invariant."""

    pass


class ExtinctPopulationError(MendelError):
    """Raised when an operation needs a nonempty population."""

    pass


class StiffRegionError(MendelError):
    """Raised when the ODE integrator cannot make progress."""

    pass


class ChainSizeError(MendelError):
    """Raised when a chain is too large for the direct solver."""

    pass


class CriticalBranchingError(MendelError):
    """Raised for the critical branching case b = d."""

    pass


class ConfigError(MendelError):
    """Raised when the run configuration is invalid."""

    pass


class ExperimentError(MendelError):
    """Raised when an experiment cannot produce a report."""

    pass
