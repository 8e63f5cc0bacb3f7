"""Exception taxonomy shared across the package."""


class KappaMechError(Exception):
    """Base class for all package-specific errors."""


class PoleError(KappaMechError, ArithmeticError):
    """Evaluation hit a pole of a kappa-trig function or a potential."""


class DomainError(KappaMechError, ValueError):
    """A state violates the domain of its own chart."""


class CoverageError(DomainError):
    """A target chart does not cover the given point (e.g. Beltrami needs x0 > 0)."""


class NegativeRadicandError(KappaMechError, ArithmeticError):
    """A square root of a negative quantity was requested (reported, never clamped)."""


class ZeroEnergyConstantError(KappaMechError, ArithmeticError):
    """The motion constant used to split complex integrals is numerically zero."""


class SamplerExhaustedError(KappaMechError, RuntimeError):
    """Rejection sampling failed to produce enough in-domain states."""


class StepLimitError(KappaMechError, RuntimeError):
    """The integrator exceeded its configured step budget."""


class HorizonError(KappaMechError, ValueError):
    """A trajectory is too short for the requested closure analysis."""


class ConfigError(KappaMechError, ValueError):
    """A run configuration failed validation."""
