"""Shared exception types."""


class QGrassError(Exception):
    """Base class for all library errors."""


class InvalidRange(QGrassError):
    """An index or count argument is outside its admissible range."""


class DivisionByZero(QGrassError):
    """A denominator bracket or polynomial vanished."""


class DivergentParameter(QGrassError):
    """A parameter lies outside the convergence region (|q| >= 1 etc.)."""


class PoleInDenominator(QGrassError):
    """A terminating hypergeometric sum hit a denominator pole."""


class BudgetExceeded(QGrassError):
    """A brute-force enumeration would exceed the configured budget."""


class InvalidOrbit(QGrassError):
    """A partition does not label an orbit of the requested level."""


class DegenerateGram(QGrassError):
    """The Gram matrix of a flag is singular."""


class ParameterDegeneracy(QGrassError):
    """An interpolation system is singular at the given (q, t)."""


class CutoffTooSmall(QGrassError):
    """A truncated sum's tail bound exceeds the requested tolerance."""


class DegenerateNormalization(QGrassError):
    """A polynomial to be normalized vanishes at the origin."""


class QuadratureNotConverged(QGrassError):
    """Successive quadrature refinements disagree beyond tolerance."""


class GammaPole(QGrassError):
    """Gamma function evaluated at a nonpositive integer."""


class PoleAtZero(QGrassError):
    """A rational function in q has a pole at q = 0."""


class ConfigError(QGrassError):
    """Invalid command-line configuration."""
