"""Exception hierarchy for the Green's function engine.

Physical degeneracies (poles, dependent solutions, vanishing diagonals)
raise dedicated errors instead of returning large numbers, so callers can
distinguish physics from numerics.
"""


class EngineError(Exception):
    """Base class for all engine failures."""


class NonPositiveMass(EngineError):
    """m(x) <= 0 encountered on the integration domain."""


class IntegrationFailure(EngineError):
    """Adaptive ODE stepping could not meet the requested tolerance."""


class DependentSolutions(EngineError):
    """Wronskian below threshold: the two solutions are (near) dependent.

    Signals a bound-state pole of the auxiliary Green's function at this
    frequency.
    """


class NonConstantReduced(EngineError):
    """m/Wronskian varies across the probe grid beyond tolerance.

    This ratio is conserved exactly by the operator, so a spread signals an
    integration error.
    """


class ResonantDenominator(EngineError):
    """1 + alpha*G0(0,0) vanishes: pole of the delta-dressed function."""


class ZeroDiagonal(EngineError):
    """G0(0,0) vanishes (node of a homogeneous solution at the origin)."""


class SingularDenominator(EngineError):
    """A boundary-functional inverse in the finite-surrogate dressing fails."""


class EvanescentChannel(EngineError):
    """Requested flank channel does not propagate at this energy."""


class WindowViolation(EngineError):
    """Scattering probe point lies inside the interaction window."""


class SpectralTruncation(EngineError):
    """Packet spectral weight outside the frequency grid exceeds tolerance."""


class CalibrationFailure(EngineError):
    """No kernel constant achieves unitary free evolution (grid inadequate)."""


class ConfigError(EngineError):
    """Base class for configuration problems (exit code 2)."""


class ParseError(ConfigError):
    """Config document is not well-formed."""


class ValidationError(ConfigError):
    """Config document violates a declared invariant."""


class ComputationError(EngineError):
    """Module error wrapped with scenario context (exit code 3)."""
