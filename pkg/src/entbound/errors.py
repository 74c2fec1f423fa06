"""Exception types shared across the package."""

from __future__ import annotations


class EntboundError(Exception):
    """Base class for every error raised by entbound."""

    code = "Error"


class ScenarioError(EntboundError, ValueError):
    """A scenario description failed validation.

    ``issues`` is a list of ``(code, message)`` tuples, one per problem found.
    """

    code = "InvalidScenario"

    def __init__(self, issues):
        if isinstance(issues, str):
            issues = [(self.code, issues)]
        self.issues = list(issues)
        super().__init__("; ".join(f"{c}: {m}" for c, m in self.issues))


class UnknownLabel(EntboundError, KeyError):
    code = "UnknownLabel"

    def __str__(self):
        return str(self.args[0]) if self.args else self.code


class DegeneratePair(EntboundError, ValueError):
    """The two input levels share the same observable eigenvalue."""

    code = "DegeneratePair"


class EmptyPairSet(EntboundError, ValueError):
    code = "EmptyPairSet"


class NoApplicablePair(EntboundError):
    """No designated pair admits a positive bound.

    The partially filled report is kept on ``report`` so callers can still
    show the per-pair flags.
    """

    code = "NoApplicablePair"

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ZeroMeanEnergy(EntboundError, ValueError):
    code = "ZeroMeanEnergy"


class ZeroSpread(EntboundError, ValueError):
    code = "ZeroSpread"


class DimensionTooLarge(EntboundError, ValueError):
    code = "DimensionTooLarge"


class ZeroAmplitude(EntboundError, ValueError):
    code = "ZeroAmplitude"


class MissingRate(EntboundError, KeyError):
    code = "MissingRate"

    def __str__(self):
        return str(self.args[0]) if self.args else self.code


class InfeasibleWeights(EntboundError, ValueError):
    code = "InfeasibleWeights"


class SweepError(EntboundError, ValueError):
    """A generated sweep scenario was rejected; ``value`` is the parameter."""

    code = "SweepError"

    def __init__(self, message, value=None, cause=None):
        super().__init__(message)
        self.value = value
        self.cause = cause
