"""Exception hierarchy shared across the library."""


class HyperionError(Exception):
    """Base class for all library-specific errors."""


class PoleError(HyperionError):
    """A gamma evaluation hit a non-positive integer argument.

    ``tag`` distinguishes an uncancelled numerator pole ("numerator-pole")
    from a numerator/denominator pole pair at unequal arguments, whose
    residue-ratio limit is deliberately not taken ("paired-pole").
    """

    def __init__(self, message: str, tag: str = "numerator-pole"):
        super().__init__(message)
        self.tag = tag


class DivergentSeries(HyperionError):
    """The requested series does not converge at the given argument."""


class LowerParamNonpositiveInt(HyperionError):
    """A lower parameter hits a non-positive integer before termination."""


class PrecisionExhausted(HyperionError):
    """Tolerance unreachable within the term/precision budget."""


class DivisionByZero(HyperionError):
    """Exact arithmetic division by zero (e.g. a lower parameter pole)."""


class NoCommonParameter(HyperionError):
    """cancel_common found no upper parameter equal to a lower one."""


class SamplerExhausted(HyperionError):
    """A bounded random search failed to produce a valid sample."""


class RootFindingFailed(HyperionError):
    """The simultaneous root iteration did not meet its backward-error bound."""


class DegenerateGamma(HyperionError):
    """The auxiliary parameter of the gamma-extension is undefined (S_r equal)."""


class PointNotOnVarieties(HyperionError):
    """intersection_dimension was handed a point off one of the varieties."""


class UnsupportedDegree(HyperionError):
    """Canonicalization only handles constraint sets of degree <= 2."""


class RuleNotApplicable(HyperionError):
    """The identity rule's exact applicability predicate rejected the point."""


class UnsupportedCase(HyperionError):
    """Requested a curve/argument combination outside the published range."""


class NotOnW0(HyperionError):
    """Point is not on the half-shift plane required by the 2F1(-1) bridge."""
