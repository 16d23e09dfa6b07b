"""Exception hierarchy shared by all normlab modules."""


class NormlabError(Exception):
    """Base class for all normlab errors."""


class NonUnimodular(NormlabError):
    """Input matrix is not in SL(2,R) within tolerance."""


class UnknownChart(NormlabError):
    """Unrecognized coordinate chart name."""


class ParityMismatch(NormlabError):
    """K-type weight parity does not match the representation parity."""


class PoleAtSample(NormlabError):
    """Group action evaluated exactly at the pole a - c*x = 0."""


class NotIntegrable(NormlabError):
    """Integrand decays too slowly for the requested transform."""


class AccuracyNotReached(NormlabError):
    """Quadrature failed to meet the requested tolerance.

    Carries the achieved error estimate in ``achieved``.
    """

    def __init__(self, message, achieved=None):
        super().__init__(message)
        self.achieved = achieved


class ZeroFrequency(NormlabError):
    """Frequency n = 0 requested where the constant term is excluded."""


class NonIntegrableExponent(NormlabError):
    """Re(s) <= -1 makes |sin theta|^s non-integrable."""


class PoleParameter(NormlabError):
    """Parameter sits on a pole of the Gamma factors (e.g. u = 0)."""


class OutOfRange(NormlabError):
    """Parameter outside the admissible range of the operation."""


class DivergentIntegral(NormlabError):
    """A norm integral diverges; message identifies the failing end."""


class BadParameterRange(NormlabError):
    """Multiplier-map parameters outside the case-appropriate range."""


class TailNotControlled(NormlabError):
    """Declared coefficient growth cannot beat the measured transform decay."""


class HypothesisUnverifiable(NormlabError):
    """Coefficient data too short to verify the hypothesis of a bound."""


class MissingSymmetry(NormlabError):
    """Operation requires a symmetry flag the model does not declare."""


class EpsilonBarrier(NormlabError):
    """epsilon = 0 requested; the bounds degenerate at the barrier."""


class UnboundedOmega(NormlabError):
    """Omega domain is not bounded."""


class ConstantTermPresent(NormlabError):
    """Coefficient model has b_0 != 0 where cuspidal data is required."""


class RangeTooLarge(NormlabError):
    """Coefficient generation range exceeds the supported maximum."""


class ConfigInvalid(NormlabError):
    """CLI/run configuration failed validation."""


class CheckFailed(NormlabError):
    """A verification run completed but a check missed its tolerance."""


class NumericalFailure(NormlabError):
    """A computation could not reach a trustworthy answer."""
