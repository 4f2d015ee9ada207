"""Exception hierarchy shared across the package.

Ops that answer a decidable question return a :class:`~idcalc.verdicts.Verdict`
instead of raising; the exceptions below are for contract violations and for
the honest "cannot certify either way" outcome of numeric procedures.
"""


class IdcalcError(Exception):
    """Base class for all package errors."""


class QuadratureFailure(IdcalcError):
    """An adaptive quadrature did not reach the requested tolerance."""


class InconclusiveError(IdcalcError):
    """Neither convergence nor divergence could be certified within budget."""

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence or {}


class NoDrift(IdcalcError):
    """The small-jump first moment diverges; no drift representation."""


class NoMean(IdcalcError):
    """The tail first moment diverges; the distribution has no mean."""


class HasGaussianPart(IdcalcError):
    """Operation requires a purely non-Gaussian law (zero Gaussian matrix)."""


class OutOfInterval(IdcalcError):
    """Kernel evaluated outside its open interval of definition."""


class ConstantFunctionError(IdcalcError):
    """Generalized inversion requires a nonconstant increasing function."""


class ConditionBViolated(IdcalcError):
    """A measure fails one of the clauses required to be realizable as a
    pushforward of Lebesgue measure under a decreasing kernel."""

    def __init__(self, clause, message=None):
        super().__init__(message or f"condition B violated: {clause}")
        self.clause = clause


class UnsupportedKernel(IdcalcError):
    """Requested operation is not available for this kernel (documented
    limitation, e.g. materializing the occupation measure of a black-box
    non-monotone integrand)."""


class UnsupportedTag(IdcalcError):
    """Kernel carries no asymptotic tag with a known closed-form domain rule."""


class NotDefinable(IdcalcError):
    """The improper integral transform does not exist for this input."""

    def __init__(self, reason, witness=None):
        super().__init__(f"transform not definable: {reason}")
        self.reason = reason
        self.witness = witness


class NotInDomain(IdcalcError):
    """The Levy measure lies outside the domain of the measure transform."""

    def __init__(self, reason, witness=None):
        super().__init__(f"measure not in domain: {reason}")
        self.reason = reason
        self.witness = witness


class NotABLaw(IdcalcError):
    """Operation requires a finite-activity or finite-variation law."""


class NonnegativeRequired(IdcalcError):
    """Cone statements require a nonnegative kernel."""


class InfiniteActivityWithoutCutoff(IdcalcError):
    """Simulation of an infinite-activity law needs a small-jump cutoff."""


class TooFewSamples(IdcalcError):
    """Empirical characteristic function check needs more samples."""


class SchemaError(IdcalcError):
    """Malformed JSON job input."""


class ConsistencyAlarm(IdcalcError):
    """A closed-form rule and an independent numeric evaluation disagree
    beyond tolerance.  Raised instead of silently preferring either."""
