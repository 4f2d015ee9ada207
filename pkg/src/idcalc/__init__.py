"""Numerical calculus for infinitely divisible distributions under
stochastic-integral and Levy-measure transformations."""

from .errors import (
    ConditionBViolated,
    ConsistencyAlarm,
    ConstantFunctionError,
    HasGaussianPart,
    IdcalcError,
    InconclusiveError,
    InfiniteActivityWithoutCutoff,
    NoDrift,
    NoMean,
    NonnegativeRequired,
    NotABLaw,
    NotDefinable,
    NotInDomain,
    OutOfInterval,
    QuadratureFailure,
    SchemaError,
    TooFewSamples,
    UnsupportedKernel,
    UnsupportedTag,
)
from .verdicts import Truth, Verdict
from .measures import (
    AtomicMeasure,
    GammaMeasure,
    LevyMeasure,
    RadialDensity,
    RadialMeasure,
    StableMeasure,
    SumMeasure,
    ZeroMeasure,
    compound_poisson_empirical,
    dual_measure,
    gamma_measure,
    levy_integral,
    materialize_radial,
    symmetrize_measure,
)
from .idlaw import (
    Triplet,
    TypeClass,
    classify_type,
    cumulant,
    dirac,
    drift,
    dual,
    mean,
    symmetrize_triplet,
    triplet_add,
)
from .kernels import (
    Kernel,
    TauMeasure,
    check_condition_A,
    check_condition_B,
    double_exp_kernel,
    eval_kernel,
    exp_kernel,
    generalized_inverse,
    indicator_kernel,
    kernel_from_tau,
    log_inverse_kernel,
    log_power_kernel,
    power_at_zero_kernel,
    power_tail_kernel,
    sinc_kernel,
    tau_exponential,
    tau_from_atoms,
    tau_gaussian,
    tau_measure,
    tau_of_interval,
)
from .transform import (
    LocationMode,
    TransformResult,
    absolutely_definable,
    locally_integrable,
    phi,
    phi_ab,
    phi_c,
    phi_es,
    phi_sym,
    psi,
    window_triplet,
)
from .domains import (
    LargenessClass,
    classify_largeness,
    cone_largeness,
    cone_support,
    domain_rule_verdicts,
    kernel_profile,
    psi_largeness,
)
from .mc import EcfReport, SimConfig, ecf_check, sample_increment, sample_integral

__version__ = "0.1.0"
