"""Sharp quantitative isoperimetric inequalities for symmetric log-concave measures on R."""
from .deficit import (
    DeficitReport,
    Domain,
    DomainClass,
    K,
    K_inverse,
    L,
    ScanRow,
    classify_domain,
    deficit,
    gaussian_asymptotic_ratio,
    lambda_max,
    lower_bound_perimeter,
    optimal_set,
    scan,
    snap_lambda,
)
from .errors import (
    AsymmetricMeasure,
    DegenerateMeasure,
    EmptyBin,
    InvalidInterval,
    IsodeficitError,
    OutOfDomain,
    PostconditionFailed,
    QuantileOutOfBand,
    ReductionError,
    ZeroAsymmetry,
)
from .intervals import (
    AsymmetryReport,
    IntervalSet,
    Projection,
    asymmetry,
    complement,
    format_set,
    intersection,
    m_of,
    mu_measure,
    normalize,
    parse_set,
    perimeter,
    symmetric_difference,
)
from .measure import (
    ConcavityReport,
    CustomProfile,
    Gaussian,
    Kind,
    Laplace,
    Logistic,
    MeasureModel,
    check_profile_concavity,
    load_measure,
    measure_from_config,
    perturbed_profile,
    profile_from_knots,
    satisfies_H,
)
from .reducer import ReductionTrace, Rule, StructuralDecomposition, reduce
from .verifier import VerificationReport

__version__ = "0.1.0"
