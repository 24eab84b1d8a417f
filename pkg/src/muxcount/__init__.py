"""muxcount: containment thresholds, satisfiability regions, and limiting
distributions for fixed submultiplex counts in the two-layer correlated
Erdos-Renyi multiplex model, with exact formulas and seeded Monte Carlo."""

from .counting import (
    CountResult,
    count_copies,
    count_extensions,
    count_injections,
    count_injections_bruteforce,
    kernel_name,
)
from .errors import (
    CoreInvariantError,
    InfeasibleProbability,
    InfeasibleTheta,
    MissingPlantedCore,
    MuxError,
    NoEdgesError,
    NotOnThresholdSurface,
    ScaleCapExceeded,
    ValidationError,
)
from .multiplex import (
    Multiplex,
    Signature,
    Submultiplex,
    automorphism_count,
    completion,
    completion_literal,
    edge_class_counts,
    enumerate_submultiplexes,
    is_complete,
    multiplex_intersection,
    multiplex_union,
    submultiplex_intersection,
    submultiplex_union,
    validate,
)
from .region import (
    Constraint,
    Membership,
    RegionDescription,
    SlicePolyline,
    constraints,
    membership,
    polyhedron,
    slice2d,
)
from .sampler import ProbTriple, SeedSpec, from_theta, plant, sample, sample_arrays
from .stats import (
    SimulationReport,
    exact_mean_copies,
    exact_mean_extensions,
    exact_mean_injections,
    exact_variance_injections,
    limit_experiment,
    poisson_product_pmf,
    simulate_counts,
    tv_to_poisson,
    tv_to_reference_pmf,
    w1_to_std_normal,
)
from .thresholds import (
    BalanceLabel,
    ThetaPoint,
    classify_balance,
    core,
    delta,
    ell,
    extremal_set,
    phi,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
