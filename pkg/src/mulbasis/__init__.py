"""Multiplicative bases of order two: exact searches, reductions, and certified bounds.

Modules:
  numtheory    prime tables, valuations, valuation vectors mod q
  productsets  cover verification, exact and constructed interval bases
  reduction    normal-form reduction, marking sets, factorial divisibility
  spherelab    weight-3 vectors over F_3: censuses, covers, overlap trials
  certificates pairing graphs, inequality reports, the end-to-end bound
  cli          deterministic command line reports
"""

from .certificates import (
    ComponentAnalysis,
    ComponentSummary,
    InequalityReport,
    PairingGraph,
    PipelineError,
    PipelineResult,
    build_pairing_graph,
    component_analysis,
    decompose_by_coordinate,
    end_to_end_lower_bound,
    prune_heavy,
    sphere_cover_report,
)
from .numtheory import (
    Factorization,
    IncompleteTableError,
    PrimeTable,
    ResourceLimitError,
    ValuationVector,
    factorize,
    is_prime,
    rank_mod_q,
    rho_vector,
    shift_into_interval,
    sieve,
    valuation,
)
from .productsets import (
    APSpec,
    BasisSolution,
    CoverCheck,
    MbpSearchResult,
    construct_interval_basis,
    exact_min_basis,
    mbp_empirical,
    product_set,
    verify_cover,
    witness_covers,
)
from .reduction import (
    FactorialCheck,
    InvariantViolationError,
    LowerBoundCertificate,
    MarkingSet,
    MarkingSets,
    ReducedPair,
    build_marking_sets,
    certify_lower_bound,
    factorial_divisibility_check,
    reduce_pair,
)
from .spherelab import (
    DifferenceCase,
    DifferenceCensus,
    OverlapCheck,
    OverlapRefinedCheck,
    SphereBasisSolution,
    TernaryVector,
    check_sphere_overlap,
    check_sphere_overlap_general,
    difference_census,
    enumerate_sphere,
    sphere_basis_construct,
    sphere_cover_verify,
    sphere_min_basis,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "APSpec",
    "BasisSolution",
    "ComponentAnalysis",
    "ComponentSummary",
    "CoverCheck",
    "DifferenceCase",
    "DifferenceCensus",
    "Factorization",
    "FactorialCheck",
    "IncompleteTableError",
    "InequalityReport",
    "InvariantViolationError",
    "LowerBoundCertificate",
    "MarkingSet",
    "MarkingSets",
    "MbpSearchResult",
    "OverlapCheck",
    "OverlapRefinedCheck",
    "PairingGraph",
    "PipelineError",
    "PipelineResult",
    "PrimeTable",
    "ReducedPair",
    "ResourceLimitError",
    "SphereBasisSolution",
    "TernaryVector",
    "ValuationVector",
    "build_marking_sets",
    "build_pairing_graph",
    "certify_lower_bound",
    "check_sphere_overlap",
    "check_sphere_overlap_general",
    "component_analysis",
    "construct_interval_basis",
    "decompose_by_coordinate",
    "difference_census",
    "end_to_end_lower_bound",
    "enumerate_sphere",
    "exact_min_basis",
    "factorial_divisibility_check",
    "factorize",
    "is_prime",
    "mbp_empirical",
    "product_set",
    "prune_heavy",
    "rank_mod_q",
    "reduce_pair",
    "rho_vector",
    "shift_into_interval",
    "sieve",
    "sphere_basis_construct",
    "sphere_cover_report",
    "sphere_cover_verify",
    "sphere_min_basis",
    "valuation",
    "verify_cover",
    "witness_covers",
]
