"""stablecut: generate, certify, and solve gamma-stable Max-Cut instances."""

from .combinatorial import (
    HighDegreeResult,
    MergeStep,
    build_conflict_graph,
    find_max_cut_greedy,
    greedy_applicability,
    high_degree_solve,
)
from .dualsdp import (
    CutCertificate,
    DualSolution,
    certify_cut,
    extended_spectral_solve,
    polish_cut,
    solve_min_trace,
)
from .errors import (
    DimensionError,
    DomainError,
    SizeLimitError,
    StableCutError,
    ValidationError,
)
from .generators import (
    PlantedInstance,
    WeightDistribution,
    cross_product_amplify,
    gen_gnp_simple,
    gen_planted,
    stabilize_by_scaling,
)
from .graph import (
    Cut,
    DegreeStats,
    Perturbation,
    WeightedGraph,
    apply_perturbation,
    cut_value,
    dumps_graph,
    load_graph,
    loads_graph,
    merge_vertices,
    save_graph,
    weighted_degrees,
)
from .oracle import (
    DEFAULT_ENUM_LIMIT,
    StabilityReport,
    brute_force_max_cut,
    cheeger_constant,
    edge_distinctness_alpha,
    k_distinctness,
    local_stability_gamma,
    sample_perturbation_attack,
    stability_gamma,
    stability_report,
)
from .spectral import (
    ConditionVerdict,
    SpectralCertificate,
    build_certificate,
    build_diagonal_from_cut,
    eigen_smallest_two,
    family_condition_checks,
    gw_bound,
    is_psd,
    psd_sufficient_margin,
    spectral_gamma_requirement,
    spectral_partition,
    stable_gw_bound,
)

__version__ = "0.1.0"
