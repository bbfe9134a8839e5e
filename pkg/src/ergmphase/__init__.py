"""Two-parameter exponential random graph model with an edge term and one
motif term: exact enumeration at small n, Glauber dynamics at moderate n,
scalar and block variational solvers for the large-n free energy, and
step-graphon cut-metric diagnostics that together locate the phase boundary
in the (beta1, beta2) plane.
"""

from ._kernels import BACKEND
from .errors import (
    ConsistencyError,
    DomainError,
    ErgmphaseError,
    HypothesisError,
    SizeCapError,
)
from .exact import (
    ExactMoments,
    ExtrapolationResult,
    exact_moments,
    finite_gap,
    microcanonical,
    psi_exact,
    psi_extrapolate,
)
from .graphon import (
    StepGraphon,
    ascend_objective,
    cut_norm_dist,
    cut_norm_witness,
    delta_cut,
    empirical_graphon,
    I_graphon,
    multipartite_graphon,
    read_graphon,
    T_graphon,
    t_graphon,
    write_graphon,
)
from .graphs import (
    EDGE,
    TRIANGLE,
    Motif,
    Params,
    SimpleGraph,
    as_params,
    chromatic_number,
    edge_toggle_delta,
    hom_count,
    hom_density,
    node_pairs,
    parse_motif,
    strauss_to_hom,
)
from .sampler import (
    ChainConfig,
    ChainStats,
    glauber_step,
    make_annealing_ladder,
    run_chain,
    structure_diagnostic,
    visit_histogram,
)
from .scan import (
    ScanOptions,
    ScanRecord,
    TransitionEstimate,
    find_transition,
    scan_grid,
    verify_point,
)
from .variational import (
    AnsatzComparison,
    ScalarSolution,
    compare_ansatz,
    entropy_I,
    er_free_energy,
    implied_multipartite_densities,
    logistic,
    multipartite_free_energy,
    solve_u_star,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AnsatzComparison",
    "ChainConfig",
    "ChainStats",
    "ConsistencyError",
    "DomainError",
    "EDGE",
    "ErgmphaseError",
    "ExactMoments",
    "ExtrapolationResult",
    "HypothesisError",
    "I_graphon",
    "Motif",
    "Params",
    "ScalarSolution",
    "ScanOptions",
    "ScanRecord",
    "SimpleGraph",
    "SizeCapError",
    "StepGraphon",
    "T_graphon",
    "TRIANGLE",
    "TransitionEstimate",
    "as_params",
    "ascend_objective",
    "chromatic_number",
    "compare_ansatz",
    "cut_norm_dist",
    "cut_norm_witness",
    "delta_cut",
    "edge_toggle_delta",
    "empirical_graphon",
    "entropy_I",
    "er_free_energy",
    "exact_moments",
    "find_transition",
    "finite_gap",
    "glauber_step",
    "hom_count",
    "hom_density",
    "implied_multipartite_densities",
    "logistic",
    "make_annealing_ladder",
    "microcanonical",
    "multipartite_free_energy",
    "multipartite_graphon",
    "node_pairs",
    "parse_motif",
    "psi_exact",
    "psi_extrapolate",
    "read_graphon",
    "run_chain",
    "scan_grid",
    "solve_u_star",
    "strauss_to_hom",
    "structure_diagnostic",
    "t_graphon",
    "verify_point",
    "visit_histogram",
    "write_graphon",
    "__version__",
]
