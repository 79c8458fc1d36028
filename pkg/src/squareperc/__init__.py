"""Square percolation on random graphs.

Auxiliary square-graph components, a matching branching-process analysis,
exploration processes for component bounds, divergence classification of the
associated right-angled Coxeter groups, and a Monte Carlo harness for the
phase transition of full-support components.
"""
from .graph import (
    EdgeListParseError,
    Graph,
    VertexPair,
    bits_to_list,
    common_neighbors,
    complement,
    connected_components,
    from_edge_list,
    induced_subgraph,
    is_clique,
    pair_from_index,
    pair_index,
    to_edge_list,
)
from .squares import (
    ComponentLabeling,
    ComponentSummary,
    Variant,
    cfs_witness,
    count_induced_squares,
    find_connecting_triples,
    has_full_support_component,
    is_cfs,
    largest_support_size,
    square_components,
    squares_in_large_components,
)
from .random_graphs import (
    GnpParams,
    SeedSpec,
    sample_bipartite,
    sample_gnp,
)
from .exploration import (
    ExplorationConfig,
    ExplorationState,
    ExplorationVariant,
    StopReason,
    check_superset,
    explore_subcritical,
    explore_supercritical,
)
from .racg import (
    DivergenceClass,
    DivergenceKind,
    classify_divergence,
    join_factors,
)
from .branching import (
    BranchingResult,
    OffspringLaw,
    binomial_tail,
    dwass_progeny_pmf,
    extinction_probability,
    lambda_critical,
    lambda_critical_numeric,
    offspring_mean,
    offspring_pmf,
    simulate_gw,
    simulate_gw_batch,
    suggest_cap,
)
from .harness import (
    CSV_HEADER,
    SweepRow,
    TrialResult,
    cell_seed,
    default_min_order,
    estimate_threshold,
    many_squares_check,
    run_trial,
    sweep,
    wilson_interval,
    write_sweep_csv,
)

__all__ = [
    "EdgeListParseError",
    "Graph",
    "VertexPair",
    "bits_to_list",
    "common_neighbors",
    "complement",
    "connected_components",
    "from_edge_list",
    "induced_subgraph",
    "is_clique",
    "pair_from_index",
    "pair_index",
    "to_edge_list",
    "ComponentLabeling",
    "ComponentSummary",
    "Variant",
    "cfs_witness",
    "count_induced_squares",
    "find_connecting_triples",
    "has_full_support_component",
    "is_cfs",
    "largest_support_size",
    "square_components",
    "squares_in_large_components",
    "ExplorationConfig",
    "ExplorationState",
    "ExplorationVariant",
    "StopReason",
    "check_superset",
    "explore_subcritical",
    "explore_supercritical",
    "GnpParams",
    "SeedSpec",
    "sample_bipartite",
    "sample_gnp",
    "DivergenceClass",
    "DivergenceKind",
    "classify_divergence",
    "join_factors",
    "BranchingResult",
    "OffspringLaw",
    "binomial_tail",
    "dwass_progeny_pmf",
    "extinction_probability",
    "lambda_critical",
    "lambda_critical_numeric",
    "offspring_mean",
    "offspring_pmf",
    "simulate_gw",
    "simulate_gw_batch",
    "suggest_cap",
    "CSV_HEADER",
    "SweepRow",
    "TrialResult",
    "cell_seed",
    "default_min_order",
    "estimate_threshold",
    "many_squares_check",
    "run_trial",
    "sweep",
    "wilson_interval",
    "write_sweep_csv",
]

__version__ = "0.1.0"
