"""Exact and heuristic tools for the multitasking capacity of bipartite graphs."""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .graph import (
    BipartiteGraph,
    ConflictGraph,
    DegreeStats,
    Matching,
    conflict_graph,
    degree_stats,
    format_graph,
    girth,
    induced_subgraph_edge_count,
    is_induced_matching,
    is_matching,
    maximum_matching,
    new_bipartite,
    parse_graph,
    read_graph,
    write_graph,
)
from .oracle import (
    Budget,
    CapacityReport,
    MatchingGraphStats,
    count_k_matchings,
    count_perfect_matchings,
    exact_alpha,
    exact_alpha_all,
    iter_matchings,
    matching_graph_stats,
    max_independent_set,
    max_induced_submatching,
    worst_matching_exact,
)
from .heuristics import (
    BalancedSubgraph,
    GreedyTrace,
    adversarial_matching_search,
    extract_dense_balanced_subgraph,
    extract_regular_subgraph,
    factor_criterion_violator,
    greedy_induced_matching,
    random_perfect_matching,
    turan_guarantee,
)
from .constructions import (
    augment_with_perfect_matching,
    gen_block_construction,
    gen_cycle,
    gen_disjoint_bicliques,
    gen_high_girth_regular,
    gen_hypercube_q3,
    gen_irregular_loglog,
    gen_locally_sparse,
    gen_path,
    gen_random_bipartite,
    gen_random_forest,
    gen_random_regular_bipartite,
    heawood_graph,
)
from .bounds import (
    BoundReport,
    alpha_upper_avgdeg,
    alpha_upper_layered,
    alpha_upper_logn,
    alpha_upper_regular,
    approx1e_check,
    avgdeg_threshold,
    chernoff_tails,
    expander_alpha_lower,
    lmc_bounds,
    matching_count_greedy_lower,
    perturb_scale,
    pm_count_bounds,
)
from .spectral import SpectralProfile, mixing_check, second_singular_value
from .layered import (
    LayeredNetwork,
    PathSystem,
    exact_alpha_paths,
    gen_layered_network,
    is_induced_path_system,
    is_induced_path_system_direct,
    iter_path_systems,
)
