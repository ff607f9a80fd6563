"""Limited penetrable horizontal visibility graphs for time-series analysis."""

__version__ = "0.1.0"

from .series import (
    Penetrability,
    RngConfig,
    TimeSeries,
    affine_transform,
    load_series,
    write_series,
)
from .graph import (
    VisibilityGraph,
    build_lphvg,
    build_lphvg_naive,
    penetrable_visible,
    write_adjacency_csv,
    write_edge_list,
)
from .theory import (
    TheoryModel,
    clustering_max,
    clustering_min,
    clustering_pmf_max,
    clustering_pmf_min,
    decay_rate,
    degree_pmf,
    long_visibility_prob,
    long_visibility_prob_classic,
    mean_degree,
    mean_degree_periodic,
)
from .metrics import (
    DegreeDistribution,
    DiscriminationResult,
    FiniteSizeReport,
    TailFit,
    clustering_coverage,
    degree_distribution,
    degree_law_chi2,
    discriminate,
    finite_size_report,
    fit_tail,
    link_frequency_by_separation,
    local_clustering,
    mean_clustering,
    mean_degree_empirical,
    mean_path_length,
)
from .generators import (
    FlowSpec,
    IidSpec,
    gen_flow,
    gen_henon,
    gen_iid,
    gen_logistic,
    gen_periodic,
)
from .evolution import (
    EvolutionResult,
    WindowConfig,
    correlation_index,
    distance_matrix,
    evolve,
    graph_distance,
    make_windows,
    recurrence_matrix,
    threshold_from_random,
)

__all__ = [
    "Penetrability",
    "RngConfig",
    "TimeSeries",
    "affine_transform",
    "load_series",
    "write_series",
    "VisibilityGraph",
    "build_lphvg",
    "build_lphvg_naive",
    "penetrable_visible",
    "write_adjacency_csv",
    "write_edge_list",
    "TheoryModel",
    "clustering_max",
    "clustering_min",
    "clustering_pmf_max",
    "clustering_pmf_min",
    "decay_rate",
    "degree_pmf",
    "long_visibility_prob",
    "long_visibility_prob_classic",
    "mean_degree",
    "mean_degree_periodic",
    "DegreeDistribution",
    "DiscriminationResult",
    "FiniteSizeReport",
    "TailFit",
    "clustering_coverage",
    "degree_distribution",
    "degree_law_chi2",
    "discriminate",
    "finite_size_report",
    "fit_tail",
    "link_frequency_by_separation",
    "local_clustering",
    "mean_clustering",
    "mean_degree_empirical",
    "mean_path_length",
    "FlowSpec",
    "IidSpec",
    "gen_flow",
    "gen_henon",
    "gen_iid",
    "gen_logistic",
    "gen_periodic",
    "EvolutionResult",
    "WindowConfig",
    "correlation_index",
    "distance_matrix",
    "evolve",
    "graph_distance",
    "make_windows",
    "recurrence_matrix",
    "threshold_from_random",
]
