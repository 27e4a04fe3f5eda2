"""Link prediction with continuous-time classical and quantum walk scores.

Scores candidate node pairs of an undirected network (self-loops included)
with walk transition probabilities or with classical baseline predictors,
and evaluates them under a repeated edge-removal protocol.
"""

from ._version import __version__
from .baselines import (
    BASELINE_METHODS,
    adamic_adar,
    common_neighbours,
    l3_score,
    preferential_attachment,
    spm_perturbed_matrix,
    spm_score,
)
from .errors import (
    ConfigError,
    ContractError,
    LinkwalkError,
    MetricError,
    NumericError,
    ParseError,
    ValidationError,
)
from .evaluation import (
    ALL_METHODS,
    EvaluationReport,
    EvaluationSplit,
    MethodSummary,
    SplitSpec,
    TrialResult,
    auc,
    average_precision,
    make_split,
    run_experiment,
    score_candidates,
    write_curves_csv,
    write_report_csv,
    write_report_json,
)
from .graph import (
    Network,
    NetworkStats,
    adjacency_mask,
    build_adjacency,
    build_laplacian,
    compute_stats,
    degree_ccdf,
    degree_vector,
    parse_edge_list,
    serialize_edge_list,
)
from .scoring import CandidateSet, ScoreTable, candidate_pairs, write_scores_csv
from .spectral import (
    SpectralDecomposition,
    TransitionMatrix,
    crw_propagator,
    decompose,
    decompose_network,
    expm_taylor_reference,
    load_cached_decomposition,
    qrw_propagator,
    store_cached_decomposition,
)
from .walks import WALK_METHODS, default_time, predict, score_pairs

__all__ = [
    "__version__",
    "ALL_METHODS",
    "BASELINE_METHODS",
    "WALK_METHODS",
    "CandidateSet",
    "ConfigError",
    "ContractError",
    "EvaluationReport",
    "EvaluationSplit",
    "LinkwalkError",
    "MethodSummary",
    "MetricError",
    "Network",
    "NetworkStats",
    "NumericError",
    "ParseError",
    "ScoreTable",
    "SpectralDecomposition",
    "SplitSpec",
    "TransitionMatrix",
    "TrialResult",
    "ValidationError",
    "adamic_adar",
    "adjacency_mask",
    "auc",
    "average_precision",
    "build_adjacency",
    "build_laplacian",
    "candidate_pairs",
    "common_neighbours",
    "compute_stats",
    "crw_propagator",
    "decompose",
    "decompose_network",
    "default_time",
    "degree_ccdf",
    "degree_vector",
    "expm_taylor_reference",
    "l3_score",
    "load_cached_decomposition",
    "make_split",
    "parse_edge_list",
    "predict",
    "preferential_attachment",
    "qrw_propagator",
    "run_experiment",
    "score_candidates",
    "score_pairs",
    "serialize_edge_list",
    "spm_perturbed_matrix",
    "spm_score",
    "store_cached_decomposition",
    "write_curves_csv",
    "write_report_csv",
    "write_report_json",
    "write_scores_csv",
]
