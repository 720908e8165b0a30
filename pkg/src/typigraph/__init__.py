"""Typicality graphs of finite-alphabet joint distributions.

Exact type-method combinatorics over rational distributions, bipartite
typicality graphs and their nearly-complete explicit subgraphs, achievable
rate measurement, large-deviation bounds (Suen above, local lemma below)
bracketing Monte Carlo estimates for nearly empty random subgraphs, and
converse-side diagnostics (wringing, Pinsker, strong-converse rate caps).
"""

from .core import (
    Alphabet,
    ApproxResult,
    CondPmf,
    InvariantViolation,
    JointPmf,
    Pmf,
    conditional_entropy,
    conditionalize,
    entropy,
    entropy_continuity_bound,
    format_fraction,
    is_product,
    joint_entropy,
    load_distribution,
    marginalize,
    mutual_information,
    parse_fraction,
    product_alphabet,
    rational_approximate,
    save_distribution,
    total_variation,
)
from .typicality import (
    BigCount,
    DEFAULT_SCHEDULE,
    JointTypeVector,
    Sequence,
    TypeVector,
    TypicalityParams,
    cond_typical_set_size,
    count_types,
    default_params,
    empirical_joint_type,
    empirical_type,
    enumerate_types,
    is_cond_typical,
    is_jointly_typical,
    is_typical,
    jointly_typical_pair_count,
    multinomial,
    sample_uniform_typical,
    schedule_delta,
    type_class_sequences,
    type_class_size,
    typical_set_rate_envelope,
    typical_set_size,
)
from .graph import (
    CapExceeded,
    DEFAULT_CAP,
    GraphSpec,
    ImplicitTypicalityGraph,
    TypicalityGraph,
    build_graph,
    check_degree_bound,
    degree,
    edge_list,
    export_graph,
    import_graph,
    stats,
)
from .subgraphs import (
    AuxSubgraph,
    ExactTypeSubgraph,
    MarkovDecomposition,
    RateTuple,
    SlackReport,
    build_aux_subgraph,
    build_exact_type_subgraph,
    canonical_markov_decompositions,
    export_subgraph,
    import_subgraph,
    induced_joint,
    is_edge,
    left_roster,
    load_decomposition,
    make_decomposition,
    measure_rates,
    rate_point,
    right_roster,
    verify_decomposition,
    verify_single_type,
)
from .deviation import (
    BoundReport,
    MomentEstimates,
    MonteCarloReport,
    codebook_size,
    count_pairs,
    deviation_exponent_target,
    draw_codebook,
    exact_alpha,
    exact_pair_moments,
    exponent_report,
    lll_lower_bounds,
    phi_root,
    simulate,
    suen_tail_bound,
    suen_zero_bound,
    wilson_interval,
)
from .diagnostics import (
    BlockMiReport,
    DominantTypeResult,
    EdgeDistribution,
    WringingResult,
    block_mi,
    block_mi_bound,
    dominant_joint_type,
    fano_distribution,
    pinsker_check,
    strong_converse_bound,
    wring,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet",
    "ApproxResult",
    "AuxSubgraph",
    "BigCount",
    "BlockMiReport",
    "BoundReport",
    "CapExceeded",
    "CondPmf",
    "DEFAULT_CAP",
    "DEFAULT_SCHEDULE",
    "DominantTypeResult",
    "EdgeDistribution",
    "ExactTypeSubgraph",
    "GraphSpec",
    "ImplicitTypicalityGraph",
    "InvariantViolation",
    "JointPmf",
    "JointTypeVector",
    "MarkovDecomposition",
    "MomentEstimates",
    "MonteCarloReport",
    "Pmf",
    "RateTuple",
    "Sequence",
    "SlackReport",
    "TypeVector",
    "TypicalityGraph",
    "TypicalityParams",
    "WringingResult",
    "block_mi",
    "block_mi_bound",
    "build_aux_subgraph",
    "build_exact_type_subgraph",
    "build_graph",
    "canonical_markov_decompositions",
    "check_degree_bound",
    "codebook_size",
    "cond_typical_set_size",
    "conditional_entropy",
    "conditionalize",
    "count_pairs",
    "count_types",
    "default_params",
    "degree",
    "deviation_exponent_target",
    "dominant_joint_type",
    "draw_codebook",
    "edge_list",
    "empirical_joint_type",
    "empirical_type",
    "entropy",
    "entropy_continuity_bound",
    "enumerate_types",
    "exact_alpha",
    "exact_pair_moments",
    "exponent_report",
    "export_graph",
    "export_subgraph",
    "fano_distribution",
    "format_fraction",
    "import_graph",
    "import_subgraph",
    "induced_joint",
    "is_cond_typical",
    "is_edge",
    "is_jointly_typical",
    "is_product",
    "is_typical",
    "joint_entropy",
    "jointly_typical_pair_count",
    "left_roster",
    "lll_lower_bounds",
    "load_decomposition",
    "load_distribution",
    "make_decomposition",
    "marginalize",
    "measure_rates",
    "multinomial",
    "mutual_information",
    "parse_fraction",
    "phi_root",
    "pinsker_check",
    "product_alphabet",
    "rate_point",
    "rational_approximate",
    "right_roster",
    "sample_uniform_typical",
    "save_distribution",
    "schedule_delta",
    "simulate",
    "stats",
    "strong_converse_bound",
    "suen_tail_bound",
    "suen_zero_bound",
    "total_variation",
    "type_class_sequences",
    "type_class_size",
    "typical_set_rate_envelope",
    "typical_set_size",
    "verify_decomposition",
    "verify_single_type",
    "wilson_interval",
    "wring",
]
