"""Transportation-cost norms on finite metric spaces and their tree embeddings."""

__version__ = "0.1.0"

from .birkhoff import birkhoff_decompose
from .calculus import (
    VectorField,
    extend_integral_operator,
    gradient,
    integral_operator,
    is_conservative,
    line_integral,
)
from .embedding import (
    L1EmbeddingMap,
    StochasticTreeEmbedding,
    bijective_embedding,
    build_l1_map,
    cycle_path_embedding,
    measure_distortion,
)
from .errors import ExpansivenessViolation, TranscostError
from .frt import HierarchicalPartition, estimate_expected_stretch, sample_frt_partition, sample_frt_tree
from .gupta import gupta_restrict
from .metric import (
    FiniteMetricSpace,
    WeightedGraph,
    ball,
    cycle_graph,
    diameter,
    diamond_graph,
    generate_family,
    geodesic_metric,
    path_graph,
    random_tree,
    star_graph,
    torus_graph,
    validate_metric,
)
from .spectral import (
    EdgeMeasure,
    SpectralProfile,
    induced_vertex_measure,
    isoperimetric_constant,
    lower_bound_estimate,
    perimeter,
    sobolev_check,
    sobolev_norm,
    torus_spectral_profile,
)
from .transport import (
    LipschitzFunction,
    MolecularRepresentation,
    TransportPlan,
    ZeroSumMeasure,
    dual_potential,
    extreme_molecules,
    make_disjoint,
    optimal_bijection,
    random_measure,
    recognize_tree_metric,
    tc_norm,
    transport_cost,
    verify_optimality,
    wasserstein,
)
from .trees import RootedWeightedTree, subtree_mass, tree_isometry, tree_tc_norm, vertex_embedding

__all__ = [
    "EdgeMeasure",
    "ExpansivenessViolation",
    "FiniteMetricSpace",
    "HierarchicalPartition",
    "L1EmbeddingMap",
    "LipschitzFunction",
    "MolecularRepresentation",
    "RootedWeightedTree",
    "SpectralProfile",
    "StochasticTreeEmbedding",
    "TranscostError",
    "TransportPlan",
    "VectorField",
    "WeightedGraph",
    "ZeroSumMeasure",
    "ball",
    "bijective_embedding",
    "birkhoff_decompose",
    "build_l1_map",
    "cycle_graph",
    "cycle_path_embedding",
    "diameter",
    "diamond_graph",
    "dual_potential",
    "estimate_expected_stretch",
    "extend_integral_operator",
    "extreme_molecules",
    "generate_family",
    "geodesic_metric",
    "gradient",
    "gupta_restrict",
    "induced_vertex_measure",
    "integral_operator",
    "is_conservative",
    "isoperimetric_constant",
    "line_integral",
    "lower_bound_estimate",
    "make_disjoint",
    "measure_distortion",
    "optimal_bijection",
    "path_graph",
    "perimeter",
    "random_measure",
    "random_tree",
    "recognize_tree_metric",
    "sample_frt_partition",
    "sample_frt_tree",
    "sobolev_check",
    "sobolev_norm",
    "star_graph",
    "subtree_mass",
    "tc_norm",
    "torus_graph",
    "torus_spectral_profile",
    "transport_cost",
    "tree_isometry",
    "tree_tc_norm",
    "validate_metric",
    "verify_optimality",
    "vertex_embedding",
    "wasserstein",
]
