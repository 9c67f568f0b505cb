"""Exact enumeration, vertex vectors and optimisation over binary level-1 networks."""

from .enumeration import (
    associahedron_face_count,
    count_networks,
    count_table,
    enumerate_diagonal_sets,
    enumerate_networks,
    network_count,
    row_sum,
    vertex_set,
)
from .errors import *  # noqa: F401,F403
from .formats import (
    format_rational,
    network_from_json,
    network_to_json,
    parse_distance_matrix,
    parse_rational,
)
from .metrics import (
    DistanceMatrix,
    NegativeWeight,
    WeightedSplitSystem,
    circular_system_network,
    find_consistent_ordering,
    kalmanson_check,
    kalmanson_decompose,
    metric_from_splits,
    network_length,
    shortest_path_metric,
    total_weight,
    unit_weights,
    weighted_split_system,
)
from .optimizer import OptimizationResult, minimize, minimize_bme_tree, minimize_tsp
from .polytope import (
    FaceReport,
    LinearFunctional,
    affine_dimension,
    bme51_facets,
    bme_tree_facets,
    check_degree_equalities,
    exact_rank,
    lower_bound_face,
    polytope_dimension,
    refinement_face,
    split_face,
    verify_nesting,
)
from .splits import (
    CircularOrdering,
    Network,
    PhyloGraph,
    Split,
    SplitSystem,
    arc_splits,
    build_graph,
    canonicalize_ordering,
    consistent_orderings,
    displays_split,
    is_arc,
    make_network,
    refines,
    sigma_splits,
    split_system,
    splits_compatible,
    twist,
)
from .vectors import (
    bridge_count_between,
    incidence_vector,
    network_vector,
    network_vector_by_orbit,
    pairs,
    twist_decompose,
)

__version__ = "0.1.0"
