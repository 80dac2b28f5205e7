"""amgclust: attributed-graph clustering via a bootstrap multilevel embedding.

Pipeline: augment the graph with one vertex per categorical attribute
value, SPD-shift the augmented Laplacian, harvest algebraically smooth
vectors with a bootstrapped composite of matching-aggregation V-cycles,
orthonormalize them into an embedding, and K-means the per-vertex block
coordinates with max-modularity restart selection.
"""
from ._version import __version__
from .amg import (
    AmgHierarchy,
    CompositeSolver,
    SmootherConfig,
    SmoothVectorSet,
    bootstrap,
    build_hierarchy,
    composite_apply,
    smooth_vector,
    smoother_apply,
    vcycle_apply,
)
from .augment import (
    AttributeDomain,
    AttributeTable,
    AugmentedGraph,
    attribute_table,
    augment,
    compute_domains,
    read_attribute_table,
)
from .config import PipelineParams, build_params, read_config
from .embedding import (
    EmbeddingBasis,
    VertexCoordinates,
    block_coordinates,
    block_distance,
    orthonormal_basis,
)
from .graph import (
    ComponentLabels,
    Graph,
    average_weighted_degree,
    build_graph,
    connected_components,
    first_edge,
    induced_subgraph,
    laplacian,
    largest_component,
    read_edge_list,
    spd_shift,
    write_edge_list,
)
from .kernels import BACKEND
from .kmeans import KmeansConfig, kmeans_blocks, kmeans_objective, lloyd_single
from .metrics import (
    ContingencyTable,
    conditional_entropy,
    contingency,
    entropy,
    information_gain,
    modularity,
    mutual_information,
    nmi,
    ratio_cut,
)
from .partition import (
    Partition,
    partition_from_labels,
    read_partition,
    write_partition,
)
from .pipeline import ClusterResult, KResult, run_cluster
from .sbm import (
    NoiseSpec,
    SbmSpec,
    detectability_threshold,
    generate_sbm,
    labels_to_attributes,
    planted_labels,
    split_degrees,
)
from .sweep import SweepGrid, run_sweep

__all__ = [name for name in dir() if not name.startswith("_")]
