"""Direction-aware positional encodings for directed graphs.

Spectral encodings from the Magnetic Laplacian, directional random-walk
features, SVD and sinusoidal baselines, plus the graph generators,
distance oracles, sorting-network dataset builder, and mini-language
data-flow graphs used to exercise them.
"""

__version__ = "0.1.0"

from .graphs import (
    DegreeBundle,
    DirectedGraph,
    count_topological_sorts,
    degrees,
    graph_from_json,
    graph_to_json,
    is_dag,
    purely_directed_count,
    symmetrize,
)
from .generators import TopologyName, make_topology, sample_directed_tree, sample_graph
from .spectral import (
    EigenSystem,
    MagneticLaplacian,
    RelativePotential,
    eig_smallest,
    gft,
    igft,
    magnetic_laplacian,
    normalize_eigvecs,
    rayleigh,
    relative_potential,
    reorder_by_phase,
    sequence_eigvec_oracle,
)
from .baselines import sinusoidal_pe, svd_encodings, svd_reconstruct
from .randwalk import (
    NodeRWEncoding,
    RandomWalkFeatures,
    TransitionPair,
    node_encodings,
    ppr,
    relative_features,
    rw_features,
    transition_pair,
)
from .oracle import PairwiseLabels, labels, make_playground_dataset
from .sortnet import (
    ComparatorNetwork,
    SortnetRecord,
    batcher,
    generate_network,
    is_correct,
    make_sortnet_dataset,
    near_sequentiality,
    network_to_graph,
)
from .encoders import (
    MagneticLaplacianEncoding,
    RandomWalkEncoding,
    SinusoidalEncoding,
    SVDEncoding,
)

__all__ = [
    "ComparatorNetwork",
    "DegreeBundle",
    "DirectedGraph",
    "EigenSystem",
    "MagneticLaplacian",
    "MagneticLaplacianEncoding",
    "NodeRWEncoding",
    "PairwiseLabels",
    "RandomWalkEncoding",
    "RandomWalkFeatures",
    "RelativePotential",
    "SVDEncoding",
    "SinusoidalEncoding",
    "SortnetRecord",
    "TopologyName",
    "TransitionPair",
    "batcher",
    "count_topological_sorts",
    "degrees",
    "eig_smallest",
    "generate_network",
    "gft",
    "graph_from_json",
    "graph_to_json",
    "igft",
    "is_correct",
    "is_dag",
    "labels",
    "magnetic_laplacian",
    "make_playground_dataset",
    "make_sortnet_dataset",
    "make_topology",
    "near_sequentiality",
    "network_to_graph",
    "node_encodings",
    "normalize_eigvecs",
    "ppr",
    "purely_directed_count",
    "rayleigh",
    "relative_features",
    "relative_potential",
    "reorder_by_phase",
    "rw_features",
    "sample_directed_tree",
    "sample_graph",
    "sequence_eigvec_oracle",
    "sinusoidal_pe",
    "svd_encodings",
    "svd_reconstruct",
    "symmetrize",
    "transition_pair",
    "__version__",
]
