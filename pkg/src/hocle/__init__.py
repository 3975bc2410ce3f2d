"""Clustering ensembles with high-order consensus learning.

Base K-Means clusterings are turned into four families of high-order
co-association information, each family is fused into a structured doubly
stochastic consensus matrix, and the per-family matrices are fused again
into a single rank-constrained consensus whose connected components give
the final clusters.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .base_clustering import coassociation, generate_ensemble, indicator, kmeans
from .consensus_fusion import extract_labels, fuse_consensus, solve_simplex_qp
from .dataset import load_labels, load_matrix
from .high_order import (HighOrderFamily, build_family, order1,
                         order2_cluster, order2_pair, order_m)
from .linalg import (SpectralEmbedding, connected_components, laplacian,
                     pairwise_sqdist, smallest_eigvecs)
from .metrics import accuracy, best_mapping, contingency, nmi
from .structuration import (StructurationParams, adapt_lambda,
                            project_affine, project_doubly_stochastic,
                            project_nonneg, structure)
from .weighted_fusion import fuse_weighted, update_s_hat, update_weights
