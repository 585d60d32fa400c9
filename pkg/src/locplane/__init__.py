"""Locally plane geometric graphs from edge-colored bipartite graphs.

Modules: :mod:`graph` (colored bipartite graphs and walks), :mod:`patterns`
(forbidden color patterns, shaving, flatness), :mod:`thinning` (randomized
thinning and its recursions), :mod:`hypercube` (middle-layer graphs, exact
plane realizations, crossing checks), :mod:`bounds` (exact bound checks) and
:mod:`cli`.
"""

__version__ = "0.1.0"

from .graph import (A, B, ColoredBipartiteGraph, build_graph, height_function, latin_square_graph,
                    load_graph, save_graph, subgraph, walk_coloring)
from .hypercube import build_middle_layer, is_k_locally_plane, realize
from .patterns import certify_k_flat, check_k_flat, check_lemma11, find_pattern, k_shave
from .thinning import (avoid_fast_recursive, avoid_slow_recursive, best_of_trials, flat_pipeline,
                       heavy_thin, thin)
