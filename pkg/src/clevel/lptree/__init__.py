"""Level planarity testing and embedding representation.

The sweep engine decides level planarity of proper single-source
instances and extracts a witness drawing; the companion primitive
re-runs the sweep with every rotation forced, deciding whether one
fixed rotation system is realizable. On top of both, build_lp_tree
compresses the full embedding space of a biconnected single-source
level graph into per-vertex PC-trees plus parallel and rigid
structures.
"""

from .build import (
    LPTree,
    ParallelStructure,
    RigidStructure,
    build_lp_tree,
    dump_lp_tree,
    is_level_planar_embedding,
    level_pq_trees,
    lp_tree_to_json,
    separation_pairs,
    split_members,
)
from .planarity import (
    ScopeError,
    fixed_embedding_level_planar,
    level_planar_rotation,
)

__all__ = [
    "LPTree",
    "ParallelStructure",
    "RigidStructure",
    "ScopeError",
    "build_lp_tree",
    "dump_lp_tree",
    "fixed_embedding_level_planar",
    "is_level_planar_embedding",
    "level_pq_trees",
    "lp_tree_to_json",
    "separation_pairs",
    "split_members",
    "level_planar_rotation",
]
