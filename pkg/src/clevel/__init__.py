"""Tools for level graphs with clusters.

Subpackages and modules:

- core: graph / cluster data model, validation, normalization
- embedding: rotation systems, face traversal, planarity by Euler counting
- pqtree: cyclic PQ-trees (representation, enumeration, synthesis)
- oracle: brute-force enumeration baselines for drawings and clustering checks
- lptree: single-source level planarity testing and embedding trees
- synplan: synchronized planarity instances and an exact solver
- reduction: clustered level planarity via expansion + synchronized planarity
- hardness: reductions from PM3SAT and 3-Partition to y-monotone instances
- generators: random and exhaustive instance families
- svg: deterministic drawing output
- cli: command line entry points
"""

__version__ = "0.1.0"
