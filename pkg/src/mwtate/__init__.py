"""mwtate: exact block calculus for Tate cell complexes over a Euclidean base.

Decides the canonical direct-sum normal form of integer eta-attachment
cell complexes, computes their Chow/Witt/mod-2 invariants and Bockstein
page tables, runs a generic exact-couple engine, and classifies rank-n
bundles on HP^1 by Euler-class data.
"""

__version__ = "0.1.0"
