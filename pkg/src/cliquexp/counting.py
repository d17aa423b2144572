"""Induced subgraph counting P(F, G), clique counting, and family-freeness."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

import numpy as np

from . import _kernels
from .graphs import Graph, induced_subgraph


@dataclass(frozen=True)
class InducedCount:
    """An exact count together with its normalisation binom(v(G), v(F))."""

    value: int
    total: int

    @property
    def density(self) -> Fraction:
        return Fraction(self.value, self.total)

    def __int__(self):
        return self.value


@lru_cache(maxsize=1 << 14)
def _nbr_array(g: Graph):
    return np.array(g.adj, dtype=np.uint64)


@lru_cache(maxsize=1 << 12)
def _pattern_order(f: Graph):
    """Pattern rows reordered by descending degree (better backtracking)."""
    order = sorted(range(f.n), key=lambda v: (-f.degree(v), v))
    from .graphs import relabel

    reordered = relabel(f, order)
    return np.array(reordered.adj, dtype=np.uint64), reordered.adj


def clique_count(s: int, g: Graph) -> int:
    """Number of s-cliques in g (clique-extension recursion)."""
    if s < 0:
        raise ValueError("clique size must be nonnegative")
    if _kernels.NUMBA_ENABLED:
        return int(_kernels.clique_count_jit(_nbr_array(g), g.n, s))
    return _kernels.clique_count_py(g.adj, g.n, s)


def count_cliques(s: int, g: Graph) -> InducedCount:
    return InducedCount(clique_count(s, g), comb(g.n, s))


def has_induced(g: Graph, f: Graph, containing: int | None = None) -> bool:
    """Does g contain an induced copy of f?

    With ``containing`` set, only copies through that g-vertex count
    (useful for incremental checks when g grew by one vertex).
    """
    if f.n > g.n:
        return False
    f_jit, f_py = _pattern_order(f)
    if containing is None:
        if _kernels.NUMBA_ENABLED:
            return bool(_kernels.has_induced_jit(_nbr_array(g), g.n, f_jit, f.n, -1, -1))
        return _kernels.has_induced_py(g.adj, g.n, f_py, f.n)
    for depth in range(f.n):
        if _kernels.NUMBA_ENABLED:
            hit = _kernels.has_induced_jit(_nbr_array(g), g.n, f_jit, f.n, depth, containing)
        else:
            hit = _kernels.has_induced_py(g.adj, g.n, f_py, f.n, depth, containing)
        if hit:
            return True
    return False


def count_induced(f: Graph, g: Graph) -> InducedCount:
    """Exact number of v(f)-subsets of V(g) inducing a copy of f.

    Subset enumeration with degree-sequence pruning; cliques route through
    the extension recursion instead.
    """
    if f.n > g.n:
        raise ValueError(f"pattern order {f.n} exceeds host order {g.n}")
    k = f.n
    if k == 0:
        return InducedCount(1, 1)
    if f.edge_count == comb(k, 2):
        return InducedCount(clique_count(k, g), comb(g.n, k))
    f_deg = f.degree_sequence()
    f_jit, f_py = _pattern_order(f)
    value = 0
    for sub in itertools.combinations(range(g.n), k):
        sg = induced_subgraph(g, sub)
        if sg.degree_sequence() != f_deg:
            continue
        if _kernels.NUMBA_ENABLED:
            hit = _kernels.has_induced_jit(_nbr_array(sg), k, f_jit, k, -1, -1)
        else:
            hit = _kernels.has_induced_py(sg.adj, k, f_py, k)
        if hit:
            value += 1
    return InducedCount(value, comb(g.n, k))


def is_family_free(g: Graph, family) -> bool:
    """True iff no member of the family appears in g as an induced subgraph."""
    return not any(has_induced(g, f) for f in family)
