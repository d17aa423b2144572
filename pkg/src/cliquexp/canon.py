"""Canonical labelling via individualisation-refinement.

Each search-tree node carries an ordered partition; equitable refinement
shrinks it, the first non-singleton cell is branched on, and discrete
partitions become candidate labelings.  The canonical form is the
lexicographically smallest relabelled adjacency code over all leaves.
Automorphisms discovered from equal-code leaves prune sibling branches
(orbit pruning restricted to generators fixing the individualised prefix),
which keeps highly symmetric graphs cheap.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache

from . import graph6
from .graphs import Graph, relabel

_LEAF_STORE_CAP = 512


def _refine(adj, cells):
    """Coarsest equitable refinement of an ordered partition; order is structure-determined."""
    cells = [list(c) for c in cells]
    queue = deque(sum(1 << v for v in c) for c in cells)
    while queue:
        w = queue.popleft()
        out = []
        for x in cells:
            if len(x) == 1:
                out.append(x)
                continue
            groups: dict[int, list[int]] = {}
            for v in x:
                groups.setdefault((adj[v] & w).bit_count(), []).append(v)
            if len(groups) == 1:
                out.append(x)
            else:
                for key in sorted(groups):
                    sub = groups[key]
                    out.append(sub)
                    queue.append(sum(1 << v for v in sub))
        cells = out
    return cells


def _code_for(adj, n, labeling):
    inv = [0] * n
    for p, v in enumerate(labeling):
        inv[v] = p
    rows = [0] * n
    for p, v in enumerate(labeling):
        rest = adj[v]
        acc = 0
        while rest:
            w = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            acc |= 1 << inv[w]
        rows[p] = acc
    return tuple(rows)


def _orbit(v, gens):
    seen = {v}
    frontier = [v]
    while frontier:
        u = frontier.pop()
        for g in gens:
            w = g[u]
            if w not in seen:
                seen.add(w)
                frontier.append(w)
    return seen


def _search(adj, n):
    best = {"code": None, "lab": None}
    leaf_store: dict[tuple, tuple] = {}
    gens: list[tuple[int, ...]] = []
    identity = tuple(range(n))

    def visit_leaf(cells):
        lab = tuple(c[0] for c in cells)
        code = _code_for(adj, n, lab)
        prev = leaf_store.get(code)
        if prev is not None:
            pos = [0] * n
            for p, v in enumerate(prev):
                pos[v] = p
            gamma = tuple(lab[pos[v]] for v in range(n))
            if gamma != identity and gamma not in gens:
                gens.append(gamma)
        elif len(leaf_store) < _LEAF_STORE_CAP:
            leaf_store[code] = lab
        if best["code"] is None or code < best["code"]:
            best["code"], best["lab"] = code, lab

    def dfs(cells, prefix):
        cells = _refine(adj, cells)
        target = -1
        for i, c in enumerate(cells):
            if len(c) > 1:
                target = i
                break
        if target < 0:
            visit_leaf(cells)
            return
        cell = cells[target]
        processed: list[int] = []
        for v in cell:
            if processed:
                fixing = [g for g in gens if all(g[u] == u for u in prefix)]
                if fixing and _orbit(v, fixing) & set(processed):
                    continue
            branched = (
                cells[:target]
                + [[v], [u for u in cell if u != v]]
                + cells[target + 1 :]
            )
            dfs(branched, prefix + [v])
            processed.append(v)

    dfs([list(range(n))], [])
    return best["lab"], gens


@lru_cache(maxsize=1 << 15)
def _canon_cached(g: Graph):
    if g.n == 0:
        return (), ()
    lab, gens = _search(g.adj, g.n)
    return tuple(lab), tuple(gens)


def canonical_labeling(g: Graph) -> tuple[int, ...]:
    """Labeling (position -> original vertex) realising the canonical form."""
    return _canon_cached(g)[0]


def automorphism_generators(g: Graph) -> tuple[tuple[int, ...], ...]:
    """Generators of a subgroup of Aut(g) discovered during canonicalisation.

    Sufficient for orbit-based candidate reduction; not guaranteed to
    generate the full automorphism group.
    """
    return _canon_cached(g)[1]


def canonical_form(g: Graph) -> Graph:
    if g.n == 0:
        return g
    return relabel(g, canonical_labeling(g))


def canonical_code(g: Graph) -> str:
    """Isomorphism-class key: graph6 of the canonically relabelled graph."""
    return graph6.encode(canonical_form(g))


def is_isomorphic(g: Graph, h: Graph) -> bool:
    if g.n != h.n or g.edge_count != h.edge_count:
        return False
    if g.degree_sequence() != h.degree_sequence():
        return False
    return canonical_code(g) == canonical_code(h)


def vertex_orbits(n: int, gens) -> list[int]:
    """Orbit representative (smallest member) for each vertex under the given permutations."""
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for v in range(n):
            ra, rb = find(v), find(g[v])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return [find(v) for v in range(n)]


def apply_perm_to_mask(perm, mask: int) -> int:
    out = 0
    while mask:
        v = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        out |= 1 << perm[v]
    return out


def subset_orbit_reps(n: int, gens) -> list[int]:
    """One representative mask per orbit of subsets of [n] under the given permutations."""
    if not gens:
        return list(range(1 << n))
    seen = bytearray(1 << n)
    reps = []
    for start in range(1 << n):
        if seen[start]:
            continue
        reps.append(start)
        frontier = [start]
        seen[start] = 1
        while frontier:
            m = frontier.pop()
            for g in gens:
                im = apply_perm_to_mask(g, m)
                if not seen[im]:
                    seen[im] = 1
                    frontier.append(im)
    return reps
