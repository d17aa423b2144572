"""Small simple graphs on at most 64 vertices, stored as bitset adjacency rows.

Vertex i's neighbourhood is the integer ``adj[i]`` whose bit j is set iff
ij is an edge.  Graphs are immutable and hashable, so they can be cached,
deduplicated and shared freely.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

MAX_VERTICES = 64

#: cap for operations that brute-force over vertex permutations
PERM_BRUTE_CAP = 8


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph: vertex count plus one neighbourhood bitmask per vertex."""

    n: int
    adj: tuple[int, ...]

    def __post_init__(self):
        if not 0 <= self.n <= MAX_VERTICES:
            raise ValueError(f"vertex count {self.n} outside [0, {MAX_VERTICES}]")
        if len(self.adj) != self.n:
            raise ValueError("adjacency length does not match vertex count")
        full = (1 << self.n) - 1
        for u, row in enumerate(self.adj):
            if row & ~full:
                raise ValueError(f"adjacency row {u} has bits outside [0, n)")
            if row >> u & 1:
                raise ValueError(f"loop at vertex {u}")
        for u in range(self.n):
            for v in range(u + 1, self.n):
                if (self.adj[u] >> v & 1) != (self.adj[v] >> u & 1):
                    raise ValueError(f"adjacency not symmetric at ({u}, {v})")

    @property
    def edge_count(self) -> int:
        return sum(row.bit_count() for row in self.adj) // 2

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def edges(self):
        """Yield edges (u, v) with u < v."""
        for u in range(self.n):
            rest = self.adj[u] >> (u + 1) << (u + 1)
            while rest:
                v = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                yield u, v

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(sorted(row.bit_count() for row in self.adj))

    def __repr__(self):
        return f"Graph(n={self.n}, edges={sorted(self.edges())})"


def from_edges(n: int, edges) -> Graph:
    """Build a graph on [n] from an iterable of (u, v) pairs."""
    rows = [0] * n
    for u, v in edges:
        if u == v:
            raise ValueError(f"loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) outside vertex range")
        rows[u] |= 1 << v
        rows[v] |= 1 << u
    return Graph(n, tuple(rows))


def clique(l: int) -> Graph:
    """Complete graph on l vertices."""
    if l > MAX_VERTICES:
        raise ValueError(f"clique size {l} over the {MAX_VERTICES}-vertex cap")
    full = (1 << l) - 1
    return Graph(l, tuple(full ^ (1 << v) for v in range(l)))


def empty_graph(l: int) -> Graph:
    """Edgeless graph on l vertices."""
    if l > MAX_VERTICES:
        raise ValueError(f"order {l} over the {MAX_VERTICES}-vertex cap")
    return Graph(l, (0,) * l)


def cycle(m: int) -> Graph:
    """Cycle on m >= 3 vertices, consecutive vertices adjacent modulo m."""
    if m < 3:
        raise ValueError("cycles need at least 3 vertices")
    if m > MAX_VERTICES:
        raise ValueError(f"order {m} over the {MAX_VERTICES}-vertex cap")
    return from_edges(m, [(v, (v + 1) % m) for v in range(m)])


def path(m: int) -> Graph:
    """Path on m vertices."""
    if m > MAX_VERTICES:
        raise ValueError(f"order {m} over the {MAX_VERTICES}-vertex cap")
    return from_edges(m, [(v, v + 1) for v in range(m - 1)])


def circulant(n: int, differences) -> Graph:
    """Circulant graph on Z_n: x ~ y iff (x - y) mod n lies in the difference set."""
    diffs = set()
    for d in differences:
        diffs.add(d % n)
        diffs.add(-d % n)
    if 0 in diffs:
        raise ValueError("difference 0 would create loops")
    return from_edges(
        n, [(u, v) for u in range(n) for v in range(u + 1, n) if (v - u) % n in diffs]
    )


def ramsey_r35() -> Graph:
    """The 13-vertex circulant with differences {1, 5, 8, 12}: triangle-free, no 5 independent vertices."""
    return circulant(13, [1, 5])


def _even_subsets_of_5() -> list[int]:
    return sorted(m for m in range(32) if bin(m).count("1") % 2 == 0)


def ramsey_r333() -> Graph:
    """Complement of the Clebsch graph, on the 16 even-sized subsets of a 5-set.

    Vertex i is the i-th even-parity 5-bit mask in ascending order; two
    vertices are adjacent iff their masks differ in exactly 2 bits.
    """
    masks = _even_subsets_of_5()
    return from_edges(
        16,
        [
            (i, j)
            for i in range(16)
            for j in range(i + 1, 16)
            if bin(masks[i] ^ masks[j]).count("1") == 2
        ],
    )


def r333_vertex_masks() -> tuple[int, ...]:
    """The documented bijection: vertex index -> 5-bit subset mask."""
    return tuple(_even_subsets_of_5())


def c5_prime() -> Graph:
    """Disjoint union of a 5-cycle and one isolated vertex."""
    return disjoint_union(cycle(5), empty_graph(1))


def ramsey_r34() -> Graph:
    """8-vertex circulant on Z_8 with differences {1, 4, 7}: no triangle, no 4 independent vertices."""
    return circulant(8, [1, 4])


def complement(g: Graph) -> Graph:
    full = (1 << g.n) - 1
    return Graph(g.n, tuple((full ^ row) & ~(1 << v) for v, row in enumerate(g.adj)))


def disjoint_union(f: Graph, h: Graph) -> Graph:
    """Vertex-disjoint union; h's vertices are shifted past f's."""
    if f.n + h.n > MAX_VERTICES:
        raise ValueError(f"combined order {f.n + h.n} over the {MAX_VERTICES}-vertex cap")
    rows = list(f.adj) + [row << f.n for row in h.adj]
    return Graph(f.n + h.n, tuple(rows))


def relabel(g: Graph, labeling) -> Graph:
    """Relabelled copy where position p receives old vertex labeling[p]."""
    inv = [0] * g.n
    for p, v in enumerate(labeling):
        inv[v] = p
    rows = [0] * g.n
    for p, v in enumerate(labeling):
        rest = g.adj[v]
        while rest:
            w = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            rows[p] |= 1 << inv[w]
    return Graph(g.n, tuple(rows))


def induced_subgraph(g: Graph, vertices) -> Graph:
    """Subgraph induced on the given vertices, relabelled to [k] in the given order."""
    verts = list(vertices)
    pos = {v: p for p, v in enumerate(verts)}
    rows = [0] * len(verts)
    for p, v in enumerate(verts):
        for q, w in enumerate(verts):
            if p != q and g.adj[v] >> w & 1:
                rows[p] |= 1 << q
    return Graph(len(verts), tuple(rows))


def maximal_cliques(g: Graph) -> list[int]:
    """All inclusion-maximal cliques as vertex bitmasks (Bron-Kerbosch with pivoting)."""
    out: list[int] = []
    adj = g.adj

    def extend(r: int, p: int, x: int):
        if p == 0 and x == 0:
            out.append(r)
            return
        # pivot: vertex of p|x with most neighbours inside p
        pivot, best = -1, -1
        cand = p | x
        while cand:
            u = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            score = (p & adj[u]).bit_count()
            if score > best:
                pivot, best = u, score
        ext = p & ~adj[pivot]
        while ext:
            v = (ext & -ext).bit_length() - 1
            ext &= ext - 1
            extend(r | (1 << v), p & adj[v], x & adj[v])
            p &= ~(1 << v)
            x |= 1 << v

    if g.n:
        extend(0, (1 << g.n) - 1, 0)
    return out


def bits(mask: int):
    """Iterate the set bit positions of a mask."""
    while mask:
        v = (mask & -mask).bit_length() - 1
        mask &= mask - 1
        yield v


@lru_cache(maxsize=1 << 14)
def clique_number(g: Graph) -> int:
    if g.n == 0:
        return 0
    best = 0

    def grow(size: int, cand: int):
        nonlocal best
        if size + cand.bit_count() <= best:
            return
        if cand == 0:
            best = max(best, size)
            return
        rest = cand
        while rest:
            v = (rest & -rest).bit_length() - 1
            rest &= rest - 1
            grow(size + 1, rest & g.adj[v])
            if size + rest.bit_count() <= best:
                return

    grow(0, (1 << g.n) - 1)
    return best


def independence_number(g: Graph) -> int:
    return clique_number(complement(g))


def edit_distance(g: Graph, h: Graph) -> int:
    """Minimum number of adjacency flips turning g into a graph isomorphic to h.

    Brute force over vertex bijections; capped at 8 vertices.
    """
    if g.n != h.n:
        raise ValueError("edit distance needs graphs of equal order")
    if g.n > PERM_BRUTE_CAP:
        raise ValueError(f"edit distance capped at {PERM_BRUTE_CAP} vertices")
    best = g.n * (g.n - 1) // 2 + 1
    for perm in itertools.permutations(range(g.n)):
        # relabel h by perm: position v of g compared against h vertex perm[v]
        diff = 0
        for u in range(g.n):
            hrow = 0
            rest = h.adj[perm[u]]
            while rest:
                w = (rest & -rest).bit_length() - 1
                rest &= rest - 1
                hrow |= 1 << perm.index(w)
            diff += (g.adj[u] ^ hrow).bit_count()
            if diff // 2 >= best:
                break
        best = min(best, diff // 2)
        if best == 0:
            return 0
    return best


#: constructors addressable by name (CLI and tests)
def named_graph(name: str) -> Graph:
    """Resolve graph names: K5, E3, C7, P4, C5p, R35, R333, R34, plus a 'bar' suffix for complements."""
    base = name
    comp = False
    if base.endswith("bar"):
        base, comp = base[:-3], True
    if base == "C5p":
        g = c5_prime()
    elif base == "R35":
        g = ramsey_r35()
    elif base == "R333":
        g = ramsey_r333()
    elif base == "R34":
        g = ramsey_r34()
    elif base[:1] in ("K", "E", "C", "P") and base[1:].isdigit():
        l = int(base[1:])
        g = {"K": clique, "E": empty_graph, "C": cycle, "P": path}[base[0]](l)
    else:
        raise ValueError(f"unknown graph name {name!r}")
    return complement(g) if comp else g
