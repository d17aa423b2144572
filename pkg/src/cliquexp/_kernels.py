"""Hot inner loops: numba-compiled kernels with pure NumPy/Python fallbacks.

Setting CLIQUEXP_NO_NUMBA=1 (or running without numba installed) selects
the fallback path; results are identical either way, only slower.  The
bitset kernels exist in two spellings (``*_jit`` on uint64 arrays, ``*_py``
on Python ints); the float kernels are single-source and compiled in place.
"""
from __future__ import annotations

import math
import os

import numpy as np

NUMBA_DISABLED = os.environ.get("CLIQUEXP_NO_NUMBA", "").lower() in {"1", "true", "yes"}

try:
    if NUMBA_DISABLED:
        raise ImportError("numba disabled by CLIQUEXP_NO_NUMBA")
    from numba import njit

    NUMBA_ENABLED = True
except ImportError:
    NUMBA_ENABLED = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def deco(func):
            return func

        return deco


U1 = np.uint64(1)
U0 = np.uint64(0)


@njit(cache=True)
def _popcount64(x):
    x = x - ((x >> np.uint64(1)) & np.uint64(0x5555555555555555))
    x = (x & np.uint64(0x3333333333333333)) + ((x >> np.uint64(2)) & np.uint64(0x3333333333333333))
    x = (x + (x >> np.uint64(4))) & np.uint64(0x0F0F0F0F0F0F0F0F)
    return np.int64((x * np.uint64(0x0101010101010101)) >> np.uint64(56))


@njit(cache=True)
def _lowest_bit_index(x):
    return _popcount64((x & (np.uint64(0) - x)) - np.uint64(1))


# ---------------------------------------------------------------------------
# s-clique counting on bitset adjacency
# ---------------------------------------------------------------------------


@njit(cache=True)
def clique_count_jit(nbrs, n, s):
    """Number of s-cliques; DFS over increasing vertex indices."""
    if s == 0:
        return np.int64(1)
    if s == 1:
        return np.int64(n)
    if s > n:
        return np.int64(0)
    total = np.int64(0)
    # cand[l]: still-to-iterate candidates at level l (all indices > last chosen)
    cand = np.zeros(s, dtype=np.uint64)
    cand[0] = (U1 << np.uint64(n)) - U1 if n < 64 else ~U0
    lvl = 0
    while lvl >= 0:
        c = cand[lvl]
        if c == U0:
            lvl -= 1
            continue
        v = _lowest_bit_index(c)
        c &= c - U1
        cand[lvl] = c
        nxt = c & nbrs[v]
        if lvl == s - 2:
            total += _popcount64(nxt)
        elif nxt != U0:
            lvl += 1
            cand[lvl] = nxt
    return total


def clique_count_py(adj, n, s):
    """Python-int twin of clique_count_jit."""
    if s == 0:
        return 1
    if s == 1:
        return n
    if s > n:
        return 0

    total = 0

    def grow(cand, depth):
        nonlocal total
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            nxt = cand & adj[v]
            if depth == s - 2:
                total += nxt.bit_count()
            elif nxt:
                grow(nxt, depth + 1)

    grow((1 << n) - 1, 0)
    return total


# ---------------------------------------------------------------------------
# Induced-subgraph presence test (exact adjacency match, injective embedding)
# ---------------------------------------------------------------------------


@njit(cache=True)
def has_induced_jit(g_nbrs, n, f_nbrs, k, pin_depth, pin_vertex):
    """Is there an induced embedding of F into G?

    When pin_depth >= 0, F-position pin_depth must map to g-vertex pin_vertex.
    """
    if k == 0:
        return True
    if k > n:
        return False
    full = (U1 << np.uint64(n)) - U1 if n < 64 else ~U0
    assigned = np.zeros(k, dtype=np.int64)
    cand = np.zeros(k, dtype=np.uint64)
    used = U0
    depth = 0
    cand[0] = full if pin_depth != 0 else (U1 << np.uint64(pin_vertex))
    while depth >= 0:
        c = cand[depth]
        if c == U0:
            depth -= 1
            if depth >= 0:
                used &= ~(U1 << np.uint64(assigned[depth]))
            continue
        v = _lowest_bit_index(c)
        cand[depth] = c & (c - U1)
        assigned[depth] = v
        if depth == k - 1:
            return True
        used |= U1 << np.uint64(v)
        depth += 1
        nc = full & ~used
        if pin_depth == depth:
            nc &= U1 << np.uint64(pin_vertex)
        for a in range(depth):
            if f_nbrs[depth] >> np.uint64(a) & U1:
                nc &= g_nbrs[assigned[a]]
            else:
                nc &= ~g_nbrs[assigned[a]]
        cand[depth] = nc
        if nc == U0:
            depth -= 1
            used &= ~(U1 << np.uint64(v))
    return False


def has_induced_py(g_adj, n, f_adj, k, pin_depth=-1, pin_vertex=-1):
    """Python-int twin of has_induced_jit."""
    if k == 0:
        return True
    if k > n:
        return False
    full = (1 << n) - 1
    assigned = [0] * k

    def extend(depth, used):
        if depth == k:
            return True
        if pin_depth == depth:
            cand = 1 << pin_vertex if not used >> pin_vertex & 1 else 0
        else:
            cand = full & ~used
        for a in range(depth):
            if f_adj[depth] >> a & 1:
                cand &= g_adj[assigned[a]]
            else:
                cand &= ~g_adj[assigned[a]]
        while cand:
            v = (cand & -cand).bit_length() - 1
            cand &= cand - 1
            assigned[depth] = v
            if extend(depth + 1, used | 1 << v):
                return True
        return False

    return extend(0, 0)


# ---------------------------------------------------------------------------
# Branch-and-bound for the largest t-clique-free expansion order: maximise
# the total part size subject to every maximal clique carrying at most
# `cap` vertices and x_v <= ub_v.  Iterative DFS, most constrained vertex
# first, pruned by a static fractional-cover bound plus a residual-aware
# greedy cover bound.
# ---------------------------------------------------------------------------


@njit(cache=True)
def expansion_solve_max_jit(n, m, cap, ub, indptr, cidx, yv, scale, s0, best0):
    residual = np.full(m, cap, dtype=np.int64)
    stamp = np.zeros(m, dtype=np.int64)
    gen = np.int64(0)
    best = np.int64(best0)
    full = (U1 << np.uint64(n)) - U1

    rem_s = np.zeros(n + 2, dtype=np.uint64)
    bv_s = np.zeros(n + 2, dtype=np.int64)
    x_s = np.zeros(n + 2, dtype=np.int64)
    tot_s = np.zeros(n + 2, dtype=np.int64)
    sf_s = np.zeros(n + 2, dtype=np.int64)

    level = 0
    rem_cur = full
    tot_cur = np.int64(0)
    sf_cur = np.int64(s0)
    mode = 0  # 0 enter, 1 try, 2 after-child

    while level >= 0:
        if mode == 0:
            bv = np.int64(-1)
            bcap = cap + np.int64(1)
            rem = rem_cur
            rest = rem_cur
            while rest != U0:
                v = _lowest_bit_index(rest)
                rest &= rest - U1
                cv = ub[v]
                for p in range(indptr[v], indptr[v + 1]):
                    r = residual[cidx[p]]
                    if r < cv:
                        cv = r
                if cv == 0:
                    rem &= ~(U1 << np.uint64(v))
                elif cv < bcap:
                    bv = v
                    bcap = cv
            if tot_cur > best:
                best = tot_cur
            prune = bv < 0
            if not prune and tot_cur * scale + sf_cur <= best * scale:
                prune = True
            if not prune:
                gen += 1
                cover = np.int64(0)
                rest = rem
                while rest != U0:
                    v = _lowest_bit_index(rest)
                    rest &= rest - U1
                    ci = cidx[indptr[v]]
                    rmin = residual[ci]
                    for p in range(indptr[v] + 1, indptr[v + 1]):
                        if residual[cidx[p]] < rmin:
                            ci = cidx[p]
                            rmin = residual[ci]
                    if stamp[ci] != gen:
                        stamp[ci] = gen
                        cover += rmin
                if tot_cur + cover <= best:
                    prune = True
            if prune:
                level -= 1
                mode = 2
            else:
                rem_s[level] = rem & ~(U1 << np.uint64(bv))
                bv_s[level] = bv
                x_s[level] = bcap
                tot_s[level] = tot_cur
                sf_s[level] = sf_cur
                mode = 1
        elif mode == 1:
            x = x_s[level]
            if x < 0:
                level -= 1
                mode = 2
            else:
                bv = bv_s[level]
                for p in range(indptr[bv], indptr[bv + 1]):
                    residual[cidx[p]] -= x
                rem_cur = rem_s[level]
                tot_cur = tot_s[level] + x
                sf_cur = sf_s[level] - x * yv[bv]
                level += 1
                mode = 0
        else:
            if level >= 0:
                x = x_s[level]
                bv = bv_s[level]
                for p in range(indptr[bv], indptr[bv + 1]):
                    residual[cidx[p]] += x
                x_s[level] = x - 1
                mode = 1
    return best


@njit(cache=True)
def expansion_lex_witness_jit(n, m, cap, ub, indptr, cidx, yv, scale, s0, k_max, out):
    residual = np.full(m, cap, dtype=np.int64)
    stamp = np.zeros(m, dtype=np.int64)
    gen = np.int64(0)

    x_s = np.zeros(n + 2, dtype=np.int64)
    cap_s = np.zeros(n + 2, dtype=np.int64)
    tot_s = np.zeros(n + 2, dtype=np.int64)
    sf_s = np.zeros(n + 2, dtype=np.int64)

    level = 0
    tot_cur = np.int64(0)
    sf_cur = np.int64(s0)
    mode = 0

    while level >= 0:
        if mode == 0:
            if level == n:
                if tot_cur == k_max:
                    return True
                level -= 1
                mode = 2
                continue
            prune = tot_cur * scale + sf_cur < k_max * scale
            if not prune:
                gen += 1
                cover = np.int64(0)
                for v in range(level, n):
                    ci = cidx[indptr[v]]
                    rmin = residual[ci]
                    for p in range(indptr[v] + 1, indptr[v + 1]):
                        if residual[cidx[p]] < rmin:
                            ci = cidx[p]
                            rmin = residual[ci]
                    if stamp[ci] != gen:
                        stamp[ci] = gen
                        cover += rmin
                if tot_cur + cover < k_max:
                    prune = True
            if prune:
                level -= 1
                mode = 2
                continue
            cv = ub[level]
            for p in range(indptr[level], indptr[level + 1]):
                r = residual[cidx[p]]
                if r < cv:
                    cv = r
            cap_s[level] = cv
            x_s[level] = 0
            tot_s[level] = tot_cur
            sf_s[level] = sf_cur
            mode = 1
        elif mode == 1:
            x = x_s[level]
            if x > cap_s[level]:
                level -= 1
                mode = 2
            else:
                out[level] = x
                for p in range(indptr[level], indptr[level + 1]):
                    residual[cidx[p]] -= x
                tot_cur = tot_s[level] + x
                sf_cur = sf_s[level] - x * yv[level]
                level += 1
                mode = 0
        else:
            if level >= 0:
                x = x_s[level]
                for p in range(indptr[level], indptr[level + 1]):
                    residual[cidx[p]] += x
                x_s[level] = x + 1
                mode = 1
    return False


# ---------------------------------------------------------------------------
# Naive labeled-graph oracle: min #(s-cliques) over all labeled n-vertex
# graphs with no independent 3-set (scans every edge mask).
# ---------------------------------------------------------------------------


def _pair_index_table(n):
    """pair (u, v) -> bit position in the edge mask, u < v."""
    idx = {}
    p = 0
    for u in range(n):
        for v in range(u + 1, n):
            idx[(u, v)] = p
            p += 1
    return idx


def _subset_pair_positions(n, r):
    import itertools

    idx = _pair_index_table(n)
    rows = []
    for sub in itertools.combinations(range(n), r):
        rows.append([idx[p] for p in itertools.combinations(sub, 2)])
    return np.array(rows, dtype=np.int64)


@njit(cache=True)
def min_cliques_no_indep3_jit(nbits, triples, subsets):
    """Scan all 2**nbits edge masks; among those whose every vertex-triple
    spans an edge, return the minimum number of all-edge r-subsets."""
    best = np.int64(subsets.shape[0] + 1)
    tcount = triples.shape[0]
    scount = subsets.shape[0]
    spairs = subsets.shape[1]
    for mask in range(np.int64(1) << np.int64(nbits)):
        ok = True
        for t in range(tcount):
            if (
                (mask >> triples[t, 0]) | (mask >> triples[t, 1]) | (mask >> triples[t, 2])
            ) & np.int64(1) == np.int64(0):
                ok = False
                break
        if not ok:
            continue
        cnt = np.int64(0)
        for si in range(scount):
            hit = np.int64(1)
            for pi in range(spairs):
                hit &= mask >> subsets[si, pi]
            cnt += hit & np.int64(1)
            if cnt >= best:
                break
        if cnt < best:
            best = cnt
    return best


def min_cliques_no_indep3_np(nbits, triples, subsets, chunk=1 << 20):
    """Vectorised fallback of min_cliques_no_indep3_jit (chunked over masks)."""
    total = 1 << nbits
    best = subsets.shape[0] + 1
    dtype = np.uint32 if nbits <= 31 else np.uint64
    for start in range(0, total, chunk):
        masks = np.arange(start, min(start + chunk, total), dtype=dtype)
        alive = np.ones(masks.shape, dtype=bool)
        for t in range(triples.shape[0]):
            spanned = (
                (masks >> dtype(triples[t, 0]))
                | (masks >> dtype(triples[t, 1]))
                | (masks >> dtype(triples[t, 2]))
            ) & dtype(1)
            alive &= spanned.astype(bool)
        surv = masks[alive]
        if surv.size == 0:
            continue
        counts = np.zeros(surv.shape, dtype=np.int64)
        for si in range(subsets.shape[0]):
            hit = np.ones(surv.shape, dtype=dtype)
            for pi in range(subsets.shape[1]):
                hit &= surv >> dtype(subsets[si, pi])
            counts += (hit & dtype(1)).astype(np.int64)
        best = min(best, int(counts.min()))
    return best


def min_cliques_no_indep3(n, s):
    """min P(K_s, G) over labeled n-vertex graphs with independence number < 3."""
    nbits = n * (n - 1) // 2
    triples = _subset_pair_positions(n, 3)
    subsets = _subset_pair_positions(n, s)
    if NUMBA_ENABLED:
        return int(min_cliques_no_indep3_jit(nbits, triples, subsets))
    return int(min_cliques_no_indep3_np(nbits, triples, subsets))


# ---------------------------------------------------------------------------
# Projected gradient descent over the probability simplex (single source,
# compiled in place when numba is available).
# ---------------------------------------------------------------------------


def _project_simplex(v):
    """Euclidean projection of v onto {x >= 0, sum x = 1}."""
    n = v.shape[0]
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = -1
    for j in range(n):
        if u[j] - (css[j] - 1.0) / (j + 1) > 0.0:
            rho = j
    theta = (css[rho] - 1.0) / (rho + 1)
    out = v - theta
    for i in range(n):
        if out[i] < 0.0:
            out[i] = 0.0
    return out


def _poly_value(mat, w, s, x):
    y = mat @ x
    acc = 0.0
    for i in range(w.shape[0]):
        acc += w[i] * y[i] ** s
    return acc


def _poly_value_grad(mat, w, s, x):
    y = mat @ x
    val = 0.0
    coef = np.empty(w.shape[0])
    for i in range(w.shape[0]):
        p = y[i] ** (s - 1)
        val += w[i] * p * y[i]
        coef[i] = w[i] * p
    grad = s * (mat.T @ coef)
    return val, grad


def _pgd_single(mat, w, s, x0, max_iter, gm_tol):
    x = _project_simplex(x0.copy())
    fx, g = _poly_value_grad(mat, w, s, x)
    eta = 1.0
    it = 0
    while it < max_iter:
        # gradient-mapping stationarity at unit step
        ref = _project_simplex(x - g)
        gm = 0.0
        for i in range(x.shape[0]):
            gm += (x[i] - ref[i]) ** 2
        if math.sqrt(gm) < gm_tol:
            break
        eta = min(eta * 2.0, 1e8)
        while True:
            y = _project_simplex(x - eta * g)
            dn = 0.0
            lin = 0.0
            for i in range(x.shape[0]):
                d = y[i] - x[i]
                dn += d * d
                lin += g[i] * d
            if dn == 0.0:
                break
            fy = _poly_value(mat, w, s, y)
            if fy <= fx + lin + 0.5 * dn / eta:
                break
            eta *= 0.5
            if eta < 1e-18:
                break
        if dn == 0.0 or eta < 1e-18:
            break
        x = y
        fx, g = _poly_value_grad(mat, w, s, x)
        it += 1
    return fx, x, it


def _pgd_multistart(mat, w, s, starts, max_iter, gm_tol):
    best_val = np.inf
    best_x = starts[0].copy()
    best_idx = -1
    for r in range(starts.shape[0]):
        val, x, _ = _pgd_single(mat, w, s, starts[r], max_iter, gm_tol)
        if val < best_val:
            best_val = val
            best_x = x
            best_idx = r
    return best_val, best_x, best_idx


if NUMBA_ENABLED:
    _project_simplex = njit(cache=True)(_project_simplex)
    _poly_value = njit(cache=True)(_poly_value)
    _poly_value_grad = njit(cache=True)(_poly_value_grad)
    _pgd_single = njit(cache=True)(_pgd_single)
    _pgd_multistart = njit(cache=True)(_pgd_multistart)

pgd_single = _pgd_single
pgd_multistart = _pgd_multistart
poly_value = _poly_value
poly_value_grad = _poly_value_grad
project_simplex = _project_simplex
