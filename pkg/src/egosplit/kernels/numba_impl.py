"""Numba-jitted kernels; semantics mirror ``numpy_impl`` loop for loop.

Integer kernels (walks, personas, edge filtering, scoring) are bit-exact
matches of the numpy backend.  The SGD kernels agree up to floating-point
summation order (single dot products are accumulated sequentially here,
via BLAS there).
"""

from __future__ import annotations

import numpy as np
from numba import njit, prange


@njit(cache=True)
def fill_walks(indptr, indices, starts, steps, out):
    k, t = out.shape
    lengths = np.ones(k, dtype=np.int32)
    for i in range(k):
        for j in range(t):
            out[i, j] = -1
        cur = np.int64(starts[i])
        out[i, 0] = cur
        for j in range(1, t):
            deg = indptr[cur + 1] - indptr[cur]
            if deg == 0:
                break
            off = np.int64(steps[i, j - 1] * deg)
            if off > deg - 1:
                off = deg - 1
            cur = np.int64(indices[indptr[cur] + off])
            out[i, j] = cur
            lengths[i] += 1
    return lengths


@njit(cache=True)
def _find(parent, i):
    while parent[i] != i:
        parent[i] = parent[parent[i]]
        i = parent[i]
    return i


@njit(cache=True)
def ego_personas(indptr, indices):
    n = len(indptr) - 1
    nnz = len(indices)
    arc_persona = np.full(nnz, -1, dtype=np.int64)
    node_offsets = np.zeros(n + 1, dtype=np.int64)
    max_deg = 0
    for u in range(n):
        d = indptr[u + 1] - indptr[u]
        if d > max_deg:
            max_deg = d
    parent = np.empty(max_deg, dtype=np.int64)
    comp_of_root = np.empty(max_deg, dtype=np.int64)
    next_persona = np.int64(0)
    for u in range(n):
        s, e = indptr[u], indptr[u + 1]
        k = e - s
        if k == 0:
            node_offsets[u + 1] = next_persona
            continue
        for i in range(k):
            parent[i] = i
        for i in range(k):
            v = indices[s + i]
            a = indptr[v]
            ve = indptr[v + 1]
            b = s
            while a < ve and b < e:
                if indices[a] < indices[b]:
                    a += 1
                elif indices[a] > indices[b]:
                    b += 1
                else:
                    ri = _find(parent, i)
                    rj = _find(parent, b - s)
                    if ri != rj:
                        if ri < rj:
                            parent[rj] = ri
                        else:
                            parent[ri] = rj
                    a += 1
                    b += 1
        for i in range(k):
            comp_of_root[i] = -1
        for i in range(k):
            r = _find(parent, i)
            if comp_of_root[r] < 0:
                comp_of_root[r] = next_persona
                next_persona += 1
            arc_persona[s + i] = comp_of_root[r]
        node_offsets[u + 1] = next_persona
    return arc_persona, node_offsets


@njit(cache=True)
def _row_position(indptr, indices, u, v):
    # binary search for v within u's sorted row
    lo = indptr[u]
    hi = indptr[u + 1]
    while lo < hi:
        mid = (lo + hi) // 2
        if indices[mid] < v:
            lo = mid + 1
        else:
            hi = mid
    return lo


@njit(cache=True)
def persona_edge_endpoints(indptr, indices, arc_persona):
    n = len(indptr) - 1
    m = len(indices) // 2
    pu = np.empty(m, dtype=np.int64)
    pv = np.empty(m, dtype=np.int64)
    idx = 0
    for u in range(n):
        for e in range(indptr[u], indptr[u + 1]):
            v = indices[e]
            if v <= u:
                continue
            rev = _row_position(indptr, indices, v, u)
            pu[idx] = arc_persona[e]
            pv[idx] = arc_persona[rev]
            idx += 1
    return pu[:idx], pv[:idx]


@njit(cache=True, inline="always")
def _sigmoid(x):
    if x > 500.0:
        x = 500.0
    elif x < -500.0:
        x = -500.0
    return 1.0 / (1.0 + np.exp(-x))


@njit(cache=True, inline="always")
def _softplus(x):
    # log(1 + exp(x)), the per-branch loss -log sigmoid(-x)
    if x > 500.0:
        x = 500.0
    return np.log1p(np.exp(x))


@njit(cache=True)
def _hs_update(vec, center, nodes, codes, syn, rate, neu, track_loss):
    """Accumulate rate * (-grad) w.r.t. vec[center] into ``neu``; update syn."""
    d = vec.shape[1]
    loss = 0.0
    for p in range(len(nodes)):
        node = nodes[p]
        x = 0.0
        for c in range(d):
            x += vec[center, c] * syn[node, c]
        f = _sigmoid(x)
        g = (1.0 - codes[p] - f) * rate
        if track_loss:
            sign = 1.0 - 2.0 * codes[p]
            loss += _softplus(-sign * x)
        for c in range(d):
            neu[c] += g * syn[node, c]
            syn[node, c] += g * vec[center, c]
    return loss


@njit(cache=True)
def train_pass(walks, lengths, window, vec, t_nodes, t_codes, t_off, t_syn,
               alpha0, alpha_min, pos_offset, total_positions,
               lam, p2n, r_nodes, r_codes, r_off, r_syn, track_loss):
    d = vec.shape[1]
    neu = np.empty(d, dtype=np.float64)
    pair_loss = 0.0
    reg_loss = 0.0
    pairs = 0
    pos = pos_offset
    for i in range(walks.shape[0]):
        length = lengths[i]
        for j in range(length):
            center = walks[i, j]
            alpha = alpha0 * (1.0 - pos / total_positions)
            if alpha < alpha_min:
                alpha = alpha_min
            pos += 1
            lo = j - window
            if lo < 0:
                lo = 0
            hi = j + window
            if hi > length - 1:
                hi = length - 1
            for k in range(lo, hi + 1):
                if k == j:
                    continue
                ctx = walks[i, k]
                for c in range(d):
                    neu[c] = 0.0
                pair_loss += _hs_update(
                    vec, center, t_nodes[t_off[ctx]:t_off[ctx + 1]],
                    t_codes[t_off[ctx]:t_off[ctx + 1]], t_syn, alpha,
                    neu, track_loss)
                pairs += 1
                if lam > 0.0:
                    tgt = p2n[center]
                    reg_loss += _hs_update(
                        vec, center, r_nodes[r_off[tgt]:r_off[tgt + 1]],
                        r_codes[r_off[tgt]:r_off[tgt + 1]], r_syn,
                        alpha * lam, neu, track_loss)
                for c in range(d):
                    vec[center, c] += neu[c]
    return pair_loss, pairs, reg_loss, pos - pos_offset


@njit(cache=True, parallel=True)
def train_pass_parallel(walks, lengths, window, vec, t_nodes, t_codes, t_off,
                        t_syn, alpha0, alpha_min, pos_offset, total_positions,
                        lam, p2n, r_nodes, r_codes, r_off, r_syn):
    """Hogwild variant: walks are sharded over threads, parameter updates
    race benignly on the shared dense matrices.  The learning rate depends
    only on the corpus position, so the schedule stays deterministic even
    though update interleaving does not.
    """
    d = vec.shape[1]
    nwalks = walks.shape[0]
    pos_starts = np.empty(nwalks, dtype=np.int64)
    acc = pos_offset
    for i in range(nwalks):
        pos_starts[i] = acc
        acc += lengths[i]
    for i in prange(nwalks):
        neu = np.empty(d, dtype=np.float64)
        length = lengths[i]
        for j in range(length):
            center = walks[i, j]
            pos = pos_starts[i] + j
            alpha = alpha0 * (1.0 - pos / total_positions)
            if alpha < alpha_min:
                alpha = alpha_min
            lo = j - window
            if lo < 0:
                lo = 0
            hi = j + window
            if hi > length - 1:
                hi = length - 1
            for k in range(lo, hi + 1):
                if k == j:
                    continue
                ctx = walks[i, k]
                for c in range(d):
                    neu[c] = 0.0
                _hs_update(vec, center, t_nodes[t_off[ctx]:t_off[ctx + 1]],
                           t_codes[t_off[ctx]:t_off[ctx + 1]], t_syn, alpha,
                           neu, False)
                if lam > 0.0:
                    tgt = p2n[center]
                    _hs_update(vec, center, r_nodes[r_off[tgt]:r_off[tgt + 1]],
                               r_codes[r_off[tgt]:r_off[tgt + 1]], r_syn,
                               alpha * lam, neu, False)
                for c in range(d):
                    vec[center, c] += neu[c]
    return acc - pos_offset


@njit(cache=True)
def split_filter(num_nodes, arc_indptr, arc_targets, arc_edge,
                 edge_u, edge_v, order, target):
    m = len(edge_u)
    removed = np.zeros(m, dtype=np.bool_)
    stamp = np.zeros(num_nodes, dtype=np.int64)
    stack = np.empty(num_nodes, dtype=np.int64)
    generation = 0
    nremoved = 0
    for oi in range(len(order)):
        if nremoved >= target:
            break
        e = order[oi]
        u = edge_u[e]
        v = edge_v[e]
        removed[e] = True
        generation += 1
        stack[0] = u
        top = 1
        stamp[u] = generation
        found = False
        while top > 0 and not found:
            top -= 1
            x = stack[top]
            for a in range(arc_indptr[x], arc_indptr[x + 1]):
                if removed[arc_edge[a]]:
                    continue
                y = arc_targets[a]
                if stamp[y] == generation:
                    continue
                if y == v:
                    found = True
                    break
                stamp[y] = generation
                stack[top] = y
                top += 1
        if found:
            nremoved += 1
        else:
            removed[e] = False
    return removed


@njit(cache=True)
def score_neighborhood_pairs(indptr, indices, us, vs, kind):
    out = np.zeros(len(us), dtype=np.float64)
    for i in range(len(us)):
        u = us[i]
        v = vs[i]
        a = indptr[u]
        ae = indptr[u + 1]
        b = indptr[v]
        be = indptr[v + 1]
        inter = 0
        aa_sum = 0.0
        while a < ae and b < be:
            if indices[a] < indices[b]:
                a += 1
            elif indices[a] > indices[b]:
                b += 1
            else:
                inter += 1
                if kind == 2:
                    x = indices[a]
                    dx = indptr[x + 1] - indptr[x]
                    if dx >= 2:
                        aa_sum += 1.0 / np.log(dx)
                a += 1
                b += 1
        if kind == 0:
            union = (ae - indptr[u]) + (be - indptr[v]) - inter
            out[i] = inter / union if union > 0 else 0.0
        elif kind == 1:
            out[i] = float(inter)
        else:
            out[i] = aa_sum
    return out
