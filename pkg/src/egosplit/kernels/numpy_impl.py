"""Pure numpy/Python reference implementations of the hot-loop kernels.

These define the semantics; the numba backend mirrors them loop for loop.
Walk generation, persona assignment, edge filtering and neighborhood
scoring are exact integer computations and must agree bit for bit across
backends.  SGD training agrees up to floating-point summation order.
"""

from __future__ import annotations

import numpy as np

# Neighborhood scorer codes shared by both backends.
KIND_JACCARD = 0
KIND_COMMON_NEIGHBORS = 1
KIND_ADAMIC_ADAR = 2


def fill_walks(indptr, indices, starts, steps, out):
    """Fill ``out`` with truncated random walks advanced in lockstep.

    ``starts`` holds one start node per walk; ``steps[i, j]`` is the uniform
    [0, 1) draw used for walk ``i``'s ``j``-th transition, consumed as
    ``neighbors[floor(r * deg)]``.  A walk stops early only at a node with
    no out-neighbors; remaining slots are filled with -1.

    Returns the per-walk lengths (number of valid entries).
    """
    k, t = out.shape
    out[:] = -1
    out[:, 0] = starts
    lengths = np.ones(k, dtype=np.int32)
    cur = starts.astype(np.int64)
    alive = np.ones(k, dtype=bool)
    for j in range(1, t):
        deg = indptr[cur + 1] - indptr[cur]
        alive &= deg > 0
        if not alive.any():
            break
        off = (steps[:, j - 1] * deg).astype(np.int64)
        off = np.minimum(off, np.maximum(deg - 1, 0))  # guard r*deg rounding up
        nxt = indices[np.where(alive, indptr[cur] + off, 0)]
        cur = np.where(alive, nxt, cur)
        out[:, j] = np.where(alive, nxt, -1)
        lengths += alive
    return lengths


def ego_personas(indptr, indices):
    """Split every node into one persona per connected component of its ego-net.

    ``indptr``/``indices`` must be a symmetric CSR adjacency with sorted rows.
    For each node ``u``, the ego-net is the subgraph induced on ``N_u`` (ego
    excluded); its connected components are found with a local union-find
    driven by sorted-adjacency intersections.

    Returns ``(arc_persona, node_offsets)``:

    * ``arc_persona[e]`` -- for the arc at CSR position ``e`` (``u -> v``),
      the persona id of ``u`` whose ego-net component contains ``v``.
    * ``node_offsets`` -- prefix sums; node ``u`` owns persona ids
      ``node_offsets[u] .. node_offsets[u+1]-1``.  Components are numbered
      by ascending smallest member, so ids are deterministic.
    """
    n = len(indptr) - 1
    nnz = len(indices)
    arc_persona = np.full(nnz, -1, dtype=np.int64)
    node_offsets = np.zeros(n + 1, dtype=np.int64)
    next_persona = 0
    for u in range(n):
        s, e = indptr[u], indptr[u + 1]
        k = e - s
        if k == 0:
            node_offsets[u + 1] = next_persona
            continue
        parent = list(range(k))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        row = indices[s:e]
        for i in range(k):
            v = row[i]
            vs, ve = indptr[v], indptr[v + 1]
            # merge-intersect adj(v) with adj(u)
            a, b = vs, s
            while a < ve and b < e:
                if indices[a] < indices[b]:
                    a += 1
                elif indices[a] > indices[b]:
                    b += 1
                else:
                    ri, rj = find(i), find(b - s)
                    if ri != rj:
                        parent[max(ri, rj)] = min(ri, rj)
                    a += 1
                    b += 1
        # number components by first appearance (ascending smallest member)
        comp_id = {}
        for i in range(k):
            r = find(i)
            if r not in comp_id:
                comp_id[r] = next_persona
                next_persona += 1
            arc_persona[s + i] = comp_id[r]
        node_offsets[u + 1] = next_persona
    return arc_persona, node_offsets


def persona_edge_endpoints(indptr, indices, arc_persona):
    """Map each undirected edge (u < v) to its persona-graph endpoints.

    Returns ``(pu, pv)`` where ``pu[i]`` is u's persona owning the arc to v
    and ``pv[i]`` is v's persona owning the arc back to u.
    """
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
            rev = indptr[v] + np.searchsorted(indices[indptr[v]:indptr[v + 1]], u)
            pu[idx] = arc_persona[e]
            pv[idx] = arc_persona[rev]
            idx += 1
    return pu[:idx], pv[:idx]


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.clip(x, -500.0, 500.0)))


def _hs_update(vec_row, nodes, codes, syn, rate, track_loss):
    """One hierarchical-softmax gradient step along a root-to-leaf path.

    Updates the internal node vectors in place and returns
    ``(rate * negative-gradient w.r.t. vec_row, path loss)``; the caller
    applies the input-vector update so that several loss terms can share
    the same pre-update ``vec_row``.
    """
    if len(nodes) == 0:
        return np.zeros_like(vec_row), 0.0
    l2 = syn[nodes]  # copy: updates below must use pre-step values
    x = l2 @ vec_row
    f = _sigmoid(x)
    g = (1.0 - codes - f) * rate
    syn[nodes] += np.outer(g, vec_row)
    loss = 0.0
    if track_loss:
        sign = 1.0 - 2.0 * codes
        loss = float(np.sum(np.log1p(np.exp(-np.clip(sign * x, -500.0, 500.0)))))
    return g @ l2, loss


def train_pass(walks, lengths, window, vec, t_nodes, t_codes, t_off, t_syn,
               alpha0, alpha_min, pos_offset, total_positions,
               lam, p2n, r_nodes, r_codes, r_off, r_syn, track_loss):
    """Skip-gram SGD over one batch of walks (hierarchical softmax).

    For every in-window (center, context) pair: one gradient step on
    -log Pr(context | vec[center]) through the corpus tree and, when
    ``lam > 0``, one step at rate ``alpha * lam`` on
    -log Pr(p2n[center] | vec[center]) through the regularizer tree.
    Both terms are evaluated at the pre-update center vector.

    The learning rate decays linearly in the number of walk positions
    consumed, clamped at ``alpha_min``.  Returns
    ``(pair_loss_sum, pair_count, reg_loss_sum, positions_processed)``;
    regularizer loss is recorded unweighted.
    """
    pair_loss = 0.0
    reg_loss = 0.0
    pairs = 0
    pos = pos_offset
    for i in range(walks.shape[0]):
        length = int(lengths[i])
        for j in range(length):
            center = int(walks[i, j])
            alpha = alpha0 * (1.0 - pos / total_positions)
            if alpha < alpha_min:
                alpha = alpha_min
            pos += 1
            lo = j - window if j - window > 0 else 0
            hi = j + window if j + window < length - 1 else length - 1
            for k in range(lo, hi + 1):
                if k == j:
                    continue
                ctx = int(walks[i, k])
                row = vec[center]
                neu, loss = _hs_update(
                    row, t_nodes[t_off[ctx]:t_off[ctx + 1]],
                    t_codes[t_off[ctx]:t_off[ctx + 1]], t_syn, alpha,
                    track_loss)
                pair_loss += loss
                pairs += 1
                if lam > 0.0:
                    tgt = int(p2n[center])
                    rneu, rloss = _hs_update(
                        row, r_nodes[r_off[tgt]:r_off[tgt + 1]],
                        r_codes[r_off[tgt]:r_off[tgt + 1]], r_syn,
                        alpha * lam, track_loss)
                    reg_loss += rloss
                    neu = neu + rneu
                vec[center] = row + neu
    return pair_loss, pairs, reg_loss, pos - pos_offset


def split_filter(num_nodes, arc_indptr, arc_targets, arc_edge,
                 edge_u, edge_v, order, target):
    """Greedy connectivity-preserving edge removal.

    Visits edges in the given ``order``; an edge is removed iff its
    endpoints stay weakly connected in the residual graph, stopping after
    ``target`` removals.  The arc arrays describe the weak (symmetrized)
    multigraph view with ``arc_edge`` mapping each arc to its owning edge,
    so removing an edge disables both of its arcs while reciprocal
    directed edges keep theirs.

    Returns a boolean mask over edges (True = removed).
    """
    m = len(edge_u)
    removed = np.zeros(m, dtype=np.bool_)
    stamp = np.zeros(num_nodes, dtype=np.int64)
    generation = 0
    nremoved = 0
    for e in order:
        if nremoved >= target:
            break
        u, v = int(edge_u[e]), int(edge_v[e])
        removed[e] = True
        generation += 1
        # BFS from u, early exit on reaching v
        stack = [u]
        stamp[u] = generation
        found = False
        while stack and not found:
            x = stack.pop()
            for a in range(arc_indptr[x], arc_indptr[x + 1]):
                if removed[arc_edge[a]]:
                    continue
                y = int(arc_targets[a])
                if stamp[y] == generation:
                    continue
                if y == v:
                    found = True
                    break
                stamp[y] = generation
                stack.append(y)
        if found:
            nremoved += 1
        else:
            removed[e] = False
    return removed


def score_neighborhood_pairs(indptr, indices, us, vs, kind):
    """Jaccard / common-neighbors / Adamic-Adar scores for node pairs.

    Neighborhoods are CSR rows (out-neighbors for directed graphs).
    Adamic-Adar sums 1/ln(deg(x)) over common neighbors with deg(x) >= 2.
    """
    out = np.zeros(len(us), dtype=np.float64)
    for i in range(len(us)):
        u, v = int(us[i]), int(vs[i])
        nu = indices[indptr[u]:indptr[u + 1]]
        nv = indices[indptr[v]:indptr[v + 1]]
        common = np.intersect1d(nu, nv, assume_unique=True)
        if kind == KIND_JACCARD:
            union = len(nu) + len(nv) - len(common)
            out[i] = len(common) / union if union > 0 else 0.0
        elif kind == KIND_COMMON_NEIGHBORS:
            out[i] = float(len(common))
        else:
            s = 0.0
            for x in common:
                dx = indptr[x + 1] - indptr[x]
                if dx >= 2:
                    s += 1.0 / np.log(dx)
            out[i] = s
    return out
