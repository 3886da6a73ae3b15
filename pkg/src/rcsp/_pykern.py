"""Pure-Python kernels for the hot search loops.

Reference implementations of the operations the compiled extension
(_ckern) accelerates.  Semantics here are authoritative: the compiled
twin must return bit-identical results (see tests/test_kernels.py).

Conventions shared by both backends:

* g-vectors are tuples of ints; lists of them are scanned front to back;
* "truncated" comparisons ignore component 0 (the primary cost);
* additions saturate at vectors.INF.
"""

from __future__ import annotations

import heapq

from .vectors import INF


def tr_any_dominates(gs, g):
    """True iff some stored vector truncated-dominates g."""
    k = len(g)
    for y in gs:
        for i in range(1, k):
            if y[i] > g[i]:
                break
        else:
            return True
    return False


def tr_last_dominates(gs, g):
    """True iff the most recently stored vector truncated-dominates g."""
    if not gs:
        return False
    y = gs[-1]
    for i in range(1, len(g)):
        if y[i] > g[i]:
            return False
    return True


def tr_dominated_indices(gs, g):
    """Indices of stored vectors that g truncated-dominates."""
    k = len(g)
    out = []
    for idx, y in enumerate(gs):
        for i in range(1, k):
            if g[i] > y[i]:
                break
        else:
            out.append(idx)
    return out


def match_scan(gs, g, fbar):
    """Join g with every stored opposite-direction vector and bound-check.

    Returns (any_tr_inbound, inbound_indices):
      any_tr_inbound  - some join is within the resource bounds (ignoring
                        the primary cost); drives the demoted-list skip rule;
      inbound_indices - joins within fbar on every component.
    """
    k = len(g)
    any_tr = False
    idxs = []
    for idx, y in enumerate(gs):
        ok_tr = True
        for i in range(1, k):
            s = g[i] + y[i]
            if s >= INF:
                s = INF
            if s > fbar[i]:
                ok_tr = False
                break
        if not ok_tr:
            continue
        any_tr = True
        s1 = g[0] + y[0]
        if s1 >= INF:
            s1 = INF
        if s1 <= fbar[0]:
            idxs.append(idx)
    return any_tr, idxs


def expand_enhanced(adj, g, h, fbar, xgs):
    """Generate surviving children of a label during the enhanced search.

    adj:  successor list [(t, cost_vector)] of the label's state
    h:    per-state heuristic vectors for the label's direction
    xgs:  per-state frontier g-lists (None when a state is untouched)

    A child is dropped when its f-estimate leaves fbar or when the last
    frontier entry at its state already truncated-dominates it.  Returns
    (children, n_bound_pruned, n_quick_pruned) with children as
    (t, g_child, f_child) triples.
    """
    k = len(g)
    children = []
    n_bound = 0
    n_quick = 0
    for t, cost in adj:
        gc = tuple(s if (s := g[i] + cost[i]) < INF else INF for i in range(k))
        ht = h[t]
        fc = tuple(s if (s := gc[i] + ht[i]) < INF else INF for i in range(k))
        inbound = True
        for i in range(k):
            if fc[i] > fbar[i]:
                inbound = False
                break
        if not inbound:
            n_bound += 1
            continue
        lst = xgs[t]
        if lst and tr_last_dominates(lst, gc):
            n_quick += 1
            continue
        children.append((t, gc, fc))
    return children, n_bound, n_quick


def expand_baseline(adj, g, h, fbar, xgs):
    """Child generation for the baseline search: full dominance scan per child.

    Returns (children, n_bound_pruned, n_dominated_pruned, n_scans).
    """
    k = len(g)
    children = []
    n_bound = 0
    n_dom = 0
    n_scans = 0
    for t, cost in adj:
        gc = tuple(s if (s := g[i] + cost[i]) < INF else INF for i in range(k))
        ht = h[t]
        fc = tuple(s if (s := gc[i] + ht[i]) < INF else INF for i in range(k))
        inbound = True
        for i in range(k):
            if fc[i] > fbar[i]:
                inbound = False
                break
        if not inbound:
            n_bound += 1
            continue
        lst = xgs[t]
        if lst:
            n_scans += 1
            if tr_any_dominates(lst, gc):
                n_dom += 1
                continue
        children.append((t, gc, fc))
    return children, n_bound, n_dom, n_scans


def dijkstra_csr(indptr, targets, weights, alive, source):
    """One-to-all shortest path distances over a CSR adjacency.

    weights is the single cost component being minimised.  Dead states
    (alive[u] == 0) are skipped entirely.  Returns a list of distances
    with INF for unreachable or dead states.  Ties are broken on the
    smaller state id, which fixes the settle order deterministically.
    """
    n = len(indptr) - 1
    iptr = indptr.tolist() if hasattr(indptr, "tolist") else list(indptr)
    tgt = targets.tolist() if hasattr(targets, "tolist") else list(targets)
    wts = weights.tolist() if hasattr(weights, "tolist") else list(weights)
    dist = [INF] * n
    if not alive[source]:
        return dist
    dist[source] = 0
    heap = [(0, source)]
    pop = heapq.heappop
    push = heapq.heappush
    while heap:
        d, u = pop(heap)
        if d > dist[u]:
            continue
        for e in range(iptr[u], iptr[u + 1]):
            v = tgt[e]
            if not alive[v]:
                continue
            nd = d + wts[e]
            if nd < dist[v]:
                dist[v] = nd
                push(heap, (nd, v))
    return dist
