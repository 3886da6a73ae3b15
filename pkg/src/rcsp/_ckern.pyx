# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot search loops.

Drop-in twin of _pykern: identical signatures, identical results.  Scans
run over the same Python lists of int tuples the solvers maintain; only
the inner comparisons and arithmetic move to C.  Vectors longer than
MAXK delegate to the pure implementation (never hit by the supported
k in {2,3,4}).
"""

from cpython.list cimport PyList_GET_ITEM, PyList_GET_SIZE
from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_GET_SIZE, PyTuple_New, PyTuple_SET_ITEM
from libc.stdlib cimport free, malloc

from . import _pykern

cdef long long INF = 9223372036854775807
# vectors longer than 16 components delegate to _pykern


cdef inline long long _sat_add(long long a, long long b) nogil:
    if a >= INF - b:
        return INF
    return a + b


cdef inline int _load(tuple v, long long *buf) except -1:
    cdef Py_ssize_t k = PyTuple_GET_SIZE(v), i
    for i in range(k):
        buf[i] = <long long> <object> PyTuple_GET_ITEM(v, i)
    return 0


cdef inline tuple _as_tuple(long long *buf, Py_ssize_t k):
    cdef tuple out = PyTuple_New(k)
    cdef Py_ssize_t i
    cdef object val
    for i in range(k):
        val = buf[i]
        Py_INCREF(val)
        PyTuple_SET_ITEM(out, i, val)
    return out


def tr_any_dominates(list gs, tuple g):
    """True iff some stored vector truncated-dominates g."""
    cdef Py_ssize_t k = PyTuple_GET_SIZE(g)
    if k > 16:
        return _pykern.tr_any_dominates(gs, g)
    cdef long long gb[16]
    _load(g, gb)
    cdef Py_ssize_t n = PyList_GET_SIZE(gs), idx, i
    cdef tuple y
    cdef bint ok
    for idx in range(n):
        y = <tuple> PyList_GET_ITEM(gs, idx)
        ok = True
        for i in range(1, k):
            if (<long long> <object> PyTuple_GET_ITEM(y, i)) > gb[i]:
                ok = False
                break
        if ok:
            return True
    return False


def tr_last_dominates(list gs, tuple g):
    """True iff the most recently stored vector truncated-dominates g."""
    cdef Py_ssize_t n = PyList_GET_SIZE(gs)
    if n == 0:
        return False
    cdef Py_ssize_t k = PyTuple_GET_SIZE(g)
    if k > 16:
        return _pykern.tr_last_dominates(gs, g)
    cdef tuple y = <tuple> PyList_GET_ITEM(gs, n - 1)
    cdef Py_ssize_t i
    for i in range(1, k):
        if (<long long> <object> PyTuple_GET_ITEM(y, i)) > (
            <long long> <object> PyTuple_GET_ITEM(g, i)
        ):
            return False
    return True


def tr_dominated_indices(list gs, tuple g):
    """Indices of stored vectors that g truncated-dominates."""
    cdef Py_ssize_t k = PyTuple_GET_SIZE(g)
    if k > 16:
        return _pykern.tr_dominated_indices(gs, g)
    cdef long long gb[16]
    _load(g, gb)
    cdef list out = []
    cdef Py_ssize_t n = PyList_GET_SIZE(gs), idx, i
    cdef tuple y
    cdef bint ok
    for idx in range(n):
        y = <tuple> PyList_GET_ITEM(gs, idx)
        ok = True
        for i in range(1, k):
            if gb[i] > (<long long> <object> PyTuple_GET_ITEM(y, i)):
                ok = False
                break
        if ok:
            out.append(idx)
    return out


def match_scan(list gs, tuple g, tuple fbar):
    """(any join within resource bounds, indices of fully in-bound joins)."""
    cdef Py_ssize_t k = PyTuple_GET_SIZE(g)
    if k > 16:
        return _pykern.match_scan(gs, g, fbar)
    cdef long long gb[16]
    cdef long long fb[16]
    _load(g, gb)
    _load(fbar, fb)
    cdef bint any_tr = False
    cdef list idxs = []
    cdef Py_ssize_t n = PyList_GET_SIZE(gs), idx, i
    cdef tuple y
    cdef bint ok
    cdef long long s
    for idx in range(n):
        y = <tuple> PyList_GET_ITEM(gs, idx)
        ok = True
        for i in range(1, k):
            s = _sat_add(gb[i], <long long> <object> PyTuple_GET_ITEM(y, i))
            if s > fb[i]:
                ok = False
                break
        if not ok:
            continue
        any_tr = True
        s = _sat_add(gb[0], <long long> <object> PyTuple_GET_ITEM(y, 0))
        if s <= fb[0]:
            idxs.append(idx)
    return any_tr, idxs


def expand_enhanced(list adj, tuple g, list h, tuple fbar, list xgs):
    """Surviving children for the enhanced search (bound + quick checks)."""
    cdef Py_ssize_t k = PyTuple_GET_SIZE(g)
    if k > 16:
        return _pykern.expand_enhanced(adj, g, h, fbar, xgs)
    cdef long long gb[16]
    cdef long long fb[16]
    cdef long long gc[16]
    cdef long long fc[16]
    _load(g, gb)
    _load(fbar, fb)
    cdef list children = []
    cdef long long n_bound = 0, n_quick = 0
    cdef Py_ssize_t na = PyList_GET_SIZE(adj), e, i, t, nlst
    cdef tuple entry, cost, ht, last
    cdef object tobj, lst
    cdef bint inbound, dominated
    for e in range(na):
        entry = <tuple> PyList_GET_ITEM(adj, e)
        tobj = <object> PyTuple_GET_ITEM(entry, 0)
        cost = <tuple> PyTuple_GET_ITEM(entry, 1)
        t = <Py_ssize_t> tobj
        for i in range(k):
            gc[i] = _sat_add(gb[i], <long long> <object> PyTuple_GET_ITEM(cost, i))
        ht = <tuple> PyList_GET_ITEM(h, t)
        inbound = True
        for i in range(k):
            fc[i] = _sat_add(gc[i], <long long> <object> PyTuple_GET_ITEM(ht, i))
            if fc[i] > fb[i]:
                inbound = False
                break
        if not inbound:
            n_bound += 1
            continue
        lst = <object> PyList_GET_ITEM(xgs, t)
        if lst is not None:
            nlst = PyList_GET_SIZE(<list> lst)
            if nlst > 0:
                last = <tuple> PyList_GET_ITEM(<list> lst, nlst - 1)
                dominated = True
                for i in range(1, k):
                    if (<long long> <object> PyTuple_GET_ITEM(last, i)) > gc[i]:
                        dominated = False
                        break
                if dominated:
                    n_quick += 1
                    continue
        children.append((tobj, _as_tuple(gc, k), _as_tuple(fc, k)))
    return children, n_bound, n_quick


def expand_baseline(list adj, tuple g, list h, tuple fbar, list xgs):
    """Surviving children for the baseline search (bound + full dominance scan)."""
    cdef Py_ssize_t k = PyTuple_GET_SIZE(g)
    if k > 16:
        return _pykern.expand_baseline(adj, g, h, fbar, xgs)
    cdef long long gb[16]
    cdef long long fb[16]
    cdef long long gc[16]
    cdef long long fc[16]
    _load(g, gb)
    _load(fbar, fb)
    cdef list children = []
    cdef long long n_bound = 0, n_dom = 0, n_scans = 0
    cdef Py_ssize_t na = PyList_GET_SIZE(adj), e, i, t, nlst, idx
    cdef tuple entry, cost, ht, y
    cdef object tobj, lst
    cdef bint inbound, dominated, ok
    for e in range(na):
        entry = <tuple> PyList_GET_ITEM(adj, e)
        tobj = <object> PyTuple_GET_ITEM(entry, 0)
        cost = <tuple> PyTuple_GET_ITEM(entry, 1)
        t = <Py_ssize_t> tobj
        for i in range(k):
            gc[i] = _sat_add(gb[i], <long long> <object> PyTuple_GET_ITEM(cost, i))
        ht = <tuple> PyList_GET_ITEM(h, t)
        inbound = True
        for i in range(k):
            fc[i] = _sat_add(gc[i], <long long> <object> PyTuple_GET_ITEM(ht, i))
            if fc[i] > fb[i]:
                inbound = False
                break
        if not inbound:
            n_bound += 1
            continue
        lst = <object> PyList_GET_ITEM(xgs, t)
        dominated = False
        if lst is not None:
            nlst = PyList_GET_SIZE(<list> lst)
            if nlst > 0:
                n_scans += 1
                for idx in range(nlst):
                    y = <tuple> PyList_GET_ITEM(<list> lst, idx)
                    ok = True
                    for i in range(1, k):
                        if (<long long> <object> PyTuple_GET_ITEM(y, i)) > gc[i]:
                            ok = False
                            break
                    if ok:
                        dominated = True
                        break
        if dominated:
            n_dom += 1
            continue
        children.append((tobj, _as_tuple(gc, k), _as_tuple(fc, k)))
    return children, n_bound, n_dom, n_scans


def dijkstra_csr(indptr, targets, weights, alive, source):
    """One-to-all single-component shortest paths over CSR adjacency.

    Same contract as the pure version: INF for unreachable or dead states,
    (distance, state id) tie-breaking, returns a Python list.
    """
    cdef long long[::1] iptr = indptr
    cdef long long[::1] tgt = targets
    cdef long long[::1] wts = weights
    cdef const unsigned char[::1] mask = alive
    cdef Py_ssize_t n = iptr.shape[0] - 1
    cdef Py_ssize_t src = source
    cdef list result

    cdef long long *dist = <long long *> malloc(n * sizeof(long long))
    # lazy-deletion binary heap of (key, node); pushes bounded by m + 1
    cdef Py_ssize_t cap = tgt.shape[0] + 2
    cdef long long *hkey = <long long *> malloc(cap * sizeof(long long))
    cdef long long *hnode = <long long *> malloc(cap * sizeof(long long))
    if dist == NULL or hkey == NULL or hnode == NULL:
        free(dist); free(hkey); free(hnode)
        raise MemoryError()

    cdef Py_ssize_t i, size, pos, child, e
    cdef long long d, u, v, nd, ck, cn, tk, tn
    try:
        for i in range(n):
            dist[i] = INF
        if not mask[src]:
            return [INF] * n
        dist[src] = 0
        hkey[0] = 0
        hnode[0] = src
        size = 1
        while size > 0:
            d = hkey[0]
            u = hnode[0]
            # pop root
            size -= 1
            if size > 0:
                tk = hkey[size]
                tn = hnode[size]
                pos = 0
                while True:
                    child = 2 * pos + 1
                    if child >= size:
                        break
                    if child + 1 < size and (
                        hkey[child + 1] < hkey[child]
                        or (hkey[child + 1] == hkey[child] and hnode[child + 1] < hnode[child])
                    ):
                        child += 1
                    if hkey[child] < tk or (hkey[child] == tk and hnode[child] < tn):
                        hkey[pos] = hkey[child]
                        hnode[pos] = hnode[child]
                        pos = child
                    else:
                        break
                hkey[pos] = tk
                hnode[pos] = tn
            if d > dist[u]:
                continue
            for e in range(iptr[u], iptr[u + 1]):
                v = tgt[e]
                if not mask[v]:
                    continue
                nd = d + wts[e]
                if nd < dist[v]:
                    dist[v] = nd
                    # push (nd, v)
                    pos = size
                    size += 1
                    while pos > 0:
                        child = (pos - 1) // 2  # parent
                        ck = hkey[child]
                        cn = hnode[child]
                        if nd < ck or (nd == ck and v < cn):
                            hkey[pos] = ck
                            hnode[pos] = cn
                            pos = child
                        else:
                            break
                    hkey[pos] = nd
                    hnode[pos] = v
        result = [INF] * n
        for i in range(n):
            if dist[i] != INF:
                result[i] = dist[i]
        return result
    finally:
        free(dist)
        free(hkey)
        free(hnode)


# ---------------------------------------------------------------------------
# Full search cores.
#
# The per-label cost of the solvers is dominated by priority-queue traffic
# and dominance scans, so both search loops exist here in full, operating
# on flat int64 buffers.  Semantics (extraction order, tie-breaking,
# pruning, matching, counters) mirror the pure-Python engines exactly;
# tests compare the two label-for-label.

from posix.time cimport CLOCK_MONOTONIC, clock_gettime, timespec


cdef inline double _now() nogil:
    cdef timespec ts
    clock_gettime(CLOCK_MONOTONIC, &ts)
    return ts.tv_sec + ts.tv_nsec * 1e-9


cdef struct Vec:
    long long *buf
    long long length
    long long cap


cdef inline int _vec_reserve(Vec *v, long long need) except -1:
    cdef long long newcap
    cdef long long *nbuf
    if v.cap >= need:
        return 0
    newcap = v.cap * 2 if v.cap > 0 else 8
    if newcap < need:
        newcap = need
    nbuf = <long long *> malloc(newcap * sizeof(long long))
    if nbuf == NULL:
        raise MemoryError()
    if v.buf != NULL:
        for i in range(v.length):
            nbuf[i] = v.buf[i]
        free(v.buf)
    v.buf = nbuf
    v.cap = newcap
    return 0


cdef struct Grow:
    long long *buf
    long long length
    long long cap


cdef inline int _grow_push(Grow *a, long long value) except -1:
    cdef long long newcap
    cdef long long *nbuf
    cdef long long i
    if a.length == a.cap:
        newcap = a.cap * 2 if a.cap > 0 else 1024
        nbuf = <long long *> malloc(newcap * sizeof(long long))
        if nbuf == NULL:
            raise MemoryError()
        for i in range(a.length):
            nbuf[i] = a.buf[i]
        if a.buf != NULL:
            free(a.buf)
        a.buf = nbuf
        a.cap = newcap
    a.buf[a.length] = value
    a.length += 1
    return 0


STAT_NAMES = (
    "extracted",
    "expanded",
    "generated",
    "dominance_checks",
    "matches",
    "pruned_bound",
    "pruned_dominated",
    "pruned_quick",
)

MODE_ENHANCED = 0
MODE_BASELINE = 1

STEP_OK = 0
STEP_TERMINATED = 1
STEP_TIMEOUT = 2


cdef class SearchCore:
    """One solve's entire mutable state for both directions."""

    cdef:
        int k, ki, mode
        long long n
        long long fbar[16]
        bint timed_out
        double deadline          # monotonic seconds, negative = none
        long long countdown
        # graph (alive-filtered CSR) and heuristics per direction
        long long[::1] indptr[2]
        long long[::1] tgt[2]
        long long[::1] wts[2]    # m*k flattened
        long long[::1] h[2]      # n*k flattened
        # binary heap per direction: key (f1 asc, g1 desc, state asc, seq asc)
        long long *qf1[2]
        long long *qg1[2]
        long long *qstate[2]
        long long *qseq[2]
        long long *qslot[2]
        long long qlen[2]
        long long qcap[2]
        # pending-label pool per direction (g vectors + parent), free-listed
        long long *pool_g[2]     # cap*k
        long long *pool_parent[2]
        long long pool_cap[2]
        Grow pool_free[2]
        long long pool_top[2]
        # inserted-label arena per direction
        Grow ins_g[2]
        Grow ins_state[2]
        Grow ins_parent[2]
        # per-state stores, entry stride k+1 (g components then handle)
        Vec *xs[2]
        Vec *doms[2]
        # solution pairs, stride k+2 (fwd handle, bwd handle, joined vector)
        Grow sols
        long long seq[2]
        long long prev_f1[2]
        long long stats[2][8]

    def __cinit__(self):
        cdef int d
        for d in range(2):
            self.qf1[d] = NULL
            self.qg1[d] = NULL
            self.qstate[d] = NULL
            self.qseq[d] = NULL
            self.qslot[d] = NULL
            self.pool_g[d] = NULL
            self.pool_parent[d] = NULL
            self.xs[d] = NULL
            self.doms[d] = NULL

    def __dealloc__(self):
        cdef int d
        cdef long long u
        for d in range(2):
            free(self.qf1[d]); free(self.qg1[d]); free(self.qstate[d])
            free(self.qseq[d]); free(self.qslot[d])
            free(self.pool_g[d]); free(self.pool_parent[d])
            free(self.pool_free[d].buf)
            free(self.ins_g[d].buf); free(self.ins_state[d].buf); free(self.ins_parent[d].buf)
            if self.xs[d] != NULL:
                for u in range(self.n):
                    free(self.xs[d][u].buf)
                free(self.xs[d])
            if self.doms[d] != NULL:
                for u in range(self.n):
                    free(self.doms[d][u].buf)
                free(self.doms[d])
        free(self.sols.buf)

    def setup(
        self,
        int k,
        int ki,
        int mode,
        long long n,
        tuple limits,
        long long start,
        long long goal,
        hf,
        hb,
        csr_fwd,
        csr_bwd,
        double timeout_remaining,
    ):
        cdef int i, d
        if k > 15:
            raise ValueError("compiled core supports at most 15 cost components")
        self.k = k
        self.ki = ki
        self.mode = mode
        self.n = n
        self.fbar[0] = INF
        for i in range(1, k):
            self.fbar[i] = <long long> limits[i - 1]
        self.timed_out = False
        self.deadline = _now() + timeout_remaining if timeout_remaining >= 0 else -1.0
        self.countdown = 4096
        self.indptr[0], self.tgt[0], self.wts[0] = csr_fwd
        self.indptr[1], self.tgt[1], self.wts[1] = csr_bwd
        self.h[0] = hf
        self.h[1] = hb
        self.sols.buf = NULL; self.sols.length = 0; self.sols.cap = 0
        cdef long long root
        cdef long long g0[16]
        for d in range(2):
            self.qlen[d] = 0
            self.qcap[d] = 0
            self.pool_cap[d] = 0
            self.pool_top[d] = 0
            self.pool_free[d].buf = NULL; self.pool_free[d].length = 0; self.pool_free[d].cap = 0
            self.ins_g[d].buf = NULL; self.ins_g[d].length = 0; self.ins_g[d].cap = 0
            self.ins_state[d].buf = NULL; self.ins_state[d].length = 0; self.ins_state[d].cap = 0
            self.ins_parent[d].buf = NULL; self.ins_parent[d].length = 0; self.ins_parent[d].cap = 0
            self.xs[d] = <Vec *> malloc(n * sizeof(Vec))
            self.doms[d] = <Vec *> malloc(n * sizeof(Vec))
            if self.xs[d] == NULL or self.doms[d] == NULL:
                raise MemoryError()
            for u in range(n):
                self.xs[d][u].buf = NULL; self.xs[d][u].length = 0; self.xs[d][u].cap = 0
                self.doms[d][u].buf = NULL; self.doms[d][u].length = 0; self.doms[d][u].cap = 0
            self.seq[d] = 0
            self.prev_f1[d] = 0
            for i in range(8):
                self.stats[d][i] = 0
        for i in range(k):
            g0[i] = 0
        for d in range(2):
            root = start if d == 0 else goal
            self._push(d, self.h[d][root * k], 0, root, g0, -1)
            self.stats[d][2] += 1  # generated

    # -- queue/pool ---------------------------------------------------------

    cdef int _push(
        self, int d, long long f1, long long g1, long long state, long long *g, long long parent
    ) except -1:
        cdef long long slot, i, pos, par
        cdef long long *pg
        # allocate payload slot
        if self.pool_free[d].length > 0:
            self.pool_free[d].length -= 1
            slot = self.pool_free[d].buf[self.pool_free[d].length]
        else:
            if self.pool_top[d] == self.pool_cap[d]:
                self._pool_grow(d)
            slot = self.pool_top[d]
            self.pool_top[d] += 1
        pg = self.pool_g[d] + slot * self.k
        for i in range(self.k):
            pg[i] = g[i]
        self.pool_parent[d][slot] = parent
        # heap insert
        if self.qlen[d] == self.qcap[d]:
            self._heap_grow(d)
        pos = self.qlen[d]
        self.qlen[d] += 1
        cdef long long sq = self.seq[d]
        self.seq[d] += 1
        cdef long long *hf1 = self.qf1[d]
        cdef long long *hg1 = self.qg1[d]
        cdef long long *hst = self.qstate[d]
        cdef long long *hsq = self.qseq[d]
        cdef long long *hsl = self.qslot[d]
        while pos > 0:
            par = (pos - 1) >> 1
            if _key_less(f1, g1, state, sq, hf1[par], hg1[par], hst[par], hsq[par]):
                hf1[pos] = hf1[par]; hg1[pos] = hg1[par]; hst[pos] = hst[par]
                hsq[pos] = hsq[par]; hsl[pos] = hsl[par]
                pos = par
            else:
                break
        hf1[pos] = f1; hg1[pos] = g1; hst[pos] = state; hsq[pos] = sq; hsl[pos] = slot
        return 0

    cdef int _pool_grow(self, int d) except -1:
        cdef long long newcap = self.pool_cap[d] * 2 if self.pool_cap[d] > 0 else 4096
        cdef long long *ng = <long long *> malloc(newcap * self.k * sizeof(long long))
        cdef long long *np_ = <long long *> malloc(newcap * sizeof(long long))
        cdef long long i
        if ng == NULL or np_ == NULL:
            free(ng); free(np_)
            raise MemoryError()
        for i in range(self.pool_top[d] * self.k):
            ng[i] = self.pool_g[d][i]
        for i in range(self.pool_top[d]):
            np_[i] = self.pool_parent[d][i]
        free(self.pool_g[d]); free(self.pool_parent[d])
        self.pool_g[d] = ng
        self.pool_parent[d] = np_
        self.pool_cap[d] = newcap
        return 0

    cdef int _heap_grow(self, int d) except -1:
        cdef long long newcap = self.qcap[d] * 2 if self.qcap[d] > 0 else 4096
        cdef long long *a
        cdef long long i
        cdef long long **slots = [
            &self.qf1[d][0] if self.qcap[d] else NULL,
        ]
        # grow each heap array
        a = <long long *> malloc(newcap * sizeof(long long))
        if a == NULL: raise MemoryError()
        for i in range(self.qlen[d]): a[i] = self.qf1[d][i]
        free(self.qf1[d]); self.qf1[d] = a
        a = <long long *> malloc(newcap * sizeof(long long))
        if a == NULL: raise MemoryError()
        for i in range(self.qlen[d]): a[i] = self.qg1[d][i]
        free(self.qg1[d]); self.qg1[d] = a
        a = <long long *> malloc(newcap * sizeof(long long))
        if a == NULL: raise MemoryError()
        for i in range(self.qlen[d]): a[i] = self.qstate[d][i]
        free(self.qstate[d]); self.qstate[d] = a
        a = <long long *> malloc(newcap * sizeof(long long))
        if a == NULL: raise MemoryError()
        for i in range(self.qlen[d]): a[i] = self.qseq[d][i]
        free(self.qseq[d]); self.qseq[d] = a
        a = <long long *> malloc(newcap * sizeof(long long))
        if a == NULL: raise MemoryError()
        for i in range(self.qlen[d]): a[i] = self.qslot[d][i]
        free(self.qslot[d]); self.qslot[d] = a
        self.qcap[d] = newcap
        return 0

    cdef void _pop(self, int d, long long *f1, long long *state, long long *slot):
        cdef long long *hf1 = self.qf1[d]
        cdef long long *hg1 = self.qg1[d]
        cdef long long *hst = self.qstate[d]
        cdef long long *hsq = self.qseq[d]
        cdef long long *hsl = self.qslot[d]
        f1[0] = hf1[0]
        state[0] = hst[0]
        slot[0] = hsl[0]
        cdef long long size = self.qlen[d] - 1
        self.qlen[d] = size
        if size == 0:
            return
        cdef long long tf = hf1[size], tg = hg1[size], ts = hst[size], tq = hsq[size], tl = hsl[size]
        cdef long long pos = 0, child
        while True:
            child = 2 * pos + 1
            if child >= size:
                break
            if child + 1 < size and _key_less(
                hf1[child + 1], hg1[child + 1], hst[child + 1], hsq[child + 1],
                hf1[child], hg1[child], hst[child], hsq[child],
            ):
                child += 1
            if _key_less(hf1[child], hg1[child], hst[child], hsq[child], tf, tg, ts, tq):
                hf1[pos] = hf1[child]; hg1[pos] = hg1[child]; hst[pos] = hst[child]
                hsq[pos] = hsq[child]; hsl[pos] = hsl[child]
                pos = child
            else:
                break
        hf1[pos] = tf; hg1[pos] = tg; hst[pos] = ts; hsq[pos] = tq; hsl[pos] = tl

    # -- iteration bodies ---------------------------------------------------

    cdef int _check_deadline(self) except -1:
        self.countdown -= 1
        if self.countdown == 0:
            self.countdown = 4096
            if self.deadline >= 0 and _now() > self.deadline:
                self.timed_out = True
                return 1
        return 0

    cdef int _step_enhanced(self, int d) except -1:
        cdef long long f1, state, slot
        cdef long long g[16]
        cdef long long i, parent, handle
        cdef int k = self.k
        self._pop(d, &f1, &state, &slot)
        if f1 > self.fbar[0]:
            return STEP_TERMINATED
        if f1 < self.prev_f1[d]:
            raise AssertionError("extraction order must be f1-monotone")
        self.prev_f1[d] = f1
        cdef long long *pg = self.pool_g[d] + slot * k
        for i in range(k):
            g[i] = pg[i]
        parent = self.pool_parent[d][slot]
        _grow_push(&self.pool_free[d], slot)
        self.stats[d][0] += 1  # extracted
        if self._check_deadline():
            return STEP_TIMEOUT

        cdef Vec *lst = &self.xs[d][state]
        cdef long long stride = k + 1
        cdef long long nlst = lst.length // stride if lst.length else 0
        cdef long long *base
        cdef bint dominated
        if nlst > 0:
            base = lst.buf + (nlst - 1) * stride
            dominated = True
            for i in range(1, k):
                if base[i] > g[i]:
                    dominated = False
                    break
            if dominated:
                self.stats[d][7] += 1  # pruned_quick
                return STEP_OK
            self.stats[d][3] += 1  # dominance_checks
            if _scan_tr_any(lst.buf, nlst, stride, g, k):
                self.stats[d][6] += 1  # pruned_dominated
                return STEP_OK

        # pool the label permanently and publish it
        handle = self.ins_state[d].length
        for i in range(k):
            _grow_push(&self.ins_g[d], g[i])
        _grow_push(&self.ins_state[d], state)
        _grow_push(&self.ins_parent[d], parent)
        self._insert_frontier(d, state, g, handle)
        self._match(d, state, g, handle)
        self._expand_enhanced(d, state, g, handle)
        return STEP_OK

    cdef int _insert_frontier(self, int d, long long state, long long *g, long long handle) except -1:
        """Demote truncated-dominated members, append (g, handle) to X."""
        cdef Vec *lst = &self.xs[d][state]
        cdef Vec *dom = &self.doms[d][state]
        cdef int k = self.k
        cdef long long stride = k + 1
        cdef long long nlst = lst.length // stride
        cdef long long idx, i, w
        cdef long long *e
        cdef bint dominates_entry
        cdef long long write = 0
        for idx in range(nlst):
            e = lst.buf + idx * stride
            dominates_entry = True
            for i in range(1, k):
                if g[i] > e[i]:
                    dominates_entry = False
                    break
            if dominates_entry:
                self._dom_sorted_insert(dom, e)
            else:
                if write != idx:
                    for i in range(stride):
                        lst.buf[write * stride + i] = e[i]
                write += 1
        lst.length = write * stride
        _vec_reserve(lst, lst.length + stride)
        e = lst.buf + lst.length
        for i in range(self.k):
            e[i] = g[i]
        e[self.k] = handle
        lst.length += stride
        return 0

    cdef int _dom_sorted_insert(self, Vec *dom, long long *entry) except -1:
        """Keep the demoted list sorted lexicographically by (g2..gk, g1)."""
        cdef int k = self.k
        cdef long long stride = k + 1
        cdef long long ndom = dom.length // stride
        cdef long long lo = 0, hi = ndom, mid, i
        cdef long long *m
        cdef int cmp_
        while lo < hi:
            mid = (lo + hi) >> 1
            m = dom.buf + mid * stride
            cmp_ = 0
            for i in range(1, k):
                if m[i] < entry[i]:
                    cmp_ = -1
                    break
                if m[i] > entry[i]:
                    cmp_ = 1
                    break
            if cmp_ == 0:
                if m[0] < entry[0]:
                    cmp_ = -1
                elif m[0] > entry[0]:
                    cmp_ = 1
            if cmp_ < 0:
                lo = mid + 1
            else:
                hi = mid
        _vec_reserve(dom, dom.length + stride)
        # shift tail up by one entry
        for i in range(dom.length - 1, lo * stride - 1, -1):
            dom.buf[i + stride] = dom.buf[i]
        m = dom.buf + lo * stride
        for i in range(stride):
            m[i] = entry[i]
        dom.length += stride
        return 0

    cdef int _match(self, int d, long long state, long long *g, long long handle) except -1:
        cdef Vec *opp = &self.xs[1 - d][state]
        cdef int k = self.k
        cdef long long stride = k + 1
        cdef long long nopp = opp.length // stride
        if nopp == 0:
            return 0
        cdef bint any_tr = False
        self.stats[d][4] += nopp  # matches
        self._match_scan(d, opp, nopp, g, handle, &any_tr)
        cdef Vec *dop = &self.doms[1 - d][state]
        cdef long long ndop = dop.length // stride
        if any_tr and ndop > 0:
            self.stats[d][4] += ndop
            self._match_scan(d, dop, ndop, g, handle, &any_tr)
        return 0

    cdef int _match_scan(
        self, int d, Vec *lst, long long count, long long *g, long long handle, bint *any_tr
    ) except -1:
        cdef int k = self.k
        cdef long long stride = k + 1
        cdef long long idx, i, s, j0
        cdef long long *e
        cdef long long j[16]
        cdef bint ok
        for idx in range(count):
            e = lst.buf + idx * stride
            ok = True
            for i in range(1, k):
                s = _sat_add(g[i], e[i])
                if s > self.fbar[i]:
                    ok = False
                    break
            if not ok:
                continue
            any_tr[0] = True
            j0 = _sat_add(g[0], e[0])
            if j0 > self.fbar[0]:
                continue
            j[0] = j0
            for i in range(1, k):
                j[i] = _sat_add(g[i], e[i])
            if d == 0:
                self._filter_sols(handle, e[k], j)
            else:
                self._filter_sols(e[k], handle, j)
        return 0

    cdef int _filter_sols(self, long long fh, long long bh, long long *j) except -1:
        cdef int k = self.k
        cdef long long stride = k + 2
        if j[0] > self.fbar[0]:
            return 0
        if j[0] < self.fbar[0]:
            self.fbar[0] = j[0]
            self.sols.length = 0
        cdef long long nsol = self.sols.length // stride
        cdef long long idx = 0, i, w
        cdef long long *e
        cdef bint dominated = False, entry_le, j_le
        while idx < nsol:
            e = self.sols.buf + idx * stride
            entry_le = True
            for i in range(1, k):
                if e[2 + i] > j[i]:
                    entry_le = False
                    break
            if entry_le:
                dominated = True
                break
            j_le = True
            for i in range(1, k):
                if j[i] > e[2 + i]:
                    j_le = False
                    break
            if j_le:
                # remove entry idx (shift tail down)
                for i in range((idx + 1) * stride, self.sols.length):
                    self.sols.buf[i - stride] = self.sols.buf[i]
                self.sols.length -= stride
                nsol -= 1
                continue
            idx += 1
        if not dominated:
            _grow_push(&self.sols, fh)
            _grow_push(&self.sols, bh)
            _grow_push(&self.sols, j[0])
            for i in range(1, k):
                _grow_push(&self.sols, j[i])
        return 0

    cdef int _expand_enhanced(self, int d, long long state, long long *g, long long handle) except -1:
        cdef int k = self.k
        if 2 * g[self.ki] > self.fbar[self.ki]:
            return 0
        self.stats[d][1] += 1  # expanded
        cdef long long[::1] indptr = self.indptr[d]
        cdef long long[::1] tgt = self.tgt[d]
        cdef long long[::1] wts = self.wts[d]
        cdef long long[::1] h = self.h[d]
        cdef long long e, i, t, nlst
        cdef long long gc[16]
        cdef long long fc[16]
        cdef bint inbound, dominated
        cdef Vec *lst
        cdef long long stride = k + 1
        cdef long long *last
        cdef long long gen = 0
        for e in range(indptr[state], indptr[state + 1]):
            t = tgt[e]
            inbound = True
            for i in range(k):
                gc[i] = _sat_add(g[i], wts[e * k + i])
                fc[i] = _sat_add(gc[i], h[t * k + i])
                if fc[i] > self.fbar[i]:
                    inbound = False
                    break
            if not inbound:
                self.stats[d][5] += 1  # pruned_bound
                continue
            lst = &self.xs[d][t]
            nlst = lst.length // stride
            if nlst > 0:
                last = lst.buf + (nlst - 1) * stride
                dominated = True
                for i in range(1, k):
                    if last[i] > gc[i]:
                        dominated = False
                        break
                if dominated:
                    self.stats[d][7] += 1  # pruned_quick
                    continue
            self._push(d, fc[0], gc[0], t, gc, handle)
            gen += 1
        self.stats[d][2] += gen
        return 0

    cdef int _step_baseline(self, int d) except -1:
        cdef long long f1, state, slot
        cdef long long g[16]
        cdef long long i
        cdef int k = self.k
        self._pop(d, &f1, &state, &slot)
        if f1 >= self.fbar[0]:
            return STEP_TERMINATED
        if f1 < self.prev_f1[d]:
            raise AssertionError("extraction order must be f1-monotone")
        self.prev_f1[d] = f1
        cdef long long *pg = self.pool_g[d] + slot * k
        for i in range(k):
            g[i] = pg[i]
        _grow_push(&self.pool_free[d], slot)
        self.stats[d][0] += 1
        if self._check_deadline():
            return STEP_TIMEOUT

        if 2 * g[self.ki] <= self.fbar[self.ki]:
            self._expand_baseline(d, state, g)

        # match: best in-bound joined primary cost tightens the bound
        cdef Vec *opp = &self.xs[1 - d][state]
        cdef long long stride = k + 1
        cdef long long nopp = opp.length // stride
        cdef long long idx, s, j0
        cdef long long *e
        cdef bint ok
        if nopp > 0:
            self.stats[d][4] += nopp
            for idx in range(nopp):
                e = opp.buf + idx * stride
                ok = True
                for i in range(1, k):
                    s = _sat_add(g[i], e[i])
                    if s > self.fbar[i]:
                        ok = False
                        break
                if not ok:
                    continue
                j0 = _sat_add(g[0], e[0])
                if j0 < self.fbar[0]:
                    self.fbar[0] = j0

        # append to own explored list (no antichain maintenance here)
        cdef Vec *lst = &self.xs[d][state]
        _vec_reserve(lst, lst.length + stride)
        e = lst.buf + lst.length
        for i in range(k):
            e[i] = g[i]
        e[k] = -1
        lst.length += stride
        return STEP_OK

    cdef int _expand_baseline(self, int d, long long state, long long *g) except -1:
        cdef int k = self.k
        self.stats[d][1] += 1
        cdef long long[::1] indptr = self.indptr[d]
        cdef long long[::1] tgt = self.tgt[d]
        cdef long long[::1] wts = self.wts[d]
        cdef long long[::1] h = self.h[d]
        cdef long long e, i, t, nlst
        cdef long long gc[16]
        cdef long long fc[16]
        cdef bint inbound
        cdef Vec *lst
        cdef long long stride = k + 1
        cdef long long gen = 0
        for e in range(indptr[state], indptr[state + 1]):
            t = tgt[e]
            inbound = True
            for i in range(k):
                gc[i] = _sat_add(g[i], wts[e * k + i])
                fc[i] = _sat_add(gc[i], h[t * k + i])
                if fc[i] > self.fbar[i]:
                    inbound = False
                    break
            if not inbound:
                self.stats[d][5] += 1
                continue
            lst = &self.xs[d][t]
            nlst = lst.length // stride
            if nlst > 0:
                self.stats[d][3] += 1
                if _scan_tr_any(lst.buf, nlst, stride, gc, k):
                    self.stats[d][6] += 1
                    continue
            self._push(d, fc[0], gc[0], t, gc, -1)
            gen += 1
        self.stats[d][2] += gen
        return 0

    # -- drivers ------------------------------------------------------------

    def run_sequential(self, bint forward_first):
        """Interleaved loop: extract globally by smallest front f1."""
        cdef int d, code
        cdef long long f0, f1
        while True:
            if self.qlen[0] == 0 and self.qlen[1] == 0:
                return
            if self.qlen[1] == 0:
                d = 0
            elif self.qlen[0] == 0:
                d = 1
            else:
                f0 = self.qf1[0][0]
                f1 = self.qf1[1][0]
                if f0 == f1:
                    d = 0 if forward_first else 1
                else:
                    d = 0 if f0 < f1 else 1
            if self.mode == MODE_ENHANCED:
                code = self._step_enhanced(d)
            else:
                code = self._step_baseline(d)
            if code != STEP_OK:
                return

    def step_batch(self, int d, long long steps):
        """Process up to ``steps`` extractions for one direction.

        Returns True while the direction should keep running.  Used by the
        two-worker runtime; shared-state mutations stay GIL-serialized
        because control only returns to Python between batches.
        """
        cdef long long i
        cdef int code
        for i in range(steps):
            if self.timed_out or self.qlen[d] == 0:
                return False
            if self.mode == MODE_ENHANCED:
                code = self._step_enhanced(d)
            else:
                code = self._step_baseline(d)
            if code != STEP_OK:
                return False
        return True

    # -- exports ------------------------------------------------------------

    @property
    def fbar1(self):
        return self.fbar[0]

    @property
    def was_timed_out(self):
        return self.timed_out

    def solution_pairs(self):
        """[(fwd handle, bwd handle, joined vector)] in discovery order."""
        cdef int k = self.k
        cdef long long stride = k + 2
        cdef long long nsol = self.sols.length // stride
        cdef long long idx, i
        cdef long long *e
        out = []
        for idx in range(nsol):
            e = self.sols.buf + idx * stride
            out.append((e[0], e[1], tuple(e[2 + i] for i in range(k))))
        return out

    def stat_dict(self, int d):
        return {name: self.stats[d][i] for i, name in enumerate(STAT_NAMES)}

    def chain(self, int d, long long handle):
        """State sequence from the direction's root out to the handle."""
        cdef long long h = handle
        states = []
        while h >= 0:
            states.append(self.ins_state[d].buf[h])
            h = self.ins_parent[d].buf[h]
        states.reverse()
        return states

    def export_store(self, int d):
        """Per-state (x_handles, x_gs, dom_handles, dom_gs) Python lists."""
        cdef int k = self.k
        cdef long long stride = k + 1
        cdef long long u, idx, i, cnt
        cdef long long *e
        x_handles = [None] * self.n
        x_gs = [None] * self.n
        dom_handles = [None] * self.n
        dom_gs = [None] * self.n
        for u in range(self.n):
            cnt = self.xs[d][u].length // stride
            if cnt:
                hs = []
                gs = []
                for idx in range(cnt):
                    e = self.xs[d][u].buf + idx * stride
                    gs.append(tuple(e[i] for i in range(k)))
                    hs.append(e[k])
                x_handles[u] = hs
                x_gs[u] = gs
            cnt = self.doms[d][u].length // stride
            if cnt:
                hs = []
                gs = []
                for idx in range(cnt):
                    e = self.doms[d][u].buf + idx * stride
                    gs.append(tuple(e[i] for i in range(k)))
                    hs.append(e[k])
                dom_handles[u] = hs
                dom_gs[u] = gs
        return x_handles, x_gs, dom_handles, dom_gs


cdef inline bint _key_less(
    long long f1a, long long g1a, long long sa, long long qa,
    long long f1b, long long g1b, long long sb, long long qb,
) nogil:
    """Queue order: f1 asc, then g1 desc, then state asc, then seq asc."""
    if f1a != f1b:
        return f1a < f1b
    if g1a != g1b:
        return g1a > g1b
    if sa != sb:
        return sa < sb
    return qa < qb


cdef inline bint _scan_tr_any(
    long long *buf, long long count, long long stride, long long *g, int k
) nogil:
    cdef long long idx, i
    cdef long long *e
    cdef bint ok
    for idx in range(count):
        e = buf + idx * stride
        ok = True
        for i in range(1, k):
            if e[i] > g[i]:
                ok = False
                break
        if ok:
            return True
    return False
