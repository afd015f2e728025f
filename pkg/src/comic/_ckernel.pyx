# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled cascade kernels.

Mirrors ``_pykernel`` decision for decision: same coin order, same proposal
ordering, same backtracking. Keep the two in lockstep.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport malloc, free, qsort
from libc.string cimport memset

cnp.import_array()

BACKEND = "cython"

cdef enum:
    IDLE = 0
    ADOPTED = 1
    REJECTED = 2
    SUSPENDED = 3
    OS_IDLE = -1
    OS_EXHAUSTED = -2

cdef enum:
    EDGE = 0
    TRIAL_A = 1
    TRIAL_B = 2
    RECON_A = 3
    RECON_B = 4
    TRIAL = 5

from comic._pykernel import BudgetExceeded


ctypedef long long i64


cdef struct Coins:
    const double* u
    Py_ssize_t nu
    Py_ssize_t pos
    int* forced
    Py_ssize_t nforced
    int record
    Py_ssize_t n
    Py_ssize_t cap
    int* kind
    i64* subj
    double* prob
    int* out
    int error


cdef struct Graph:
    i64 n
    i64 m
    i64 maxin
    const i64* dst
    const i64* src
    const double* prob
    const i64* in_rank
    const i64* out_start
    const i64* out_edge


cdef int _cmp_i64(const void* a, const void* b) noexcept nogil:
    cdef i64 x = (<const i64*>a)[0]
    cdef i64 y = (<const i64*>b)[0]
    return (x > y) - (x < y)


cdef inline int flip(Coins* c, double p, int kind, i64 subj) noexcept nogil:
    cdef int out
    if p >= 1.0:
        return 1
    if p <= 0.0:
        return 0
    if c.u != NULL:
        if c.pos >= c.nu:
            c.error = 1
            return 0
        out = 1 if c.u[c.pos] < p else 0
        c.pos += 1
    else:
        if c.n < c.nforced:
            out = c.forced[c.n]
        else:
            out = 1
    if c.record:
        if c.n >= c.cap:
            c.error = 2
            return out
        c.kind[c.n] = kind
        c.subj[c.n] = subj
        c.prob[c.n] = p
        c.out[c.n] = out
        c.n += 1
    return out


cdef struct Work:
    i64* ev_node
    int* ev_idea
    i64* ev_next_node
    int* ev_next_idea
    i64* keys
    int* edge_live


cdef int work_alloc(Work* w, i64 n, i64 m) noexcept nogil:
    w.ev_node = <i64*>malloc(sizeof(i64) * (2 * n + 1))
    w.ev_idea = <int*>malloc(sizeof(int) * (2 * n + 1))
    w.ev_next_node = <i64*>malloc(sizeof(i64) * (2 * n + 1))
    w.ev_next_idea = <int*>malloc(sizeof(int) * (2 * n + 1))
    w.keys = <i64*>malloc(sizeof(i64) * (2 * m + 1))
    w.edge_live = <int*>malloc(sizeof(int) * (m + 1))
    if (w.ev_node == NULL or w.ev_idea == NULL or w.ev_next_node == NULL
            or w.ev_next_idea == NULL or w.keys == NULL or w.edge_live == NULL):
        return -1
    return 0


cdef void work_free(Work* w) noexcept nogil:
    free(w.ev_node)
    free(w.ev_idea)
    free(w.ev_next_node)
    free(w.ev_next_idea)
    free(w.keys)
    free(w.edge_live)


cdef void comic_core(Graph* g, const signed char* is_a, const signed char* is_b, const double* q,
                     int recon, Coins* c, Work* w,
                     signed char* a_state, signed char* b_state,
                     i64* a_time, i64* b_time) noexcept nogil:
    cdef i64 n = g.n
    cdef i64 v, u, e, j, k, key, last, t = 0
    cdef i64 nev = 0, nnext, nkeys
    cdef int idea, sub
    cdef double p
    cdef double qa0 = q[0], qb0 = q[1], qab = q[2], qba = q[3], rho_a = q[4], rho_b = q[5]
    cdef i64* tmpn
    cdef int* tmpi

    for v in range(n):
        a_state[v] = IDLE
        b_state[v] = IDLE
        a_time[v] = -1
        b_time[v] = -1
    for e in range(g.m):
        w.edge_live[e] = -1
    for v in range(n):
        if is_a[v]:
            a_state[v] = ADOPTED
            a_time[v] = 0
            w.ev_node[nev] = v
            w.ev_idea[nev] = 0
            nev += 1
        if is_b[v]:
            b_state[v] = ADOPTED
            b_time[v] = 0
            w.ev_node[nev] = v
            w.ev_idea[nev] = 1
            nev += 1

    while nev > 0:
        t += 1
        nkeys = 0
        last = -1
        for k in range(nev):
            v = w.ev_node[k]
            idea = w.ev_idea[k]
            sub = 1 if v == last else 0
            last = v
            for j in range(g.out_start[v], g.out_start[v + 1]):
                e = g.out_edge[j]
                w.keys[nkeys] = (((g.dst[e] * g.maxin + g.in_rank[e]) * 2 + sub) * 2 + idea) * g.m + e
                nkeys += 1
        qsort(w.keys, nkeys, sizeof(i64), _cmp_i64)
        nnext = 0
        for k in range(nkeys):
            key = w.keys[k]
            e = key % g.m
            idea = (key // g.m) & 1
            u = g.dst[e]
            if idea == 0:
                if a_state[u] != IDLE:
                    continue
            elif b_state[u] != IDLE:
                continue
            if w.edge_live[e] < 0:
                w.edge_live[e] = flip(c, g.prob[e], EDGE, e)
            if not w.edge_live[e]:
                continue
            if idea == 0:
                p = qab if b_state[u] == ADOPTED else qa0
                if flip(c, p, TRIAL_A, u):
                    a_state[u] = ADOPTED
                    a_time[u] = t
                    w.ev_next_node[nnext] = u
                    w.ev_next_idea[nnext] = 0
                    nnext += 1
                    if recon and b_state[u] == SUSPENDED:
                        if flip(c, rho_b, RECON_B, u):
                            b_state[u] = ADOPTED
                            b_time[u] = t
                            w.ev_next_node[nnext] = u
                            w.ev_next_idea[nnext] = 1
                            nnext += 1
                        else:
                            b_state[u] = REJECTED
                else:
                    a_state[u] = SUSPENDED if recon else REJECTED
            else:
                p = qba if a_state[u] == ADOPTED else qb0
                if flip(c, p, TRIAL_B, u):
                    b_state[u] = ADOPTED
                    b_time[u] = t
                    w.ev_next_node[nnext] = u
                    w.ev_next_idea[nnext] = 1
                    nnext += 1
                    if recon and a_state[u] == SUSPENDED:
                        if flip(c, rho_a, RECON_A, u):
                            a_state[u] = ADOPTED
                            a_time[u] = t
                            w.ev_next_node[nnext] = u
                            w.ev_next_idea[nnext] = 0
                            nnext += 1
                        else:
                            a_state[u] = REJECTED
                else:
                    b_state[u] = SUSPENDED if recon else REJECTED
        tmpn = w.ev_node
        w.ev_node = w.ev_next_node
        w.ev_next_node = tmpn
        tmpi = w.ev_idea
        w.ev_idea = w.ev_next_idea
        w.ev_next_idea = tmpi
        nev = nnext


cdef void oneshot_core(Graph* g, const i64* seed_idea, const double* q, Coins* c, Work* w,
                       i64* state, i64* time) noexcept nogil:
    cdef i64 n = g.n
    cdef i64 v, u, e, j, k, key, t = 0
    cdef i64 nev = 0, nnext, nkeys, idea
    cdef i64* tmpn

    for v in range(n):
        state[v] = OS_IDLE
        time[v] = -1
    for e in range(g.m):
        w.edge_live[e] = -1
    for v in range(n):
        if seed_idea[v] >= 0:
            state[v] = seed_idea[v]
            time[v] = 0
            w.ev_node[nev] = v
            nev += 1
    while nev > 0:
        t += 1
        nkeys = 0
        for k in range(nev):
            v = w.ev_node[k]
            for j in range(g.out_start[v], g.out_start[v + 1]):
                e = g.out_edge[j]
                w.keys[nkeys] = (g.dst[e] * g.maxin + g.in_rank[e]) * g.m + e
                nkeys += 1
        qsort(w.keys, nkeys, sizeof(i64), _cmp_i64)
        nnext = 0
        for k in range(nkeys):
            key = w.keys[k]
            e = key % g.m
            u = g.dst[e]
            if state[u] != OS_IDLE:
                continue
            if w.edge_live[e] < 0:
                w.edge_live[e] = flip(c, g.prob[e], EDGE, e)
            if not w.edge_live[e]:
                continue
            idea = state[g.src[e]]
            if flip(c, q[idea], TRIAL, u):
                state[u] = idea
                time[u] = t
                w.ev_next_node[nnext] = u
                nnext += 1
            else:
                state[u] = OS_EXHAUSTED
        tmpn = w.ev_node
        w.ev_node = w.ev_next_node
        w.ev_next_node = tmpn
        nev = nnext


cdef class _GraphHolder:
    cdef Graph g
    cdef object refs

    def __cinit__(self, ga):
        cdef cnp.ndarray[i64, ndim=1] dst = np.ascontiguousarray(ga.dst, dtype=np.int64)
        cdef cnp.ndarray[i64, ndim=1] src = np.ascontiguousarray(ga.src, dtype=np.int64)
        cdef cnp.ndarray[double, ndim=1] prob = np.ascontiguousarray(ga.prob, dtype=np.float64)
        cdef cnp.ndarray[i64, ndim=1] rank = np.ascontiguousarray(ga.in_rank, dtype=np.int64)
        cdef cnp.ndarray[i64, ndim=1] ostart = np.ascontiguousarray(ga.out_start, dtype=np.int64)
        cdef cnp.ndarray[i64, ndim=1] oedge = np.ascontiguousarray(ga.out_edge, dtype=np.int64)
        # keep the buffers alive for the raw pointers below
        self.refs = (dst, src, prob, rank, ostart, oedge)
        self.g.n = ga.n
        self.g.m = max(len(dst), 1)
        self.g.maxin = ga.max_in_degree
        self.g.dst = <const i64*>dst.data
        self.g.src = <const i64*>src.data
        self.g.prob = <const double*>prob.data
        self.g.in_rank = <const i64*>rank.data
        self.g.out_start = <const i64*>ostart.data
        self.g.out_edge = <const i64*>oedge.data


cdef int coins_alloc(Coins* c, Py_ssize_t cap) noexcept nogil:
    c.cap = cap
    c.n = 0
    c.kind = <int*>malloc(sizeof(int) * (cap + 1))
    c.subj = <i64*>malloc(sizeof(i64) * (cap + 1))
    c.prob = <double*>malloc(sizeof(double) * (cap + 1))
    c.out = <int*>malloc(sizeof(int) * (cap + 1))
    c.forced = <int*>malloc(sizeof(int) * (cap + 1))
    if c.kind == NULL or c.subj == NULL or c.prob == NULL or c.out == NULL or c.forced == NULL:
        return -1
    return 0


cdef void coins_free(Coins* c) noexcept nogil:
    free(c.kind)
    free(c.subj)
    free(c.prob)
    free(c.out)
    free(c.forced)


cdef object _trace(Coins* c):
    return [(c.kind[i], c.subj[i], c.prob[i], bool(c.out[i])) for i in range(c.n)]


def comic_simulate(ga, is_a, is_b, params, recon, uniforms, record=False):
    cdef _GraphHolder h = _GraphHolder(ga)
    cdef i64 n = ga.n
    cdef cnp.ndarray[signed char, ndim=1] ca = np.ascontiguousarray(is_a, dtype=np.int8)
    cdef cnp.ndarray[signed char, ndim=1] cb = np.ascontiguousarray(is_b, dtype=np.int8)
    cdef cnp.ndarray[double, ndim=1] q = np.ascontiguousarray(params, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef cnp.ndarray[signed char, ndim=1] a_state = np.empty(n, dtype=np.int8)
    cdef cnp.ndarray[signed char, ndim=1] b_state = np.empty(n, dtype=np.int8)
    cdef cnp.ndarray[i64, ndim=1] a_time = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] b_time = np.empty(n, dtype=np.int64)
    cdef Coins c
    cdef Work w
    memset(&c, 0, sizeof(Coins))
    memset(&w, 0, sizeof(Work))
    try:
        if coins_alloc(&c, ga.dst.shape[0] + 4 * n) or work_alloc(&w, n, h.g.m):
            raise MemoryError()
        c.u = <const double*>u.data
        c.nu = u.shape[0]
        c.record = 1 if record else 0
        comic_core(&h.g, <const signed char*>ca.data, <const signed char*>cb.data, <const double*>q.data,
                   1 if recon else 0, &c, &w, <signed char*>a_state.data, <signed char*>b_state.data,
                   <i64*>a_time.data, <i64*>b_time.data)
        if c.error == 1:
            raise RuntimeError("uniform stream exhausted")
        trace = _trace(&c) if record else None
    finally:
        coins_free(&c)
        work_free(&w)
    return a_state, b_state, a_time, b_time, trace


def oneshot_simulate(ga, seed_idea, q, uniforms, record=False):
    cdef _GraphHolder h = _GraphHolder(ga)
    cdef i64 n = ga.n
    cdef cnp.ndarray[i64, ndim=1] si = np.ascontiguousarray(seed_idea, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] qq = np.ascontiguousarray(q, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=1] state = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] time = np.empty(n, dtype=np.int64)
    cdef Coins c
    cdef Work w
    memset(&c, 0, sizeof(Coins))
    memset(&w, 0, sizeof(Work))
    try:
        if coins_alloc(&c, ga.dst.shape[0] + n) or work_alloc(&w, n, h.g.m):
            raise MemoryError()
        c.u = <const double*>u.data
        c.nu = u.shape[0]
        c.record = 1 if record else 0
        oneshot_core(&h.g, <const i64*>si.data, <const double*>qq.data, &c, &w,
                     <i64*>state.data, <i64*>time.data)
        if c.error == 1:
            raise RuntimeError("uniform stream exhausted")
        trace = _trace(&c) if record else None
    finally:
        coins_free(&c)
        work_free(&w)
    return state, time, trace


def comic_batch(ga, is_a, is_b, params, recon, uniforms):
    cdef _GraphHolder h = _GraphHolder(ga)
    cdef i64 n = ga.n
    cdef cnp.ndarray[signed char, ndim=1] ca = np.ascontiguousarray(is_a, dtype=np.int8)
    cdef cnp.ndarray[signed char, ndim=1] cb = np.ascontiguousarray(is_b, dtype=np.int8)
    cdef cnp.ndarray[double, ndim=1] q = np.ascontiguousarray(params, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef i64 runs = u.shape[0], r, v
    cdef cnp.ndarray[double, ndim=2] sig = np.zeros((runs, 2), dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=2] counts = np.zeros((n, 2), dtype=np.int64)
    cdef cnp.ndarray[signed char, ndim=1] a_state = np.empty(n, dtype=np.int8)
    cdef cnp.ndarray[signed char, ndim=1] b_state = np.empty(n, dtype=np.int8)
    cdef cnp.ndarray[i64, ndim=1] a_time = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] b_time = np.empty(n, dtype=np.int64)
    cdef Coins c
    cdef Work w
    cdef int rc = 1 if recon else 0
    cdef int err = 0
    memset(&c, 0, sizeof(Coins))
    memset(&w, 0, sizeof(Work))
    try:
        if work_alloc(&w, n, h.g.m):
            raise MemoryError()
        with nogil:
            for r in range(runs):
                c.u = &u[r, 0]
                c.nu = u.shape[1]
                c.pos = 0
                comic_core(&h.g, <const signed char*>ca.data, <const signed char*>cb.data, <const double*>q.data,
                           rc, &c, &w, <signed char*>a_state.data, <signed char*>b_state.data,
                           <i64*>a_time.data, <i64*>b_time.data)
                if c.error:
                    err = c.error
                    break
                for v in range(n):
                    if a_state[v] == ADOPTED:
                        counts[v, 0] += 1
                        sig[r, 0] += 1
                    if b_state[v] == ADOPTED:
                        counts[v, 1] += 1
                        sig[r, 1] += 1
        if err:
            raise RuntimeError("uniform stream exhausted")
    finally:
        work_free(&w)
    return sig, counts


def oneshot_batch(ga, seed_idea, q, uniforms):
    cdef _GraphHolder h = _GraphHolder(ga)
    cdef i64 n = ga.n
    cdef cnp.ndarray[i64, ndim=1] si = np.ascontiguousarray(seed_idea, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] qq = np.ascontiguousarray(q, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef i64 runs = u.shape[0], r, v, s
    cdef i64 m = qq.shape[0]
    cdef cnp.ndarray[double, ndim=2] sig = np.zeros((runs, m), dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=2] counts = np.zeros((n, m), dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] state = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] time = np.empty(n, dtype=np.int64)
    cdef Coins c
    cdef Work w
    cdef int err = 0
    memset(&c, 0, sizeof(Coins))
    memset(&w, 0, sizeof(Work))
    try:
        if work_alloc(&w, n, h.g.m):
            raise MemoryError()
        with nogil:
            for r in range(runs):
                c.u = &u[r, 0]
                c.nu = u.shape[1]
                c.pos = 0
                oneshot_core(&h.g, <const i64*>si.data, <const double*>qq.data, &c, &w,
                             <i64*>state.data, <i64*>time.data)
                if c.error:
                    err = c.error
                    break
                for v in range(n):
                    s = state[v]
                    if s >= 0:
                        counts[v, s] += 1
                        sig[r, s] += 1
        if err:
            raise RuntimeError("uniform stream exhausted")
    finally:
        work_free(&w)
    return sig, counts


cdef inline void kahan_add(double* s, double* comp, double x) noexcept nogil:
    cdef double y = x - comp[0]
    cdef double t = s[0] + y
    comp[0] = (t - s[0]) - y
    s[0] = t


cdef int backtrack(Coins* c) noexcept nogil:
    """Prepare the next forced prefix; return 0 when the tree is exhausted."""
    cdef Py_ssize_t i = c.n - 1
    cdef Py_ssize_t j
    while i >= 0 and not c.out[i]:
        i -= 1
    if i < 0:
        return 0
    for j in range(i):
        c.forced[j] = c.out[j]
    c.forced[i] = 0
    c.nforced = i + 1
    c.n = 0
    return 1


cdef double leaf_weight(Coins* c) noexcept nogil:
    cdef double w = 1.0
    cdef Py_ssize_t i
    for i in range(c.n):
        w *= c.prob[i] if c.out[i] else 1.0 - c.prob[i]
    return w


def comic_exact(ga, is_a, is_b, params, recon, budget):
    cdef _GraphHolder h = _GraphHolder(ga)
    cdef i64 n = ga.n
    cdef cnp.ndarray[signed char, ndim=1] ca = np.ascontiguousarray(is_a, dtype=np.int8)
    cdef cnp.ndarray[signed char, ndim=1] cb = np.ascontiguousarray(is_b, dtype=np.int8)
    cdef cnp.ndarray[double, ndim=1] q = np.ascontiguousarray(params, dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] per = np.zeros((n, 2), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] comp = np.zeros((n, 2), dtype=np.float64)
    cdef cnp.ndarray[signed char, ndim=1] a_state = np.empty(n, dtype=np.int8)
    cdef cnp.ndarray[signed char, ndim=1] b_state = np.empty(n, dtype=np.int8)
    cdef cnp.ndarray[i64, ndim=1] a_time = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] b_time = np.empty(n, dtype=np.int64)
    cdef Coins c
    cdef Work w
    cdef int rc = 1 if recon else 0
    cdef i64 leaves = 0, limit = budget, v
    cdef double total = 0.0, total_c = 0.0, wt
    cdef int over = 0
    memset(&c, 0, sizeof(Coins))
    memset(&w, 0, sizeof(Work))
    try:
        if coins_alloc(&c, ga.dst.shape[0] + 4 * n) or work_alloc(&w, n, h.g.m):
            raise MemoryError()
        c.u = NULL
        c.record = 1
        c.nforced = 0
        with nogil:
            while True:
                comic_core(&h.g, <const signed char*>ca.data, <const signed char*>cb.data, <const double*>q.data,
                           rc, &c, &w, <signed char*>a_state.data, <signed char*>b_state.data,
                           <i64*>a_time.data, <i64*>b_time.data)
                leaves += 1
                if leaves > limit:
                    over = 1
                    break
                wt = leaf_weight(&c)
                kahan_add(&total, &total_c, wt)
                for v in range(n):
                    if a_state[v] == ADOPTED:
                        kahan_add(&per[v, 0], &comp[v, 0], wt)
                    if b_state[v] == ADOPTED:
                        kahan_add(&per[v, 1], &comp[v, 1], wt)
                if not backtrack(&c):
                    break
        if over:
            raise BudgetExceeded(leaves, budget)
    finally:
        coins_free(&c)
        work_free(&w)
    return per, total, leaves


def oneshot_exact(ga, seed_idea, q, budget):
    cdef _GraphHolder h = _GraphHolder(ga)
    cdef i64 n = ga.n
    cdef cnp.ndarray[i64, ndim=1] si = np.ascontiguousarray(seed_idea, dtype=np.int64)
    cdef cnp.ndarray[double, ndim=1] qq = np.ascontiguousarray(q, dtype=np.float64)
    cdef i64 m = qq.shape[0]
    cdef cnp.ndarray[double, ndim=2] per = np.zeros((n, m), dtype=np.float64)
    cdef cnp.ndarray[double, ndim=2] comp = np.zeros((n, m), dtype=np.float64)
    cdef cnp.ndarray[i64, ndim=1] state = np.empty(n, dtype=np.int64)
    cdef cnp.ndarray[i64, ndim=1] time = np.empty(n, dtype=np.int64)
    cdef Coins c
    cdef Work w
    cdef i64 leaves = 0, limit = budget, v, s
    cdef double total = 0.0, total_c = 0.0, wt
    cdef int over = 0
    memset(&c, 0, sizeof(Coins))
    memset(&w, 0, sizeof(Work))
    try:
        if coins_alloc(&c, ga.dst.shape[0] + n) or work_alloc(&w, n, h.g.m):
            raise MemoryError()
        c.u = NULL
        c.record = 1
        c.nforced = 0
        with nogil:
            while True:
                oneshot_core(&h.g, <const i64*>si.data, <const double*>qq.data, &c, &w,
                             <i64*>state.data, <i64*>time.data)
                leaves += 1
                if leaves > limit:
                    over = 1
                    break
                wt = leaf_weight(&c)
                kahan_add(&total, &total_c, wt)
                for v in range(n):
                    s = state[v]
                    if s >= 0:
                        kahan_add(&per[v, s], &comp[v, s], wt)
                if not backtrack(&c):
                    break
        if over:
            raise BudgetExceeded(leaves, budget)
    finally:
        coins_free(&c)
        work_free(&w)
    return per, total, leaves
