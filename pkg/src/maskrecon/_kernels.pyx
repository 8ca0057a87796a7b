# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels (Cython twin of maskrecon._kernels_py).

Same signatures, same results, plain C loops.  Callers guarantee
q < 2^31 and, for cross_check_sweep, s <= 62 and 1 <= w <= 63 with
q * 2^s below 2^63 (the dispatch layer falls back to the pure-Python
kernels otherwise).
"""

from libc.stdlib cimport free, malloc
from libc.string cimport memset

ctypedef unsigned long long u64

cdef extern from *:
    ctypedef unsigned long long u128 "unsigned __int128"

BACKEND = "c"

DEF KIND_IDENTITY = 0
DEF KIND_BARRETT = 1
DEF KIND_MONTGOMERY = 2
DEF KIND_UNMASKED = 3
DEF KIND_LOSSY = 4


cdef inline u64 _eval(int kind, u64 q, u64 off, u64 t, u64 x, u64 m) nogil:
    if kind == KIND_IDENTITY:
        return (x + q - m) % q
    if kind == KIND_BARRETT or kind == KIND_MONTGOMERY:
        if m <= x:
            return x - m
        return (x + q - m + off) % q
    if kind == KIND_UNMASKED:
        return x
    return (x + m // t) % q


cdef unsigned int *_alloc_counts(u64 q) except NULL:
    cdef unsigned int *counts = <unsigned int *> malloc(q * sizeof(unsigned int))
    if counts == NULL:
        raise MemoryError(f"count buffer for q={q}")
    return counts


def output_histogram(int kind, u64 q, u64 off, u64 t, u64 x):
    cdef unsigned int *counts = _alloc_counts(q)
    cdef u64 m
    try:
        memset(counts, 0, q * sizeof(unsigned int))
        with nogil:
            for m in range(q):
                counts[_eval(kind, q, off, t, x, m)] += 1
        return [counts[m] for m in range(q)]
    finally:
        free(counts)


def sweep_max_mult(int kind, u64 q, u64 off, u64 t, secrets):
    cdef unsigned int *counts = _alloc_counts(q)
    cdef u64 x, m, v, best_v
    cdef unsigned int best
    out = []
    try:
        for x_obj in secrets:
            x = x_obj
            memset(counts, 0, q * sizeof(unsigned int))
            best = 0
            best_v = 0
            with nogil:
                for m in range(q):
                    counts[_eval(kind, q, off, t, x, m)] += 1
                for v in range(q):
                    if counts[v] > best:
                        best = counts[v]
                        best_v = v
            out.append((best, best_v))
        return out
    finally:
        free(counts)


def preimage_count(int kind, u64 q, u64 off, u64 t, u64 x, u64 v):
    cdef u64 m, n = 0
    with nogil:
        for m in range(q):
            if _eval(kind, q, off, t, x, m) == v:
                n += 1
    return n


def preimage_list(int kind, u64 q, u64 off, u64 t, u64 x, u64 v):
    cdef u64 m
    out = []
    for m in range(q):
        if _eval(kind, q, off, t, x, m) == v:
            out.append(m)
    return out


def renewal_count(int kind, u64 q, u64 off, u64 t, u64 x, u64 w_target):
    cdef u64 m1, f, a, n = 0
    with nogil:
        for m1 in range(q):
            a = _eval(kind, q, off, t, x, m1)
            for f in range(q):
                if (a + q - f) % q == w_target:
                    n += 1
    return n


cdef void _pipe_rec(int depth, int k, int *kinds, u64 *offs, u64 *ts,
                    u64 q, u64 a, u64 *counts) nogil:
    cdef u64 m, f, out
    cdef int kind = kinds[depth]
    cdef u64 off = offs[depth], t = ts[depth]
    if depth == k - 1:
        for m in range(q):
            counts[_eval(kind, q, off, t, a, m)] += 1
    else:
        for m in range(q):
            out = _eval(kind, q, off, t, a, m)
            for f in range(q):
                _pipe_rec(depth + 1, k, kinds, offs, ts, q,
                          (out + q - f) % q, counts)


def pipeline_histogram(kinds, u64 q, offs, ts, u64 x):
    cdef int k = len(kinds)
    cdef int i
    cdef int *ckinds = <int *> malloc(k * sizeof(int))
    cdef u64 *coffs = <u64 *> malloc(k * sizeof(u64))
    cdef u64 *cts = <u64 *> malloc(k * sizeof(u64))
    cdef u64 *counts = <u64 *> malloc(q * sizeof(u64))
    if ckinds == NULL or coffs == NULL or cts == NULL or counts == NULL:
        free(ckinds); free(coffs); free(cts); free(counts)
        raise MemoryError()
    try:
        for i in range(k):
            ckinds[i] = kinds[i]
            coffs[i] = offs[i]
            cts[i] = ts[i]
        memset(counts, 0, q * sizeof(u64))
        with nogil:
            _pipe_rec(0, k, ckinds, coffs, cts, q, x, counts)
        return [counts[i2] for i2 in range(q)]
    finally:
        free(ckinds); free(coffs); free(cts); free(counts)


def cross_check_sweep(u64 q, int s, int w, u64 q_prime, secrets):
    cdef u64 R = (<u64> 1) << s
    cdef u64 wmask = ((<u64> 1) << w) - 1
    cdef u64 off
    cdef u64 x, m, xs, T, internal
    cdef u128 red
    cdef u64 pairs = 0, bad = 0
    cdef long long first_x = -1, first_m = -1
    if w >= s:
        off = pow(2, w - s, q)
    else:
        off = 1 % q
    for x_obj in secrets:
        x = x_obj
        xs = x << s
        with nogil:
            for m in range(q):
                T = (xs - (m << s)) & wmask
                red = (<u128> T + (((<u128> (T & (R - 1))) * q_prime & (R - 1)) * q)) >> s
                internal = x - m if m <= x else (x + q - m + off) % q
                if <u64> (red % q) != internal:
                    bad += 1
                    if first_x < 0:
                        first_x = <long long> x
                        first_m = <long long> m
                pairs += 1
    return pairs, bad, first_x, first_m
