# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; same signatures and results as ``_pykernels``."""

from libc.stdlib cimport malloc, free, calloc

import numpy as np
cimport numpy as cnp

cnp.import_array()

BACKEND = "compiled"


cdef long long _inv(long long a, long long p):
    # Fermat inverse; p prime
    cdef long long result = 1, base = a % p, e = p - 2
    while e > 0:
        if e & 1:
            result = result * base % p
        base = base * base % p
        e >>= 1
    return result


def gf_rank(vectors, long long p):
    """Rank over GF(p) of the rows of ``vectors``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] a = np.array(vectors, dtype=np.int64, copy=True) % p
    cdef Py_ssize_t nrows = a.shape[0]
    if nrows == 0:
        return 0
    cdef Py_ssize_t ncols = a.shape[1]
    cdef Py_ssize_t rank = 0, col, i, j, pivot
    cdef long long inv, f, t
    for col in range(ncols):
        pivot = -1
        for i in range(rank, nrows):
            if a[i, col] != 0:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != rank:
            for j in range(col, ncols):
                t = a[rank, j]
                a[rank, j] = a[pivot, j]
                a[pivot, j] = t
        inv = _inv(a[rank, col], p)
        for j in range(col, ncols):
            a[rank, j] = a[rank, j] * inv % p
        for i in range(rank + 1, nrows):
            f = a[i, col]
            if f != 0:
                for j in range(col, ncols):
                    a[i, j] = (a[i, j] - f * a[rank, j]) % p
                    if a[i, j] < 0:
                        a[i, j] += p
        rank += 1
        if rank == nrows:
            break
    return rank


cdef Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def forest_acyclic(tails, heads, Py_ssize_t nverts):
    """True iff the edges ``tails[i]--heads[i]`` (0-based vertices) form a forest."""
    cdef cnp.ndarray[cnp.int64_t, ndim=1] u = np.asarray(tails, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] w = np.asarray(heads, dtype=np.int64)
    cdef Py_ssize_t* parent = <Py_ssize_t*> malloc(max(nverts, 1) * sizeof(Py_ssize_t))
    cdef Py_ssize_t i, ru, rw
    cdef bint ok = True
    for i in range(nverts):
        parent[i] = i
    for i in range(u.shape[0]):
        ru = _find(parent, u[i])
        rw = _find(parent, w[i])
        if ru == rw:
            ok = False
            break
        parent[ru] = rw
    free(parent)
    return ok


cdef struct Search:
    Py_ssize_t m
    Py_ssize_t n
    cnp.int64_t* grid
    unsigned char* blocked
    unsigned char* row_used
    unsigned char* sym_used
    Py_ssize_t* choice
    Py_ssize_t* first
    bint have_first
    bint first_only
    long long count


cdef bint _rec_transversal(Search* s, Py_ssize_t col):
    cdef Py_ssize_t r, j
    cdef long long sym
    if col == s.n:
        s.count += 1
        if not s.have_first:
            for j in range(s.n):
                s.first[j] = s.choice[j]
            s.have_first = True
        return s.first_only
    for r in range(s.m):
        if s.row_used[r] or s.blocked[r * s.n + col]:
            continue
        sym = s.grid[r * s.n + col]
        if s.sym_used[sym]:
            continue
        s.row_used[r] = 1
        s.sym_used[sym] = 1
        s.choice[col] = r
        if _rec_transversal(s, col + 1):
            s.row_used[r] = 0
            s.sym_used[sym] = 0
            return True
        s.row_used[r] = 0
        s.sym_used[sym] = 0
    return False


def latin_transversals(grid, blocked, Py_ssize_t k, bint first_only):
    """Backtracking over columns for transversals with pairwise distinct symbols."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] g = np.ascontiguousarray(grid, dtype=np.int64)
    cdef cnp.ndarray[cnp.uint8_t, ndim=2, mode="c"] bl = np.ascontiguousarray(blocked, dtype=np.uint8)
    cdef Search s
    s.m = g.shape[0]
    s.n = g.shape[1] if s.m else 0
    if s.n == 0:
        return 1, []
    s.grid = &g[0, 0]
    s.blocked = &bl[0, 0]
    s.row_used = <unsigned char*> calloc(s.m, 1)
    s.sym_used = <unsigned char*> calloc(max(k, 1), 1)
    s.choice = <Py_ssize_t*> calloc(s.n, sizeof(Py_ssize_t))
    s.first = <Py_ssize_t*> calloc(s.n, sizeof(Py_ssize_t))
    s.have_first = False
    s.first_only = first_only
    s.count = 0
    _rec_transversal(&s, 0)
    result = [s.first[j] for j in range(s.n)] if s.have_first else None
    count = s.count
    free(s.row_used)
    free(s.sym_used)
    free(s.choice)
    free(s.first)
    return count, result


cdef struct Pack:
    Py_ssize_t m
    Py_ssize_t n
    Py_ssize_t target
    cnp.int64_t* grid
    unsigned char* cell_used
    Py_ssize_t* free_in_col
    unsigned char* row_used
    unsigned char* sym_used
    Py_ssize_t* cur      # target x n


cdef bint _rec_pack(Pack* s, Py_ssize_t t, Py_ssize_t col, Py_ssize_t prev0):
    cdef Py_ssize_t n = s.n, m = s.m
    cdef Py_ssize_t* done = s.cur + t * n
    cdef Py_ssize_t c, r, rr, start, need, avail
    cdef long long sym
    if col == n:
        if t + 1 == s.target:
            return True
        for c in range(n):
            s.cell_used[done[c] * n + c] = 1
            s.free_in_col[c] -= 1
            s.row_used[done[c]] = 0
            s.sym_used[s.grid[done[c] * n + c]] = 0
        if _rec_pack(s, t + 1, 0, done[0]):
            return True
        for c in range(n):
            s.cell_used[done[c] * n + c] = 0
            s.free_in_col[c] += 1
            s.row_used[done[c]] = 1
            s.sym_used[s.grid[done[c] * n + c]] = 1
        return False
    if col == 0:
        need = s.target - t
        for c in range(n):
            if s.free_in_col[c] < need:
                return False
        start = prev0 + 1
    else:
        start = 0
    for r in range(start, m):
        if s.cell_used[r * n + col] or s.row_used[r]:
            continue
        sym = s.grid[r * n + col]
        if s.sym_used[sym]:
            continue
        if col == 0:
            avail = 0
            for rr in range(r + 1, m):
                if not s.cell_used[rr * n]:
                    avail += 1
            if avail < s.target - t - 1:
                break
        s.row_used[r] = 1
        s.sym_used[sym] = 1
        done[col] = r
        if _rec_pack(s, t, col + 1, prev0):
            s.row_used[r] = 0
            s.sym_used[sym] = 0
            return True
        s.row_used[r] = 0
        s.sym_used[sym] = 0
    return False


def latin_pack(grid, Py_ssize_t k, Py_ssize_t target):
    """Find ``target`` cell-disjoint transversals, or return ``None``."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2, mode="c"] g = np.ascontiguousarray(grid, dtype=np.int64)
    cdef Pack s
    cdef Py_ssize_t c, t
    s.m = g.shape[0]
    s.n = g.shape[1] if s.m else 0
    if target <= 0:
        return []
    if s.n == 0 or target > s.m:
        return None
    s.target = target
    s.grid = &g[0, 0]
    s.cell_used = <unsigned char*> calloc(s.m * s.n, 1)
    s.free_in_col = <Py_ssize_t*> malloc(s.n * sizeof(Py_ssize_t))
    for c in range(s.n):
        s.free_in_col[c] = s.m
    s.row_used = <unsigned char*> calloc(s.m, 1)
    s.sym_used = <unsigned char*> calloc(max(k, 1), 1)
    s.cur = <Py_ssize_t*> calloc(target * s.n, sizeof(Py_ssize_t))
    ok = _rec_pack(&s, 0, 0, -1)
    result = None
    if ok:
        result = [[s.cur[t * s.n + c] for c in range(s.n)] for t in range(target)]
    free(s.cell_used)
    free(s.free_in_col)
    free(s.row_used)
    free(s.sym_used)
    free(s.cur)
    return result
