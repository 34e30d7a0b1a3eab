"""Pure-Python kernels.

Mirrors ``_ckernels.pyx`` function for function; used when the compiled
extension is not importable, and as the baseline in benchmarks.
"""

from __future__ import annotations

import numpy as np

BACKEND = "python"


def gf_rank(vectors: np.ndarray, p: int) -> int:
    """Rank over GF(p) of the rows of ``vectors``."""
    rows = [[int(x) % p for x in row] for row in vectors.tolist()]
    if not rows:
        return 0
    ncols = len(rows[0])
    rank = 0
    for col in range(ncols):
        pivot = -1
        for i in range(rank, len(rows)):
            if rows[i][col]:
                pivot = i
                break
        if pivot < 0:
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        prow = rows[rank]
        inv = pow(prow[col], p - 2, p)
        for j in range(col, ncols):
            prow[j] = prow[j] * inv % p
        for i in range(rank + 1, len(rows)):
            f = rows[i][col]
            if f:
                r = rows[i]
                for j in range(col, ncols):
                    r[j] = (r[j] - f * prow[j]) % p
        rank += 1
        if rank == len(rows):
            break
    return rank


def forest_acyclic(tails: np.ndarray, heads: np.ndarray, nverts: int) -> bool:
    """True iff the edges ``tails[i]--heads[i]`` (0-based vertices) form a forest."""
    parent = list(range(nverts))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, w in zip(tails.tolist(), heads.tolist()):
        ru, rw = find(u), find(w)
        if ru == rw:
            return False
        parent[ru] = rw
    return True


def latin_transversals(grid: np.ndarray, blocked: np.ndarray, k: int, first_only: bool):
    """Backtracking over columns for transversals with pairwise distinct symbols.

    ``grid`` holds 0-based symbols; cells with ``blocked`` set are skipped.
    Returns ``(count, rows)`` where ``rows[j]`` is the row used in column ``j``
    of the first transversal found (``None`` if there is none).
    """
    g = grid.tolist()
    bl = blocked.tolist()
    m = len(g)
    n = len(g[0]) if m else 0
    row_used = [False] * m
    sym_used = [False] * k
    choice = [0] * n
    first = None
    count = 0

    def rec(col: int) -> bool:
        nonlocal count, first
        if col == n:
            count += 1
            if first is None:
                first = list(choice)
            return first_only
        for r in range(m):
            if row_used[r] or bl[r][col]:
                continue
            s = g[r][col]
            if sym_used[s]:
                continue
            row_used[r] = True
            sym_used[s] = True
            choice[col] = r
            stop = rec(col + 1)
            row_used[r] = False
            sym_used[s] = False
            if stop:
                return True
        return False

    if n == 0:
        return 1, []
    rec(0)
    return count, first


def latin_pack(grid: np.ndarray, k: int, target: int):
    """Find ``target`` cell-disjoint transversals, or return ``None``.

    Transversals are generated in increasing order of the row they use in
    column 0, which removes the ordering symmetry without losing solutions.
    Each result is a list of rows indexed by column.
    """
    g = grid.tolist()
    m = len(g)
    n = len(g[0]) if m else 0
    if target <= 0:
        return []
    if n == 0 or target > m:
        return None
    cell_used = [[False] * n for _ in range(m)]
    free = [m] * n
    row_used = [False] * m
    sym_used = [False] * k
    cur = [[0] * n for _ in range(target)]
    found: list[list[int]] = []

    def rec(t: int, col: int, prev0: int) -> bool:
        if col == n:
            done = list(cur[t])
            found.append(done)
            if t + 1 == target:
                return True
            for c in range(n):
                cell_used[done[c]][c] = True
                free[c] -= 1
                row_used[done[c]] = False
                sym_used[g[done[c]][c]] = False
            if rec(t + 1, 0, done[0]):
                return True
            for c in range(n):
                cell_used[done[c]][c] = False
                free[c] += 1
                row_used[done[c]] = True
                sym_used[g[done[c]][c]] = True
            found.pop()
            return False
        if col == 0:
            need = target - t
            for c in range(n):
                if free[c] < need:
                    return False
            start = prev0 + 1
        else:
            start = 0
        for r in range(start, m):
            if cell_used[r][col] or row_used[r]:
                continue
            s = g[r][col]
            if sym_used[s]:
                continue
            if col == 0:
                # later transversals take column-0 cells strictly below r
                avail = 0
                for rr in range(r + 1, m):
                    if not cell_used[rr][0]:
                        avail += 1
                if avail < target - t - 1:
                    break
            row_used[r] = True
            sym_used[s] = True
            cur[t][col] = r
            ok = rec(t, col + 1, prev0)
            row_used[r] = False
            sym_used[s] = False
            if ok:
                return True
        return False

    if rec(0, 0, -1):
        return found
    return None
