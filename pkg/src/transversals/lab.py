"""Exhaustive and sampled searches around disjoint transversals.

Everything here is desk scale: packings of cell-disjoint ITs, n-row
decompositions, isomorphism of row-Latin matrices under row, column and
symbol permutations, and sweeps that record (never assert) conjecture
failures.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, combinations_with_replacement, permutations, product

import numpy as np

from . import kernels
from .engine import brute_force_find
from .generators import gen_R, random_linear, random_rowlatin
from .instance import Cell, Classification, Instance, classify_positions, restrict, rowlatin, serialize

PACK_LIMIT = 7
NROW_LIMIT = 4
ISO_LIMIT = 6
ISO_SYMBOL_LIMIT = 8
DRISKO_LIMITS = {"n": 3, "k": 4}


class LimitError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass
class DisjointPacking:
    transversals: list[tuple[Cell, ...]]


@dataclass
class RowDecomposition:
    rows: tuple[int, ...]
    transversals: list[tuple[Cell, ...]]


# ---------------------------------------------------------------------------
# packing


def _latin_pack(instance: Instance, target: int):
    grid = np.array(instance.view_grid(), dtype=np.int64)
    found = kernels.latin_pack(grid, instance.k, target)
    if found is None:
        return None
    rows, cols = instance.rows, instance.cols
    return [tuple(Cell(rows[i], cols[j]) for j, i in enumerate(t)) for t in found]


def _oracle_pack(instance: Instance, target: int):
    """Same search as the row-Latin kernel, with independence from the oracle."""
    rows, cols = instance.rows, instance.cols
    m, n = len(rows), len(cols)
    if target > m:
        return None
    oracle = instance.oracle
    cid = [[instance.cell_id((r, c)) for c in cols] for r in rows]
    used = [[False] * n for _ in range(m)]
    free = [m] * n
    cur: list[list[int]] = [[0] * n for _ in range(target)]
    found: list[list[int]] = []

    def rec(t: int, j: int, prev0: int, ids: list[int], rows_in: set[int]) -> bool:
        if j == n:
            done = list(cur[t])
            found.append(done)
            if t + 1 == target:
                return True
            for c in range(n):
                used[done[c]][c] = True
                free[c] -= 1
            if rec(t + 1, 0, done[0], [], set()):
                return True
            for c in range(n):
                used[done[c]][c] = False
                free[c] += 1
            found.pop()
            return False
        if j == 0:
            if min(free) < target - t:
                return False
            start = prev0 + 1
        else:
            start = 0
        for i in range(start, m):
            if used[i][j] or i in rows_in:
                continue
            if j == 0 and sum(1 for ii in range(i + 1, m) if not used[ii][0]) < target - t - 1:
                break
            nxt = ids + [cid[i][j]]
            if not oracle._independent(tuple(sorted(nxt))):
                continue
            cur[t][j] = i
            if rec(t, j + 1, prev0, nxt, rows_in | {i}):
                return True
        return False

    if not rec(0, 0, -1, [], set()):
        return None
    return [tuple(Cell(rows[i], cols[j]) for j, i in enumerate(t)) for t in found]


def find_disjoint_transversals(instance: Instance, target: int, limit: int = PACK_LIMIT) -> DisjointPacking | None:
    """``target`` pairwise cell-disjoint ITs, or ``None`` if none exist.

    The search is exhaustive: ``None`` proves non-existence.
    """
    if target < 1:
        raise ValueError("target must be at least 1")
    if target > instance.m:
        return None
    if instance.n > limit:
        raise LimitError(f"n={instance.n} exceeds packing limit {limit}")
    if instance.kind == "rowlatin":
        found = _latin_pack(instance, target)
    else:
        found = _oracle_pack(instance, target)
    return None if found is None else DisjointPacking(found)


def find_nrow_decomposition(instance: Instance, limit: int = NROW_LIMIT) -> RowDecomposition | None:
    """First set of n rows (lexicographic) whose n x n block splits into n disjoint ITs."""
    n = instance.n
    if n > limit:
        raise LimitError(f"n={n} exceeds decomposition limit {limit}")
    if instance.m < n:
        raise ValueError(f"need at least n={n} rows")
    for chosen in combinations(instance.rows, n):
        sub = restrict(instance, rows=chosen)
        found = find_disjoint_transversals(sub, n, limit=limit)
        if found is not None:
            return RowDecomposition(tuple(chosen), found.transversals)
    return None


def verify_packing(instance: Instance, transversals) -> bool:
    seen: set[Cell] = set()
    for t in transversals:
        if classify_positions(instance, t).classification is not Classification.IT:
            return False
        cells = {Cell(*c) for c in t}
        if cells & seen:
            return False
        seen |= cells
    return True


def verify_decomposition(instance: Instance, dec: RowDecomposition) -> bool:
    if len(set(dec.rows)) != instance.n or len(dec.transversals) != instance.n:
        return False
    if not verify_packing(instance, dec.transversals):
        return False
    covered = {Cell(*c) for t in dec.transversals for c in t}
    return covered == {Cell(r, c) for r in dec.rows for c in instance.cols}


# ---------------------------------------------------------------------------
# isomorphism


def _symbol_maps(freq_a: Counter, freq_b: Counter):
    """Bijections between the used symbols that preserve occurrence counts."""
    groups: dict[int, tuple[list[int], list[int]]] = {}
    for s, f in freq_a.items():
        groups.setdefault(f, ([], []))[0].append(s)
    for s, f in freq_b.items():
        if f not in groups:
            return
        groups[f][1].append(s)
    parts = []
    for src, dst in groups.values():
        if len(src) != len(dst):
            return
        parts.append([dict(zip(src, perm)) for perm in permutations(dst)])
    for combo in product(*parts):
        mapping = {}
        for piece in combo:
            mapping.update(piece)
        yield mapping


def iso_equivalent(a: Instance, b: Instance, limit: int = ISO_LIMIT, symbol_limit: int = ISO_SYMBOL_LIMIT) -> bool:
    """Can ``a`` be turned into ``b`` by permuting rows, columns and symbols?

    Symbols are relabeled injectively among those actually used.
    """
    if a.kind != "rowlatin" or b.kind != "rowlatin":
        raise ValueError("isomorphism is only defined for row-Latin instances")
    if (a.m, a.n) != (b.m, b.n):
        return False
    if a.n > limit:
        raise LimitError(f"n={a.n} exceeds isomorphism limit {limit}")
    ga, gb = a.view_grid(), b.view_grid()
    freq_a = Counter(x for row in ga for x in row)
    freq_b = Counter(x for row in gb for x in row)
    if len(freq_a) > symbol_limit:
        raise LimitError(f"{len(freq_a)} symbols exceeds isomorphism limit {symbol_limit}")
    if sorted(freq_a.values()) != sorted(freq_b.values()):
        return False
    if sorted(Counter(map(tuple, ga)).values()) != sorted(Counter(map(tuple, gb)).values()):
        return False
    target = Counter(map(tuple, gb))
    maps = list(_symbol_maps(freq_a, freq_b))
    for perm in permutations(range(a.n)):
        for phi in maps:
            image = Counter(tuple(phi[row[j]] for j in perm) for row in ga)
            if image == target:
                return True
    return False


# ---------------------------------------------------------------------------
# reports


@dataclass
class SearchReport:
    conjecture: str
    config: dict
    instances_scanned: int = 0
    counterexamples: list[tuple[Instance, str]] = field(default_factory=list)
    certificates: list[tuple[int, object]] = field(default_factory=list)
    census: list[Instance] = field(default_factory=list)
    wall_time: float = 0.0
    budget_exceeded: bool = False

    @property
    def exit_code(self) -> int:
        if self.counterexamples:
            return 2
        if self.budget_exceeded:
            return 3
        return 0

    def summary(self) -> dict:
        return {
            "conjecture": self.conjecture,
            "instances_scanned": self.instances_scanned,
            "counterexamples": len(self.counterexamples),
            "certificates": len(self.certificates),
            "transversal_free": len(self.census),
            "budget_exceeded": self.budget_exceeded,
            "wall_time": round(self.wall_time, 3),
            "config": self.config,
        }

    def to_text(self, timing: bool = False) -> str:
        """Line-oriented report.  Wall time is left out unless ``timing`` so output is reproducible."""
        out = [f"report {self.conjecture}"]
        for inst, reason in self.counterexamples:
            out.append(f"counterexample {reason}")
            out.extend("  " + line for line in serialize(inst).splitlines())
        for inst in self.census:
            out.append("transversal-free " + " / ".join(" ".join(str(x + 1) for x in row) for row in inst.view_grid()))
        summary = self.summary()
        if not timing:
            summary.pop("wall_time")
        out.append("summary " + json.dumps(summary, sort_keys=True))
        return "\n".join(out) + "\n"


def rowlatin_multisets(m: int, n: int, k: int):
    """All m x n row-Latin matrices over 1..k up to row order (rows sorted)."""
    arrangements = list(permutations(range(1, k + 1), n))
    for rows in combinations_with_replacement(arrangements, m):
        yield rowlatin(rows, k)


def verify_drisko_uniqueness(n: int, k: int, limits: dict | None = None, max_instances: int | None = None) -> SearchReport:
    """Every transversal-free (2n-2) x n row-Latin matrix over 1..k should be isomorphic to R_{2n-2,n}."""
    limits = {**DRISKO_LIMITS, **(limits or {})}
    if n < 2:
        raise ValueError("n must be at least 2")
    if k < n:
        raise ValueError("k must be at least n")
    if n > limits["n"] or k > limits["k"]:
        raise LimitError(f"(n={n}, k={k}) beyond enumeration limits {limits}")
    t0 = time.perf_counter()
    ref = gen_R(2 * n - 2, n)
    report = SearchReport("drisko", {"n": n, "k": k, "max_instances": max_instances})
    for idx, inst in enumerate(rowlatin_multisets(2 * n - 2, n, k)):
        if max_instances is not None and idx >= max_instances:
            report.budget_exceeded = True
            break
        report.instances_scanned += 1
        cert = brute_force_find(inst, "first")
        if cert is not None:
            report.certificates.append((idx, cert.positions))
            continue
        report.census.append(inst)
        if not iso_equivalent(inst, ref):
            report.counterexamples.append((inst, "transversal-free and not isomorphic to R"))
    report.wall_time = time.perf_counter() - t0
    return report


# ---------------------------------------------------------------------------
# sweeps

CONJECTURES = ("disjoint", "nrow", "disjoint-matroid", "nrow-matroid")
SAMPLERS = ("exhaustive", "random", "R")


def check_instance(conjecture: str, instance: Instance):
    """Run the finder for one instance; returns ``(ok, certificate, reason)``."""
    m, n = instance.m, instance.n
    if conjecture.startswith("disjoint"):
        if m < 2 * n - 1:
            raise ValueError(f"hypothesis m >= 2n-1 fails for {m}x{n}")
        target = m - (n - 1)
        packing = find_disjoint_transversals(instance, target)
        if packing is None:
            return False, None, f"no {target} pairwise disjoint transversals"
        return True, packing, ""
    if conjecture.startswith("nrow"):
        if m < n * n:
            raise ValueError(f"hypothesis m >= n^2 fails for {m}x{n}")
        dec = find_nrow_decomposition(instance)
        if dec is None:
            return False, None, f"no {n} rows are the union of {n} transversals"
        return True, dec, ""
    raise ValueError(f"unknown conjecture {conjecture!r}")


def _sweep_instances(conjecture: str, params: dict, sampler: str):
    n = params["n"]
    matroid = conjecture.endswith("matroid")
    default_m = 2 * n - 1 if conjecture.startswith("disjoint") else n * n
    if sampler == "exhaustive":
        if matroid:
            raise ValueError("exhaustive sampling covers row-Latin instances only")
        yield from rowlatin_multisets(params.get("m") or default_m, n, params.get("k") or n)
    elif sampler == "random":
        rng = np.random.default_rng(params.get("seed", 0))
        m = params.get("m") or default_m
        for _ in range(params.get("count", 10)):
            if matroid:
                yield random_linear(m, n, params.get("p", 2), params.get("dimension") or n, rng)
            else:
                yield random_rowlatin(m, n, params.get("k") or n, rng)
    elif sampler == "R":
        lo = params.get("m") or default_m
        hi = params.get("m_max") or max(lo, n * n)
        for m in range(lo, hi + 1):
            yield gen_R(m, n)
    else:
        raise ValueError(f"unknown sampler {sampler!r}")


def _task(args):
    conjecture, instance = args
    return check_instance(conjecture, instance)


def sweep(
    conjecture: str,
    params: dict,
    sampler: str = "random",
    max_instances: int | None = None,
    max_seconds: float | None = None,
    workers: int = 1,
) -> SearchReport:
    """Run a conjecture's finder over generated instances meeting its hypothesis."""
    if conjecture not in CONJECTURES:
        raise ValueError(f"unknown conjecture {conjecture!r}")
    config = {"sampler": sampler, **params, "max_instances": max_instances}
    report = SearchReport(conjecture, config)
    t0 = time.perf_counter()
    instances = []
    for inst in _sweep_instances(conjecture, params, sampler):
        if max_instances is not None and len(instances) >= max_instances:
            report.budget_exceeded = True
            break
        instances.append(inst)

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = pool.map(_task, [(conjecture, inst) for inst in instances], chunksize=8)
            _collect(report, instances, results, t0, max_seconds)
    else:
        _collect(report, instances, map(_task, ((conjecture, inst) for inst in instances)), t0, max_seconds)
    report.wall_time = time.perf_counter() - t0
    return report


def _collect(report: SearchReport, instances, results, t0: float, max_seconds: float | None) -> None:
    for idx, (inst, (ok, cert, reason)) in enumerate(zip(instances, results)):
        report.instances_scanned += 1
        if ok:
            report.certificates.append((idx, cert))
        else:
            report.counterexamples.append((inst, reason))
        if max_seconds is not None and time.perf_counter() - t0 > max_seconds:
            report.budget_exceeded = idx + 1 < len(instances)
            break
