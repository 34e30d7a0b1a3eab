"""Independent transversals: the constructive finder and a brute-force search.

``find_it`` builds an independent transversal (IT) of an m x n matrix over a
matroid whenever m >= 2n - 1 and every row is independent.  It recurses on
the matrix minus a nonparallel pair ``b1, b2`` (and their column), then
repairs the recursive IT one fresh row at a time.  Row and column
permutations are replaced by explicit role bookkeeping, so all cells stay in
the caller's coordinates.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .generators import random_linear, random_near_extremal, random_rowlatin
from .instance import Cell, Classification, Instance, TransversalCertificate, classify_positions, validate_rows
from .matroid import ContractError

log = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 7


class PreconditionError(ValueError):
    pass


@dataclass
class OracleStats:
    base_calls: int = 0
    recursion_depth: int = 0
    n: int = 0

    def line(self) -> str:
        return f"calls={self.base_calls} depth={self.recursion_depth}"


# a partial transversal as column -> row
Placement = dict[int, int]


@dataclass
class AlgorithmState:
    """Roles at one recursion level (all cells in original coordinates)."""

    b1: Cell
    b2: Cell
    c_chain: list[Cell]
    c1: Cell | None = None
    c2: Cell | None = None
    d_list: list[Cell] = field(default_factory=list)
    common: Placement = field(default_factory=dict)
    family: list[Placement] = field(default_factory=list)
    fresh_rows: list[int] = field(default_factory=list)

    def primed(self, P: Placement) -> Placement:
        out = dict(P)
        del out[self.c1.col]
        out[self.b1.col] = self.b1.row
        return out

    def double_primed(self, P: Placement) -> Placement:
        out = dict(P)
        del out[self.c2.col]
        out[self.b2.col] = self.b2.row
        return out


def _cells(P: Placement) -> list[Cell]:
    return [Cell(r, c) for c, r in sorted(P.items())]


class _Finder:
    def __init__(self, instance: Instance, debug: bool):
        self.inst = instance
        self.oracle = instance.oracle.fork()
        self.debug = debug
        self.max_depth = 0

    # counted query
    def indep(self, P: Placement, extra: Cell | None = None) -> bool:
        ids = [self.inst.cell_id((r, c)) for c, r in P.items()]
        if extra is not None:
            ids.append(self.inst.cell_id(extra))
        return self.oracle.is_independent(ids)

    # uncounted query for debug assertions
    def _raw(self, cells) -> bool:
        return self.oracle._independent(tuple(sorted(self.inst.cell_id(c) for c in cells)))

    def solve(self, rows: list[int], cols: list[int], depth: int) -> Placement:
        self.max_depth = max(self.max_depth, depth)
        n = len(cols)
        if n == 1:
            return {cols[0]: rows[0]}

        b1 = b2 = None
        for c in cols:
            top = Cell(rows[0], c)
            for r in rows[1:]:
                # row cells are nonloops, so an independent pair is exactly a nonparallel pair
                if self.indep({c: rows[0]}, Cell(r, c)):
                    b1, b2 = top, Cell(r, c)
                    break
            if b1 is not None:
                break
        if b1 is None:
            log.debug("depth %d: every column parallel, taking the diagonal", depth)
            return {c: r for c, r in zip(cols, rows)}

        sub_rows = [r for r in rows if r not in (b1.row, b2.row)]
        sub_cols = [c for c in cols if c != b1.col]
        P1 = self.solve(sub_rows, sub_cols, depth + 1)
        st = AlgorithmState(b1=b1, b2=b2, c_chain=_cells(P1))
        log.debug("depth %d: b1=%s b2=%s c-chain=%s", depth, tuple(b1), tuple(b2), [tuple(c) for c in st.c_chain])

        for b in (b1, b2):
            if self.indep(P1, b):
                return {**P1, b.col: b.row}
        if n == 2:
            raise ContractError("two nonparallel entries both dependent on a single cell; oracle is not a matroid")

        ids1 = [self.inst.cell_id(c) for c in st.c_chain]
        by_id = {self.inst.cell_id(c): c for c in st.c_chain}
        C1 = {by_id[x] for x in self.oracle.fundamental_circuit(ids1, self.inst.cell_id(b1)) if x in by_id}
        C2 = {by_id[x] for x in self.oracle.fundamental_circuit(ids1, self.inst.cell_id(b2)) if x in by_id}
        in_c1 = [c for c in st.c_chain if c in C1]
        in_c2 = [c for c in st.c_chain if c in C2]
        if in_c2 and any(c != in_c2[0] for c in in_c1):
            st.c2 = in_c2[0]
            st.c1 = next(c for c in in_c1 if c != st.c2)
        elif in_c1 and any(c != in_c1[0] for c in in_c2):
            st.c1 = in_c1[0]
            st.c2 = next(c for c in in_c2 if c != st.c1)
        else:
            raise ContractError("fundamental circuits share a single element; oracle is not a matroid")
        log.debug("depth %d: c1=%s c2=%s", depth, tuple(st.c1), tuple(st.c2))

        st.common = dict(P1)
        st.family = [dict(P1)]
        used = set(P1.values())
        st.fresh_rows = [r for r in sub_rows if r not in used]
        if self.debug:
            self._check_claim(st, rows, cols, 1)

        for k in range(1, n - 1):
            row = st.fresh_rows[k - 1]
            x = None
            for c in sorted([b1.col, *st.common]):
                if self.indep(st.common, Cell(row, c)):
                    x = Cell(row, c)
                    break
            if x is None:
                raise ContractError(f"row {row} has no entry outside the common span; oracle is not a matroid")
            for t, P in enumerate(st.family):
                if self.indep(P, x):
                    break
            else:
                raise ContractError(f"{tuple(x)} lies in every span; oracle is not a matroid")
            log.debug("depth %d, k=%d: x=%s via P_%d", depth, k, tuple(x), t + 1)
            if x.col == b1.col:
                return {**P, x.col: x.row}
            if x.col == st.c1.col:
                return {**st.primed(P), x.col: x.row}
            if x.col == st.c2.col:
                return {**st.double_primed(P), x.col: x.row}

            nxt = dict(P)
            nxt[x.col] = x.row
            for b in (b1, b2):
                if self.indep(nxt, b):
                    return {**nxt, b.col: b.row}
            st.family.append(nxt)
            st.d_list.append(x)
            del st.common[x.col]
            if self.debug:
                self._check_claim(st, rows, cols, k + 1)
        raise ContractError("claim loop ended without an IT; oracle is not a matroid")

    def _check_claim(self, st: AlgorithmState, rows, cols, k: int) -> None:
        n = len(cols)
        assert st.c1.col in st.common and st.c2.col in st.common
        assert len(st.common) == n - k
        assert self._raw(_cells(st.common))
        allowed = set(st.c_chain) | set(st.d_list)
        spans = []
        for P in st.family:
            assert set(_cells(st.common)) <= set(_cells(P)) <= allowed
            variants = (P, st.primed(P), st.double_primed(P))
            for V in variants:
                cells = _cells(V)
                assert len(cells) == n - 1
                assert len({c.row for c in cells}) == n - 1
                assert self._raw(cells), f"not independent: {cells}"
            base = _cells(P)
            for V in variants[1:]:
                for y in _cells(V):
                    assert not self._raw(base + [y]) or y in base, "span of a primed variant differs"
                for y in base:
                    assert not self._raw(_cells(V) + [y]) or y in _cells(V), "span of a primed variant differs"
            spans.append(base)
        # intersection of the spans equals the span of the common part
        common = _cells(st.common)
        for r in rows:
            for c in cols:
                y = Cell(r, c)
                in_common = y in common or not self._raw(common + [y])
                in_all = all(y in S or not self._raw(S + [y]) for S in spans)
                assert in_common == in_all, f"span intersection mismatch at {tuple(y)}"


def find_it(instance: Instance, debug: bool = False, check: bool = True) -> tuple[TransversalCertificate, OracleStats]:
    """Construct an independent transversal using the first ``2n-1`` rows.

    ``debug`` asserts the claim invariants at every step with uncounted
    queries.  ``check`` validates the hypotheses first (also uncounted).
    """
    n = instance.n
    if instance.m < 2 * n - 1:
        raise PreconditionError(f"need at least 2n-1 = {2 * n - 1} rows, have {instance.m}")
    if check:
        bad = validate_rows(instance)
        if bad:
            raise PreconditionError(f"rows {bad} are not independent sets of n distinct elements")
    finder = _Finder(instance, debug)
    placement = finder.solve(list(instance.rows[: 2 * n - 1]), list(instance.cols), 1)
    cert = classify_positions(instance, [(r, c) for c, r in placement.items()])
    if cert.classification is not Classification.IT:
        raise ContractError(f"constructed set {cert.positions} is not an IT; oracle is not a matroid")
    stats = OracleStats(base_calls=finder.oracle.calls, recursion_depth=finder.max_depth, n=n)
    return cert, stats


# ---------------------------------------------------------------------------
# brute force


def brute_force_find(instance: Instance, mode: str = "first", limit: int = BRUTE_FORCE_LIMIT, exclude=()):
    """Exhaustive column-by-column search.

    ``mode="first"`` returns a certificate or ``None``; ``mode="count"`` returns
    the number of ITs.  Cells in ``exclude`` are never used.
    """
    if mode not in ("first", "count"):
        raise ValueError(f"mode must be 'first' or 'count', not {mode!r}")
    if instance.n > limit:
        raise PreconditionError(f"n={instance.n} exceeds brute-force limit {limit}")
    first_only = mode == "first"
    rows, cols = instance.rows, instance.cols
    excluded = {Cell(*c) for c in exclude}

    if instance.kind == "rowlatin":
        grid = np.array(instance.view_grid(), dtype=np.int64)
        blocked = np.zeros(grid.shape, dtype=np.uint8)
        for i, r in enumerate(rows):
            for j, c in enumerate(cols):
                if (r, c) in excluded:
                    blocked[i, j] = 1
        count, choice = kernels.latin_transversals(grid, blocked, instance.k, first_only)
        if not first_only:
            return count
        if choice is None:
            return None
        return classify_positions(instance, [(rows[i], cols[j]) for j, i in enumerate(choice)])

    oracle = instance.oracle
    n = len(cols)
    chosen: list[int] = []
    chosen_rows: list[int] = []
    count = 0
    first = None

    def rec(j: int) -> bool:
        nonlocal count, first
        if j == n:
            count += 1
            if first is None:
                first = list(zip(chosen_rows, cols))
            return first_only
        c = cols[j]
        for r in rows:
            if r in chosen_rows or (r, c) in excluded:
                continue
            cid = instance.cell_id((r, c))
            if not oracle._independent(tuple(sorted(chosen + [cid]))):
                continue
            chosen.append(cid)
            chosen_rows.append(r)
            stop = rec(j + 1)
            chosen.pop()
            chosen_rows.pop()
            if stop:
                return True
        return False

    rec(0)
    if not first_only:
        return count
    return None if first is None else classify_positions(instance, first)


# ---------------------------------------------------------------------------
# scaling


@dataclass
class ScalingRow:
    n: int
    mode: str
    trials: int
    mean_calls: float
    max_calls: int
    mean_seconds: float
    calls: list[int] = field(default_factory=list, repr=False)


SCALING_MODES = ("rowlatin", "linear", "extremal")


def random_instance(mode: str, n: int, rng: np.random.Generator) -> Instance:
    m = 2 * n - 1
    if mode == "rowlatin":
        k = int(rng.integers(n, 2 * n + 1))
        return random_rowlatin(m, n, k, rng)
    if mode == "linear":
        p = int(rng.choice([2, 5, 7]))
        return random_linear(m, n, p, n, rng)
    if mode == "extremal":
        return random_near_extremal(n, rng)
    raise ValueError(f"unknown mode {mode!r}")


def instrument_scaling(n_values, trials: int, seed: int, modes=("rowlatin", "linear")) -> list[ScalingRow]:
    """Run ``find_it`` on random valid instances and tabulate base oracle calls per n."""
    rng = np.random.default_rng(seed)
    table = []
    for n in n_values:
        for mode in modes:
            calls, seconds = [], []
            for _ in range(trials):
                inst = random_instance(mode, n, rng)
                t0 = time.perf_counter()
                _, stats = find_it(inst, check=False)
                seconds.append(time.perf_counter() - t0)
                calls.append(stats.base_calls)
            table.append(
                ScalingRow(
                    n=n,
                    mode=mode,
                    trials=trials,
                    mean_calls=float(np.mean(calls)),
                    max_calls=int(max(calls)),
                    mean_seconds=float(np.mean(seconds)),
                    calls=calls,
                )
            )
    return table


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x)."""
    lx = np.log(np.asarray(xs, dtype=float))
    ly = np.log(np.maximum(np.asarray(ys, dtype=float), 1e-300))
    return float(np.polyfit(lx, ly, 1)[0])
