"""Matrices whose entries live in a matroid.

An :class:`Instance` is an m x n grid of base-matroid elements.  Every cell is
its own ground element of a :class:`~transversals.matroid.CellOracle`, so
repeated entries become parallel cells.  Rows and columns are 1-based and
always reported in the coordinates of the full matrix, also for views.

Instance text format (ASCII, ``#`` starts a comment)::

    rowlatin m n k          then m lines of n symbols in 1..k
    linear   m n p g d      then g lines of d integers, then the m x n grid
    uniform  m n g r        then the m x n grid
    graphic  m n g v        then g lines "u w" (vertices 1..v), then the grid

Grid entries of the matroid kinds are 1-based element indices into the
ground description.
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence
from typing import NamedTuple

import numpy as np

from .matroid import (
    CellOracle,
    GraphicOracle,
    IndependenceOracle,
    LinearOracle,
    PartitionOracle,
    UniformOracle,
)

KINDS = ("rowlatin", "linear", "uniform", "graphic")


class InstanceError(ValueError):
    pass


class ParseError(InstanceError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Cell(NamedTuple):
    row: int
    col: int


class Classification(enum.IntEnum):
    NONE = 0  # rows or columns repeat
    PT = 1
    IPT = 2
    IT = 3


class TransversalCertificate(NamedTuple):
    positions: tuple[Cell, ...]
    classification: Classification

    @property
    def is_it(self) -> bool:
        return self.classification is Classification.IT


class Instance:
    def __init__(
        self,
        kind: str,
        grid: Sequence[Sequence[int]],
        base: IndependenceOracle,
        k: int | None = None,
        rows: Sequence[int] | None = None,
        cols: Sequence[int] | None = None,
        _oracle: CellOracle | None = None,
    ):
        if kind not in KINDS:
            raise InstanceError(f"unknown instance kind {kind!r}")
        self.kind = kind
        self.grid = tuple(tuple(int(x) for x in row) for row in grid)
        self.base = base
        self.k = k
        self.full_m = len(self.grid)
        self.full_n = len(self.grid[0]) if self.grid else 0
        if any(len(row) != self.full_n for row in self.grid):
            raise InstanceError("ragged grid")
        for row in self.grid:
            for x in row:
                if not 0 <= x < base.ground_size:
                    raise InstanceError(f"grid entry {x + 1} outside ground set 1..{base.ground_size}")
        self.rows = tuple(rows) if rows is not None else tuple(range(1, self.full_m + 1))
        self.cols = tuple(cols) if cols is not None else tuple(range(1, self.full_n + 1))
        if _oracle is None:
            _oracle = CellOracle(base, [x for row in self.grid for x in row])
        self.oracle = _oracle

    @property
    def m(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return len(self.cols)

    def __repr__(self) -> str:
        view = "" if self.is_full() else " view"
        return f"<Instance {self.kind} {self.m}x{self.n}{view}>"

    def is_full(self) -> bool:
        return self.m == self.full_m and self.n == self.full_n

    def cell_id(self, cell: tuple[int, int]) -> int:
        r, c = cell
        return (r - 1) * self.full_n + (c - 1)

    def element(self, cell: tuple[int, int]) -> int:
        """Base-matroid element (0-based) sitting in ``cell``."""
        r, c = cell
        return self.grid[r - 1][c - 1]

    def label(self, cell: tuple[int, int]) -> int:
        """Entry as written in the instance file (symbol or 1-based element index)."""
        return self.element(cell) + 1

    def ids(self, cells: Iterable[tuple[int, int]]) -> list[int]:
        return [self.cell_id(c) for c in cells]

    def view_grid(self) -> list[list[int]]:
        """Entries (0-based elements) of the visible rows and columns."""
        return [[self.grid[r - 1][c - 1] for c in self.cols] for r in self.rows]

    def same_grid(self, other: Instance) -> bool:
        return self.kind == other.kind and self.view_grid() == other.view_grid()


# ---------------------------------------------------------------------------
# construction


def rowlatin(grid: Sequence[Sequence[int]], k: int | None = None) -> Instance:
    """Row-Latin instance from 1-based symbols."""
    grid = [list(row) for row in grid]
    if k is None:
        k = max((x for row in grid for x in row), default=0)
    for row in grid:
        for x in row:
            if not 1 <= x <= k:
                raise InstanceError(f"symbol {x} outside 1..{k}")
    base = PartitionOracle(range(k))
    return Instance("rowlatin", [[x - 1 for x in row] for row in grid], base, k=k)


def linear(vectors, p: int, grid: Sequence[Sequence[int]]) -> Instance:
    """Linear instance; ``grid`` holds 1-based indices into ``vectors``."""
    base = LinearOracle(vectors, p)
    return Instance("linear", [[x - 1 for x in row] for row in grid], base)


def uniform(ground_size: int, rank: int, grid: Sequence[Sequence[int]]) -> Instance:
    return Instance("uniform", [[x - 1 for x in row] for row in grid], UniformOracle(ground_size, rank))


def graphic(edges, vertices: int, grid: Sequence[Sequence[int]]) -> Instance:
    return Instance("graphic", [[x - 1 for x in row] for row in grid], GraphicOracle(edges, vertices))


def logical_view(
    instance: Instance, excluded_rows: Iterable[int] = (), excluded_cols: Iterable[int] = ()
) -> Instance:
    """Sub-instance without the given original rows/columns; shares the oracle."""
    xr = set(excluded_rows)
    xc = set(excluded_cols)
    for r in xr:
        if not 1 <= r <= instance.full_m:
            raise InstanceError(f"row {r} out of bounds")
    for c in xc:
        if not 1 <= c <= instance.full_n:
            raise InstanceError(f"column {c} out of bounds")
    rows = [r for r in instance.rows if r not in xr]
    cols = [c for c in instance.cols if c not in xc]
    if not rows or not cols:
        raise InstanceError("view would be empty")
    return _with_axes(instance, rows, cols)


def restrict(instance: Instance, rows: Iterable[int] | None = None, cols: Iterable[int] | None = None) -> Instance:
    """View keeping only the given original rows/columns, in the given order."""
    rows = tuple(rows) if rows is not None else instance.rows
    cols = tuple(cols) if cols is not None else instance.cols
    if not rows or not cols:
        raise InstanceError("view would be empty")
    if not set(rows) <= set(instance.rows) or not set(cols) <= set(instance.cols):
        raise InstanceError("restriction leaves the current view")
    return _with_axes(instance, rows, cols)


def _with_axes(instance: Instance, rows, cols) -> Instance:
    return Instance(
        instance.kind,
        instance.grid,
        instance.base,
        k=instance.k,
        rows=rows,
        cols=cols,
        _oracle=instance.oracle,
    )


def materialize(instance: Instance) -> Instance:
    """Fresh full instance holding exactly the visible grid."""
    grid = instance.view_grid()
    return Instance(instance.kind, grid, instance.base, k=instance.k)


def permute(instance: Instance, row_perm: Sequence[int], col_perm: Sequence[int]) -> Instance:
    """New full instance whose row ``i`` is old row ``row_perm[i-1]`` (likewise columns)."""
    if sorted(row_perm) != list(range(1, instance.full_m + 1)):
        raise InstanceError("row_perm is not a permutation")
    if sorted(col_perm) != list(range(1, instance.full_n + 1)):
        raise InstanceError("col_perm is not a permutation")
    grid = [[instance.grid[r - 1][c - 1] for c in col_perm] for r in row_perm]
    return Instance(instance.kind, grid, instance.base, k=instance.k)


# ---------------------------------------------------------------------------
# predicates


def validate_rows(instance: Instance) -> list[int]:
    """Rows (original indices) whose cells are not n distinct independent elements."""
    bad = []
    for r in instance.rows:
        cells = [(r, c) for c in instance.cols]
        if not instance.oracle._independent(tuple(sorted(instance.ids(cells)))):
            bad.append(r)
    return bad


def classify_positions(instance: Instance, positions: Iterable[tuple[int, int]]) -> TransversalCertificate:
    cells = sorted({Cell(*p) for p in positions}, key=lambda c: (c.col, c.row))
    row_set = set(instance.rows)
    col_set = set(instance.cols)
    for cell in cells:
        if cell.row not in row_set or cell.col not in col_set:
            raise InstanceError(f"cell {tuple(cell)} outside the instance")
    rows = {c.row for c in cells}
    cols = {c.col for c in cells}
    if len(rows) != len(cells) or len(cols) != len(cells):
        return TransversalCertificate(tuple(cells), Classification.NONE)
    if not instance.oracle._independent(tuple(sorted(instance.ids(cells)))):
        return TransversalCertificate(tuple(cells), Classification.PT)
    if cols != col_set:
        return TransversalCertificate(tuple(cells), Classification.IPT)
    return TransversalCertificate(tuple(cells), Classification.IT)


# ---------------------------------------------------------------------------
# text format


def _tokens(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(toks: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in toks]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(toks)!r}", lineno) from None


def load_instance(text: str | bytes) -> Instance:
    if isinstance(text, bytes):
        try:
            text = text.decode("ascii")
        except UnicodeDecodeError as exc:
            raise ParseError(f"non-ASCII input ({exc})") from None
    lines = list(_tokens(text))
    if not lines:
        raise ParseError("empty instance")
    pos = 0

    def take(count: int, width: int | None, what: str) -> list[list[int]]:
        nonlocal pos
        out = []
        for _ in range(count):
            if pos >= len(lines):
                raise ParseError(f"unexpected end of input while reading {what}", lines[-1][0] + 1)
            lineno, toks = lines[pos]
            vals = _ints(toks, lineno)
            if width is not None and len(vals) != width:
                raise ParseError(f"{what}: expected {width} values, got {len(vals)}", lineno)
            out.append(vals)
            pos += 1
        return out

    lineno, header = lines[0]
    pos = 1
    kind = header[0]
    arity = {"rowlatin": 3, "linear": 5, "uniform": 4, "graphic": 4}
    if kind not in arity:
        raise ParseError(f"unknown instance kind {kind!r}", lineno)
    params = _ints(header[1:], lineno)
    if len(params) != arity[kind]:
        raise ParseError(f"{kind} header takes {arity[kind]} integers", lineno)
    m, n = params[0], params[1]
    if m < 1 or n < 1:
        raise ParseError("m and n must be positive", lineno)

    if kind == "rowlatin":
        k = params[2]
        start = pos
        grid = take(m, n, "grid row")
        for i, row in enumerate(grid):
            for x in row:
                if not 1 <= x <= k:
                    raise ParseError(f"symbol {x} outside 1..{k}", lines[start + i][0])
        inst = rowlatin(grid, k)
    else:
        # linear m n p g d; uniform m n g r; graphic m n g v
        g = params[3] if kind == "linear" else params[2]
        if g < 1:
            raise ParseError("ground set must be non-empty", lineno)
        if kind == "linear":
            p, d = params[2], params[4]
            vectors = take(g, d, "vector")
            try:
                base: IndependenceOracle = LinearOracle(vectors, p)
            except ValueError as exc:
                raise ParseError(str(exc), lineno) from None
        elif kind == "uniform":
            base = UniformOracle(g, params[3])
        else:
            v = params[3]
            start = pos
            edges = take(g, 2, "edge")
            for i, (u, w) in enumerate(edges):
                if not (1 <= u <= v and 1 <= w <= v):
                    raise ParseError(f"edge vertex outside 1..{v}", lines[start + i][0])
            base = GraphicOracle([tuple(e) for e in edges], v)
        start = pos
        grid = take(m, n, "grid row")
        for i, row in enumerate(grid):
            for x in row:
                if not 1 <= x <= g:
                    raise ParseError(f"element index {x} outside 1..{g}", lines[start + i][0])
        inst = Instance(kind, [[x - 1 for x in row] for row in grid], base)
    if pos != len(lines):
        raise ParseError("trailing data after grid", lines[pos][0])
    return inst


def serialize(instance: Instance) -> str:
    """Instance text for the visible grid; ``load_instance`` inverts it."""
    grid = instance.view_grid()
    m, n = instance.m, instance.n
    base = instance.base
    out: list[str] = []
    if instance.kind == "rowlatin":
        out.append(f"rowlatin {m} {n} {instance.k}")
    elif instance.kind == "linear":
        out.append(f"linear {m} {n} {base.p} {base.ground_size} {base.dimension}")
        out.extend(" ".join(str(int(x)) for x in vec) for vec in base.vectors)
    elif instance.kind == "uniform":
        out.append(f"uniform {m} {n} {base.ground_size} {base.r}")
    else:
        out.append(f"graphic {m} {n} {base.ground_size} {base.vertices}")
        out.extend(f"{u} {w}" for u, w in base.edges)
    out.extend(" ".join(str(x + 1) for x in row) for row in grid)
    return "\n".join(out) + "\n"


def format_certificate(instance: Instance, positions: Iterable[tuple[int, int]]) -> str:
    """Lines ``row col element``, sorted by column."""
    cells = sorted((Cell(*p) for p in positions), key=lambda c: (c.col, c.row))
    return "".join(f"{c.row} {c.col} {instance.label(c)}\n" for c in cells)


def parse_certificate(text: str) -> list[tuple[Cell, int | None]]:
    """Cells and optional element labels; ``key=value`` stats lines are skipped."""
    cells = []
    for lineno, toks in _tokens(text):
        if "=" in toks[0]:
            continue
        vals = _ints(toks, lineno)
        if len(vals) not in (2, 3):
            raise ParseError("certificate lines are 'row col [element]'", lineno)
        cells.append((Cell(vals[0], vals[1]), vals[2] if len(vals) == 3 else None))
    return cells
