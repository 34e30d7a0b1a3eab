"""Matroids accessed through an independence oracle.

Four concrete kinds are shipped: partition (unit capacity per class), linear
over a prime field, uniform, and graphic.  Every oracle counts its base
``is_independent`` queries; derived queries (rank, span, circuits) are built
on top of it so their cost shows up in the same counter.
"""

from __future__ import annotations

import copy
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import kernels


class MatroidError(Exception):
    pass


class InvalidElementError(MatroidError, ValueError):
    pass


class ContractError(MatroidError):
    """A precondition of a derived query does not hold (or the oracle is not a matroid)."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class IndependenceOracle:
    """Base class; subclasses implement ``_independent`` on validated, distinct ids."""

    kind = "abstract"

    def __init__(self, ground_size: int):
        if ground_size < 0:
            raise ValueError("ground_size must be non-negative")
        self.ground_size = ground_size
        self.calls = 0

    def __repr__(self) -> str:
        return f"<{type(self).__name__} ground_size={self.ground_size}>"

    def fork(self) -> IndependenceOracle:
        """Shallow copy sharing the matroid data, with its own zeroed counter."""
        twin = copy.copy(self)
        twin.calls = 0
        return twin

    def element_set(self, s: Iterable[int]) -> tuple[int, ...]:
        ids = tuple(sorted(set(int(x) for x in s)))
        if ids and (ids[0] < 0 or ids[-1] >= self.ground_size):
            bad = ids[0] if ids[0] < 0 else ids[-1]
            raise InvalidElementError(f"element {bad} outside ground set [0, {self.ground_size})")
        return ids

    def _check_element(self, x: int) -> int:
        x = int(x)
        if not 0 <= x < self.ground_size:
            raise InvalidElementError(f"element {x} outside ground set [0, {self.ground_size})")
        return x

    def _independent(self, ids: tuple[int, ...]) -> bool:
        raise NotImplementedError

    def is_independent(self, s: Iterable[int]) -> bool:
        """One base query.  Increments ``calls``."""
        ids = self.element_set(s)
        self.calls += 1
        return self._independent(ids)

    def rank(self, s: Iterable[int]) -> int:
        """Greedy rank: one query per element of ``s``."""
        basis: list[int] = []
        for x in self.element_set(s):
            if self.is_independent(basis + [x]):
                basis.append(x)
        return len(basis)

    def in_span(self, s: Iterable[int], x: int, independent: bool = False) -> bool:
        """True iff ``rank(s + x) == rank(s)``.

        With ``independent=True`` the caller vouches that ``s`` is independent
        and a single query of ``s + x`` decides the answer.
        """
        x = self._check_element(x)
        ids = self.element_set(s)
        if x in ids:
            return True
        if independent:
            return not self.is_independent(ids + (x,))
        return self.rank(ids + (x,)) == self.rank(ids)

    def fundamental_circuit(self, i: Iterable[int], e: int, strict: bool = False) -> tuple[int, ...]:
        """The unique circuit inside ``i + e`` for independent ``i`` and dependent ``i + e``.

        Uses ``|i| + 1`` queries: one to confirm ``i + e`` is dependent, one per
        element of ``i``.  Independence of ``i`` is the caller's promise; pass
        ``strict=True`` to spend one more query checking it.
        """
        e = self._check_element(e)
        ids = self.element_set(i)
        if e in ids:
            raise ContractError(f"element {e} already in the independent set")
        whole = set(ids) | {e}
        if self.is_independent(whole):
            raise ContractError(f"set plus {e} is independent; no circuit")
        if strict and not self.is_independent(ids):
            raise ContractError("base set is not independent")
        circuit = [e]
        for x in ids:
            if self.is_independent(whole - {x}):
                circuit.append(x)
        return tuple(sorted(circuit))

    def are_parallel(self, x: int, y: int) -> bool:
        """Nonloops forming a dependent pair; ``x == y`` counts as parallel."""
        x = self._check_element(x)
        y = self._check_element(y)
        if x == y:
            return True
        if self.is_independent((x, y)):
            return False
        return self.is_independent((x,)) and self.is_independent((y,))

    def is_loop(self, x: int) -> bool:
        return not self.is_independent((self._check_element(x),))


class PartitionOracle(IndependenceOracle):
    """At most one element from each class."""

    kind = "partition"

    def __init__(self, classes: Sequence[int]):
        super().__init__(len(classes))
        self.classes = tuple(int(c) for c in classes)

    def _independent(self, ids):
        seen = set()
        for x in ids:
            c = self.classes[x]
            if c in seen:
                return False
            seen.add(c)
        return True


class UniformOracle(IndependenceOracle):
    """U_{r,g}: every set of size at most ``rank`` is independent."""

    kind = "uniform"

    def __init__(self, ground_size: int, rank: int):
        super().__init__(ground_size)
        if rank < 0:
            raise ValueError("rank must be non-negative")
        self.r = rank

    def _independent(self, ids):
        return len(ids) <= self.r


class LinearOracle(IndependenceOracle):
    """Column matroid of vectors over GF(p); independence by Gaussian elimination."""

    kind = "linear"

    def __init__(self, vectors, p: int):
        vecs = np.asarray(vectors, dtype=np.int64)
        if vecs.ndim != 2:
            raise ValueError("vectors must be a 2-d array (one row per element)")
        if not _is_prime(p) or p >= 2**31:
            raise ValueError(f"p={p} is not a prime below 2^31")
        super().__init__(vecs.shape[0])
        self.p = int(p)
        self.vectors = vecs % p
        self.dimension = vecs.shape[1]

    def _independent(self, ids):
        if len(ids) > self.dimension:
            return False
        if not ids:
            return True
        return kernels.gf_rank(self.vectors[list(ids)], self.p) == len(ids)


class GraphicOracle(IndependenceOracle):
    """Cycle matroid: edges independent iff they form a forest.

    Vertices are 1-based in the constructor (``edges`` are ``(u, w)`` pairs);
    a self-loop is a matroid loop.
    """

    kind = "graphic"

    def __init__(self, edges: Sequence[tuple[int, int]], vertices: int):
        super().__init__(len(edges))
        self.vertices = int(vertices)
        self.edges = tuple((int(u), int(w)) for u, w in edges)
        for u, w in self.edges:
            if not (1 <= u <= vertices and 1 <= w <= vertices):
                raise ValueError(f"edge ({u}, {w}) has a vertex outside 1..{vertices}")
        arr = np.array(self.edges, dtype=np.int64).reshape(-1, 2) - 1
        self._tails = arr[:, 0].copy()
        self._heads = arr[:, 1].copy()

    def _independent(self, ids):
        if not ids:
            return True
        idx = list(ids)
        return kernels.forest_acyclic(self._tails[idx], self._heads[idx], self.vertices)


class CellOracle(IndependenceOracle):
    """Blow-up of a base matroid onto matrix cells.

    Cell ``c`` carries base element ``base_of[c]``.  A set of cells is
    independent iff the cells carry distinct base elements and those form an
    independent set of the base matroid, so cells sharing an element are
    parallel.
    """

    kind = "cells"

    def __init__(self, base: IndependenceOracle, base_of: Sequence[int]):
        super().__init__(len(base_of))
        self.base = base
        self.base_of = tuple(int(b) for b in base_of)

    def _independent(self, ids):
        elems = [self.base_of[c] for c in ids]
        if len(set(elems)) != len(elems):
            return False
        return self.base._independent(tuple(sorted(elems)))


@dataclass
class AxiomReport:
    ground_size: int
    independent_sets: int = 0
    empty_ok: bool = True
    hereditary: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)
    exchange: list[tuple[tuple[int, ...], tuple[int, ...]]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.empty_ok and not self.hereditary and not self.exchange

    def summary(self) -> str:
        if self.passed:
            return f"ok ({self.independent_sets} independent sets over {self.ground_size} elements)"
        parts = []
        if not self.empty_ok:
            parts.append("empty set dependent")
        if self.hereditary:
            parts.append(f"hereditary violated by {self.hereditary[0]}")
        if self.exchange:
            parts.append(f"exchange violated by {self.exchange[0]}")
        return "FAIL: " + "; ".join(parts)


def _members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def verify_axioms(oracle: IndependenceOracle, limit: int = 12, max_violations: int = 10) -> AxiomReport:
    """Exhaustively check the independence axioms over all subsets.

    Hereditary is checked on single-element deletions (which implies the full
    property by induction).  Exchange is checked in rank form: for independent
    ``I``, the elements that cannot extend ``I`` together with ``I`` must have
    rank ``|I|``; otherwise some larger independent ``J`` inside that set
    witnesses the violation.
    """
    g = oracle.ground_size
    if g > limit:
        raise MatroidError(f"ground set of size {g} exceeds exhaustive limit {limit}")
    full = 1 << g
    indep = [oracle._independent(_members(mask)) for mask in range(full)]
    report = AxiomReport(ground_size=g, independent_sets=sum(indep))
    report.empty_ok = indep[0]

    for mask in range(full):
        if not indep[mask]:
            continue
        bits = mask
        while bits:
            low = bits & -bits
            bits ^= low
            if not indep[mask ^ low]:
                if len(report.hereditary) < max_violations:
                    report.hereditary.append((_members(mask), _members(mask ^ low)))
                break

    # rank of every subset: size of the largest independent subset
    rank = [0] * full
    for mask in range(1, full):
        if indep[mask]:
            rank[mask] = bin(mask).count("1")
        else:
            bits = mask
            best = 0
            while bits:
                low = bits & -bits
                bits ^= low
                best = max(best, rank[mask ^ low])
            rank[mask] = best

    for mask in range(full):
        if not indep[mask]:
            continue
        size = bin(mask).count("1")
        stuck = mask
        for x in range(g):
            bit = 1 << x
            if not mask & bit and not indep[mask | bit]:
                stuck |= bit
        if rank[stuck] > size:
            witness = _bigger_independent(stuck, size + 1, indep)
            if len(report.exchange) < max_violations:
                report.exchange.append((_members(mask), _members(witness)))
    return report


def _bigger_independent(within: int, size: int, indep: list[bool]) -> int:
    elems = _members(within)
    for k in range(size, len(elems) + 1):
        for combo in combinations(elems, k):
            mask = sum(1 << x for x in combo)
            if indep[mask]:
                return mask
    return 0


def axiom_fixtures() -> list[tuple[str, IndependenceOracle]]:
    """Fixed battery of small oracles (ground sets <= 12) covering all four kinds."""
    rng = np.random.default_rng(20)
    gf5 = rng.integers(0, 5, size=(9, 3))
    gf5[4] = 0  # a loop
    gf5[7] = 2 * gf5[2] % 5  # parallel to element 2
    fano = [[(v >> 2) & 1, (v >> 1) & 1, v & 1] for v in range(1, 8)]
    k4 = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]
    k5 = [(u, w) for u in range(1, 6) for w in range(u + 1, 6)]
    return [
        ("partition-6-3", PartitionOracle([0, 0, 1, 1, 2, 2])),
        ("partition-12-5", PartitionOracle([i % 5 for i in range(12)])),
        ("uniform-2-5", UniformOracle(5, 2)),
        ("uniform-4-10", UniformOracle(10, 4)),
        ("uniform-0-3", UniformOracle(3, 0)),
        ("linear-gf2-fano", LinearOracle(fano, 2)),
        ("linear-gf3-plane", LinearOracle([[a, b] for a in range(3) for b in range(3) if a or b], 3)),
        ("linear-gf5-loopy", LinearOracle(gf5, 5)),
        ("graphic-k4", GraphicOracle(k4, 4)),
        ("graphic-k5", GraphicOracle(k5, 5)),
        ("graphic-multi", GraphicOracle([(1, 2), (1, 2), (2, 3), (3, 3), (3, 4), (4, 1), (2, 4), (5, 6)], 6)),
    ]
