"""Extremal matrix families, fixed fixtures and seeded random instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .instance import Instance, linear, rowlatin
from .matroid import _is_prime

FAMILIES = ("R", "T", "fig4-left", "fig4-right", "random-rowlatin", "random-linear")

FIG4_LEFT = ((1, 2, 3), (1, 2, 3), (2, 1, 3), (3, 2, 1))
FIG4_RIGHT = (
    (1, 2, 3),
    (1, 2, 3),
    (2, 3, 1),
    (2, 3, 1),
    (1, 3, 2),
    (1, 3, 2),
    (2, 1, 3),
    (2, 1, 3),
)


def R_rows(m: int, n: int) -> list[list[int]]:
    if n < 1 or m < n - 1 or m < 1:
        raise ValueError(f"R needs n >= 1 and m >= max(1, n-1); got m={m}, n={n}")
    ident = list(range(1, n + 1))
    shifted = ident[1:] + ident[:1]
    return [list(ident) for _ in range(m - (n - 1))] + [list(shifted) for _ in range(n - 1)]


def gen_R(m: int, n: int) -> Instance:
    """``m - (n-1)`` rows ``1..n`` followed by ``n-1`` rows ``2..n,1``."""
    return rowlatin(R_rows(m, n), n)


def T_rows(n: int) -> list[list[int]]:
    if n < 2:
        raise ValueError(f"T needs n >= 2; got {n}")
    cyc = list(range(1, n + 2))
    rows = []
    for shift in range(n + 1):
        row = cyc[shift:] + cyc[:shift]
        rows.extend([row[:n] for _ in range(n - 1)])
    return rows


def gen_T(n: int) -> Instance:
    """(n^2-1) x n: ``n-1`` copies of each cyclic shift of ``1..n+1``, last column dropped."""
    return rowlatin(T_rows(n), n + 1)


def gen_fig4(side: str) -> Instance:
    if side == "left":
        return rowlatin(FIG4_LEFT, 3)
    if side == "right":
        return rowlatin(FIG4_RIGHT, 3)
    raise ValueError(f"side must be 'left' or 'right', not {side!r}")


@dataclass(frozen=True)
class GeneratorSpec:
    family: str
    m: int | None = None
    n: int | None = None
    k: int | None = None
    p: int | None = None
    dimension: int | None = None
    seed: int | None = None


def random_rowlatin(m: int, n: int, k: int, rng: np.random.Generator) -> Instance:
    if n < 1 or m < 1:
        raise ValueError("m and n must be positive")
    if k < n:
        raise ValueError(f"k={k} < n={n}: rows cannot hold n distinct symbols")
    rows = [(rng.permutation(k)[:n] + 1).tolist() for _ in range(m)]
    return rowlatin(rows, k)


def random_linear(m: int, n: int, p: int, dimension: int, rng: np.random.Generator, max_tries: int = 10_000) -> Instance:
    if n < 1 or m < 1:
        raise ValueError("m and n must be positive")
    if not _is_prime(p):
        raise ValueError(f"p={p} is not prime")
    if dimension < n:
        raise ValueError(f"GF({p})^{dimension} holds no {n} independent vectors")
    vectors = []
    for _ in range(m):
        for _ in range(max_tries):
            block = rng.integers(0, p, size=(n, dimension), dtype=np.int64)
            if kernels.gf_rank(block, p) == n:
                break
        else:
            raise RuntimeError("rejection sampling did not produce an independent row")
        vectors.extend(block.tolist())
    grid = [[i * n + j + 1 for j in range(n)] for i in range(m)]
    return linear(vectors, p, grid)


def gen_random(spec: GeneratorSpec) -> Instance:
    if spec.seed is None:
        raise ValueError("random generation needs a seed")
    rng = np.random.default_rng(spec.seed)
    n = spec.n
    m = spec.m if spec.m is not None else 2 * n - 1
    if spec.family == "random-rowlatin":
        return random_rowlatin(m, n, spec.k if spec.k is not None else n, rng)
    if spec.family == "random-linear":
        return random_linear(m, n, spec.p or 2, spec.dimension or n, rng)
    raise ValueError(f"{spec.family!r} is not a random family")


def generate(spec: GeneratorSpec) -> Instance:
    """Dispatch on ``spec.family``."""
    if spec.family == "R":
        return gen_R(spec.m, spec.n)
    if spec.family == "T":
        return gen_T(spec.n)
    if spec.family == "fig4-left":
        return gen_fig4("left")
    if spec.family == "fig4-right":
        return gen_fig4("right")
    return gen_random(spec)


def random_near_extremal(n: int, rng: np.random.Generator) -> Instance:
    """R_{2n-2,n} plus one random row, then random row, column and symbol permutations.

    These sit one row above the sharpness threshold and drive the finder
    through its longest repair loops.
    """
    rows = R_rows(2 * n - 2, n) if n >= 2 else []
    rows.append((rng.permutation(n) + 1).tolist())
    rp = rng.permutation(len(rows))
    cp = rng.permutation(n)
    sp = rng.permutation(n) + 1
    return rowlatin([[int(sp[rows[r][c] - 1]) for c in cp] for r in rp], n)
