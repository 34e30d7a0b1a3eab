"""Oracle-call scaling and compiled-vs-Python kernel timings."""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import kernels
from .engine import ScalingRow, find_it, instrument_scaling, loglog_slope
from .generators import gen_R, gen_T, random_linear


def bench(n_values, trials: int, seed: int, modes=("rowlatin", "linear")) -> tuple[list[ScalingRow], dict]:
    """Scaling table plus fitted log-log slopes (calls and wall time) per mode."""
    table = instrument_scaling(n_values, trials, seed, modes)
    slopes = {}
    for mode in modes:
        rows = [r for r in table if r.mode == mode and r.n > 1]
        if len(rows) >= 2:
            ns = [r.n for r in rows]
            slopes[mode] = {
                "calls": loglog_slope(ns, [r.mean_calls for r in rows]),
                "time": loglog_slope(ns, [r.mean_seconds for r in rows]),
            }
    return table, slopes


def format_table(table: list[ScalingRow], slopes: dict) -> str:
    out = ["n mode mean_calls max_calls seconds"]
    for r in table:
        out.append(f"{r.n} {r.mode} {r.mean_calls:.1f} {r.max_calls} {r.mean_seconds:.6f}")
    for mode, s in slopes.items():
        out.append(f"slope {mode} calls={s['calls']:.3f} time={s['time']:.3f}")
    return "\n".join(out) + "\n"


@dataclass
class KernelTiming:
    task: str
    backend: str
    seconds: float
    result: object


def _tasks(seed: int):
    rng = np.random.default_rng(seed)
    lin = [random_linear(31, 16, 7, 16, rng) for _ in range(3)]
    r74 = gen_R(13, 7)
    grid_r = np.array(r74.view_grid(), dtype=np.int64)
    t4 = np.array(gen_T(4).view_grid(), dtype=np.int64)
    blocks = [t4[list(rows)] for rows in combinations(range(t4.shape[0]), 4)]
    return [
        ("latin_transversals R13x7 count", lambda: kernels.latin_transversals(grid_r, np.zeros_like(grid_r, dtype=np.uint8), 7, False)[0]),
        ("latin_pack over all 4-row blocks of T4", lambda: sum(kernels.latin_pack(b, 5, 4) is not None for b in blocks)),
        ("find_it linear GF(7) n=16 x3", lambda: sum(find_it(inst, check=False)[1].base_calls for inst in lin)),
    ]


def compare_backends(seed: int = 0, repeat: int = 3) -> list[KernelTiming]:
    """Time the same tasks under every available kernel backend."""
    previous = kernels.BACKEND
    timings = []
    try:
        for backend in kernels.available():
            kernels.use_backend(backend)
            for name, fn in _tasks(seed):
                best = float("inf")
                result = None
                for _ in range(repeat):
                    t0 = time.perf_counter()
                    result = fn()
                    best = min(best, time.perf_counter() - t0)
                timings.append(KernelTiming(name, backend, best, result))
    finally:
        kernels.use_backend(previous)
    return timings


def format_backends(timings: list[KernelTiming]) -> str:
    out = ["task backend seconds result"]
    for t in timings:
        out.append(f"{t.task} | {t.backend} | {t.seconds:.6f} | {t.result}")
    return "\n".join(out) + "\n"
