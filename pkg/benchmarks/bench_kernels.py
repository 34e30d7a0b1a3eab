"""Time the compiled and pure-Python search kernels on the same tasks.

    python3 benchmarks/bench_kernels.py [--seed N] [--repeat N]
"""

import argparse
from collections import defaultdict

from transversals import kernels
from transversals.bench import compare_backends, format_backends


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    print(f"available backends: {' '.join(kernels.available())}")
    timings = compare_backends(args.seed, args.repeat)
    print(format_backends(timings), end="")
    by_task = defaultdict(dict)
    for t in timings:
        by_task[t.task][t.backend] = t.seconds
    for task, secs in by_task.items():
        if "compiled" in secs and secs["compiled"] > 0:
            print(f"speedup {task}: {secs['python'] / secs['compiled']:.1f}x")


if __name__ == "__main__":
    main()
