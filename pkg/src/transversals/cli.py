"""Command-line interface.

Exit codes: 0 ok, 1 precondition violated, 2 counterexample recorded,
3 budget exceeded, 64 usage error, 65 input parse error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import contextmanager

from . import kernels
from .bench import bench, compare_backends, format_backends, format_table
from .engine import PreconditionError, brute_force_find, find_it
from .generators import GeneratorSpec, generate
from .instance import (
    Classification,
    InstanceError,
    ParseError,
    classify_positions,
    format_certificate,
    load_instance,
    parse_certificate,
    serialize,
)
from .lab import (
    CONJECTURES,
    SAMPLERS,
    LimitError,
    find_disjoint_transversals,
    find_nrow_decomposition,
    sweep,
    verify_drisko_uniqueness,
)
from .matroid import ContractError, MatroidError, axiom_fixtures, verify_axioms

EX_OK = 0
EX_PRECONDITION = 1
EX_COUNTEREXAMPLE = 2
EX_BUDGET = 3
EX_USAGE = 64
EX_DATAERR = 65

log = logging.getLogger("transversals")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _load(path: str):
    return load_instance(_read(path))


def _write_cells(out, instance, cells) -> None:
    out.write(format_certificate(instance, cells))


def cmd_find_it(args, out) -> int:
    inst = _load(args.input)
    cert, stats = find_it(inst, debug=args.debug)
    _write_cells(out, inst, cert.positions)
    out.write(stats.line() + "\n")
    return EX_OK


def cmd_brute_force(args, out) -> int:
    inst = _load(args.input)
    if args.count:
        out.write(f"{brute_force_find(inst, 'count', limit=args.limit)}\n")
        return EX_OK
    cert = brute_force_find(inst, "first", limit=args.limit)
    if cert is None:
        out.write("none\n")
    else:
        _write_cells(out, inst, cert.positions)
    return EX_OK


def cmd_classify(args, out) -> int:
    inst = _load(args.input)
    entries = parse_certificate(_read(args.certificate).decode("ascii", "replace"))
    cells = [cell for cell, _ in entries]
    cert = classify_positions(inst, cells)
    for cell, label in entries:
        if label is not None and label != inst.label(cell):
            raise PreconditionError(f"certificate names element {label} at {tuple(cell)}, instance has {inst.label(cell)}")
    out.write(f"{cert.classification.name}\n")
    return EX_OK


def cmd_gen(args, out) -> int:
    fam = args.family
    params = args.params
    try:
        if fam == "R":
            m, n = params
            spec = GeneratorSpec("R", m=m, n=n)
        elif fam == "T":
            (n,) = params
            spec = GeneratorSpec("T", n=n)
        elif fam in ("fig4-left", "fig4-right"):
            if params:
                raise ValueError
            spec = GeneratorSpec(fam)
        else:
            m, n = params
            spec = GeneratorSpec(fam, m=m, n=n, k=args.k, p=args.p, dimension=args.dimension, seed=args.seed)
    except ValueError:
        raise UsageError(f"wrong number of parameters for family {fam}") from None
    try:
        inst = generate(spec)
    except ValueError as exc:
        raise PreconditionError(str(exc)) from None
    out.write(serialize(inst))
    return EX_OK


def cmd_check_disjoint(args, out) -> int:
    inst = _load(args.input)
    target = args.target if args.target is not None else inst.m - (inst.n - 1)
    if target < 1:
        raise PreconditionError(f"target {target} < 1 (m < n?)")
    packing = find_disjoint_transversals(inst, target)
    if packing is None:
        out.write(f"none target={target}\n")
        return EX_OK
    for i, t in enumerate(packing.transversals, start=1):
        out.write(f"transversal {i}\n")
        _write_cells(out, inst, t)
    return EX_OK


def cmd_check_nrow(args, out) -> int:
    inst = _load(args.input)
    dec = find_nrow_decomposition(inst)
    if dec is None:
        out.write("none\n")
        return EX_OK
    out.write("rows " + " ".join(map(str, dec.rows)) + "\n")
    for i, t in enumerate(dec.transversals, start=1):
        out.write(f"transversal {i}\n")
        _write_cells(out, inst, t)
    return EX_OK


def cmd_verify_drisko(args, out) -> int:
    report = verify_drisko_uniqueness(args.n, args.k, max_instances=args.max_instances)
    out.write(report.to_text())
    return report.exit_code


def cmd_sweep(args, out) -> int:
    params = {"n": args.n, "seed": args.seed, "count": args.count, "p": args.p}
    for key in ("m", "m_max", "k", "dimension"):
        if getattr(args, key) is not None:
            params[key] = getattr(args, key)
    report = sweep(
        args.conjecture,
        params,
        sampler=args.sampler,
        max_instances=args.max_instances,
        max_seconds=args.max_seconds,
        workers=args.workers,
    )
    out.write(report.to_text())
    return report.exit_code


def cmd_bench(args, out) -> int:
    table, slopes = bench(args.n, args.trials, args.seed, tuple(args.modes))
    out.write(format_table(table, slopes))
    if args.compare_backends:
        out.write(f"kernels available: {' '.join(kernels.available())}\n")
        out.write(format_backends(compare_backends(args.seed)))
    return EX_OK


def cmd_self_test(args, out) -> int:
    failed = 0
    for name, oracle in axiom_fixtures():
        report = verify_axioms(oracle)
        out.write(f"axioms {name}: {report.summary()}\n")
        failed += not report.passed
    from .generators import gen_R

    for n in range(2, 5):
        count = brute_force_find(gen_R(2 * n - 2, n), "count")
        ok = count == 0
        out.write(f"R_{{{2 * n - 2},{n}}} transversals: {count} {'ok' if ok else 'FAIL'}\n")
        failed += not ok
        cert, _ = find_it(gen_R(2 * n - 1, n), debug=True)
        ok = cert.classification is Classification.IT
        out.write(f"R_{{{2 * n - 1},{n}}} find-it: {'ok' if ok else 'FAIL'}\n")
        failed += not ok
    out.write(f"kernel backend: {kernels.BACKEND}\n")
    return EX_OK if not failed else EX_PRECONDITION


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="transversals", description="Independent transversals in matrices over matroids.")
    p.add_argument("-v", "--verbose", action="count", default=0, help="diagnostics on stderr (-vv for traces)")
    p.add_argument("-o", "--output", help="write data to this file instead of stdout")
    p.add_argument("--backend", choices=("compiled", "python"), help="force a kernel backend")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    s = sub.add_parser("find-it", help="construct an IT (needs m >= 2n-1)")
    s.add_argument("input")
    s.add_argument("--debug", action="store_true", help="assert loop invariants at every step")
    s.set_defaults(func=cmd_find_it)

    s = sub.add_parser("brute-force", help="exhaustive IT search")
    s.add_argument("input")
    s.add_argument("--count", action="store_true", help="print the number of ITs")
    s.add_argument("--limit", type=int, default=7)
    s.set_defaults(func=cmd_brute_force)

    s = sub.add_parser("classify", help="classify a certificate as NONE/PT/IPT/IT")
    s.add_argument("input")
    s.add_argument("certificate")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("gen", help="emit an instance (R m n | T n | fig4-left | fig4-right | random-rowlatin m n | random-linear m n)")
    s.add_argument("family", choices=("R", "T", "fig4-left", "fig4-right", "random-rowlatin", "random-linear"))
    s.add_argument("params", nargs="*", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--p", type=int)
    s.add_argument("--dimension", type=int)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("check-disjoint", help="search for pairwise disjoint ITs")
    s.add_argument("input")
    s.add_argument("--target", type=int, help="number of ITs (default m-(n-1))")
    s.set_defaults(func=cmd_check_disjoint)

    s = sub.add_parser("check-nrow", help="search for n rows that are the union of n ITs")
    s.add_argument("input")
    s.set_defaults(func=cmd_check_nrow)

    s = sub.add_parser("verify-drisko", help="census of transversal-free (2n-2) x n row-Latin matrices")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--max-instances", type=int)
    s.set_defaults(func=cmd_verify_drisko)

    s = sub.add_parser("sweep", help="run a conjecture's finder over generated instances")
    s.add_argument("conjecture", choices=CONJECTURES)
    s.add_argument("--sampler", choices=SAMPLERS, default="random")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--m-max", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--p", type=int, default=2)
    s.add_argument("--dimension", type=int)
    s.add_argument("--count", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-instances", type=int)
    s.add_argument("--max-seconds", type=float)
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("bench", help="oracle-call scaling table")
    s.add_argument("--n", type=int, nargs="+", default=[1, 8, 16, 32])
    s.add_argument("--trials", type=int, default=20)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--modes", nargs="+", choices=("rowlatin", "linear", "extremal"), default=["rowlatin", "linear"])
    s.add_argument("--compare-backends", action="store_true", help="also time compiled vs Python kernels")
    s.set_defaults(func=cmd_bench)

    s = sub.add_parser("self-test", help="axiom battery and known small facts")
    s.set_defaults(func=cmd_self_test)
    return p


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w") as fh:
            yield fh


def run(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("transversals: a subcommand is required (see --help)")
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EX_USAGE
    except SystemExit as exc:  # --help
        return EX_OK if exc.code in (0, None) else EX_USAGE

    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    if args.backend:
        try:
            kernels.use_backend(args.backend)
        except ValueError as exc:
            print(exc, file=sys.stderr)
            return EX_USAGE
    try:
        with _sink(args.output) as out:
            return args.func(args, out)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EX_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EX_DATAERR
    except (PreconditionError, InstanceError, LimitError, ContractError, MatroidError, ValueError) as exc:
        # library argument checks raise ValueError subclasses
        print(f"error: {exc}", file=sys.stderr)
        return EX_PRECONDITION


def main() -> None:
    sys.exit(run())
