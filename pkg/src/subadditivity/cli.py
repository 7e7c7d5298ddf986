"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 invalid parameters.
Machine-readable output goes to stdout (or ``--out``); progress goes to stderr.
"""

from __future__ import annotations

import argparse
import sys
import time

from . import constructions as C
from . import exponent as X
from .grassmann import dump_witness
from .independence import (
    SEARCH_GUARD,
    brute_force_M,
    brute_force_system,
    format_system,
    independence_system_even,
    lemma_M,
)
from .tensor import direct_sum, dump_tensor, mamu, unit_tensor, w_state

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _ints(text: str, count: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from None
    if count is not None and len(vals) != count:
        raise UsageError(f"expected {count} integers, got {text!r}")
    return vals


def parse_range(text: str, integer: bool):
    """``lo..hi[:step]`` or a single value."""
    body, _, step = text.partition(":")
    lo, sep, hi = body.partition("..")
    if not sep:
        hi = lo
    try:
        if integer:
            return X.int_range(int(lo), int(hi), int(step) if step else 1)
        return X.real_range(float(lo), float(hi), float(step) if step else X.P_STEP)
    except ValueError as exc:
        raise UsageError(f"bad range {text!r}: {exc}") from None


def _emit(text: str, args) -> None:
    if args.out:
        with open(args.out, "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# -- verify -------------------------------------------------------------------

def _spec_from_args(args) -> C.ConstructionSpec:
    chosen = [v for v in ("c1", "c2", "c3", "c4") if getattr(args, v)]
    if len(chosen) != 1:
        raise UsageError("choose exactly one of --c1/--c2/--c3/--c4")
    v = chosen[0]
    try:
        if v == "c1":
            if args.n is None:
                raise UsageError("--c1 needs --n n1,n2,n3")
            return C.ConstructionSpec.c1(*C.canonical_c1(_ints(args.n, 3)))
        if v == "c2":
            if args.a is None:
                raise UsageError("--c2 needs --a")
            return C.ConstructionSpec.c2(args.a)
        if v == "c3":
            if args.d is None or args.n is None:
                raise UsageError("--c3 needs --d and --n")
            return C.ConstructionSpec.c3(args.d, _ints(args.n, 1)[0])
        if args.n is None:
            raise UsageError("--c4 needs --n n1,n2,n3")
        return C.ConstructionSpec.c4(*_ints(args.n, 3))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_verify(args) -> int:
    spec = _spec_from_args(args)
    if args.format not in ("text", "witness"):
        raise UsageError(f"verify does not support --format {args.format}")
    if args.format == "witness" and spec.variant == "C3":
        raise UsageError("C3 is certified by expansion and has no span witness")
    _progress(f"verifying {spec.label()}")
    t0 = time.perf_counter()
    if args.format == "witness":
        family = C.build_family(spec)
        t1, t2 = C.build_summands(spec)
        target = direct_sum(t1, t2)
        shape = target.shape[:-1]
        _emit(dump_witness(family, shape, target.order - 1), args)
        return EXIT_OK
    report = C.verify_construction(spec, seed=args.seed)
    _progress(f"done in {time.perf_counter() - t0:.2f}s")
    _emit(report.render(), args)
    return EXIT_OK if report.border_rank_upper_confirmed else EXIT_FAIL


# -- search-m -----------------------------------------------------------------

def cmd_search_m(args) -> int:
    n1, n2, n3 = args.dims
    if n1 * n2 * n3 > SEARCH_GUARD:
        raise UsageError(f"grid has {n1 * n2 * n3} cells, more than the search guard of {SEARCH_GUARD}")
    if min(args.dims) < 1 or args.target < 0:
        raise UsageError("grid sizes must be positive and the target non-negative")
    exists = brute_force_M(n1, n2, n3, args.target)
    lines = [f"grid = {n1},{n2},{n3}", f"target = {args.target}", f"exists = {str(exists).lower()}"]
    if all(x % 2 == 0 for x in args.dims):
        m = lemma_M(n1, n2, n3)
        lines.append(f"lemma_M = {m}")
        lines.append(f"matches_lemma = {str(exists == (args.target <= m)).lower()}")
    text = "\n".join(lines) + "\n"
    if all(x % 2 == 0 for x in args.dims):
        text += format_system(independence_system_even(n1, n2, n3))
    elif exists:
        text += format_system(brute_force_system(n1, n2, n3, args.target))
    _emit(text, args)
    return EXIT_OK


# -- omega / grid -------------------------------------------------------------

def cmd_omega(args) -> int:
    n1, n2 = args.schonhage
    if n1 < 2 or n2 < 2:
        raise UsageError("--schonhage needs n1, n2 >= 2")
    p, w = X.schonhage_omega(n1, n2)
    _emit(f"n1 = {n1}\nn2 = {n2}\np_star = {p:.12g}\nomega_star = {w:.12g}\n", args)
    return EXIT_OK


def _grid_spec(args) -> X.GridSpec:
    fam = args.family
    if args.figure_defaults:
        return X.figure_defaults(fam)
    try:
        if fam == "ext_mamu":
            axes = (("n3", parse_range(args.n3 or "", True)), ("n4", parse_range(args.n4 or "", True)))
        elif fam == "multi_emamu_fixed_d":
            axes = (
                ("d", parse_range(args.d or "", True)),
                ("n", parse_range(args.n or "", True)),
                ("p", parse_range(args.p, False) if args.p else X.open_unit_range()),
            )
        elif fam == "multi_emamu_p_of_d":
            axes = (("d", parse_range(args.d or "", True)), ("n", parse_range(args.n or "", True)))
        else:
            axes = (("n", parse_range(args.n or "", True)), ("p", parse_range(args.p, False) if args.p else X.open_unit_range()))
        return X.GridSpec(fam, axes)
    except ValueError as exc:
        raise UsageError(f"missing or bad range: {exc}") from None


def cmd_grid(args) -> int:
    if args.format not in ("csv", "text", "ppm"):
        raise UsageError(f"grid does not support --format {args.format}")
    spec = _grid_spec(args)
    try:
        points = X.generate_grid(spec)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _progress(f"{len(points)} grid cells")
    if args.format == "ppm":
        _emit(X.grid_ppm(points, spec), args)
    else:
        _emit(X.grid_csv(points, spec.family), args)
    return EXIT_OK


# -- dump ---------------------------------------------------------------------

def cmd_dump(args) -> int:
    kind = args.tensor
    try:
        if kind == "w-state":
            t = w_state()
        elif kind == "unit":
            k, r = _ints(args.params, 2)
            t = unit_tensor(k, r)
        elif kind == "mamu":
            t = mamu(*_ints(args.params, 3))
        else:
            variant = kind.upper()
            vals = _ints(args.params)
            if variant == "C1":
                vals = C.canonical_c1(vals)
            spec = C.ConstructionSpec(variant, vals)
            t1, t2 = C.build_summands(spec)
            t = direct_sum(t1, t2)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    _emit(dump_tensor(t), args)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--format", choices=("text", "csv", "ppm", "witness"), default=None)
    common.add_argument("--seed", type=int, default=0, help="seed for randomized pre-checks")

    parser = argparse.ArgumentParser(prog="subadditivity", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="verify a construction")
    for c in ("c1", "c2", "c3", "c4"):
        v.add_argument(f"--{c}", action="store_true")
    v.add_argument("--n", help="grid sizes n1,n2,n3 (C1, C4) or leg size n (C3)")
    v.add_argument("--a", type=int)
    v.add_argument("--d", type=int)
    v.set_defaults(func=cmd_verify, default_format="text")

    s = sub.add_parser("search-m", parents=[common], help="search for an independence system")
    s.add_argument("dims", type=int, nargs=3)
    s.add_argument("--target", type=int, required=True)
    s.set_defaults(func=cmd_search_m, default_format="text")

    o = sub.add_parser("omega", parents=[common], help="optimize the square matrix multiplication bound")
    o.add_argument("--schonhage", type=int, nargs=2, required=True, metavar=("N1", "N2"))
    o.set_defaults(func=cmd_omega, default_format="text")

    g = sub.add_parser("grid", parents=[common], help="evaluate a bound family on a grid")
    g.add_argument("--family", choices=X.FAMILIES, required=True)
    g.add_argument("--figure-defaults", action="store_true")
    for name in ("n3", "n4", "d", "n", "p"):
        g.add_argument(f"--{name}", help="range lo..hi[:step]")
    g.set_defaults(func=cmd_grid, default_format="csv")

    dmp = sub.add_parser("dump", parents=[common], help="dump a tensor in the text format")
    dmp.add_argument("tensor", choices=("w-state", "unit", "mamu", "c1", "c2", "c3", "c4"))
    dmp.add_argument("params", nargs="?", default="", help="comma-separated parameters")
    dmp.set_defaults(func=cmd_dump, default_format="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
