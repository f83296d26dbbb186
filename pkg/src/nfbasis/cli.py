"""Command-line front end.

Exit status: 0 on success, 1 on invalid input or usage, 2 when an internal
invariant is violated.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time
import warnings

import numpy as np

from . import io
from .echelon import rcef
from .exceptions import InternalInvariantError, InvalidInputError, NFBasisError
from .kernels import pi_groups
from .linalg import DEFAULT_TOL, ToleranceConfig, nullspace_basis
from .noether import (
    TwoBodyParams,
    estimate_beta,
    find_symmetries,
    generators,
    sample_states,
    PhaseState,
    transformation_orbit,
    verify_symmetry,
)
from .normalform import ALGORITHMS, normal_form


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _add_tolerances(p):
    p.add_argument("--zero-tol", type=float, default=DEFAULT_TOL.zero_rel_tol, metavar="X",
                   help="relative threshold classifying entries as zero")
    p.add_argument("--rank-tol", type=float, default=DEFAULT_TOL.rank_rel_tol, metavar="X",
                   help="relative singular-value threshold for rank decisions")


def _add_snap(p):
    p.add_argument("--snap-rational", nargs="?", const=64, type=int, default=None, metavar="MAXDEN",
                   help="display entries as fractions (denominator <= MAXDEN, default 64)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nfbasis", description="Normal forms for bases of vector spaces.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("normal-form", help="normal form of the columns of a matrix")
    p.add_argument("file")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="topdown")
    _add_tolerances(p)
    _add_snap(p)
    p.add_argument("--json", action="store_true")
    p.add_argument("--allow-n1", action="store_true", help="accept a single column")

    p = sub.add_parser("rcef", help="reduced column echelon form")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("nullspace", help="kernel basis of a matrix")
    p.add_argument("file")
    p.add_argument("--normal-form", action="store_true", help="return the kernel basis in normal form")
    p.add_argument("--algorithm", choices=ALGORITHMS, default="topdown")
    _add_tolerances(p)
    _add_snap(p)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("pi-groups", help="dimensionless groups from a dimension table (CSV)")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("noether-demo", help="symmetries of the two-body problem")
    p.add_argument("--m1", type=float, default=0.7)
    p.add_argument("--m2", type=float, default=0.3)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--orbit-csv", metavar="PATH",
                   help="write the orbit exp(lambda B7) x0 of generator 7 as CSV")
    p.add_argument("--json", action="store_true")
    return parser


def _tolerances(args) -> ToleranceConfig:
    return ToleranceConfig(rank_rel_tol=args.rank_tol, zero_rel_tol=args.zero_tol)


def _print_matrix(M, snap=None):
    print(io.format_matrix(M, snap))


def _print_normal_form(result, snap):
    _print_matrix(result.columns, snap)
    print()
    for j, (pat, key) in enumerate(zip(result.patterns, result.keys), start=1):
        print(f"column {j}: zeros={key.zero_count} pattern={pat} theta={key.exact_theta}")
    st = result.stats
    print(f"algorithm={result.algorithm} selections={st.selections_enumerated} "
          f"candidates={st.candidates_examined} levels={st.levels_visited} "
          f"time={st.wall_time:.3f}s")


def cmd_normal_form(args):
    A = io.read_matrix(args.file)
    t0 = time.perf_counter()
    result = normal_form(A, _tolerances(args), algorithm=args.algorithm, allow_n1=args.allow_n1)
    elapsed = time.perf_counter() - t0
    if args.json:
        print(io.dumps(io.normal_form_report(result, elapsed)))
    else:
        _print_normal_form(result, args.snap_rational)


def cmd_rcef(args):
    A = io.read_matrix(args.file)
    R = rcef(A)
    if args.json:
        print(io.dumps({"columns": io.matrix_to_json(R)}))
    else:
        _print_matrix(R)


def cmd_nullspace(args):
    M = io.read_matrix(args.file)
    tol = _tolerances(args)
    K = nullspace_basis(M, tol)
    if args.normal_form and K.shape[1] > 0:
        t0 = time.perf_counter()
        result = normal_form(K, tol, algorithm=args.algorithm, allow_n1=True)
        elapsed = time.perf_counter() - t0
        if args.json:
            print(io.dumps(io.normal_form_report(result, elapsed)))
        else:
            _print_normal_form(result, args.snap_rational)
        return
    if args.json:
        print(io.dumps({"columns": io.matrix_to_json(K)}))
    elif K.shape[1] == 0:
        print("kernel is trivial")
    else:
        _print_matrix(K, args.snap_rational)


def cmd_pi_groups(args):
    table = io.read_dimension_table(args.file)
    groups = pi_groups(table)
    if args.json:
        print(io.dumps({
            "columns": io.matrix_to_json(groups.exponent_columns),
            "quantities": groups.quantity_names,
            "groups": groups.group_labels,
            "exponents": [[str(q) for q in col] for col in groups.snapped()],
        }))
        return
    if not groups.group_labels:
        print("no dimensionless groups")
        return
    for j, (label, col) in enumerate(zip(groups.group_labels, groups.snapped()), start=1):
        powers = ", ".join(f"{n}:{q}" for n, q in zip(groups.quantity_names, col))
        print(f"a{j} = {label}    [{powers}]")


def _write_orbit_csv(path, gen, x0):
    lambdas = np.linspace(0.0, 2 * np.pi, 401)
    pts = transformation_orbit(gen, x0, lambdas)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["lambda", "x1", "y1", "z1", "x2", "y2", "z2"])
        for lam, p in zip(lambdas, pts):
            w.writerow([repr(float(lam))] + [repr(float(c)) for c in p])


def cmd_noether_demo(args):
    params = TwoBodyParams(args.m1, args.m2, args.alpha)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        t0 = time.perf_counter()
        result = find_symmetries(params, args.samples, args.seed)
        elapsed = time.perf_counter() - t0
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    gens = generators(result)
    x, v = sample_states(1000, args.seed + 1)
    fresh = [PhaseState(xi[:3], xi[3:], vi[:3], vi[3:]) for xi, vi in zip(x, v)]
    residual = max(verify_symmetry(params, g, fresh) for g in gens)
    beta_est = None
    if len(gens) == 9 and params.m1 != params.m2:
        beta_est = estimate_beta(result).tolist()
    if args.orbit_csv:
        if len(gens) < 7:
            raise InvalidInputError("fewer than seven generators; cannot write the orbit")
        x0 = sample_states(1, args.seed)[0][0]
        _write_orbit_csv(args.orbit_csv, gens[6], x0)

    if args.json:
        report = io.normal_form_report(result, elapsed)
        report.update({
            "params": {"m1": params.m1, "m2": params.m2, "alpha": params.alpha,
                       "samples": args.samples, "seed": args.seed},
            "kernel_dimension": result.columns.shape[1],
            "nonzero_count": result.nonzero_count,
            "max_symmetry_residual": residual,
            "beta": {"estimated": beta_est,
                     "expected": params.beta if params.m1 != params.m2 else None},
        })
        print(io.dumps(report))
        return
    print(f"kernel dimension: {result.columns.shape[1]}")
    print(f"nonzero entries in normal form: {result.nonzero_count}")
    for j, g in enumerate(gens, start=1):
        print(f"\ngenerator {j}:")
        print("  a = " + " ".join(io.format_snapped(c) for c in g.a))
        if np.any(g.B):
            print("  B =")
            for row in g.B:
                print("    " + "  ".join(io.format_snapped(c).rjust(6) for c in row))
    if beta_est is not None:
        print(f"\nbeta (estimated) = {', '.join(f'{b:.12g}' for b in beta_est)}; "
              f"m2/(m1-m2) = {params.beta:.12g}")
    print(f"max symmetry residual on 1000 fresh states: {residual:.3e}")
    print(f"time: {elapsed:.2f}s")


COMMANDS = {
    "normal-form": cmd_normal_form,
    "rcef": cmd_rcef,
    "nullspace": cmd_nullspace,
    "pi-groups": cmd_pi_groups,
    "noether-demo": cmd_noether_demo,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        COMMANDS[args.command](args)
    except InternalInvariantError as exc:
        print(f"nfbasis: internal error: {exc}", file=sys.stderr)
        return 2
    except (InvalidInputError, NFBasisError) as exc:
        print(f"nfbasis: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"nfbasis: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
