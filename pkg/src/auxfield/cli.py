"""Command-line entry point: every table, coefficient list, check and figure dataset.

Exit status: 0 success, 1 failed verification or I/O error, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from . import combinatorics, fermion, gamma, quadrature
from .exact import format_rational

OUTPUT_DIR_ENV = "AUXFIELD_OUTPUT_DIR"
DELIMITERS = {"csv": ",", "tsv": "\t", "rational-text": " "}
EXTENSIONS = {"csv": "csv", "tsv": "tsv", "rational-text": "txt"}
DEFAULT_FIG2_GRID = tuple(round(0.01 * i, 2) for i in range(1, 101))


class VerificationFailed(Exception):
    pass


def format_float(x: float, precision: int) -> str:
    """``precision`` significant digits, round-half-even on the exact binary value.

    Plain notation for moderate magnitudes, exponent form otherwise.
    """
    if x == 0:
        return "0"
    if not math.isfinite(x):
        return str(x)
    return format(Decimal(x), f".{precision}g")


def _cell(value, precision: int) -> str:
    if isinstance(value, (Fraction, int)) and not isinstance(value, bool):
        return format_rational(value)
    if isinstance(value, float):
        return format_float(value, precision)
    return str(value)


def render(header: Sequence[str], rows: Iterable[Sequence], fmt: str, precision: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=DELIMITERS[fmt], lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_cell(v, precision) for v in row])
    return buf.getvalue()


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _precision(text: str) -> int:
    p = int(text)
    if not 4 <= p <= 17:
        raise argparse.ArgumentTypeError("precision must lie in [4, 17]")
    return p


def _loop_header(loops: int) -> list[str]:
    out = []
    for l in range(loops + 1):
        name = "tree" if l == 0 else f"{l}-loop"
        out += [name, f"{name}_ratio"]
    return out


def _loop_cells(row: fermion.TableRow) -> list:
    out = []
    for v, r in zip(row.values, row.ratios):
        out += [v, r]
    return out


# ------------------------------------------------------------------ commands


def cmd_ttable(args):
    if args.Lmax > 14 and not args.force:
        raise ValueError("--Lmax above 14 needs --force")
    if args.normalized:
        header = ["L", "k", "T_over_dfact", "T"]
        rows = [(L, k, n, t) for L, k, n, t in combinatorics.t_table_rows(args.Lmax)]
    else:
        header = ["L", "k", "T"]
        rows = [(L, k, t) for L, k, _, t in combinatorics.t_table_rows(args.Lmax)]
    return render(header, rows, args.format, args.precision)


def cmd_stirling(args):
    coeffs = gamma.stirling_coefficients(args.order)
    return render(["L", "coefficient"], enumerate(coeffs), args.format, args.precision)


def cmd_gamma_table(args):
    table = gamma.table1(args.N_list, args.loops)
    header = ["order"]
    for N in args.N_list:
        header += [f"N={N:g}", f"N={N:g}_ratio"]
    rows = [["exact"] + [c for e in table[0] for c in (e.exact, 1.0)]]
    for l, line in enumerate(table):
        rows.append(["tree" if l == 0 else f"{l}-loop"] + [c for e in line for c in (e.approx, e.ratio)])
    return render(header, rows, args.format, args.precision)


def cmd_fermion_table(args):
    if args.method == "II" and args.loops > 3:
        raise ValueError("method II is assembled through 3-loop only")
    rows = fermion.fermion_table(args.method, args.omega0, args.lambda_grid, args.loops, args.N, args.omega)
    header = ["omega0", "lambda", "exact"] + _loop_header(args.loops)
    return render(header, ([r.omega0, r.lam, r.exact] + _loop_cells(r) for r in rows),
                  args.format, args.precision)


def cmd_ks_table(args):
    rows = fermion.ks_table(args.lambda_grid, args.N, args.omega, math.sqrt(args.coupling_ratio), args.loops)
    header = ["lambda", "lambda_ks", "exact"] + _loop_header(args.loops)
    scale = math.sqrt(args.coupling_ratio)
    return render(header, ([r.lam, r.lam * scale, r.exact] + _loop_cells(r) for r in rows),
                  args.format, args.precision)


def cmd_fig1(args):
    data = gamma.figure1_data(args.N_list, args.Lmax)
    header = ["L"] + [f"ratio_N={N:g}" for N in args.N_list]
    return render(header, ([L] + ratios for L, ratios in data), args.format, args.precision)


def cmd_fig2(args):
    data = fermion.figure2_data(args.omega0_list, args.lambda_grid, args.N, args.omega)
    header = ["lambda"] + [f"Z3_omega0={w:g}" for w in args.omega0_list]
    return render(header, ([lam] + vals for lam, vals in data), args.format, args.precision)


def _check_lines_appendix_b(L_max: int) -> list[tuple[bool, str]]:
    # describe() leads with its own PASS/FAIL tag
    return [(c.ok, c.describe().split(" ", 1)[1]) for c in combinatorics.verify_appendix_b(L_max)]


def _check_lines_equivalence() -> list[tuple[bool, str]]:
    out = []
    for w0 in (1.0, 100.0):
        for lam in fermion.TABLE_LAMBDAS:
            p = fermion.FermionParams(2, 1.0, w0, lam)
            ex = float(fermion.exact_partition(p))
            for l in range(4):
                d = abs(fermion.method2_z(p, l) - fermion.method1_z(p, l)) / abs(ex)
                out.append((d < 1e-4, f"method-equivalence omega0={w0:g} lambda={lam:g} l={l}: rel diff {d:.3e}"))
    rep = gamma.method2_gamma_check(4)
    out.append((rep.ok, "method-equivalence gamma L<=4: "
                + ("exact match" if rep.ok else f"mismatches {rep.mismatches()}")))
    return out


def _check_lines_oracle() -> list[tuple[bool, str]]:
    out = []
    for N in range(1, 7):
        for w0 in (1e-2, 1.0, 1e2):
            for lam in fermion.TABLE_LAMBDAS:
                ex = float(fermion.exact_partition(fermion.FermionParams(N, 1.0, w0, lam)))
                q = quadrature.fermion_z_by_quadrature(N, 1.0, w0, lam)
                d = abs(q / ex - 1)
                out.append((d < 1e-8, f"oracle fermion N={N} omega0={w0:g} lambda={lam:g}: rel err {d:.3e}"))
    for N in range(1, 11):
        q = quadrature.gamma_by_quadrature(N)
        d = abs(q / math.factorial(N - 1) - 1)
        out.append((d < 1e-10, f"oracle gamma N={N}: rel err {d:.3e}"))
    return out


def cmd_verify(args):
    selected = [args.appendix_b, args.method_equivalence, args.oracle]
    if not any(selected):
        selected = [True, True, True]
    lines: list[tuple[bool, str]] = []
    if selected[0]:
        lines += _check_lines_appendix_b(args.Lmax)
    if selected[1]:
        lines += _check_lines_equivalence()
    if selected[2]:
        lines += _check_lines_oracle()
    text = "".join(("PASS " if ok else "FAIL ") + msg + "\n" for ok, msg in lines)
    failed = sum(1 for ok, _ in lines if not ok)
    text += f"{len(lines) - failed}/{len(lines)} checks passed\n"
    if failed:
        raise VerificationFailed(text)
    return text


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-o", "--output", help=f"output file ('-' for stdout); default ${OUTPUT_DIR_ENV}/<command>.<ext> or stdout")
    common.add_argument("--format", choices=sorted(DELIMITERS), default="csv")
    common.add_argument("--precision", type=_precision, default=6, help="significant digits for floats, 4..17")

    parser = argparse.ArgumentParser(prog="auxfield", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ttable", parents=[common], help="exact T(L,k|2L-k) table")
    p.add_argument("--Lmax", type=int, default=14)
    p.add_argument("--normalized", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--force", action="store_true", help="allow --Lmax above 14")
    p.set_defaults(func=cmd_ttable)

    p = sub.add_parser("stirling", parents=[common], help="Stirling series coefficients")
    p.add_argument("--order", type=int, default=14)
    p.set_defaults(func=cmd_stirling)

    p = sub.add_parser("gamma-table", parents=[common], help="Gamma(N) tree..l-loop table")
    p.add_argument("--N-list", type=_float_list, default=[1, 2, 5, 10])
    p.add_argument("--loops", type=int, choices=range(0, 16), default=15, metavar="0..15")
    p.set_defaults(func=cmd_gamma_table)

    p = sub.add_parser("fermion-table", parents=[common], help="fermion model table by method I or II")
    p.add_argument("--method", choices=["I", "II"], default="I")
    p.add_argument("--omega0", type=_float_list, default=list(fermion.TABLE_OMEGA0))
    p.add_argument("--lambda-grid", type=_float_list, default=list(fermion.TABLE_LAMBDAS))
    p.add_argument("--loops", type=int, choices=range(0, 4), default=3, metavar="0..3")
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--omega", type=float, default=1.0)
    p.set_defaults(func=cmd_fermion_table)

    p = sub.add_parser("ks-table", parents=[common], help="fully degenerate model table")
    p.add_argument("--lambda-grid", type=_float_list, default=list(fermion.TABLE_LAMBDAS))
    p.add_argument("--coupling-ratio", type=float, default=1.5, help="lambda_ks^2 / lambda^2")
    p.add_argument("--loops", type=int, choices=range(0, 4), default=3, metavar="0..3")
    p.add_argument("--N", type=int, default=3)
    p.add_argument("--omega", type=float, default=1.0)
    p.set_defaults(func=cmd_ks_table)

    p = sub.add_parser("fig1", parents=[common], help="Gamma ratio by highest kept 1/N power")
    p.add_argument("--N-list", type=_float_list, default=[1, 2, 5, 10])
    p.add_argument("--Lmax", type=int, choices=range(0, 15), default=14, metavar="0..14")
    p.set_defaults(func=cmd_fig1)

    p = sub.add_parser("fig2", parents=[common], help="third-saddle 3-loop contribution against lambda")
    p.add_argument("--omega0-list", type=_float_list, default=[0.01, 0.05, 0.1])
    p.add_argument("--lambda-grid", type=_float_list, default=list(DEFAULT_FIG2_GRID))
    p.add_argument("--N", type=int, default=2)
    p.add_argument("--omega", type=float, default=1.0)
    p.set_defaults(func=cmd_fig2)

    p = sub.add_parser("verify", parents=[common], help="identity, method-equivalence and oracle checks")
    p.add_argument("--appendix-b", action="store_true", help="T-coefficient identities")
    p.add_argument("--method-equivalence", action="store_true")
    p.add_argument("--oracle", action="store_true", help="quadrature against closed forms")
    p.add_argument("--Lmax", type=int, default=10)
    p.set_defaults(func=cmd_verify)
    return parser


def _destination(args) -> Path | None:
    if args.output == "-":
        return None
    if args.output:
        return Path(args.output)
    out_dir = os.environ.get(OUTPUT_DIR_ENV)
    if out_dir:
        return Path(out_dir) / f"{args.command}.{EXTENSIONS[args.format]}"
    return None


def _emit(text: str, dest: Path | None) -> None:
    if dest is None:
        sys.stdout.write(text)
    else:
        dest.parent.mkdir(parents=True, exist_ok=True)
        dest.write_text(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    dest = _destination(args)
    try:
        text = args.func(args)
    except VerificationFailed as exc:
        try:
            _emit(str(exc), dest)
        except OSError as io_exc:
            print(f"auxfield: {io_exc}", file=sys.stderr)
        print("auxfield: verification failed", file=sys.stderr)
        return 1
    except (ValueError, fermion.NonExpandableBranch) as exc:
        print(f"auxfield {args.command}: {exc}", file=sys.stderr)
        return 2
    try:
        _emit(text, dest)
    except OSError as exc:
        print(f"auxfield: cannot write output: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
