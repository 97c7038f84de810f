"""Command-line front end.

    grassq verify <selector> [--n a..b] [--rho r1,r2,...] [--input problem.json]
                  [--format text|json] [--tol 1e-10] [--max-n 8] [--timings]

Exit codes: 0 when every check passes (reported discrepancies do not
fail a run), 1 when any check fails, 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .errors import EngineError, ProblemFormatError
from .suites import Problem, SELECTORS, SuiteReport, emit_report, run_suite


def load_problem(path: str) -> Problem:
    """Parse and validate a problem description.

    Schema: {"n": int >= 2, "rho": ["p/q", ...] with n-1 positive
    rationals, "H": optional n x n matrix of [re, im] pairs}.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"{path}: invalid JSON at line {exc.lineno}: "
                                 f"{exc.msg}") from None
    if not isinstance(raw, dict):
        raise ProblemFormatError(f"{path}: top level must be an object")
    n = raw.get("n")
    if not isinstance(n, int) or isinstance(n, bool) or n < 2:
        raise ProblemFormatError(f"{path}: field 'n' must be an integer >= 2")
    rho_raw = raw.get("rho", [])
    if not isinstance(rho_raw, list):
        raise ProblemFormatError(f"{path}: field 'rho' must be a list of strings")
    rho = []
    for k, item in enumerate(rho_raw):
        if not isinstance(item, str):
            raise ProblemFormatError(
                f"{path}: rho[{k}] must be a rational encoded as a string")
        try:
            value = Fraction(item)
        except (ValueError, ZeroDivisionError):
            raise ProblemFormatError(
                f"{path}: rho[{k}] = {item!r} is not a valid rational") from None
        if value <= 0:
            raise ProblemFormatError(f"{path}: rho[{k}] must be positive")
        rho.append(value)
    if len(rho) != n - 1:
        raise ProblemFormatError(
            f"{path}: expected {n - 1} rho values for n = {n}, got {len(rho)}")
    H = None
    if "H" in raw:
        rows = raw["H"]
        if (not isinstance(rows, list) or len(rows) != n
                or any(not isinstance(row, list) or len(row) != n for row in rows)):
            raise ProblemFormatError(f"{path}: field 'H' must be an {n}x{n} matrix")
        H = np.zeros((n, n), dtype=complex)
        for i, row in enumerate(rows):
            for j, entry in enumerate(row):
                if (not isinstance(entry, list) or len(entry) != 2
                        or any(not isinstance(x, (int, float)) or isinstance(x, bool)
                               for x in entry)):
                    raise ProblemFormatError(
                        f"{path}: H[{i}][{j}] must be a [re, im] pair")
                H[i, j] = complex(entry[0], entry[1])
    return Problem(n=n, rho=tuple(rho), H=H)


def _parse_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo_s, hi_s = text.split("..", 1)
            lo, hi = int(lo_s), int(hi_s)
        else:
            lo = hi = int(text)
    except ValueError:
        raise EngineError(f"invalid level range {text!r}; use e.g. 2..4") from None
    return lo, hi


def _default_matrix(n: int):
    """Fallback matrix when only rho values are supplied: the reference
    two-level system, or a seeded real-spectrum similarity otherwise."""
    if n == 2:
        return [[1.0, 4.0], [1.0, 1.0]]
    rng = np.random.default_rng(12345)
    diag = np.diag(np.arange(1.0, n + 1.0))
    S = np.eye(n) + 0.3 * rng.standard_normal((n, n))
    return S @ diag @ np.linalg.inv(S)


def _parse_rho(text: str) -> tuple[Fraction, ...]:
    values = []
    for piece in text.split(","):
        try:
            value = Fraction(piece.strip())
        except (ValueError, ZeroDivisionError):
            raise EngineError(f"invalid rho value {piece!r}") from None
        if value <= 0:
            raise EngineError("rho values must be positive")
        values.append(value)
    return tuple(values)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grassq",
        description="Verify graded coherent-state and ladder-operator identities.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("selector", choices=SELECTORS)
    verify.add_argument("--n", default="2..4", metavar="A..B",
                        help="level range for the symbolic suites (default 2..4)")
    verify.add_argument("--rho", default=None, metavar="R1,R2,...",
                        help="positive rationals for numeric grounding")
    verify.add_argument("--input", default=None, metavar="PROBLEM.JSON",
                        help="problem file with n, rho and an optional matrix")
    verify.add_argument("--format", default="text", choices=("text", "json"))
    verify.add_argument("--tol", type=float, default=1e-10)
    verify.add_argument("--max-n", type=int, default=8,
                        help="hard cap on the level range (default 8)")
    verify.add_argument("--timings", action="store_true",
                        help="include per-check runtimes (breaks byte-stability)")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        n_range = _parse_range(args.n)
        problem = None
        if args.input is not None:
            problem = load_problem(args.input)
        if args.rho is not None:
            rho = _parse_rho(args.rho)
            if problem is not None:
                problem = Problem(n=problem.n, rho=rho, H=problem.H)
            else:
                n = len(rho) + 1
                problem = Problem(n=n, rho=rho,
                                  H=np.asarray(_default_matrix(n), dtype=complex))
        report = run_suite(args.selector, n_range, problem=problem,
                           tol=args.tol, max_n=args.max_n,
                           timings=args.timings)
    except (EngineError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(emit_report(report, args.format))
    return 1 if report.failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
