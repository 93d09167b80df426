"""Command-line front end.

Subcommands: pdf, cdf, sample, mellin, contour, verify. Results go to
stdout or to ``--out PATH`` (written atomically); ``--out csv`` and
``--out json`` select the format and keep stdout.

Exit status: 0 success, 1 usage or validation error, 2 failed verification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import KanterError
from .foxh import QuadPolicy, exp_v_pdf
from .free import (
    FREE_LIMIT_METADATA,
    contour_array,
    contour_points,
    free_limit_pdf,
    free_stable_cdf,
    free_stable_pdf,
)
from .kanter import (
    critical_exponent,
    kanter_mellin,
    sample_exp_v,
    sample_kanter,
    sample_positive_stable,
    sample_stable_neg_pow,
)
from .numerics import DEFAULT_POLICY, RandomStream, SeriesPolicy
from .series import (
    exp_v_mellin,
    kanter_cdf,
    kanter_pdf,
    stable_cdf,
    stable_neg_pow_pdf,
    stable_pdf,
)
from .verify import SUITES, run_suite

TARGETS = ("stable", "kanter", "free", "expv", "free-limit", "stable-neg-pow")
EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2


class UsageError(Exception):
    """Invalid command line or parameter combination."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 by default, which is reserved for failed verification
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def parse_grid(text: str, log: bool = False) -> np.ndarray:
    """``min:max:count`` (inclusive endpoints) or a comma separated list."""
    try:
        if ":" in text:
            lo, hi, cnt = text.split(":")
            lo, hi, n = float(lo), float(hi), int(cnt)
            if n < 1:
                raise UsageError("grid count must be >= 1")
            if log:
                if not (lo > 0 and hi > 0):
                    raise UsageError("log grid needs positive endpoints")
                return np.geomspace(lo, hi, n)
            return np.linspace(lo, hi, n)
        return np.array([float(v) for v in text.split(",") if v.strip()])
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None


def _policies(tol: Optional[float]) -> tuple[SeriesPolicy, QuadPolicy]:
    if tol is None:
        return DEFAULT_POLICY, QuadPolicy()
    return SeriesPolicy(rel_tol=tol), QuadPolicy(target_tol=tol)


def _need_r(args) -> float:
    if args.r is None:
        raise UsageError("--r is required for target expv")
    if not args.r > critical_exponent(args.alpha):
        raise UsageError(f"expv requires r > alpha/(1-alpha) = {critical_exponent(args.alpha):.17g}")
    return args.r


def _density_fn(args, kind: str) -> Callable[[np.ndarray], np.ndarray]:
    series_pol, quad_pol = _policies(args.tol)
    a, t = args.alpha, args.target
    if kind == "pdf":
        if t == "stable":
            return lambda x: stable_pdf(a, x, series_pol)
        if t == "kanter":
            return lambda x: kanter_pdf(a, x, series_pol)
        if t == "free":
            return lambda x: free_stable_pdf(a, x)
        if t == "expv":
            r = _need_r(args)
            return lambda x: exp_v_pdf(a, r, x, quad_pol)
        if t == "free-limit":
            return free_limit_pdf
        if t == "stable-neg-pow":
            return lambda x: stable_neg_pow_pdf(a, x, series_pol)
    else:
        if t == "stable":
            return lambda x: stable_cdf(a, x)
        if t == "kanter":
            return lambda x: kanter_cdf(a, x)
        if t == "free":
            return lambda x: free_stable_cdf(a, x)
    raise UsageError(f"{kind} is not available for target {t}")


# ---------------------------------------------------------------------------
# Output


def _fmt(v: float) -> str:
    return "%.17g" % v


def _csv_text(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, (int, str)) else _fmt(v) for v in row])
    return buf.getvalue()


def _json_rows(header: Sequence[str], rows: Sequence[Sequence], meta: Optional[dict] = None) -> str:
    data = [dict(zip(header, (v if isinstance(v, int) else float(v) for v in row))) for row in rows]
    obj = {"metadata": meta, "rows": data} if meta else data
    return json.dumps(obj, indent=1, allow_nan=True) + "\n"


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the same directory and rename over ``path``."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _resolve_output(args) -> tuple[str, Optional[str]]:
    fmt = args.format
    path = args.out
    if path in ("csv", "json"):
        fmt, path = path, None
    return fmt or "csv", path


def _emit(args, header, rows, meta: Optional[dict] = None) -> None:
    fmt, path = _resolve_output(args)
    text = _csv_text(header, rows) if fmt == "csv" else _json_rows(header, rows, meta)
    if path is None:
        sys.stdout.write(text)
    else:
        write_atomic(path, text)


# ---------------------------------------------------------------------------
# Commands


def cmd_density(args, kind: str) -> int:
    if args.grid is None:
        raise UsageError("--grid is required")
    x = parse_grid(args.grid, args.log)
    if np.any(~(x > 0)):
        raise UsageError("grid points must be positive")
    values = np.asarray(_density_fn(args, kind)(x), dtype=float).reshape(x.shape)
    meta = dict(FREE_LIMIT_METADATA) if args.target == "free-limit" else None
    if meta is not None:
        meta["mass"] = "inf"
    _emit(args, ("x", "value"), list(zip(x, values)), meta)
    return EXIT_OK


def cmd_sample(args) -> int:
    if args.target in ("free", "free-limit"):
        raise UsageError(f"sampling is not available for target {args.target}")
    if args.n < 1:
        raise UsageError("--n must be >= 1")
    stream = RandomStream(args.seed)
    a = args.alpha
    if args.target == "stable":
        batch = sample_positive_stable(a, args.n, stream)
    elif args.target == "kanter":
        batch = sample_kanter(a, args.n, stream)
    elif args.target == "stable-neg-pow":
        batch = sample_stable_neg_pow(a, args.n, stream)
    else:
        batch = sample_exp_v(a, _need_r(args), args.n, stream)
    _emit(args, ("index", "value"), list(zip(range(len(batch)), batch.values)))
    return EXIT_OK


def cmd_mellin(args) -> int:
    if args.grid is None:
        raise UsageError("--grid is required (values of s)")
    s = parse_grid(args.grid, args.log)
    if args.target == "kanter":
        vals = [kanter_mellin(args.alpha, v) for v in s]
    elif args.target == "expv":
        r = _need_r(args)
        vals = [exp_v_mellin(args.alpha, r, v) for v in s]
    else:
        raise UsageError(f"mellin is available for targets kanter and expv, not {args.target}")
    _emit(args, ("s", "value"), list(zip(s, vals)))
    return EXIT_OK


def cmd_contour(args) -> int:
    if args.points < 1:
        raise UsageError("--points must be >= 1")
    arr = contour_array(contour_points(args.alpha, args.points, args.curve))
    _emit(args, ("theta", "re", "im"), [tuple(row) for row in arr])
    return EXIT_OK


def cmd_verify(args) -> int:
    reports = run_suite(args.suite, n=args.n, seed=args.seed)
    fmt, path = _resolve_output(args)
    dicts = [r.to_dict() for r in reports]
    if fmt == "json":
        text = json.dumps(dicts, indent=1) + "\n"
    else:
        header = ("check_name", "statistic", "reference", "tolerance", "n_samples", "passed",
                  "diagnostics")
        rows = [(d["check_name"], d["statistic"], d["reference"], d["tolerance"], d["n_samples"],
                 str(d["passed"]).lower(), d["diagnostics"]) for d in dicts]
        text = _csv_text(header, rows)
    if path is None:
        sys.stdout.write(text)
    else:
        write_atomic(path, text)
    failed = [r for r in reports if not r.passed]
    for r in failed:
        print(f"FAILED {r.check_name}: statistic={r.statistic:.17g} reference={r.reference:.17g} "
              f"tolerance={r.tolerance:.3g}", file=sys.stderr)
    return EXIT_FAILED if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="kanterlab", description="Positive stable laws through Kanter's variable.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, target=True, grid=True):
        if target:
            sp.add_argument("--target", choices=TARGETS, default="stable")
        sp.add_argument("--alpha", type=float, default=0.5)
        sp.add_argument("--r", type=float, default=None, help="exponent r for target expv")
        if grid:
            sp.add_argument("--grid", help="min:max:count (inclusive) or comma separated list")
            sp.add_argument("--log", action="store_true", help="log-spaced grid")
        sp.add_argument("--out", default=None, help="output path, or 'csv'/'json' for stdout")
        sp.add_argument("--format", choices=("csv", "json"), default=None)
        sp.add_argument("--tol", type=float, default=None, help="relative tolerance override")

    for name in ("pdf", "cdf"):
        common(sub.add_parser(name, help=f"evaluate the {name} on a grid"))
    sp = sub.add_parser("sample", help="draw a reproducible sample")
    common(sp, grid=False)
    sp.add_argument("--n", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp = sub.add_parser("mellin", help="Mellin transform E[Y**(-s)] on a grid of s")
    common(sp)
    sp = sub.add_parser("contour", help="points of C_alpha or of the Omega boundary")
    common(sp, target=False, grid=False)
    sp.add_argument("--curve", choices=("C", "omega"), default="C")
    sp.add_argument("--points", type=int, default=100)
    sp = sub.add_parser("verify", help="run identity checks")
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--n", type=int, default=1_000_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.add_argument("--format", choices=("csv", "json"), default="json")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if hasattr(args, "alpha") and not 0.0 < args.alpha < 1.0:
            raise UsageError(f"--alpha must lie in (0, 1), got {args.alpha}")
        if hasattr(args, "seed") and not 0 <= args.seed < 2**64:
            raise UsageError("--seed must be a 64-bit unsigned integer")
        if args.command in ("pdf", "cdf"):
            return cmd_density(args, args.command)
        if args.command == "sample":
            return cmd_sample(args)
        if args.command == "mellin":
            return cmd_mellin(args)
        if args.command == "contour":
            return cmd_contour(args)
        return cmd_verify(args)
    except (UsageError, KanterError, ValueError) as exc:
        print(f"kanterlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"kanterlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
