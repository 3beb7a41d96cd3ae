"""Command-line front end.

Exit status: 0 on success, 1 when a verification suite fails, 2 on usage
or domain errors.  Floats are printed with 15 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import sys
from pathlib import Path

from .deficit import K, L, classify_domain, lower_bound_perimeter, optimal_set, scan
from .errors import IsodeficitError
from .intervals import format_set, normalize, parse_set, perimeter
from .measure import (
    CustomProfile,
    Gaussian,
    Laplace,
    Logistic,
    MeasureModel,
    check_profile_concavity,
    load_measure,
    perturbed_profile,
)
from .reducer import reduce
from .verifier import SUITES, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

CSV_COLUMNS = ("mu", "lambda", "domain", "J_m", "K", "L", "bound", "optimal_perimeter")

_BUILTINS = {
    "gaussian": Gaussian,
    "logistic": Logistic,
    "laplace": Laplace,
    "perturbed": lambda: CustomProfile(perturbed_profile, name="perturbed"),
}


class UsageError(Exception):
    pass


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.15g}"


def resolve_measure(source: str | None) -> MeasureModel:
    """A JSON config path, or one of the built-in names."""
    if source is None:
        return Gaussian()
    if source.lower() in _BUILTINS:
        return _BUILTINS[source.lower()]()
    path = Path(source)
    if not path.exists():
        raise UsageError(f"measure {source!r} is neither a file nor one of "
                         f"{', '.join(_BUILTINS)}")
    return load_measure(path)


def _grid(text: str | None) -> list[float] | None:
    if text is None:
        return None
    try:
        return [float(v) for v in text.replace(";", ",").split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}") from exc


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _row(m: MeasureModel, mu: float, lam: float) -> list[str]:
    x = min(mu, 1.0 - mu)
    s = optimal_set(m, mu, lam)
    return [fmt(mu), fmt(lam), classify_domain(mu, lam).id.value, fmt(m.profile(x)),
            fmt(K(m, x, lam)), fmt(L(m, x, lam)), fmt(lower_bound_perimeter(m, mu, lam)),
            fmt(perimeter(s, m))]


def _csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)
    return buf.getvalue()


def cmd_eval(m: MeasureModel, args) -> int:
    fn = {"density": m.density, "cdf": m.cdf, "quantile": m.quantile,
          "profile": m.profile}[args.quantity]
    _emit(fmt(fn(args.at)) + "\n", args.out)
    return EXIT_OK


def cmd_bounds(m: MeasureModel, args) -> int:
    _emit(_csv([_row(m, args.mu, args.lam)]), args.out)
    return EXIT_OK


def cmd_optimal(m: MeasureModel, args) -> int:
    s = optimal_set(m, args.mu, args.lam)
    dom = classify_domain(args.mu, args.lam).id.value
    _emit(f"{format_set(s)}\n# domain={dom} perimeter={fmt(perimeter(s, m))}\n", args.out)
    return EXIT_OK


def _parse_literal(text: str, m: MeasureModel, quantile_coords: bool):
    s = parse_set(text)
    if not quantile_coords:
        return s
    raw = []
    for p, q in s.intervals:
        if not 0.0 <= p < q <= 1.0:
            raise UsageError(f"quantile interval ({p}, {q}) outside [0, 1]")
        raw.append((-math.inf if p == 0.0 else m.quantile(p),
                    math.inf if q == 1.0 else m.quantile(q)))
    return normalize(raw)


def cmd_reduce(m: MeasureModel, args) -> int:
    s = _parse_literal(args.set, m, args.quantile_coords)
    final, trace = reduce(s, m)
    _emit(trace.to_jsonl(), args.out)
    print(f"final {format_set(final)} perimeter={fmt(perimeter(final, m))} "
          f"steps={len(trace)}", file=sys.stderr)
    return EXIT_OK


def cmd_verify(m: MeasureModel, args) -> int:
    rep = run_suite(args.suite, m, trials=args.trials, seed=args.seed, grid=args.grid)
    _emit(rep.to_json(indent=2) + "\n", args.out)
    return EXIT_OK if rep.ok else EXIT_FAIL


def cmd_scan(m: MeasureModel, args) -> int:
    mus, lams = _grid(args.mu_grid), _grid(args.lambda_grid)
    if (mus is None) != (lams is None):
        raise UsageError("--mu-grid and --lambda-grid must be given together")
    if mus is None:
        rows, skipped = scan(m, n=args.grid or 50)
    else:
        rows, skipped = scan(m, mus=mus, lambdas=lams)
    body = [[fmt(r.mu), fmt(r.lambda_), r.domain.value, fmt(r.J_m), fmt(r.K), fmt(r.L),
             fmt(r.bound), fmt(r.optimal_perimeter)] for r in rows]
    _emit(_csv(body), args.out)
    if skipped:
        print(f"skipped {skipped} infeasible grid cells", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--measure", help="JSON config path or one of: " + ", ".join(_BUILTINS))
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--seed", type=int, default=42)

    p = argparse.ArgumentParser(prog="isodeficit", description=(
        "Sharp isoperimetric deficit bounds for symmetric log-concave measures on R."))
    sub = p.add_subparsers(dest="command", required=True)

    e = sub.add_parser("eval", parents=[common], help="evaluate density, cdf, quantile or profile")
    e.add_argument("--quantity", required=True, choices=("density", "cdf", "quantile", "profile"))
    e.add_argument("--at", required=True, type=float)

    for name, help_ in (("bounds", "bounds row for (mu, lambda)"),
                        ("optimal", "minimizing set for (mu, lambda)")):
        b = sub.add_parser(name, parents=[common], help=help_)
        b.add_argument("--mu", required=True, type=float)
        b.add_argument("--lambda", dest="lam", required=True, type=float)

    r = sub.add_parser("reduce", parents=[common], help="reduce a set, printing a JSON-lines trace")
    r.add_argument("set", help='set literal such as "(-inf,-1)u(1,inf)"')
    r.add_argument("--quantile-coords", action="store_true",
                   help="read endpoints as quantiles in [0, 1]")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--trials", type=int)
    v.add_argument("--grid", type=int)

    s = sub.add_parser("scan", parents=[common], help="CSV table over a (mu, lambda) grid")
    s.add_argument("--grid", type=int, help="n for an n-by-n feasible grid (default 50)")
    s.add_argument("--mu-grid", help="comma-separated mu values")
    s.add_argument("--lambda-grid", help="comma-separated lambda values")
    return p


_COMMANDS = {"eval": cmd_eval, "bounds": cmd_bounds, "optimal": cmd_optimal,
             "reduce": cmd_reduce, "verify": cmd_verify, "scan": cmd_scan}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        m = resolve_measure(args.measure)
        report = check_profile_concavity(m)
        if not report.passed:
            lo, hi = report.at
            msg = (f"profile is not concave (midpoint violation "
                   f"{report.worst_violation:.3g} on [{lo:.6g}, {hi:.6g}])")
            if args.command != "verify":
                print(f"error: {msg}", file=sys.stderr)
                return EXIT_USAGE
            print(f"warning: {msg}", file=sys.stderr)
        return _COMMANDS[args.command](m, args)
    except (IsodeficitError, UsageError, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
