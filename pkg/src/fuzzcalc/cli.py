"""Command-line front end: evaluate expressions, estimate derivatives,
analyze power series, and solve fully fuzzy IVPs, emitting alpha-cut CSV
tables and human-readable summaries.

Exit codes: 0 success, 1 domain error (error name on stderr), 2 usage or
parse error.
"""

from __future__ import annotations

import argparse
import math
import sys
from datetime import datetime

import numpy as np

from .calculus import LimitSchedule, mh_derivative
from .core import (
    AlphaGrid,
    FuzzyNumber,
    from_alpha_grid,
    make_triangular,
    singleton,
)
from .errors import (
    ExprSyntaxError,
    FuzzyError,
    ImproperOperand,
    NoLimit,
    ProblemFileError,
)
from .expr import Env, evaluate, parse_expr
from .ivp import IvpProblem, solve
from .series import (
    FuzzyPowerSeries,
    parse_coeff_rule,
    radius_four_quotient,
    radius_symbolic_ratio,
    ratio_test,
    taylor_series_of,
)

PROBLEM_KEYS = ("command", "rhs", "x0", "y0", "h", "order", "steps", "alphas", "out")


# -- alpha-cut tables ---------------------------------------------------------------


def _fmt(x: float) -> str:
    # shortest decimal that round-trips the double
    return repr(float(x))


def write_alpha_csv(value: FuzzyNumber, path, metadata: dict | None = None) -> None:
    """Write ``alpha,lower,upper`` rows in ascending alpha, LF-terminated.

    Metadata (command, inputs, timestamp) goes into leading '#' comment
    lines, which golden comparisons and the reader ignore.
    """
    if not value.proper:
        raise ImproperOperand("refusing to serialize an improper fuzzy number")
    lines = []
    for key, val in (metadata or {}).items():
        lines.append(f"# {key}: {val}")
    lines.append("alpha,lower,upper")
    for a, lo, hi in zip(value.grid.levels, value.lower, value.upper):
        lines.append(f"{_fmt(a)},{_fmt(lo)},{_fmt(hi)}")
    with open(path, "w", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def read_alpha_csv(path) -> FuzzyNumber:
    """Rebuild a fuzzy number from an alpha-cut table."""
    levels, lows, highs = [], [], []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line or line.startswith("#") or line == "alpha,lower,upper":
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise ProblemFileError(f"malformed table row: {line!r}")
            a, lo, hi = (float(p) for p in parts)
            levels.append(a)
            lows.append(lo)
            highs.append(hi)
    return from_alpha_grid(lows, highs, AlphaGrid(levels))


# -- shared parsing helpers ------------------------------------------------------------


def _parse_fuzzy_value(text: str, grid: AlphaGrid) -> FuzzyNumber:
    """Parse "T(d,e,f)" or a crisp number into a fuzzy number on ``grid``."""
    text = text.strip()
    if text.startswith("T"):
        node = parse_expr(text, grid)
        from .expr import FuzzyConst

        if not isinstance(node, FuzzyConst):
            raise ProblemFileError(f"expected a triplet literal, got {text!r}")
        return node.value
    try:
        return singleton(float(text), grid)
    except ValueError:
        raise ProblemFileError(f"expected T(d,e,f) or a number, got {text!r}") from None


def _parse_bindings(pairs: list[str], grid: AlphaGrid) -> Env:
    bindings = {}
    for pair in pairs:
        name, sep, value = pair.partition("=")
        if not sep or not name.strip():
            raise ProblemFileError(f"binding must look like name=value, got {pair!r}")
        bindings[name.strip()] = _parse_fuzzy_value(value, grid)
    return Env(bindings, grid)


def _grid_from(alphas: int) -> AlphaGrid:
    if alphas < 2:
        raise ProblemFileError("grid resolution must be at least 2")
    return AlphaGrid.uniform(alphas)


def read_problem_file(path) -> dict:
    """Flat key = value lines; '#' starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            for ln, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                key, sep, value = line.partition("=")
                key = key.strip()
                if not sep or key not in PROBLEM_KEYS:
                    raise ProblemFileError(f"{path}:{ln}: expected 'key = value' with "
                                           f"key in {PROBLEM_KEYS}, got {raw.strip()!r}")
                out[key] = value.strip()
    except OSError as exc:
        raise ProblemFileError(f"cannot read problem file: {exc}") from None
    return out


def _truncate2(x: float) -> float:
    # absorb float dust (1.2 + 0.12 = 1.3199999...) before chopping to 2dp
    return math.trunc(round(x, 9) * 100.0) / 100.0


def _summary(value: FuzzyNumber, label: str = "value") -> list[str]:
    s, c = value.support, value.core
    full = (s.lo, c.midpoint, s.hi)
    rounded = tuple(_truncate2(v) for v in full)
    return [
        f"{label} support: [{_fmt(s.lo)}, {_fmt(s.hi)}]",
        f"{label} core: [{_fmt(c.lo)}, {_fmt(c.hi)}]",
        f"{label} triplet: ({_fmt(full[0])}, {_fmt(full[1])}, {_fmt(full[2])})",
        f"{label} triplet (2dp): ({rounded[0]:.2f}, {rounded[1]:.2f}, {rounded[2]:.2f})",
    ]


def _emit(value: FuzzyNumber, args, command: str, extra_meta: dict | None = None):
    if args.out:
        meta = {"command": command, "generated": datetime.now().isoformat(timespec="seconds")}
        meta.update(extra_meta or {})
        write_alpha_csv(value, args.out, meta)
        print(f"alpha table written to {args.out}")


# -- commands ------------------------------------------------------------------------------


def _cmd_eval(args) -> int:
    grid = _grid_from(args.alphas)
    env = _parse_bindings(args.bind, grid)
    node = parse_expr(args.expr, grid)
    value = evaluate(node, env)
    print("command: eval")
    print(f"expression: {args.expr}")
    for line in _summary(value):
        print(line)
    _emit(value, args, "eval", {"expression": args.expr})
    return 0


def _cmd_derive(args) -> int:
    grid = _grid_from(args.alphas)
    env = _parse_bindings(args.bind, grid)
    if args.var not in env.bindings:
        raise ProblemFileError(f"--var {args.var}: no binding given for it")
    x0 = env.bindings[args.var]
    rest = {k: v for k, v in env.bindings.items() if k != args.var}
    node = parse_expr(args.expr, grid)
    est = mh_derivative(node, args.var, x0, Env(rest, grid), LimitSchedule(tol=args.tol))
    print("command: derive")
    print(f"expression: {args.expr}  (d/d{args.var})")
    for line in _summary(est.value, "derivative"):
        print(line)
    print(f"converged: {est.converged}")
    print(f"one-sided gap: {_fmt(est.gap)}")
    print(f"final step: {_fmt(est.h_final)}")
    _emit(est.value, args, "derive", {"expression": args.expr, "var": args.var})
    return 0


def _taylor_probe(order: int) -> int:
    # probes at n and n/2 behave best when both indices fall at the same
    # phase of the sin/cos derivative cycle, so prefer multiples of 8
    avail = order - 1
    if avail >= 8:
        return (avail // 8) * 8
    return (avail // 2) * 2


def _cmd_series(args) -> int:
    grid = _grid_from(args.alphas)
    if bool(args.taylor_of) == bool(args.coeff_rule):
        raise ProblemFileError("give exactly one of --taylor-of or --coeff-rule")

    print("command: series")
    if args.taylor_of:
        if not (args.var and args.center and args.order is not None):
            raise ProblemFileError("--taylor-of needs --var, --center, and --order")
        center = _parse_fuzzy_value(args.center, grid)
        node = parse_expr(args.taylor_of, grid)
        s = taylor_series_of(node, args.var, center, args.order)
        print(f"taylor expansion of: {args.taylor_of}  (order {args.order})")
        for k in range(min(args.order, 6) + 1):
            c = s.coefficient(k)
            print(f"  a_{k} triplet: ({_fmt(c.support.lo)}, {_fmt(c.core.midpoint)},"
                  f" {_fmt(c.support.hi)})")
        mode = args.radius_mode or "four-quotient"
        n_probe = _taylor_probe(args.order)
        if mode == "four-quotient" and n_probe < 2:
            raise ProblemFileError("order too small to probe coefficient quotients")
    else:
        rule = parse_coeff_rule(args.coeff_rule, grid)
        s = FuzzyPowerSeries(singleton(0.0, grid), rule)
        print(f"coefficient rule: {args.coeff_rule}")
        mode = args.radius_mode or "symbolic"
        n_probe = 16

    if mode == "symbolic":
        result = radius_symbolic_ratio(s)
    else:
        result = radius_four_quotient(s, n_probe)
    print(f"radius mode: {result.mode}")
    if result.is_infinite:
        print("radius: infinite")
    else:
        for line in _summary(result.R, "radius"):
            print(line)
    print(f"ratio-test values: L_lower={_fmt(result.L_lower)} L_upper={_fmt(result.L_upper)}")
    if n_probe >= 2:
        try:
            check = ratio_test(s, n_probe)
            print(f"ratio test converges: {check.converges}")
        except NoLimit:
            print("ratio test: no limit declared at the probe indices")
    _emit(result.R, args, "series", {"radius_mode": result.mode})
    return 0


def _cmd_solve_ivp(args) -> int:
    settings = read_problem_file(args.file) if args.file else {}
    if settings.get("command", "solve-ivp") != "solve-ivp":
        raise ProblemFileError(f"problem file is for {settings['command']!r}, not solve-ivp")
    for key in ("rhs", "x0", "y0", "h", "order", "steps", "alphas", "out"):
        flag = getattr(args, key, None)
        if flag is not None:
            settings[key] = flag if isinstance(flag, str) else str(flag)
    missing = [k for k in ("rhs", "x0", "y0", "h") if k not in settings]
    if missing:
        raise ProblemFileError(f"missing problem fields: {', '.join(missing)}")

    try:
        alphas = int(settings.get("alphas", 101))
        order = int(settings.get("order", 2))
        steps = int(settings.get("steps", 1))
    except ValueError as exc:
        raise ProblemFileError(f"bad integer field: {exc}") from None
    if not 1 <= order <= 4:
        raise ProblemFileError("order must be between 1 and 4")
    if steps < 1:
        raise ProblemFileError("steps must be at least 1")
    grid = _grid_from(alphas)

    problem = IvpProblem(
        rhs=parse_expr(settings["rhs"], grid),
        x0=_parse_fuzzy_value(settings["x0"], grid),
        y0=_parse_fuzzy_value(settings["y0"], grid),
        h=_parse_fuzzy_value(settings["h"], grid),
        order=order,
        steps=steps,
    )
    solution = solve(problem)
    x_final, y_final = solution.final
    print("command: solve-ivp")
    print(f"rhs: {settings['rhs']}")
    print(f"order: {order}  steps: {steps}")
    for i, mag in enumerate(solution.truncation_magnitudes, start=1):
        print(f"step {i} truncation magnitude: {_fmt(mag)}")
    for line in _summary(x_final, "x"):
        print(line)
    for line in _summary(y_final, "y"):
        print(line)
    out = settings.get("out")
    if out:
        meta = {
            "command": "solve-ivp",
            "rhs": settings["rhs"],
            "generated": datetime.now().isoformat(timespec="seconds"),
        }
        write_alpha_csv(y_final, out, meta)
        print(f"alpha table written to {out}")
    return 0


# -- entry points ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fuzzcalc",
        description="Alpha-cut fuzzy calculus: arithmetic, mH-derivatives, "
        "power series, and fully fuzzy Taylor IVP solving.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    pe = sub.add_parser("eval", help="evaluate an expression over fuzzy bindings")
    pe.add_argument("--expr", required=True, help="expression text")
    pe.add_argument("--bind", action="append", default=[], metavar="NAME=T(d,e,f)|V",
                    help="variable binding (repeatable)")
    pe.add_argument("--alphas", type=int, default=101, help="grid resolution")
    pe.add_argument("--out", help="alpha-cut CSV path")

    pd = sub.add_parser("derive", help="numerical mH-derivative at a fuzzy point")
    pd.add_argument("--expr", required=True)
    pd.add_argument("--var", required=True, help="differentiation variable")
    pd.add_argument("--bind", action="append", default=[], metavar="NAME=T(d,e,f)|V")
    pd.add_argument("--tol", type=float, default=1e-7, help="limit tolerance")
    pd.add_argument("--alphas", type=int, default=101)
    pd.add_argument("--out", help="alpha-cut CSV path")

    ps = sub.add_parser("series", help="Taylor coefficients and convergence radius")
    ps.add_argument("--taylor-of", dest="taylor_of", help="expression to expand")
    ps.add_argument("--var", help="expansion variable")
    ps.add_argument("--center", help="T(d,e,f) or number")
    ps.add_argument("--order", type=int, help="number of derivative terms")
    ps.add_argument("--coeff-rule", dest="coeff_rule",
                    help="closed-form coefficients, e.g. 'n / T(4,5,6)^(n-1)'")
    ps.add_argument("--radius-mode", choices=("four-quotient", "symbolic"))
    ps.add_argument("--alphas", type=int, default=101)
    ps.add_argument("--out", help="alpha-cut CSV path for the radius")

    pi = sub.add_parser("solve-ivp", help="Taylor-method fully fuzzy IVP")
    pi.add_argument("--file", help="problem file (key = value lines)")
    pi.add_argument("--rhs", help="right-hand side F(x, y)")
    pi.add_argument("--x0", help="initial point, T(d,e,f) or number")
    pi.add_argument("--y0", help="initial value")
    pi.add_argument("--h", help="fuzzy step")
    pi.add_argument("--order", type=int, choices=(1, 2, 3, 4))
    pi.add_argument("--steps", type=int)
    pi.add_argument("--alphas", type=int)
    pi.add_argument("--out", help="alpha-cut CSV path for the final value")

    return parser


_HANDLERS = {
    "eval": _cmd_eval,
    "derive": _cmd_derive,
    "series": _cmd_series,
    "solve-ivp": _cmd_solve_ivp,
}


def run(argv: list[str]) -> int:
    """Execute one command; returns the process exit code, never raises for
    malformed input."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code is None:
            return 0
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return _HANDLERS[args.command](args)
    except (ExprSyntaxError, ProblemFileError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except FuzzyError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ZeroDivisionError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))
