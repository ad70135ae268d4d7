"""Fuzzy power series: partial sums, convergence radius, ratio test, and
Taylor coefficient generation.

A series is a fuzzy center plus coefficients, either as an explicit list or
as a :class:`CoefficientRule` of the restricted shape

    a_n = (p(n) / q(n)) * (n!)^m * c^(sigma*n + t)

with crisp polynomials p, q, integer m and sigma, and a fuzzy base c.  That
shape is exactly what the symbolic radius mode knows how to cancel: the
shared growing powers collapse (c^n / c^(n-1) = c) while an n-independent
fuzzy factor stays behind as an honest fuzzy division c/c.

Two radius modes coexist because they are not equivalent.  The four-quotient
definition takes min/max over all endpoint pairings of |a_n / a_(n+1)|, and
for rules like n / c^(n-1) its cross pairings run off to 0 and infinity (the
probes then report NoLimit).  The symbolic mode cancels first and recovers
the base c exactly.  Both are exposed; neither is silently preferred.

Limits of quotient sequences are declared numerically from two probes at
n and n/2: agreement within 1e-6 relative declares the probed value, decay
by a factor <= 0.75 per doubling declares 0, growth by >= 1.5 declares
infinity, anything else raises NoLimit.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from .core import (
    AlphaGrid,
    FuzzyNumber,
    _nested,
    add,
    div,
    gh_difference,
    make_triangular,
    mul,
    pow_int,
    scalar_mul,
    singleton,
)
from .errors import ExprSyntaxError, GridMismatch, ImproperOperand, NoLimit, NotSimplifiable
from .expr import Env, Expr, differentiate, evaluate

_AGREE_RTOL = 1e-6
_DECAY_FACTOR = 0.75
_GROWTH_FACTOR = 1.5
_TINY = 1e-300


def _polyval(coeffs: tuple[float, ...], n: int) -> float:
    return float(sum(c * n**k for k, c in enumerate(coeffs)))


@dataclass(frozen=True)
class CoefficientRule:
    """Closed-form coefficients a_n = (p(n)/q(n)) * (n!)^m * c^(sigma*n + t).

    ``poly_num`` and ``poly_den`` hold crisp polynomial coefficients in n
    (constant term first).  ``base`` is the fuzzy c (None for purely crisp
    rules); its exponent is ``base_coeff * n + base_shift``.
    """

    poly_num: tuple[float, ...] = (1.0,)
    poly_den: tuple[float, ...] = (1.0,)
    factorial_power: int = 0
    base: FuzzyNumber | None = None
    base_coeff: int = 0
    base_shift: int = 0

    def value(self, n: int, grid: AlphaGrid | None = None) -> FuzzyNumber:
        num = _polyval(self.poly_num, n)
        den = _polyval(self.poly_den, n)
        if den == 0.0:
            raise ZeroDivisionError(f"rule denominator vanishes at n={n}")
        crisp = num / den
        if self.factorial_power:
            crisp *= float(math.factorial(n)) ** self.factorial_power
        if self.base is None:
            if grid is None:
                grid = AlphaGrid.uniform()
            return singleton(crisp, grid)
        expo = self.base_coeff * n + self.base_shift
        if expo >= 0:
            fuzzy = pow_int(self.base, expo)
        else:
            fuzzy = div(singleton(1.0, self.base.grid), pow_int(self.base, -expo))
        return scalar_mul(crisp, fuzzy)


class FuzzyPowerSeries:
    """Center plus coefficients (explicit list or CoefficientRule)."""

    def __init__(self, center: FuzzyNumber, coeffs):
        if not center.proper:
            raise ImproperOperand("series center is improper")
        self.center = center
        if isinstance(coeffs, CoefficientRule):
            if coeffs.base is not None and coeffs.base.grid != center.grid:
                raise GridMismatch("rule base and center live on different grids")
            self.coeffs = coeffs
        else:
            coeffs = tuple(coeffs)
            if not coeffs:
                raise ValueError("explicit coefficient list must be nonempty")
            for c in coeffs:
                if c.grid != center.grid:
                    raise GridMismatch("coefficient grids must match the center")
                if not c.proper:
                    raise ImproperOperand("coefficient is improper")
            self.coeffs = coeffs

    @property
    def is_rule(self) -> bool:
        return isinstance(self.coeffs, CoefficientRule)

    @property
    def max_index(self) -> int | None:
        return None if self.is_rule else len(self.coeffs) - 1

    def coefficient(self, n: int) -> FuzzyNumber:
        if self.is_rule:
            return self.coeffs.value(n, self.center.grid)
        if n >= len(self.coeffs):
            raise IndexError(f"series has {len(self.coeffs)} explicit coefficients")
        return self.coeffs[n]


def partial_sum(s: FuzzyPowerSeries, x: FuzzyNumber, n_terms: int) -> FuzzyNumber:
    """Sum of the first ``n_terms`` terms a_k * (x gH- center)^k."""
    if n_terms < 1:
        raise ValueError("need at least one term")
    diff = gh_difference(x, s.center)
    if not diff.proper:
        raise ImproperOperand("x gH- center is improper; partial sums undefined")
    total = s.coefficient(0)
    power = None
    for k in range(1, n_terms):
        power = diff if power is None else mul(power, diff)
        total = add(total, mul(s.coefficient(k), power))
    return total


# -- limit declaration -----------------------------------------------------------


def _declared_limits(q_half: np.ndarray, q_full: np.ndarray) -> np.ndarray:
    """Elementwise limit declaration from probes at n/2 and n."""
    q_half = np.asarray(q_half, dtype=float)
    q_full = np.asarray(q_full, dtype=float)
    if not (np.isfinite(q_half).all() and np.isfinite(q_full).all()):
        raise NoLimit("quotient probes are not finite")
    scale = np.maximum(np.maximum(np.abs(q_half), np.abs(q_full)), _TINY)
    agree = np.abs(q_full - q_half) <= _AGREE_RTOL * scale
    decay = q_full <= _DECAY_FACTOR * q_half
    growth = q_full >= _GROWTH_FACTOR * q_half
    out = np.where(agree, q_full, np.where(decay, 0.0, np.where(growth, np.inf, np.nan)))
    if np.isnan(out).any():
        raise NoLimit(
            "quotient probes neither agree nor decay/grow decisively; "
            "no limit can be declared"
        )
    return out


@dataclass(frozen=True)
class RadiusResult:
    """Fuzzy radius of convergence plus the ratio-test limit values."""

    R: FuzzyNumber
    mode: str  # "four-quotient" | "symbolic-ratio"
    L_lower: float
    L_upper: float
    n_used: int

    @property
    def is_infinite(self) -> bool:
        return bool(np.isinf(self.R.lower).all() and np.isinf(self.R.upper).all())


def infinite_radius(grid: AlphaGrid) -> FuzzyNumber:
    """Distinguished marker: both envelopes +inf at every level."""
    arr = np.full(len(grid), np.inf)
    return FuzzyNumber(grid, arr, arr.copy())


def _backward_quartet(s: FuzzyPowerSeries, n: int) -> np.ndarray:
    """|a_n / a_(n+1)| for the four endpoint pairings, per level (4 x L)."""
    a = s.coefficient(n)
    b = s.coefficient(n + 1)
    if np.any(np.abs(b.lower) < _TINY) or np.any(np.abs(b.upper) < _TINY):
        raise NoLimit(f"coefficient {n + 1} has a zero envelope endpoint")
    return np.abs(
        np.stack([a.lower / b.lower, a.lower / b.upper, a.upper / b.lower, a.upper / b.upper])
    )


def radius_four_quotient(s: FuzzyPowerSeries, n_probe: int = 16) -> RadiusResult:
    """Radius from the four-pairing endpoint quotients.

    The four limits are estimated from probes at n_probe and n_probe/2; per
    level the radius envelope is their min (lower) and max (upper).
    """
    if n_probe < 2:
        raise ValueError("n_probe must be at least 2")
    q_half = _backward_quartet(s, n_probe // 2)
    q_full = _backward_quartet(s, n_probe)
    limits = _declared_limits(q_half, q_full)  # 4 x L
    lower = limits.min(axis=0)
    upper = limits.max(axis=0)
    grid = s.center.grid
    if np.isinf(limits).all():
        R = infinite_radius(grid)
    else:
        R = FuzzyNumber(grid, lower, upper, proper=_nested(lower, upper))

    fwd_half = 1.0 / q_half[:, 0]
    fwd_full = 1.0 / q_full[:, 0]
    fwd_limits = _declared_limits(fwd_half, fwd_full)
    return RadiusResult(
        R=R,
        mode="four-quotient",
        L_lower=float(fwd_limits.min()),
        L_upper=float(fwd_limits.max()),
        n_used=n_probe,
    )


def radius_symbolic_ratio(s: FuzzyPowerSeries) -> RadiusResult:
    """Radius by structural cancellation of the coefficient rule.

    The polynomial ratio p(n)q(n+1)/(q(n)p(n+1)) tends to 1; a factorial
    factor drives the ratio to infinity (1/n! rules) or zero; the fuzzy
    base contributes c^(-sigma) with the n-dependent powers cancelled, while
    an n-independent fuzzy factor (sigma = 0) survives as the honest fuzzy
    division c/c.  Reported L values are the alpha=0 endpoints of the
    simplified forward ratio.
    """
    if not isinstance(s.coeffs, CoefficientRule):
        raise NotSimplifiable("explicit coefficient lists carry no structure to cancel")
    rule = s.coeffs
    if not any(c != 0.0 for c in rule.poly_num):
        raise NotSimplifiable("rule numerator is identically zero")
    grid = s.center.grid

    if rule.factorial_power < 0:
        return RadiusResult(infinite_radius(grid), "symbolic-ratio", 0.0, 0.0, 0)
    if rule.factorial_power > 0:
        return RadiusResult(singleton(0.0, grid), "symbolic-ratio", np.inf, np.inf, 0)

    sigma = rule.base_coeff
    if rule.base is None:
        R = singleton(1.0, grid)
        fwd = singleton(1.0, grid)
    elif sigma == 0:
        R = div(rule.base, rule.base)
        fwd = R
    else:
        if sigma < 0:
            R = pow_int(rule.base, -sigma)
            fwd = div(singleton(1.0, grid), R)
        else:
            R = div(singleton(1.0, grid), pow_int(rule.base, sigma))
            fwd = pow_int(rule.base, sigma)
    ends = (abs(fwd.lower[0]), abs(fwd.upper[0]))
    return RadiusResult(R, "symbolic-ratio", min(ends), max(ends), 0)


@dataclass(frozen=True)
class RatioTestResult:
    converges: bool
    L_lower: float
    L_upper: float

    @property
    def radius_is_infinite(self) -> bool:
        return self.L_upper == 0.0


def _forward_quartet(s: FuzzyPowerSeries, n: int) -> np.ndarray:
    """|a_(n+1) / a_n| for the four pairings at the alpha=0 endpoints."""
    a = s.coefficient(n)
    b = s.coefficient(n + 1)
    a_lo, a_hi = float(a.lower[0]), float(a.upper[0])
    b_lo, b_hi = float(b.lower[0]), float(b.upper[0])
    if min(abs(a_lo), abs(a_hi)) < _TINY:
        raise NoLimit(f"coefficient {n} has a zero support endpoint")
    return np.abs(np.array([b_lo / a_lo, b_lo / a_hi, b_hi / a_lo, b_hi / a_hi]))


def ratio_test(s: FuzzyPowerSeries, n_probe: int = 16) -> RatioTestResult:
    """Forward-quotient convergence check at the support endpoints.

    Declares the four limits of |a_(n+1)/a_n| and reports convergence when
    both the min and max stay below 1.
    """
    if n_probe < 2:
        raise ValueError("n_probe must be at least 2")
    limits = _declared_limits(_forward_quartet(s, n_probe // 2), _forward_quartet(s, n_probe))
    L_lo = float(limits.min())
    L_hi = float(limits.max())
    return RatioTestResult(converges=bool(L_lo < 1.0 and L_hi < 1.0), L_lower=L_lo, L_upper=L_hi)


def convergence_interval(
    center: FuzzyNumber, R: FuzzyNumber
) -> tuple[FuzzyNumber, FuzzyNumber]:
    """Fuzzy bounds (B_lo, B_hi) such that the series converges for
    B_lo < x < B_hi level-wise.

    B_lo is the standard interval subtraction center - R (lower endpoints
    pair with the opposite radius endpoints); B_hi is the order-normalized
    inner sum.  With R = 0 both collapse to the center.
    """
    if not (center.proper and R.proper):
        raise ImproperOperand("bounds need proper center and radius")
    if center.grid != R.grid:
        raise GridMismatch("center and radius live on different grids")
    if R.lower[0] < 0:
        raise ValueError("radius must be nonnegative")
    g = center.grid
    b_lo_lower = center.lower - R.upper
    b_lo_upper = center.upper - R.lower
    b_lo = FuzzyNumber(g, b_lo_lower, b_lo_upper, proper=_nested(b_lo_lower, b_lo_upper))
    inner1 = center.upper + R.lower
    inner2 = center.lower + R.upper
    b_hi_lower = np.minimum(inner1, inner2)
    b_hi_upper = np.maximum(inner1, inner2)
    b_hi = FuzzyNumber(g, b_hi_lower, b_hi_upper, proper=_nested(b_hi_lower, b_hi_upper))
    return b_lo, b_hi


def taylor_series_of(
    f: Expr,
    var: str,
    x0: FuzzyNumber,
    order: int,
    env: Env | None = None,
) -> FuzzyPowerSeries:
    """Series with coefficients f^(k)(x0) / k! for k = 0..order, centered at
    x0; derivatives are symbolic, evaluation is level-wise."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    base = Env(env.bindings if env is not None else {}, x0.grid)
    coeffs = []
    g = f
    for k in range(order + 1):
        value = evaluate(g, base.with_binding(var, x0))
        coeffs.append(scalar_mul(1.0 / math.factorial(k), value))
        if k < order:
            g = differentiate(g, var)
    return FuzzyPowerSeries(x0, coeffs)


# -- coefficient-rule text format ---------------------------------------------------

_RULE_TOKEN = re.compile(
    r"\s*(?:(?P<fact>n!)|(?P<n>n)|(?P<num>\d+\.\d*|\.\d+|\d+)"
    r"|(?P<trip>T\(\s*-?(?:\d+\.\d*|\.\d+|\d+)\s*,\s*-?(?:\d+\.\d*|\.\d+|\d+)\s*,"
    r"\s*-?(?:\d+\.\d*|\.\d+|\d+)\s*\))|(?P<op>[*/^()+-]))"
)


def parse_coeff_rule(text: str, grid: AlphaGrid | None = None) -> CoefficientRule:
    """Parse rule text like ``n / T(4,5,6)^(n-1)`` or ``1/n!`` or ``T(1,2,3)``.

    Factors (numbers, n, n^k, n!, triplets with an optional integer or
    linear-in-n exponent) combine with '*' and '/'.
    """
    if grid is None:
        grid = AlphaGrid.uniform()
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        m = _RULE_TOKEN.match(text, pos)
        if m is None or m.lastgroup is None:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r} in rule", pos)
        tokens.append((m.lastgroup, m.group().strip(), m.start()))
        pos = m.end()
    tokens.append(("eof", "", len(text)))

    state = {
        "i": 0,
        "coeff_num": 1.0,
        "deg_num": 0,
        "coeff_den": 1.0,
        "deg_den": 0,
        "factorial": 0,
        "base": None,
        "sigma": 0,
        "shift": 0,
    }

    def peek():
        return tokens[state["i"]]

    def take():
        tok = tokens[state["i"]]
        state["i"] += 1
        return tok

    def take_op(op):
        kind, val, p = peek()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r} in rule", p)
        return take()

    def parse_uint():
        kind, val, p = take()
        if kind != "num" or "." in val:
            raise ExprSyntaxError("integer expected in rule exponent", p)
        return int(val)

    def parse_triplet_exponent():
        # uint | '(' ['-'] 'n' (('+'|'-') uint)? ')'
        kind, val, p = peek()
        if kind == "num":
            return 0, parse_uint()  # constant exponent k: c^(0*n + k)
        take_op("(")
        sign = 1
        kind, val, p = peek()
        if kind == "op" and val == "-":
            take()
            sign = -1
        kind, val, p = take()
        if kind != "n":
            raise ExprSyntaxError("'n' expected in rule exponent", p)
        shift = 0
        kind, val, p = peek()
        if kind == "op" and val in "+-":
            take()
            shift = parse_uint() * (1 if val == "+" else -1)
        take_op(")")
        return sign, shift

    def apply_factor(side: int):
        kind, val, p = take()
        if kind == "num":
            power = 1
            if peek()[0] == "op" and peek()[1] == "^":
                take()
                power = parse_uint()
            c = float(val) ** power
            if side > 0:
                state["coeff_num"] *= c
            else:
                state["coeff_den"] *= c
        elif kind == "n":
            power = 1
            if peek()[0] == "op" and peek()[1] == "^":
                take()
                power = parse_uint()
            if side > 0:
                state["deg_num"] += power
            else:
                state["deg_den"] += power
        elif kind == "fact":
            state["factorial"] += side
        elif kind == "trip":
            if state["base"] is not None:
                raise NotSimplifiable("rule supports a single fuzzy base factor")
            nums = [float(x) for x in re.findall(r"-?(?:\d+\.\d*|\.\d+|\d+)", val)]
            state["base"] = make_triangular(tuple(nums), grid)
            sigma, shift = 0, 1  # bare triplet: constant fuzzy factor c^1
            if peek()[0] == "op" and peek()[1] == "^":
                take()
                sigma, shift = parse_triplet_exponent()
            state["sigma"] = sigma * side
            state["shift"] = shift * side
        else:
            raise ExprSyntaxError(f"unexpected token {val!r} in rule", p)

    apply_factor(+1)
    while peek()[0] == "op" and peek()[1] in "*/":
        _, op, _ = take()
        apply_factor(+1 if op == "*" else -1)
    kind, val, p = peek()
    if kind != "eof":
        raise ExprSyntaxError(f"unexpected trailing input {val!r} in rule", p)

    poly_num = (0.0,) * state["deg_num"] + (state["coeff_num"],)
    poly_den = (0.0,) * state["deg_den"] + (state["coeff_den"],)
    return CoefficientRule(
        poly_num=poly_num,
        poly_den=poly_den,
        factorial_power=state["factorial"],
        base=state["base"],
        base_coeff=state["sigma"],
        base_shift=state["shift"],
    )
