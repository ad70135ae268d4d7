"""Fuzzy numbers as sampled alpha-cut envelopes with interval arithmetic.

A fuzzy number is stored as its lower and upper envelope values on a shared
grid of alpha levels.  Every arithmetic operation works level-wise on the
endpoint pairs, so the machinery is ordinary interval arithmetic applied
once per level:

    add:  [a, b] + [c, d] = [a + c, b + d]
    mul:  [a, b] * [c, d] = [min/max of the four endpoint products]
    div:  [a, b] * [min(1/c, 1/d), max(1/c, 1/d)]   (0 outside [c, d])
    gh-difference: [min(a - c, b - d), max(a - c, b - d)]

The gH-difference is the one operation that can break nestedness (alpha-cuts
must shrink as alpha grows); such results carry ``proper=False`` and every
other operation rejects them with :class:`ImproperOperand`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    Crossed,
    DivisorStraddlesZero,
    GridMismatch,
    ImproperOperand,
    MalformedTriplet,
    NotNested,
)

DEFAULT_RESOLUTION = 101

# Slack for float noise when checking envelope monotonicity; operation
# results are exact up to a few ulps, so this never masks real defects.
_NEST_SLACK = 1e-12


class AlphaGrid:
    """Strictly increasing alpha levels from 0 to 1 inclusive."""

    __slots__ = ("levels",)

    def __init__(self, levels: Sequence[float]):
        arr = np.array(levels, dtype=float)
        if arr.ndim != 1 or arr.size < 2:
            raise ValueError("alpha grid needs at least the levels 0 and 1")
        if arr[0] != 0.0 or arr[-1] != 1.0:
            raise ValueError("alpha grid must start at 0 and end at 1")
        if not np.all(np.diff(arr) > 0.0):
            raise ValueError("alpha levels must be strictly increasing")
        arr.flags.writeable = False
        self.levels = arr

    @classmethod
    def uniform(cls, resolution: int = DEFAULT_RESOLUTION) -> "AlphaGrid":
        if resolution < 2:
            raise ValueError("grid resolution must be >= 2")
        return cls(np.linspace(0.0, 1.0, resolution))

    @property
    def resolution(self) -> int:
        return int(self.levels.size)

    def __len__(self) -> int:
        return int(self.levels.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AlphaGrid):
            return NotImplemented
        return self.levels.shape == other.levels.shape and bool(
            np.array_equal(self.levels, other.levels)
        )

    __hash__ = None  # arrays inside; identity is by level values

    def __repr__(self) -> str:
        return f"AlphaGrid(resolution={self.resolution})"


@dataclass(frozen=True)
class Interval:
    """Closed real interval [lo, hi]."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise ValueError(f"interval endpoints out of order: [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def __contains__(self, x: float) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class TriangularSpec:
    """Triangular fuzzy number as the triplet (d, e, f) with d <= e <= f.

    The alpha-cut is affine in alpha: [d + (e - d) * a, f - (f - e) * a].
    """

    d: float
    e: float
    f: float

    def __post_init__(self):
        if not (self.d <= self.e <= self.f):
            raise MalformedTriplet(f"need d <= e <= f, got ({self.d}, {self.e}, {self.f})")

    def astuple(self) -> tuple[float, float, float]:
        return (self.d, self.e, self.f)


def _nested(lower: np.ndarray, upper: np.ndarray) -> bool:
    with np.errstate(invalid="ignore"):
        scale = max(1.0, float(np.max(np.abs(lower))), float(np.max(np.abs(upper))))
        tol = _NEST_SLACK * scale
        return bool(np.all(np.diff(lower) >= -tol) and np.all(np.diff(upper) <= tol))


class FuzzyNumber:
    """Sampled alpha-cut envelopes on a shared grid.

    ``lower[i]`` and ``upper[i]`` are the endpoints of the alpha-cut at
    ``grid.levels[i]``.  ``proper`` is False only for gH-difference results
    whose envelopes lost nestedness; every operation other than the
    gH-difference refuses improper inputs.

    Instances are immutable; operators delegate to the module functions
    (``-`` is the gH-difference, ``*`` multiplies by a fuzzy number or
    scales by a crisp one).
    """

    __slots__ = ("grid", "lower", "upper", "proper")

    def __init__(self, grid: AlphaGrid, lower, upper, proper: bool = True):
        lo = np.array(lower, dtype=float)
        hi = np.array(upper, dtype=float)
        if lo.shape != grid.levels.shape or hi.shape != grid.levels.shape:
            raise ValueError("envelope arrays must match the grid resolution")
        lo.flags.writeable = False
        hi.flags.writeable = False
        self.grid = grid
        self.lower = lo
        self.upper = hi
        self.proper = bool(proper)

    # -- inspection ---------------------------------------------------------

    @property
    def support(self) -> Interval:
        return Interval(float(self.lower[0]), float(self.upper[0]))

    @property
    def core(self) -> Interval:
        return Interval(float(self.lower[-1]), float(self.upper[-1]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FuzzyNumber):
            return NotImplemented
        return (
            self.grid == other.grid
            and bool(np.array_equal(self.lower, other.lower))
            and bool(np.array_equal(self.upper, other.upper))
            and self.proper == other.proper
        )

    __hash__ = None

    def __repr__(self) -> str:
        s, c = self.support, self.core
        flag = "" if self.proper else ", improper"
        return (
            f"FuzzyNumber(support=[{s.lo:.6g}, {s.hi:.6g}],"
            f" core=[{c.lo:.6g}, {c.hi:.6g}]{flag})"
        )

    # -- operator sugar -----------------------------------------------------

    def __add__(self, other: "FuzzyNumber") -> "FuzzyNumber":
        return add(self, other)

    def __sub__(self, other: "FuzzyNumber") -> "FuzzyNumber":
        return gh_difference(self, other)

    def __mul__(self, other):
        if isinstance(other, FuzzyNumber):
            return mul(self, other)
        return scalar_mul(float(other), self)

    def __rmul__(self, k) -> "FuzzyNumber":
        return scalar_mul(float(k), self)

    def __truediv__(self, other: "FuzzyNumber") -> "FuzzyNumber":
        return div(self, other)

    def __pow__(self, n: int) -> "FuzzyNumber":
        return pow_int(self, n)

    def __neg__(self) -> "FuzzyNumber":
        return scalar_mul(-1.0, self)


# -- guards ------------------------------------------------------------------


def _require_proper(*values: FuzzyNumber) -> None:
    for v in values:
        if not v.proper:
            raise ImproperOperand("operand is an improper (non-nested) fuzzy number")


def _require_same_grid(a: FuzzyNumber, b: FuzzyNumber) -> None:
    if a.grid != b.grid:
        raise GridMismatch("operands live on different alpha grids; resample first")


# -- constructors -------------------------------------------------------------


def make_triangular(spec, grid: AlphaGrid | None = None) -> FuzzyNumber:
    """Build the triangular number (d, e, f) sampled on ``grid``.

    The envelopes are affine in alpha, so the sampled representation is exact
    at every level.  Accepts a TriangularSpec or a plain (d, e, f) triple.
    """
    if not isinstance(spec, TriangularSpec):
        spec = TriangularSpec(*spec)
    if grid is None:
        grid = AlphaGrid.uniform()
    a = grid.levels
    lower = spec.d + (spec.e - spec.d) * a
    upper = spec.f - (spec.f - spec.e) * a
    # the two affine formulas can disagree at the core by one ulp; pin it
    lower[-1] = spec.e
    upper[-1] = spec.e
    return FuzzyNumber(grid, lower, upper)


def singleton(value: float, grid: AlphaGrid | None = None) -> FuzzyNumber:
    """Crisp real embedded as a fuzzy number (both envelopes constant)."""
    if grid is None:
        grid = AlphaGrid.uniform()
    flat = np.full(len(grid), float(value))
    return FuzzyNumber(grid, flat, flat.copy())


def from_alpha_grid(lower, upper, grid: AlphaGrid) -> FuzzyNumber:
    """Validate raw envelope samples and assemble a proper fuzzy number.

    Raises Crossed when lower > upper at some level (equality is fine) and
    NotNested when either envelope is not monotone in alpha.
    """
    lo = np.asarray(lower, dtype=float)
    hi = np.asarray(upper, dtype=float)
    if lo.shape != grid.levels.shape or hi.shape != grid.levels.shape:
        raise ValueError("envelope arrays must match the grid resolution")
    if np.any(lo > hi):
        k = int(np.argmax(lo > hi))
        raise Crossed(f"lower exceeds upper at alpha={grid.levels[k]:.6g}")
    if not _nested(lo, hi):
        raise NotNested("alpha-cuts must shrink as alpha grows")
    return FuzzyNumber(grid, lo, hi)


def resample(a: FuzzyNumber, grid: AlphaGrid) -> FuzzyNumber:
    """Move ``a`` onto another grid by linear interpolation of its envelopes.

    This is the only sanctioned way to mix grids; arithmetic never
    resamples implicitly.
    """
    _require_proper(a)
    lower = np.interp(grid.levels, a.grid.levels, a.lower)
    upper = np.interp(grid.levels, a.grid.levels, a.upper)
    return FuzzyNumber(grid, lower, upper)


# -- arithmetic ----------------------------------------------------------------


def add(a: FuzzyNumber, b: FuzzyNumber) -> FuzzyNumber:
    """Level-wise endpoint sums."""
    _require_proper(a, b)
    _require_same_grid(a, b)
    return FuzzyNumber(a.grid, a.lower + b.lower, a.upper + b.upper)


def scalar_mul(k: float, a: FuzzyNumber) -> FuzzyNumber:
    """Scale by a crisp real; endpoints are order-normalized so a negative
    factor flips the envelopes instead of producing an inverted interval."""
    _require_proper(a)
    x = k * a.lower
    y = k * a.upper
    return FuzzyNumber(a.grid, np.minimum(x, y), np.maximum(x, y))


def mul(a: FuzzyNumber, b: FuzzyNumber) -> FuzzyNumber:
    """Level-wise interval product (min/max over the four endpoint products)."""
    _require_proper(a, b)
    _require_same_grid(a, b)
    p1 = a.lower * b.lower
    p2 = a.lower * b.upper
    p3 = a.upper * b.lower
    p4 = a.upper * b.upper
    lower = np.minimum(np.minimum(p1, p2), np.minimum(p3, p4))
    upper = np.maximum(np.maximum(p1, p2), np.maximum(p3, p4))
    return FuzzyNumber(a.grid, lower, upper)


def pow_int(a: FuzzyNumber, n: int) -> FuzzyNumber:
    """Repeated interval multiplication; n = 0 gives the crisp 1.

    For positive-support numbers this reduces to endpoint powers.
    """
    if n < 0 or int(n) != n:
        raise ValueError("exponent must be a nonnegative integer")
    _require_proper(a)
    if n == 0:
        return singleton(1.0, a.grid)
    acc = a
    for _ in range(int(n) - 1):
        acc = mul(acc, a)
    return acc


def div(a: FuzzyNumber, b: FuzzyNumber) -> FuzzyNumber:
    """Interval product of ``a`` with the order-normalized reciprocal of ``b``.

    The divisor's support must exclude zero.
    """
    _require_proper(a, b)
    _require_same_grid(a, b)
    if b.lower[0] <= 0.0 <= b.upper[0]:
        raise DivisorStraddlesZero(
            f"divisor support [{b.lower[0]:.6g}, {b.upper[0]:.6g}] contains zero"
        )
    r1 = 1.0 / b.lower
    r2 = 1.0 / b.upper
    recip = FuzzyNumber(b.grid, np.minimum(r1, r2), np.maximum(r1, r2))
    return mul(a, recip)


def gh_difference(a: FuzzyNumber, b: FuzzyNumber) -> FuzzyNumber:
    """Generalized Hukuhara difference, defined level-wise as
    [min(a_lo - b_lo, a_hi - b_hi), max(a_lo - b_lo, a_hi - b_hi)].

    Always produces an ordered interval per level, but the family of
    intervals may lose nestedness across levels; the result then carries
    ``proper=False`` and is rejected by every other operation.
    """
    _require_proper(a, b)
    _require_same_grid(a, b)
    dl = a.lower - b.lower
    du = a.upper - b.upper
    lower = np.minimum(dl, du)
    upper = np.maximum(dl, du)
    return FuzzyNumber(a.grid, lower, upper, proper=_nested(lower, upper))


# -- metric and summaries ------------------------------------------------------


def hausdorff_distance(a: FuzzyNumber, b: FuzzyNumber) -> float:
    """Supremum over the grid of the larger endpoint deviation."""
    _require_proper(a, b)
    _require_same_grid(a, b)
    dev = np.maximum(np.abs(a.lower - b.lower), np.abs(a.upper - b.upper))
    return float(np.max(dev))


def approx_equal(a: FuzzyNumber, b: FuzzyNumber, tol: float = 1e-9) -> bool:
    """Equality up to ``tol`` in Hausdorff distance (test helper)."""
    return hausdorff_distance(a, b) <= tol


def support(a: FuzzyNumber) -> Interval:
    _require_proper(a)
    return a.support


def core(a: FuzzyNumber) -> Interval:
    _require_proper(a)
    return a.core


def defuzz_triplet(a: FuzzyNumber) -> TriangularSpec:
    """Collapse to (support.lo, core midpoint, support.hi)."""
    _require_proper(a)
    return TriangularSpec(a.support.lo, a.core.midpoint, a.support.hi)
