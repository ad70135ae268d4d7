"""Numerical modified Hukuhara derivative and a fuzzy-continuity probe.

The derivative at a fuzzy point is the common limit of the forward and
backward gH difference quotients

    (f(x0 + h) gH- f(x0)) / h      and      (f(x0) gH- f(x0 - h)) / h

where h is a crisp positive scalar added to both envelope endpoints.  The
limit is discretized on a shrinking schedule h_k = h0 * shrink^k with
two-point Richardson extrapolation per envelope sample; plain quotients
converge only linearly once the min/max branches of the gH difference get
close, so extrapolation is what reaches tight tolerances in few halvings.
Where the min/max branch assignment switches between iterations the
extrapolation restarts at that level (extrapolating across a branch switch
is invalid).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AlphaGrid, FuzzyNumber, _nested, hausdorff_distance
from .errors import ImproperOperand, NotDifferentiable
from .expr import Env, Expr, evaluate


@dataclass(frozen=True)
class LimitSchedule:
    """Discretization of the one-sided limit h -> 0+.

    ``h0=None`` scales the initial step to the point: 2**-3 * (1 + |support
    midpoint|).
    """

    h0: float | None = None
    shrink: float = 0.5
    max_iters: int = 40
    tol: float = 1e-7

    def __post_init__(self):
        if self.h0 is not None and not self.h0 > 0:
            raise ValueError("h0 must be positive")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError("shrink must lie in (0, 1)")
        if self.max_iters < 1:
            raise ValueError("max_iters must be positive")
        if not self.tol > 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class DerivativeEstimate:
    """Converged two-sided estimate; ``value`` is the forward extrapolant."""

    value: FuzzyNumber
    right_value: FuzzyNumber
    left_value: FuzzyNumber
    h_final: float
    gap: float
    converged: bool


def _shift(x: FuzzyNumber, h: float) -> FuzzyNumber:
    return FuzzyNumber(x.grid, x.lower + h, x.upper + h)


def _quotient(num_lo: np.ndarray, num_hi: np.ndarray, h: float):
    """gH difference of envelope deltas scaled by 1/h, plus the branch
    pattern (True where the lower-envelope delta is the smaller one)."""
    pattern = num_lo <= num_hi
    lo = np.minimum(num_lo, num_hi) / h
    hi = np.maximum(num_lo, num_hi) / h
    return lo, hi, pattern


class _Side:
    """Richardson state for one side of the limit."""

    def __init__(self, shrink: float):
        self.shrink = shrink
        self.prev_lo = None
        self.prev_hi = None
        self.prev_pattern = None
        self.extrap_lo = None
        self.extrap_hi = None

    def update(self, lo, hi, pattern):
        if self.prev_lo is None:
            ex_lo, ex_hi = lo, hi
        else:
            # two-point Richardson for a leading O(h) error term, restarted
            # per level where the branch pattern switched
            s = self.shrink
            stable = pattern == self.prev_pattern
            ex_lo = np.where(stable, (lo - s * self.prev_lo) / (1.0 - s), lo)
            ex_hi = np.where(stable, (hi - s * self.prev_hi) / (1.0 - s), hi)
        self.prev_lo, self.prev_hi, self.prev_pattern = lo, hi, pattern
        self.extrap_lo, self.extrap_hi = ex_lo, ex_hi


def _envelope_distance(alo, ahi, blo, bhi) -> float:
    return float(max(np.max(np.abs(alo - blo)), np.max(np.abs(ahi - bhi))))


def _assemble(grid: AlphaGrid, lo: np.ndarray, hi: np.ndarray) -> FuzzyNumber:
    lo2 = np.minimum(lo, hi)
    hi2 = np.maximum(lo, hi)
    return FuzzyNumber(grid, lo2, hi2, proper=_nested(lo2, hi2))


def mh_derivative(
    f: Expr,
    var: str,
    x0: FuzzyNumber,
    env: Env | None = None,
    sched: LimitSchedule | None = None,
) -> DerivativeEstimate:
    """Estimate the modified Hukuhara derivative of ``f`` at ``x0``.

    Iterates both one-sided quotients down the schedule until the two
    extrapolants agree within ``sched.tol`` in Hausdorff distance and the
    forward extrapolant has stopped moving by more than ``sched.tol``.
    Raises NotDifferentiable when the gap never closes, ImproperOperand when
    the converged quotient is not a fuzzy number (nestedness lost).
    """
    if not x0.proper:
        raise ImproperOperand("expansion point is improper")
    sched = sched if sched is not None else LimitSchedule()
    env = env if env is not None else Env()
    grid = x0.grid
    base = Env(env.bindings, grid)

    def f_at(offset: float) -> FuzzyNumber:
        return evaluate(f, base.with_binding(var, _shift(x0, offset)))

    center = f_at(0.0)
    h0 = sched.h0
    if h0 is None:
        h0 = 0.125 * (1.0 + abs(x0.support.midpoint))

    right = _Side(sched.shrink)
    left = _Side(sched.shrink)
    prev_value_lo = prev_value_hi = None
    h = h0
    gap = np.inf
    for _ in range(sched.max_iters):
        fwd = f_at(h)
        bwd = f_at(-h)
        right.update(*_quotient(fwd.lower - center.lower, fwd.upper - center.upper, h))
        left.update(*_quotient(center.lower - bwd.lower, center.upper - bwd.upper, h))

        gap = _envelope_distance(
            right.extrap_lo, right.extrap_hi, left.extrap_lo, left.extrap_hi
        )
        if prev_value_lo is not None:
            step = _envelope_distance(
                right.extrap_lo, right.extrap_hi, prev_value_lo, prev_value_hi
            )
            if gap <= sched.tol and step <= sched.tol:
                value = _assemble(grid, right.extrap_lo, right.extrap_hi)
                if not value.proper:
                    raise ImproperOperand(
                        "difference quotient stayed improper through convergence"
                    )
                return DerivativeEstimate(
                    value=value,
                    right_value=value,
                    left_value=_assemble(grid, left.extrap_lo, left.extrap_hi),
                    h_final=h,
                    gap=gap,
                    converged=True,
                )
        prev_value_lo, prev_value_hi = right.extrap_lo, right.extrap_hi
        h *= sched.shrink

    raise NotDifferentiable(
        f"one-sided quotients did not settle within {sched.max_iters} iterations"
        f" (last gap {gap:.3g}, tol {sched.tol:.3g})"
    )


_PROBE_FRACTIONS = (0.25, 0.5, 0.75, 0.95)


def continuity_probe(
    f: Expr,
    var: str,
    x0: FuzzyNumber,
    env: Env | None = None,
    eps: float = 1e-3,
    trial_deltas=(1.0, 0.5, 0.1, 0.05, 0.01, 0.005, 0.001),
) -> float | None:
    """Search for a delta witnessing continuity at ``x0``.

    For each trial delta (largest first) the point is shifted crisply by
    amounts below delta; the trial is accepted when every shifted value
    stays within ``eps`` of f(x0) in Hausdorff distance.  Returns the
    largest accepted delta, or None when every trial fails.  A sampling
    probe, not a proof.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    env = env if env is not None else Env()
    base = Env(env.bindings, x0.grid)
    f0 = evaluate(f, base.with_binding(var, x0))
    for delta in sorted(trial_deltas, reverse=True):
        ok = True
        for frac in _PROBE_FRACTIONS:
            for sign in (1.0, -1.0):
                shifted = _shift(x0, sign * frac * delta)
                fx = evaluate(f, base.with_binding(var, shifted))
                if hausdorff_distance(fx, f0) >= eps:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return float(delta)
    return None
