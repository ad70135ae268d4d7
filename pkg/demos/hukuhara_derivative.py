#!/usr/bin/env python3
"""Modified Hukuhara derivatives, numerically and symbolically.

The derivative at a fuzzy point is the common limit of the forward and
backward gH difference quotients with a crisp step h.  The numeric
estimator shrinks h with Richardson extrapolation until both one-sided
extrapolants agree; the symbolic route differentiates the expression tree
and evaluates.  For well-behaved functions on positive supports the two
agree to the estimator's tolerance.

Run: python demos/hukuhara_derivative.py
"""

from fuzzcalc import (
    Env,
    continuity_probe,
    differentiate,
    evaluate,
    hausdorff_distance,
    make_triangular,
    mh_derivative,
    parse_expr,
    to_text,
)


CASES = [
    ("x^2", (1, 2, 3)),        # derivative envelopes [2(1+a), 2(3-a)]
    ("3 * x^3", (1, 2, 3)),    # [9(1+a)^2, 9(3-a)^2]
    ("exp(x)", (-1, 0, 1)),
    ("sin(x)", (0.4, 0.8, 1.2)),
    ("cos(x)", (0.4, 0.8, 1.2)),
]


def main():
    for text, triplet in CASES:
        f = parse_expr(text)
        x0 = make_triangular(triplet)
        est = mh_derivative(f, "x", x0)
        sym = evaluate(differentiate(f, "x"), Env({"x": x0}))
        print(f"f(x) = {text}   at x0 = T{triplet}")
        print(f"  symbolic derivative: {to_text(differentiate(f, 'x'))}")
        s, c = est.value.support, est.value.core
        print(f"  numeric value: support [{s.lo:.8g}, {s.hi:.8g}], core {c.midpoint:.8g}")
        print(f"  one-sided gap {est.gap:.2e}, final step {est.h_final:.2e}")
        print(f"  numeric vs symbolic distance: {hausdorff_distance(est.value, sym):.2e}")
        print()

    print("continuity probe: largest tested shift radius keeping f within eps")
    for text, triplet, eps in [("x", (0, 1, 2), 0.1), ("x^2", (1, 2, 3), 0.1)]:
        delta = continuity_probe(
            parse_expr(text), "x", make_triangular(triplet), eps=eps,
            trial_deltas=[0.1, 0.05, 0.02, 0.017, 0.01, 0.005, 0.001],
        )
        print(f"  f = {text:4s} at T{triplet}, eps={eps}: delta = {delta}")


if __name__ == "__main__":
    main()
