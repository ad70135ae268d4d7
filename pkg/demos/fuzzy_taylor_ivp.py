#!/usr/bin/env python3
"""A fully fuzzy initial value problem solved by the Taylor method.

Everything is fuzzy: the right-hand side couples x and y, the initial
point, the initial value, and the step are all triangular numbers.

    y' = x^2 + y^2,  y(T(0.7,1,1.2)) = T(2.1,2.3,2.5),  h = T(0.07,0.1,0.12)

One order-2 step lands on a value whose truncated triplet is
(2.49, 3.08, 3.71); at the core the computation collapses to the crisp
Taylor method.

Run: python demos/fuzzy_taylor_ivp.py
"""

import math

from fuzzcalc import (
    AlphaGrid,
    Env,
    IvpProblem,
    evaluate,
    make_triangular,
    mul,
    parse_expr,
    pow_int,
    scalar_mul,
    singleton,
    solve,
    to_text,
    total_derivatives,
)

GRID = AlphaGrid.uniform(101)


def triplet_str(v, nd=4):
    s, c = v.support, v.core
    return f"({s.lo:.{nd}f}, {c.midpoint:.{nd}f}, {s.hi:.{nd}f})"


def main():
    rhs = parse_expr("x^2 + y^2")
    x0 = make_triangular((0.7, 1.0, 1.2), GRID)
    y0 = make_triangular((2.1, 2.3, 2.5), GRID)
    h = make_triangular((0.07, 0.1, 0.12), GRID)
    problem = IvpProblem(rhs=rhs, x0=x0, y0=y0, h=h, order=2, steps=1)

    d1, d2 = total_derivatives(rhs, 2)
    print("total-derivative tower")
    print(f"  D1 = {to_text(d1)}")
    print(f"  D2 = {to_text(d2)}")

    env = Env({"x": x0, "y": y0})
    ydot = evaluate(d1, env)
    ydd = evaluate(d2, env)
    term1 = mul(h, ydot)
    term2 = scalar_mul(0.5, mul(pow_int(h, 2), ydd))
    print("\nstep ingredients at (x0, y0)")
    print(f"  y'(x0)            ~ {triplet_str(ydot)}")
    print(f"  h * y'            ~ {triplet_str(term1)}")
    print(f"  (h^2/2!) * y''    ~ {triplet_str(term2, nd=5)}")

    solution = solve(problem)
    x1, y1 = solution.final
    print("\none order-2 step")
    print(f"  x1 ~ {triplet_str(x1)}")
    print(f"  y1 ~ {triplet_str(y1)}")
    print(f"  truncation magnitude: {solution.truncation_magnitudes[0]:.5f}")

    print("\nalpha-cut table of y1 (every 20th level)")
    print(f"  {'alpha':>5}  {'lower':>10}  {'upper':>10}")
    for i in range(0, 101, 20):
        print(f"  {GRID.levels[i]:5.2f}  {y1.lower[i]:10.6f}  {y1.upper[i]:10.6f}")

    print("\ncrisp-slice sanity: y' = y, y(0) = 1, 10 steps of h = 0.1")
    small = AlphaGrid.uniform(3)
    for order in (1, 2, 3, 4):
        p = IvpProblem(
            rhs=parse_expr("y"),
            x0=singleton(0.0, small),
            y0=singleton(1.0, small),
            h=singleton(0.1, small),
            order=order,
            steps=10,
        )
        _, yf = solve(p).final
        err = abs(yf.core.midpoint - math.e)
        print(f"  order {order}: y(1) = {yf.core.midpoint:.8f}, error vs e = {err:.2e}")


if __name__ == "__main__":
    main()
