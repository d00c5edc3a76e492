#!/usr/bin/env python3
"""Reproduce the evaluator comparison table: the iterated scheme vanishes on
u/v and (u/v)^2 in plain coordinates, but the rotated square evaluates to 1,
breaking locality multiplicativity; minimal subtraction stays at 0 throughout."""

from linpole import (DEFAULT_Q, ev_reg_single, germ_mul, iter_eval, ms_eval,
                     parse_germ)

CASES = [
    ("f = z1/z2", "z1/z2"),
    ("g = (z1/z2)^2", "(z1/z2)^2"),
    ("f~ = (z1-z2)/(z1+z2)", "(z1-z2)/(z1+z2)"),
    ("g~ = ((z1-z2)/(z1+z2))^2", "((z1-z2)/(z1+z2))^2"),
]


def main():
    print(f"{'germ':<28} {'iter':>6} {'ms':>6}")
    for label, expr in CASES:
        g = parse_germ(expr)
        print(f"{label:<28} {str(iter_eval(g)):>6} {str(ms_eval(g, DEFAULT_Q)):>6}")

    ft = parse_germ("(z1-z2)/(z1+z2)")
    print("\nsingle-variable regularised value of f~ in z1 (generic branch):",
          ev_reg_single(ft, 1))

    g1 = parse_germ("(z1-z2)^2")
    g2 = parse_germ("1/(z1+z2)^2")
    prod = germ_mul(g1, g2)
    print("\nmultiplicativity contrast on orthogonal factors:")
    print("  iter(g1*g2) =", iter_eval(prod),
          " iter(g1)*iter(g2) =", iter_eval(g1) * iter_eval(g2))
    print("  ms(g1*g2)   =", ms_eval(prod, DEFAULT_Q),
          " ms(g1)*ms(g2)     =", ms_eval(g1, DEFAULT_Q) * ms_eval(g2, DEFAULT_Q))


if __name__ == "__main__":
    main()
