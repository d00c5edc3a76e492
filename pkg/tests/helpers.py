"""Shared generators and oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from linpole import (InnerProduct, LinearForm, Polynomial, RationalGerm,
                     germ_sum)


def random_form(rng: random.Random, max_var: int = 4, max_coef: int = 3) -> LinearForm:
    while True:
        coeffs = {v: Fraction(rng.randint(-max_coef, max_coef))
                  for v in range(1, max_var + 1) if rng.random() < 0.6}
        f = LinearForm(coeffs)
        if f:
            return f


def random_poly(rng: random.Random, max_var: int = 4, max_deg: int = 2,
                n_terms: int = 3) -> Polynomial:
    terms = {}
    for _ in range(rng.randint(1, n_terms)):
        mono = tuple(sorted((v, rng.randint(1, max_deg))
                            for v in range(1, max_var + 1) if rng.random() < 0.4))
        terms[mono] = terms.get(mono, Fraction(0)) + Fraction(rng.randint(-4, 4))
    return Polynomial(terms)


def random_germ(rng: random.Random, max_var: int = 4, max_factors: int = 3,
                max_exp: int = 3) -> RationalGerm:
    num = random_poly(rng, max_var)
    dens = [(random_form(rng, max_var), rng.randint(1, max_exp))
            for _ in range(rng.randint(0, max_factors))]
    return RationalGerm(num, dens)


def random_spd_gram(rng: random.Random, n: int) -> InnerProduct:
    """A^T A + n*I with a random small integer A is symmetric positive definite."""
    a = [[rng.randint(-2, 2) for _ in range(n)] for _ in range(n)]
    g = [[sum(a[k][i] * a[k][j] for k in range(n)) + (n if i == j else 0)
          for j in range(n)] for i in range(n)]
    return InnerProduct(g)


def germ_point_value(g: RationalGerm, point: dict[int, Fraction]) -> Fraction:
    return g.evaluate(point)


def random_point_off_poles(rng: random.Random, germs, variables) -> dict[int, Fraction]:
    """A rational point at which no denominator of the given germs vanishes."""
    for _ in range(1000):
        pt = {v: Fraction(rng.randint(-10 ** 6, 10 ** 6), rng.randint(1, 7))
              for v in variables}
        ok = True
        for g in germs:
            for f, _e in g.denominator:
                if f.evaluate(pt) == 0:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return pt
    raise RuntimeError("could not find a point off the poles")


def combination_equals_germ(combo, target: RationalGerm, rng: random.Random,
                            exact_limit: int = 24, n_points: int = 4) -> bool:
    """Check sum(c * spec germ) == target.

    Exact common-denominator comparison when the combination is small;
    otherwise exact evaluation at random rational points (the difference is a
    fixed rational function, so agreement at random points from a huge range
    leaves a vanishing Schwartz-Zippel failure probability).
    """
    if len(combo) <= exact_limit:
        from linpole import germ_scale
        total = germ_sum([germ_scale(s.germ(), c) for s, c in combo])
        return total == target
    variables = sorted({v for s, _ in combo for v in s.variables()}
                       | set(target.variables()))
    for _ in range(n_points):
        pt = random_point_off_poles(rng, [target], variables)
        try:
            lhs = sum((c * s.evaluate(pt) for s, c in combo), Fraction(0))
        except ZeroDivisionError:
            continue
        if lhs != target.evaluate(pt):
            return False
    return True
