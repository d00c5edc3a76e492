#!/usr/bin/env python3
"""Derive the Galois transform relating the multiple-zeta evaluator to minimal
subtraction on the two-variable Chen algebra, and verify the factorisation."""

from fractions import Fraction

from linpole import (GermCombo, Polynomial, chen_lmap, check_factorization,
                     expand_product, galois_from_evaluator,
                     integer_alphabet, locality_lyndon_generators, mzv_numeric,
                     spec_of_word, zeta_evaluator, parse_spec)


def main():
    words = locality_lyndon_generators(integer_alphabet(), 4, letters=[1, 2])
    chen = chen_lmap()
    gens = [spec_of_word(w, chen) for w in words]
    print("Lyndon generators up to weight 4 on letters {1,2}:")
    print(" ", ", ".join(repr(g) for g in gens))

    ez = zeta_evaluator(precision=8)
    t = galois_from_evaluator(ez, gens)
    print("\ngenerator shifts (zeta values):")
    for g, c in sorted(t.shifts.items(), key=lambda kv: repr(kv[0])):
        print(f"  {g!r:<16} -> {float(c):.9f}")

    f21, f22 = parse_spec("f[2;1]"), parse_spec("f[2;2]")
    product = GermCombo([(Polynomial.constant(1), (f21, f22))])
    expansion = GermCombo([(Polynomial.constant(c), (s,))
                           for s, c in expand_product(f21, f22)])
    report = check_factorization(ez, t, [product, expansion], Fraction(1, 10 ** 6))
    print("\nms o transform == zeta on the product and on its expansion:")
    print(report)

    v2, _ = mzv_numeric((2,), 8)
    v22, _ = mzv_numeric((2, 2), 8)
    v31, _ = mzv_numeric((3, 1), 8)
    print(f"\nshuffle relation: 2*zeta(2,2)+4*zeta(3,1) = {float(2*v22+4*v31):.9f}"
          f" vs zeta(2)^2 = {float(v2*v2):.9f}")


if __name__ == "__main__":
    main()
