import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from linpole import (DEFAULT_Q, InnerProduct, LinearForm, find_circuit, inner,
                     orth_decompose, orthogonal, span, zvar, zset)

from helpers import random_form

q = DEFAULT_Q
z1, z2, z3 = zvar(1), zvar(2), zvar(3)


def test_inner_examples():
    assert inner(q, z1 + z2, z1 - z2) == 0
    assert inner(q, z1, z1) == 1
    assert inner(q, z1 + z2.scale(2), z2) == 2


def test_inner_gram_block():
    g = InnerProduct([[2, 1], [1, 2]])
    assert inner(g, z1, z1) == 2
    assert inner(g, z1, z2) == 1
    # identity beyond the block
    assert inner(g, z3, z3) == 1
    assert inner(g, z1, z3) == 0


def test_gram_validation():
    with pytest.raises(ValueError):
        InnerProduct([[1, 2], [3, 1]])  # not symmetric
    with pytest.raises(ValueError):
        InnerProduct([[0, 0], [0, 1]])  # not positive definite
    with pytest.raises(ValueError):
        InnerProduct([[1, 2], [2, 1]])  # indefinite


def test_span_examples():
    s = span([z1 + z2, z1 - z2])
    assert s.dim == 2
    assert s == span([z1, z2])
    assert span([]).dim == 0
    assert span([z1 + z2, (z1 + z2).scale(2)]).dim == 1


def test_span_canonical_under_permutation_and_scaling():
    rng = random.Random(5)
    for _ in range(40):
        forms = [random_form(rng) for _ in range(3)]
        reference = span(forms)
        shuffled = forms[:]
        rng.shuffle(shuffled)
        scaled = [f.scale(Fraction(rng.randint(1, 5), rng.randint(1, 5)))
                  for f in shuffled]
        assert span(scaled) == reference


def test_orthogonal_examples():
    assert orthogonal(q, span([z1]), span([z2]))
    assert orthogonal(q, span([z1 + z2]), span([z1 - z2]))
    assert not orthogonal(q, span([z1]), span([z1 + z2]))


def test_orth_decompose_derived_example():
    # oracle: project z2 onto span[z1+z2]: t = <z2,L>/<L,L> = 1/2
    L = z1 + z2
    t = inner(q, z2, L) / inner(q, L, L)
    assert t == Fraction(1, 2)
    a, b = orth_decompose(q, z2, span([L]))
    assert a == L.scale(t)
    assert b == z2 - L.scale(t)
    assert a + b == z2
    assert inner(q, b, L) == 0


def test_orth_decompose_trivial_examples():
    a, b = orth_decompose(q, z3, span([z1]))
    assert (a, b) == (LinearForm(), z3)
    a, b = orth_decompose(q, z1, span([z1]))
    assert (a, b) == (z1, LinearForm())


def test_orth_decompose_properties_random():
    rng = random.Random(11)
    for _ in range(60):
        f = random_form(rng)
        u = span([random_form(rng) for _ in range(rng.randint(0, 3))])
        a, b = orth_decompose(q, f, u)
        assert a + b == f
        assert u.contains(a)
        for w in u.basis:
            assert inner(q, b, w) == 0


def test_orth_decompose_nondefault_gram():
    g = InnerProduct([[2, 1], [1, 2]])
    a, b = orth_decompose(g, z2, span([z1]))
    assert a + b == z2
    assert inner(g, b, z1) == 0


@given(st.integers(-9, 9), st.integers(-9, 9), st.integers(-9, 9),
       st.integers(-9, 9), st.integers(1, 9), st.integers(1, 9))
def test_inner_symmetric_bilinear(a1, a2, b1, b2, k_num, k_den):
    a = LinearForm({1: Fraction(a1), 2: Fraction(a2)})
    b = LinearForm({1: Fraction(b1), 2: Fraction(b2)})
    k = Fraction(k_num, k_den)
    assert inner(q, a, b) == inner(q, b, a)
    assert inner(q, a.scale(k) + b, b) == k * inner(q, a, b) + inner(q, b, b)


def test_inner_bilinear_on_random_triples():
    rng = random.Random(77)
    for _ in range(1000):
        a, b, c = (random_form(rng, max_var=3) for _ in range(3))
        k = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
        assert inner(q, a, b) == inner(q, b, a)
        assert inner(q, a.scale(k) + c, b) == \
            k * inner(q, a, b) + inner(q, c, b)


def test_find_circuit_examples():
    idxs, coeffs = find_circuit([z1, z2, z1 + z2])
    assert idxs == (0, 1, 2)
    assert coeffs == (Fraction(1), Fraction(1), Fraction(-1))
    assert find_circuit([z1, z2]) is None
    idxs, coeffs = find_circuit([z1, z1.scale(2)])
    assert idxs == (0, 1)
    assert coeffs == (Fraction(2), Fraction(-1))


def test_find_circuit_relation_and_minimality():
    rng = random.Random(23)
    hits = 0
    for _ in range(300):
        forms = [random_form(rng, max_var=3) for _ in range(rng.randint(2, 5))]
        res = find_circuit(forms)
        if res is None:
            assert span(forms).dim == len(forms)
            continue
        hits += 1
        idxs, coeffs = res
        total = LinearForm()
        for i, c in zip(idxs, coeffs):
            total = total + forms[i].scale(c)
        assert not total, "relation must vanish exactly"
        largest = max(idxs, key=lambda i: forms[i].key())
        assert coeffs[idxs.index(largest)] == -1
        # minimality: dropping any member leaves an independent family
        for drop in idxs:
            rest = [forms[i] for i in idxs if i != drop]
            assert span(rest).dim == len(rest)
    assert hits > 30


def test_zset():
    assert zset([1, 3]) == LinearForm({1: 1, 3: 1})
    assert zset([2]) == zvar(2)
