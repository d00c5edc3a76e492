import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linpole import (EmptyWord, NotLocal, WordPolynomial, X0, cfl,
                     integer_alphabet, is_local_word, is_lyndon,
                     local_word_pair, locality_cfl, locality_lyndon_generators,
                     lyndon_rewrite, shuffle, subset_alphabet, word_str)

A = integer_alphabet()


def brute_shuffle(w, v):
    """Oracle: enumerate interleaving position choices directly."""
    n, m = len(w), len(v)
    acc = {}
    for positions in itertools.combinations(range(n + m), n):
        out = [None] * (n + m)
        wi = iter(w)
        for p in positions:
            out[p] = next(wi)
        vi = iter(v)
        for i in range(n + m):
            if out[i] is None:
                out[i] = next(vi)
        t = tuple(out)
        acc[t] = acc.get(t, 0) + 1
    return {t: Fraction(c) for t, c in acc.items()}


def test_shuffle_examples():
    assert shuffle((1,), (2,)).coeffs == {(1, 2): 1, (2, 1): 1}
    w = (1, X0, 2)
    assert shuffle((), w).coeffs == {w: 1}
    assert shuffle(w, ()).coeffs == {w: 1}
    # derived by brute-force enumeration of the six interleavings
    expected = brute_shuffle((X0, 1), (X0, 2))
    assert shuffle((X0, 1), (X0, 2)).coeffs == expected
    assert expected[(X0, X0, 1, 2)] == 2


letters = st.sampled_from([X0, 1, 2])
words = st.lists(letters, min_size=0, max_size=5).map(tuple)


@settings(max_examples=60, deadline=None)
@given(words, words)
def test_shuffle_matches_bruteforce_and_counts(w, v):
    got = shuffle(w, v)
    assert got.coeffs == brute_shuffle(w, v)
    assert sum(got.coeffs.values()) == math.comb(len(w) + len(v), len(w))


@settings(max_examples=40, deadline=None)
@given(words, words, words)
def test_shuffle_commutative_associative(u, v, w):
    pu = WordPolynomial({u: 1})
    pv = WordPolynomial({v: 1})
    pw = WordPolynomial({w: 1})
    assert shuffle(u, v).coeffs == shuffle(v, u).coeffs
    lhs = pu.shuffle_with(pv).shuffle_with(pw)
    rhs = pu.shuffle_with(pv.shuffle_with(pw))
    assert lhs == rhs


def test_is_lyndon_examples():
    assert is_lyndon((X0, 1), A)
    assert not is_lyndon((1, X0), A)
    assert is_lyndon((X0, 1, 1), A)
    with pytest.raises(EmptyWord):
        is_lyndon((), A)


def all_words(alphabet_letters, max_len):
    for n in range(1, max_len + 1):
        yield from itertools.product(alphabet_letters, repeat=n)


def brute_cfl(w, alphabet):
    """Oracle: all factorisations into non-increasing Lyndon factors."""
    results = []

    def rec(rest, acc):
        if not rest:
            results.append(list(acc))
            return
        for cut in range(1, len(rest) + 1):
            head = rest[:cut]
            if is_lyndon(head, alphabet):
                if not acc or alphabet.word_key(acc[-1]) >= alphabet.word_key(head):
                    acc.append(head)
                    rec(rest[cut:], acc)
                    acc.pop()

    rec(w, [])
    return results


def test_cfl_examples():
    assert cfl((1, X0, 1), A) == [((1,), 1), ((X0, 1), 1)]
    assert cfl((X0, X0), A) == [((X0,), 2)]
    assert cfl((X0, 1), A) == [((X0, 1), 1)]
    with pytest.raises(EmptyWord):
        cfl((), A)


def test_cfl_unique_against_bruteforce():
    # words of length <= 5 over three letters here; the acceptance suite
    # re-runs this at length 6
    for w in all_words((X0, 1, 2), 5):
        facts = brute_cfl(w, A)
        assert len(facts) == 1
        flat = [f for f in facts[0]]
        grouped = []
        for f in flat:
            if grouped and grouped[-1][0] == f:
                grouped[-1] = (f, grouped[-1][1] + 1)
            else:
                grouped.append((f, 1))
        assert cfl(w, A) == grouped


def test_lyndon_rewrite_examples():
    lp = lyndon_rewrite((X0, 1), A)
    assert lp.coeffs == {((X0, 1),): Fraction(1)}
    lp = lyndon_rewrite((1, X0), A)
    assert lp.coeffs == {((1,), (X0,)): Fraction(1), ((X0, 1),): Fraction(-1)}
    lp = lyndon_rewrite((X0, X0), A)
    assert lp.coeffs == {((X0,), (X0,)): Fraction(1, 2)}


def test_lyndon_rewrite_roundtrip():
    for w in all_words((X0, 1), 5):
        lp = lyndon_rewrite(w, A)
        assert lp.expand() == WordPolynomial({w: 1}), word_str(w)


def test_local_words():
    assert is_local_word((X0, 1, X0, 2), A)
    assert not is_local_word((1, 1), A)
    assert local_word_pair((1,), (2,), A)
    assert not local_word_pair((1, 2), (2,), A)
    assert is_local_word((), A)


def test_locality_closure_of_shuffle():
    rng = random.Random(9)
    for _ in range(60):
        w = tuple(rng.choice([X0, 1]) for _ in range(rng.randint(0, 4)))
        v = tuple(rng.choice([X0, 2]) for _ in range(rng.randint(0, 4)))
        if not (is_local_word(w, A) and is_local_word(v, A)
                and local_word_pair(w, v, A)):
            continue
        for u in shuffle(w, v).coeffs:
            assert is_local_word(u, A)


def test_locality_cfl_examples():
    assert locality_cfl((1, 2), A) == ([(1, 2)], 0) if is_lyndon((1, 2), A) else True
    assert locality_cfl((X0, X0), A) == ([], 2)
    assert locality_cfl((2, X0, 1), A) == ([(2,), (X0, 1)], 0)
    with pytest.raises(NotLocal):
        locality_cfl((1, 1), A)


def test_locality_cfl_bruteforce_all_local_words():
    for w in all_words((X0, 1, 2), 4):
        if not is_local_word(w, A):
            continue
        factors, r = locality_cfl(w, A)
        rebuilt = tuple(a for f in factors for a in f) + (X0,) * r
        assert rebuilt == w
        keys = [A.word_key(f) for f in factors]
        assert keys == sorted(keys, reverse=True)
        assert len(set(factors)) == len(factors)
        for f in factors:
            assert is_lyndon(f, A) and f != (X0,)
        for a, b in itertools.combinations(factors, 2):
            assert local_word_pair(a, b, A)


def test_locality_lyndon_generators_examples():
    assert locality_lyndon_generators(A, 2, letters=[1]) == [(1,), (X0, 1)]
    assert locality_lyndon_generators(A, 1, letters=[1, 2]) == [(1,), (2,)]
    gens = locality_lyndon_generators(A, 2, letters=[1, 2])
    assert gens == [(1,), (2,), (X0, 1), (X0, 2), (1, 2)]


def test_locality_algebraic_independence():
    """Distinct locality monomials in locality Lyndon words, expanded by the
    shuffle, are linearly independent (exact rank over the word basis)."""
    gens = locality_lyndon_generators(A, 3, letters=[1, 2, 3])
    monomials = []
    for r in range(1, 3):
        for combo in itertools.combinations_with_replacement(gens, r):
            if sum(len(w) for w in combo) > 4:
                continue
            flat = [a for w in combo for a in w]
            if not is_local_word(tuple(flat), A):
                continue
            if any(combo.count(w) > 1 and any(a is not X0 for a in w) for w in combo):
                continue
            monomials.append(combo)
    vectors = []
    for combo in monomials:
        wp = WordPolynomial({(): 1})
        for w in combo:
            wp = wp.shuffle_with(WordPolynomial({w: 1}))
        vectors.append(wp.coeffs)
    basis = sorted({w for vec in vectors for w in vec},
                   key=lambda t: (len(t), A.word_key(t)))
    matrix = [[vec.get(w, Fraction(0)) for w in basis] for vec in vectors]
    assert _rank(matrix) == len(monomials)


def _rank(matrix):
    m = [row[:] for row in matrix]
    rank = 0
    cols = len(m[0]) if m else 0
    for col in range(cols):
        piv = next((r for r in range(rank, len(m)) if m[r][col]), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        inv = 1 / m[rank][col]
        m[rank] = [x * inv for x in m[rank]]
        for r in range(len(m)):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[rank])]
        rank += 1
    return rank


def test_subset_alphabet_order_and_locality():
    S = subset_alphabet()
    a, b = frozenset({3, 1}), frozenset({3})
    assert S.letter_key(a) > S.letter_key(b)  # longer wins on equal prefix
    assert S.letter_key(frozenset({2})) < S.letter_key(frozenset({3}))
    assert S.local_letters(frozenset({1}), frozenset({2}))
    assert not S.local_letters(frozenset({1, 2}), frozenset({2, 3}))
    assert S.local_letters(X0, frozenset({1}))
