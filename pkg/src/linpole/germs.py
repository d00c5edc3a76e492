"""Meromorphic germs at zero with linear poles, over the rationals.

A germ is a numerator polynomial over a product of powers of homogeneous
linear forms.  Relative to an inner product q the germ splits canonically into
polar terms (numerator q-orthogonal to the supporting space of its simplex
denominator) plus a holomorphic polynomial; the splitting drives residues,
dependence subspaces and the locality (q-orthogonality) relation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .errors import NotLocal
from .exactlin import (DEFAULT_Q, InnerProduct, LinearForm, Q, Subspace,
                       ZERO_SPACE, _as_fraction, find_circuit,
                       orth_decompose, span, subspace_sum, zvar)
from .poly import ONE, Polynomial

DenEntry = tuple[LinearForm, int]


def _coerce_poly(x) -> Polynomial:
    if isinstance(x, Polynomial):
        return x
    if isinstance(x, LinearForm):
        return Polynomial.from_linear(x)
    return Polynomial.constant(_as_fraction(x))


class RationalGerm:
    """numerator / product(form^exp); denominator forms need not be independent.

    Construction normalises to a canonical presentation: each denominator form
    is primitive (coprime integer coefficients, positive on its smallest
    variable) with scalars folded into the numerator, forms dividing the
    numerator exactly are cancelled, and the factor list is sorted.  Two equal
    rational functions therefore construct identical objects.
    """

    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(self, numerator, denominator: Iterable[DenEntry] = ()):
        num = _coerce_poly(numerator)
        dens: dict[LinearForm, int] = {}
        for form, exp in denominator:
            if not isinstance(form, LinearForm) or not form:
                raise ValueError(f"denominator factor must be a nonzero linear form, got {form!r}")
            if exp == 0:
                continue
            if exp < 0:
                num = num * Polynomial.from_linear(form) ** (-exp)
                continue
            prim, scalar = form.primitive()
            num = num * (Fraction(1) / scalar ** exp)
            dens[prim] = dens.get(prim, 0) + exp
        if num:
            for form in sorted(dens, key=LinearForm.key):
                while dens[form] > 0:
                    quot = num.divide_by_form(form)
                    if quot is None:
                        break
                    num = quot
                    dens[form] -= 1
        else:
            dens = {}
        entries = tuple(sorted(((f, e) for f, e in dens.items() if e),
                               key=lambda t: t[0].key()))
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", entries)
        object.__setattr__(self, "_hash", hash((num, entries)))

    def __setattr__(self, *a):
        raise AttributeError("RationalGerm is immutable")

    def __eq__(self, other):
        return (isinstance(other, RationalGerm)
                and self.numerator == other.numerator
                and self.denominator == other.denominator)

    def __hash__(self):
        return self._hash

    def __bool__(self):
        return bool(self.numerator)

    def is_holomorphic(self) -> bool:
        return not self.denominator

    def variables(self) -> tuple[int, ...]:
        vs = set(self.numerator.support())
        for f, _ in self.denominator:
            vs.update(f.support())
        return tuple(sorted(vs))

    def evaluate(self, point: Mapping[int, Q]) -> Q:
        val = self.numerator.evaluate(point)
        for f, e in self.denominator:
            d = f.evaluate(point)
            if d == 0:
                raise ZeroDivisionError(f"point lies on the pole {f!r}")
            val /= d ** e
        return val

    def __repr__(self):
        if not self.denominator:
            return repr(self.numerator)
        den = "*".join(f"({f!r})^{e}" if e > 1 else f"({f!r})" for f, e in self.denominator)
        return f"({self.numerator!r})/({den})"


ZERO_GERM = RationalGerm(0)
ONE_GERM = RationalGerm(1)


def germ_from_fraction(dens: Iterable[DenEntry]) -> RationalGerm:
    return RationalGerm(1, dens)


def germ_add(f: RationalGerm, g: RationalGerm) -> RationalGerm:
    """Common-denominator sum, renormalised."""
    common: dict[LinearForm, int] = dict(f.denominator)
    for form, e in g.denominator:
        common[form] = max(common.get(form, 0), e)
    nf, ng = f.numerator, g.numerator
    for form, e in common.items():
        ef = dict(f.denominator).get(form, 0)
        eg = dict(g.denominator).get(form, 0)
        if e > ef:
            nf = nf * Polynomial.from_linear(form) ** (e - ef)
        if e > eg:
            ng = ng * Polynomial.from_linear(form) ** (e - eg)
    return RationalGerm(nf + ng, common.items())


def germ_sub(f: RationalGerm, g: RationalGerm) -> RationalGerm:
    return germ_add(f, germ_scale(g, -1))


def germ_mul(f: RationalGerm, g: RationalGerm) -> RationalGerm:
    return RationalGerm(f.numerator * g.numerator,
                        list(f.denominator) + list(g.denominator))


def germ_scale(f: RationalGerm, k) -> RationalGerm:
    return RationalGerm(f.numerator * _as_fraction(k), f.denominator)


def germ_pow(f: RationalGerm, k: int) -> RationalGerm:
    if k < 0:
        raise ValueError("negative germ power; divide explicitly instead")
    out = ONE_GERM
    for _ in range(k):
        out = germ_mul(out, f)
    return out


def germ_sum(germs: Iterable[RationalGerm]) -> RationalGerm:
    out = ZERO_GERM
    for g in germs:
        out = germ_add(out, g)
    return out


class SimplexFraction:
    """1 / (L1^s1 ... Lk^sk) with linearly independent, canonically sorted forms."""

    __slots__ = ("entries", "_hash")

    def __init__(self, entries: Iterable[DenEntry]):
        ent = tuple(sorted(entries, key=lambda t: t[0].key()))
        forms = [f for f, _ in ent]
        if any(e < 1 for _, e in ent):
            raise ValueError("exponents must be positive")
        if len({f.key() for f in forms}) != len(forms):
            raise ValueError("repeated denominator form")
        if span(forms).dim != len(forms):
            raise ValueError("denominator forms must be linearly independent")
        object.__setattr__(self, "entries", ent)
        object.__setattr__(self, "_hash", hash(ent))

    def __setattr__(self, *a):
        raise AttributeError("SimplexFraction is immutable")

    def __eq__(self, other):
        return isinstance(other, SimplexFraction) and self.entries == other.entries

    def __hash__(self):
        return self._hash

    @property
    def p_order(self) -> int:
        return sum(e for _, e in self.entries)

    def supporting_space(self) -> Subspace:
        return span([f for f, _ in self.entries])

    def germ(self) -> RationalGerm:
        return RationalGerm(1, self.entries)

    def __repr__(self):
        return "1/(" + "*".join(f"({f!r})^{e}" if e > 1 else f"({f!r})"
                                for f, e in self.entries) + ")"


class PolarTerm:
    """numerator * simplex fraction, with Dep(numerator) q-orthogonal to the
    supporting space of the denominator."""

    __slots__ = ("numerator", "simplex", "_hash")

    def __init__(self, numerator: Polynomial, simplex: SimplexFraction,
                 q: Optional[InnerProduct] = None):
        if not numerator:
            raise ValueError("polar term numerator must be nonzero")
        if q is not None and not orthogonal_polynomial(q, numerator, simplex.supporting_space()):
            raise ValueError("numerator not q-orthogonal to the supporting space")
        object.__setattr__(self, "numerator", numerator)
        object.__setattr__(self, "simplex", simplex)
        object.__setattr__(self, "_hash", hash((numerator, simplex)))

    def __setattr__(self, *a):
        raise AttributeError("PolarTerm is immutable")

    def __eq__(self, other):
        return (isinstance(other, PolarTerm) and self.numerator == other.numerator
                and self.simplex == other.simplex)

    def __hash__(self):
        return self._hash

    @property
    def p_order(self) -> int:
        return self.simplex.p_order

    def supporting_space(self) -> Subspace:
        return self.simplex.supporting_space()

    def germ(self) -> RationalGerm:
        return RationalGerm(self.numerator, self.simplex.entries)

    def __repr__(self):
        return f"({self.numerator!r})*{self.simplex!r}"


def orthogonal_polynomial(q: InnerProduct, p: Polynomial, u: Subspace) -> bool:
    from .exactlin import orthogonal

    return orthogonal(q, p.dependence_space(), u)


class Decomposition:
    """Canonical splitting of a germ: polar terms plus a holomorphic part.

    Terms are grouped and ordered by (supporting-space key, p-order,
    denominator key); within one supporting space the simplex denominators are
    pairwise distinct.
    """

    __slots__ = ("terms", "holomorphic", "_hash")

    def __init__(self, terms: Iterable[PolarTerm], holomorphic: Polynomial):
        merged: dict[SimplexFraction, Polynomial] = {}
        for t in terms:
            merged[t.simplex] = merged.get(t.simplex, Polynomial()) + t.numerator
        clean = [PolarTerm(num, s) for s, num in merged.items() if num]
        clean.sort(key=lambda t: (t.supporting_space().key(), t.p_order,
                                  tuple((f.key(), e) for f, e in t.simplex.entries)))
        object.__setattr__(self, "terms", tuple(clean))
        object.__setattr__(self, "holomorphic", holomorphic)
        object.__setattr__(self, "_hash", hash((self.terms, holomorphic)))

    def __setattr__(self, *a):
        raise AttributeError("Decomposition is immutable")

    def __eq__(self, other):
        return (isinstance(other, Decomposition) and self.terms == other.terms
                and self.holomorphic == other.holomorphic)

    def __hash__(self):
        return self._hash

    def is_zero(self) -> bool:
        return not self.terms and not self.holomorphic

    def max_p_order(self) -> int:
        return max((t.p_order for t in self.terms), default=0)

    def max_support_dim(self) -> int:
        return max((t.supporting_space().dim for t in self.terms), default=0)

    def __repr__(self):
        bits = [repr(t) for t in self.terms]
        if self.holomorphic or not bits:
            bits.append(repr(self.holomorphic))
        return " + ".join(bits)


def _eliminate_dependent(num: Polynomial, den: Sequence[DenEntry]):
    """Phase 1 of the decomposition: split until every denominator is a
    linearly independent family.

    Uses the circuit relation sum(c_i L_i) - L_n = 0 (L_n the largest circuit
    member) to trade one denominator power of each smaller L_i for one of L_n.
    Termination: the multiset of denominator form keys strictly increases in
    the sorted-descending lexicographic order at each split, the candidate
    form set is fixed and the total exponent is preserved, so every branch
    reaches an independent family.
    """
    out = []
    stack = [(num, tuple(sorted(den, key=lambda t: t[0].key())))]
    while stack:
        n, d = stack.pop()
        forms = [f for f, _ in d]
        circuit = find_circuit(forms)
        if circuit is None:
            out.append((n, d))
            continue
        idxs, coeffs = circuit
        pivot = next(i for i, c in zip(idxs, coeffs) if c == -1)
        for i, c in zip(idxs, coeffs):
            if i == pivot:
                continue
            nd = {f: e for f, e in d}
            nd[forms[i]] -= 1
            nd[forms[pivot]] += 1
            stack.append((n * c, tuple(sorted(((f, e) for f, e in nd.items() if e),
                                              key=lambda t: t[0].key()))))
    return out


def _split_simplex(num: Polynomial, den: Sequence[DenEntry], q: InnerProduct,
                   polar_acc: dict[SimplexFraction, Polynomial], holo_acc: list[Polynomial]):
    """Phase 2: rewrite the numerator of an independent-denominator fraction
    in coordinates adapted to the supporting space and its q-complement,
    cancel numerator factors of the denominator forms, and collect."""
    if not num:
        return
    if not den:
        holo_acc.append(num)
        return
    forms = [f for f, _ in den]
    exps = [e for _, e in den]
    u = span(forms)
    offset = max(itertools.chain(num.support(), *(f.support() for f in forms)), default=0)
    subst: dict[int, Polynomial] = {}
    for v in num.support():
        a, b = orth_decompose(q, zvar(v), u)
        coords = _coordinates(a, forms)
        repl = Polynomial.from_linear(b)
        for j, cj in enumerate(coords):
            if cj:
                repl = repl + Polynomial({((offset + 1 + j, 1),): cj})
        subst[v] = repl
    expanded = num.substitute(subst)
    groups: dict[tuple[int, ...], dict] = {}
    for mono, c in expanded.terms:
        slot = [0] * len(forms)
        rest = []
        for v, e in mono:
            if v > offset:
                slot[v - offset - 1] = e
            else:
                rest.append((v, e))
        bucket = groups.setdefault(tuple(slot), {})
        rest_key = tuple(rest)
        bucket[rest_key] = bucket.get(rest_key, Fraction(0)) + c
    for slot, terms in groups.items():
        coeff_poly = Polynomial(terms)
        if not coeff_poly:
            continue
        rem_den = []
        rem_num = []
        for f, e, m in zip(forms, exps, slot):
            cancel = min(e, m)
            if e - cancel:
                rem_den.append((f, e - cancel))
            if m - cancel:
                rem_num.append((f, m - cancel))
        if rem_num:
            extra = ONE
            for f, e in rem_num:
                extra = extra * Polynomial.from_linear(f) ** e
            _split_simplex(coeff_poly * extra, rem_den, q, polar_acc, holo_acc)
        elif rem_den:
            s = SimplexFraction(rem_den)
            polar_acc[s] = polar_acc.get(s, Polynomial()) + coeff_poly
        else:
            holo_acc.append(coeff_poly)


def _coordinates(form: LinearForm, basis: Sequence[LinearForm]) -> list[Q]:
    """Coordinates of a form lying in the span of an independent basis."""
    variables = sorted({v for b in basis for v in b.support()} | set(form.support()))
    matrix = [[b[v] for b in basis] for v in variables]
    rhs = [form[v] for v in variables]
    n = len(basis)
    aug = [row + [r] for row, r in zip(matrix, rhs)]
    coords: list[Q] = [Fraction(0)] * n
    used_rows: list[int] = []
    pivots: list[int] = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(aug)) if aug[i][col]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][col]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(len(aug)):
            if i != r and aug[i][col]:
                fct = aug[i][col]
                aug[i] = [x - fct * y for x, y in zip(aug[i], aug[r])]
        pivots.append(col)
        used_rows.append(r)
        r += 1
    for rr, col in zip(used_rows, pivots):
        coords[col] = aug[rr][n]
    return coords


def decompose(f: RationalGerm, q: InnerProduct = DEFAULT_Q) -> Decomposition:
    """Canonical Laurent-type decomposition of the germ relative to q.

    recompose(decompose(f, q)) == f, every polar numerator is q-orthogonal to
    its supporting space, and the output depends only on the rational function
    f, not on its presentation.
    """
    polar_acc: dict[SimplexFraction, Polynomial] = {}
    holo_acc: list[Polynomial] = []
    for num, den in _eliminate_dependent(f.numerator, f.denominator):
        _split_simplex(num, den, q, polar_acc, holo_acc)
    holo = Polynomial()
    for h in holo_acc:
        holo = holo + h
    terms = [PolarTerm(n, s) for s, n in polar_acc.items() if n]
    return Decomposition(terms, holo)


def recompose(d: Decomposition) -> RationalGerm:
    """Sum the decomposition back into a normalised germ."""
    return germ_sum([t.germ() for t in d.terms] + [RationalGerm(d.holomorphic)])


def project_plus(f: RationalGerm, q: InnerProduct = DEFAULT_Q) -> Polynomial:
    """Holomorphic part of the canonical decomposition (the projection pi_+)."""
    return decompose(f, q).holomorphic


def ms_eval(f: RationalGerm, q: InnerProduct = DEFAULT_Q) -> Q:
    """Minimal subtraction: evaluate the holomorphic part at zero."""
    return project_plus(f, q).constant_term()


def _residue(d: Decomposition, keep) -> Decomposition:
    terms = []
    for t in d.terms:
        if keep(t):
            c = t.numerator.constant_term()
            if c:
                terms.append(PolarTerm(Polynomial.constant(c), t.simplex))
    return Decomposition(terms, Polynomial())


def p_residue(f: RationalGerm, q: InnerProduct = DEFAULT_Q) -> Decomposition:
    """Top-p-order part of the decomposition, numerators frozen at zero."""
    d = decompose(f, q)
    if not d.terms:
        return Decomposition((), Polynomial())
    top = d.max_p_order()
    return _residue(d, lambda t: t.p_order == top)


def d_residue(f: RationalGerm, q: InnerProduct) -> Decomposition:
    """Top-supporting-dimension part, numerators frozen at zero.

    The inner product is a required argument: unlike the p-residue this
    genuinely depends on it.
    """
    d = decompose(f, q)
    if not d.terms:
        return Decomposition((), Polynomial())
    top = d.max_support_dim()
    return _residue(d, lambda t: t.supporting_space().dim == top)


def dependence(f: RationalGerm, q: InnerProduct = DEFAULT_Q) -> Subspace:
    """Smallest subspace of linear forms through which the germ factors,
    assembled additively over the canonical decomposition."""
    d = decompose(f, q)
    pieces = [ZERO_SPACE]
    for t in d.terms:
        pieces.append(t.supporting_space())
        pieces.append(t.numerator.dependence_space())
    pieces.append(d.holomorphic.dependence_space())
    return subspace_sum(*pieces)


def is_local_pair(f: RationalGerm, g: RationalGerm, q: InnerProduct = DEFAULT_Q) -> bool:
    """The locality relation: dependence subspaces q-orthogonal."""
    from .exactlin import orthogonal

    return orthogonal(q, dependence(f, q), dependence(g, q))


def locality_mul(f: RationalGerm, g: RationalGerm, q: InnerProduct = DEFAULT_Q) -> RationalGerm:
    """Product in the locality algebra; defined only on local pairs."""
    if not is_local_pair(f, g, q):
        raise NotLocal("germs are not q-orthogonal; locality product undefined")
    return germ_mul(f, g)
