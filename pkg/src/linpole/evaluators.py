"""Locality generalised evaluators and the Galois transforms relating them.

Three evaluators: minimal subtraction (exact), the iterated one-variable
scheme averaged over variable orders (exact, coordinate dependent), and the
multiple-zeta evaluator on combinations of Chen fractions (rigorous rational
enclosures).  Transforms shift Lyndon generators by constants and act on
presentations term by term, leaving holomorphic coefficients untouched.
"""

from __future__ import annotations

import itertools
import math
import threading
from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import (DependenceEscapesVars, DivergentIndex, EvaluatorDomain,
                     IncompatibleGenerators, NotChen, NotLocal,
                     TooManyVariables)
from .exactlin import (DEFAULT_Q, InnerProduct, LinearForm, Q, orthogonal,
                       span, zvar, _as_fraction)
from .germs import RationalGerm, dependence, germ_mul, germ_sum, ms_eval
from .fracspec import (Combination, FractionSpec, SpecMonomial,
                       lyndon_decompose)
from .poly import Polynomial
from .words import is_lyndon


# ---------------------------------------------------------------------------
# the iterated (Speer-style) evaluator
# ---------------------------------------------------------------------------

def ev_reg_single(f: RationalGerm, i: int) -> RationalGerm:
    """Constant Laurent coefficient of f in the variable z_i, over the field
    of rational functions of the remaining variables.

    This is the generic branch: denominator factors involving other variables
    are treated as invertible at z_i = 0, which is the value off a measure-zero
    set of the remaining variables.
    """
    zi = zvar(i)
    pure_exp = 0
    mixed: list[tuple[Q, LinearForm, int]] = []  # (a, rest, exp), a != 0 != rest
    free: list[tuple[LinearForm, int]] = []
    for form, e in f.denominator:
        a = form[i]
        rest = form - zi.scale(a)
        if a and not rest:
            pure_exp += e  # primitive pure factor is exactly z_i
        elif a:
            mixed.append((a, rest, e))
        else:
            free.append((form, e))
    m = pure_exp
    # split the numerator by z_i-degree
    by_degree: dict[int, dict] = {}
    for mono, c in f.numerator.terms:
        d = dict(mono)
        k = d.pop(i, 0)
        rest_m = tuple(sorted(d.items()))
        by_degree.setdefault(k, {})[rest_m] = \
            by_degree.get(k, {}).get(rest_m, Fraction(0)) + c
    parts = {k: Polynomial(v) for k, v in by_degree.items()}
    parts = {k: p for k, p in parts.items() if p}

    # need [z_i^m] of numerator * prod (a_j z_i + R_j)^{-s_j}; put everything
    # over the common denominator prod R_j^{s_j + m}
    rest_polys = [Polynomial.from_linear(r) for _, r, _ in mixed]
    total = Polynomial()
    for ts in itertools.product(range(m + 1), repeat=len(mixed)):
        k = m - sum(ts)
        if k < 0 or k not in parts:
            continue
        piece = parts[k]
        for (a, _, s), t, rp in zip(mixed, ts, rest_polys):
            coef = Fraction((-1) ** t) * math.comb(s + t - 1, t) * a ** t
            piece = piece * coef * rp ** (m - t)
        total = total + piece
    dens = list(free) + [(r, s + m) for _, r, s in mixed]
    return RationalGerm(total, dens)


def iter_eval(f: RationalGerm, variables: Optional[Sequence[int]] = None,
              perm_cap: int = 8) -> Q:
    """Average of iterated single-variable regularised evaluations over all
    orderings of the variables (lexicographic summation order)."""
    if variables is None:
        variables = f.variables()
    variables = sorted(variables)
    k = len(variables)
    if k > perm_cap:
        raise TooManyVariables(f"{k} variables exceeds the permutation cap {perm_cap}")
    dep = dependence(f, DEFAULT_Q)
    allowed = set(variables)
    for form in dep.basis:
        if not set(form.support()) <= allowed:
            raise DependenceEscapesVars(f"germ depends on {form!r}")
    if k == 0:
        return f.numerator.constant_term()
    total = Fraction(0)
    for sigma in itertools.permutations(variables):
        g = f
        for v in sigma:
            g = ev_reg_single(g, v)
        if not g.is_holomorphic() or not g.numerator.is_constant():
            raise DependenceEscapesVars("iterated evaluation did not reach a constant")
        total += g.numerator.constant_term()
    return total / math.factorial(k)


# ---------------------------------------------------------------------------
# multiple zeta values: rigorous rational enclosures of truncated nested sums
# ---------------------------------------------------------------------------

_MZV_CACHE: dict[tuple[int, ...], tuple[Fraction, Fraction]] = {}
_MZV_LOCK = threading.Lock()


def _mzv_interval(s: tuple[int, ...], n_terms: int, scale: int) -> tuple[int, int]:
    """Scaled-integer enclosure of zeta(s) = sum over n1 > ... > nk >= 1 of
    prod n_j^{-s_j}.

    Level j accumulates R_j(m) = sum over n1 > ... > nj > m; tails beyond the
    truncation point are enclosed by integral comparison, with an analytic
    envelope c * n^(-e) carried through the levels.
    """
    big_n = n_terms
    # level envelopes: R_j(n) in [c_lo * (n+1)^(-e), c_hi * n^(-e)] for n >= big_n
    c_lo = c_hi = Fraction(1)
    e = 0
    lo_arr = [0] * (big_n + 1)
    hi_arr = [0] * (big_n + 1)
    prev_lo = [scale] * (big_n + 2)
    prev_hi = [scale] * (big_n + 2)  # R_0 == 1
    for s_j in s:
        a = s_j + e  # decay exponent of the summand at this level
        if a < 2:
            raise DivergentIndex(f"index {s} diverges")
        # tail at big_n
        new_e = a - 1
        new_c_hi = c_hi / (a - 1)
        new_c_lo = (c_lo / (a - 1)) * Fraction(big_n + 1, big_n + 2) ** new_e
        tail_lo = new_c_lo / Fraction(big_n + 1) ** new_e
        tail_hi = new_c_hi / Fraction(big_n) ** new_e
        lo = _floor_scaled(tail_lo, scale)
        hi = _ceil_scaled(tail_hi, scale)
        lo_arr[big_n] = lo
        hi_arr[big_n] = hi
        for mm in range(big_n - 1, -1, -1):
            n = mm + 1
            d = n ** s_j
            lo += prev_lo[n] // d
            hi += -((-prev_hi[n]) // d)
            lo_arr[mm] = lo
            hi_arr[mm] = hi
        prev_lo = lo_arr + [0]
        prev_hi = hi_arr + [0]
        lo_arr = [0] * (big_n + 1)
        hi_arr = [0] * (big_n + 1)
        c_lo, c_hi, e = new_c_lo, new_c_hi, new_e
    return prev_lo[0], prev_hi[0]


def _floor_scaled(x: Fraction, scale: int) -> int:
    return (x.numerator * scale) // x.denominator


def _ceil_scaled(x: Fraction, scale: int) -> int:
    return -((-x.numerator * scale) // x.denominator)


def mzv_numeric(s: Sequence[int], precision: int = 8) -> tuple[Fraction, Fraction]:
    """Multiple zeta value (sum over n1 > ... > nk >= 1 of prod n_j^{-s_j})
    as (value, error_bound) with |true - value| <= error_bound < 10^-precision.

    Raises DivergentIndex when the leading exponent is 1.
    """
    s = tuple(int(x) for x in s)
    if not s:
        return Fraction(1), Fraction(0)
    if any(x < 1 for x in s):
        raise ValueError("exponents must be positive integers")
    if s[0] < 2:
        raise DivergentIndex(f"zeta{s} diverges (leading exponent 1)")
    target = Fraction(1, 10 ** precision)
    with _MZV_LOCK:
        hit = _MZV_CACHE.get(s)
    if hit is not None and hit[1] <= target:
        return hit
    n_terms = max(64, _isqrt_ceil(10 ** (precision + 1)))
    for _ in range(8):
        scale = 10 ** (precision + 4) * n_terms * max(len(s), 1)
        lo, hi = _mzv_interval(s, n_terms, scale)
        value = Fraction(lo + hi, 2 * scale)
        err = Fraction(hi - lo, 2 * scale)
        if err <= target:
            with _MZV_LOCK:
                _MZV_CACHE[s] = (value, err)
            return value, err
        n_terms *= 2
    raise RuntimeError(f"could not reach precision {precision} for zeta{s}")


def _isqrt_ceil(n: int) -> int:
    r = math.isqrt(n)
    return r if r * r == n else r + 1


# ---------------------------------------------------------------------------
# combinations of holomorphic coefficients times local fraction monomials
# ---------------------------------------------------------------------------

class GermCombo:
    """Sum of terms h * S1 * ... * Sr: a polynomial coefficient times a
    locality monomial of fraction specs.  The explicit presentation is the
    domain of the zeta evaluator and of Galois transforms."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Polynomial, Sequence[FractionSpec]]]):
        merged: dict[SpecMonomial, Polynomial] = {}
        for h, specs in terms:
            if not isinstance(h, Polynomial):
                h = Polynomial.constant(_as_fraction(h))
            key = tuple(sorted(specs, key=FractionSpec.sort_key))
            merged[key] = merged.get(key, Polynomial()) + h
        self.terms = tuple((h, m) for m, h in merged.items() if h)

    def __eq__(self, other):
        return isinstance(other, GermCombo) and set(self._key()) == set(other._key())

    def _key(self):
        return [(h, m) for h, m in self.terms]

    def germ(self) -> RationalGerm:
        parts = []
        for h, specs in self.terms:
            g = RationalGerm(h)
            for s in specs:
                g = germ_mul(g, s.germ())
            parts.append(g)
        return germ_sum(parts)

    def validate_locality(self, q: InnerProduct = DEFAULT_Q):
        """Check each monomial: specs pairwise local, coefficient orthogonal
        to the fraction part."""
        for h, specs in self.terms:
            n = len(specs)
            for idx in range(n):
                for jdx in range(idx + 1, n):
                    a, b = specs[idx], specs[jdx]
                    if not all(a.lmap.alphabet.local_letters(u, v)
                               for u in a.letters for v in b.letters):
                        raise NotLocal(f"{a!r} and {b!r} share non-local letters")
            if specs:
                forms = [f for sp in specs for (f, _) in sp.germ().denominator]
                if not orthogonal(q, h.dependence_space(), span(forms)):
                    raise NotLocal(f"coefficient {h!r} not orthogonal to its fraction part")

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"({h!r})*" + ("*".join(map(repr, m)) or "1")
                          for h, m in self.terms)


def combo_of_combination(combo: Combination) -> GermCombo:
    return GermCombo([(Polynomial.constant(c), (s,)) for s, c in combo])


# ---------------------------------------------------------------------------
# evaluators
# ---------------------------------------------------------------------------

class Evaluator:
    """A named evaluation procedure with (value, error_bound) results.

    `on_germ` takes a RationalGerm; `on_combo` takes a GermCombo.  Exact
    evaluators report a zero error bound.
    """

    def __init__(self, name: str,
                 on_germ: Optional[Callable[[RationalGerm], tuple[Fraction, Fraction]]] = None,
                 on_combo: Optional[Callable[["GermCombo"], tuple[Fraction, Fraction]]] = None,
                 exact: bool = True):
        self.name = name
        self._on_germ = on_germ
        self._on_combo = on_combo
        self.exact = exact

    def eval_germ(self, f: RationalGerm) -> tuple[Fraction, Fraction]:
        if self._on_germ is not None:
            return self._on_germ(f)
        raise EvaluatorDomain(f"evaluator {self.name} needs an explicit presentation")

    def eval_combo(self, c: "GermCombo") -> tuple[Fraction, Fraction]:
        if self._on_combo is not None:
            return self._on_combo(c)
        return self.eval_germ(c.germ())

    def __repr__(self):
        return f"Evaluator({self.name})"


def ms_evaluator(q: InnerProduct = DEFAULT_Q) -> Evaluator:
    return Evaluator("ms", on_germ=lambda f: (ms_eval(f, q), Fraction(0)))


def iter_evaluator(perm_cap: int = 8) -> Evaluator:
    return Evaluator("iter",
                     on_germ=lambda f: (iter_eval(f, perm_cap=perm_cap), Fraction(0)))


def _zeta_of_spec(spec: FractionSpec, precision: int) -> tuple[Fraction, Fraction]:
    if spec.lmap.name not in ("chen", "weak-chen"):
        raise NotChen(f"{spec!r} is not a Chen fraction")
    s = spec.exponents
    if not s:
        return Fraction(1), Fraction(0)
    if s[0] == 1:
        return Fraction(0), Fraction(0)
    return mzv_numeric(s, precision)


def zeta_eval(combo: GermCombo, precision: int = 8,
              q: InnerProduct = DEFAULT_Q) -> tuple[Fraction, Fraction]:
    """Assign multiple zeta values to the Lyndon Chen generators and extend by
    locality multiplicativity and linearity; holomorphic coefficients
    contribute their value at zero."""
    combo.validate_locality(q)
    total = (Fraction(0), Fraction(0))
    for h, specs in combo.terms:
        c0 = h.constant_term()
        acc: dict[SpecMonomial, Fraction] = {(): Fraction(1)}
        for sp in specs:
            piece = lyndon_decompose([(sp, Fraction(1))])
            acc = _specpoly_mul(acc, piece)
        term_iv = (Fraction(0), Fraction(0))
        for mono, coeff in acc.items():
            iv = (Fraction(1), Fraction(1))
            for gen in mono:
                val, err = _zeta_of_spec(gen, precision)
                iv = _iv_mul(iv, (val - err, val + err))
                if iv == (Fraction(0), Fraction(0)):
                    break
            iv = _iv_scale(iv, coeff)
            term_iv = (term_iv[0] + iv[0], term_iv[1] + iv[1])
        term_iv = _iv_scale(term_iv, c0)
        total = (total[0] + term_iv[0], total[1] + term_iv[1])
    lo, hi = total
    return (lo + hi) / 2, (hi - lo) / 2


def zeta_evaluator(precision: int = 8, q: InnerProduct = DEFAULT_Q) -> Evaluator:
    def on_germ(f: RationalGerm):
        if f.is_holomorphic():
            return f.numerator.constant_term(), Fraction(0)
        raise NotChen("zeta evaluation needs an explicit Chen presentation")

    return Evaluator("zeta", on_germ=on_germ,
                     on_combo=lambda c: zeta_eval(c, precision, q), exact=False)


def _iv_mul(a: tuple[Fraction, Fraction], b: tuple[Fraction, Fraction]):
    vals = [a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]]
    return min(vals), max(vals)


def _iv_scale(a, k: Fraction):
    lo, hi = a[0] * k, a[1] * k
    return (lo, hi) if lo <= hi else (hi, lo)


def _specpoly_mul(a: dict[SpecMonomial, Fraction], b: dict[SpecMonomial, Fraction]):
    out: dict[SpecMonomial, Fraction] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            key = tuple(sorted(m1 + m2, key=FractionSpec.sort_key))
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {m: c for m, c in out.items() if c}


# ---------------------------------------------------------------------------
# Galois transforms: constant shifts of the Lyndon generators
# ---------------------------------------------------------------------------

class GaloisTransform:
    """Generator substitution S -> S + c_S on a fixed set of Lyndon locality
    fraction specs, extended multiplicatively over locality monomials and
    linearly over presentations."""

    def __init__(self, shifts: dict[FractionSpec, Fraction]):
        for spec in shifts:
            if not spec.is_local():
                raise NotLocal(f"generator {spec!r} is not local")
            if not spec.exponents:
                raise ValueError("the empty fraction cannot be a generator")
            if not is_lyndon(spec.word(), spec.lmap.alphabet):
                raise ValueError(f"generator {spec!r} is not a Lyndon fraction")
        self.shifts = {s: _as_fraction(c) for s, c in shifts.items()}

    def generator_set(self) -> frozenset:
        return frozenset(self.shifts)

    def shift(self, spec: FractionSpec) -> Fraction:
        return self.shifts.get(spec, Fraction(0))

    def is_identity(self) -> bool:
        return all(c == 0 for c in self.shifts.values())

    def __repr__(self):
        inner_part = ", ".join(f"{s!r}+{c}" for s, c in self.shifts.items())
        return f"GaloisTransform({inner_part})"


def galois_from_evaluator(e: Evaluator, generators: Sequence[FractionSpec]) -> GaloisTransform:
    """The shift transform with c_S = e(S) on each generator."""
    shifts = {}
    for g in generators:
        val, _err = e.eval_combo(GermCombo([(Polynomial.constant(1), (g,))]))
        shifts[g] = val
    return GaloisTransform(shifts)


def apply_transform(t: GaloisTransform, combo: GermCombo,
                    q: InnerProduct = DEFAULT_Q) -> GermCombo:
    """Substitute S -> S + c_S in every locality monomial; coefficients pass
    through unchanged."""
    combo.validate_locality(q)
    out: list[tuple[Polynomial, tuple[FractionSpec, ...]]] = []
    for h, specs in combo.terms:
        acc: dict[SpecMonomial, Fraction] = {(): Fraction(1)}
        for sp in specs:
            piece = lyndon_decompose([(sp, Fraction(1))])
            acc = _specpoly_mul(acc, piece)
        shifted: dict[SpecMonomial, Fraction] = {}
        for mono, coeff in acc.items():
            n = len(mono)
            for keep_mask in itertools.product((False, True), repeat=n):
                kept = tuple(g for g, k in zip(mono, keep_mask) if k)
                dropped = [g for g, k in zip(mono, keep_mask) if not k]
                c = coeff
                for g in dropped:
                    c *= t.shift(g)
                if c:
                    key = tuple(sorted(kept, key=FractionSpec.sort_key))
                    shifted[key] = shifted.get(key, Fraction(0)) + c
        for mono, coeff in shifted.items():
            out.append((h * coeff, mono))
    return GermCombo(out)


def compose_transforms(t1: GaloisTransform, t2: GaloisTransform) -> GaloisTransform:
    """apply(compose(t1, t2), x) == apply(t1, apply(t2, x)) for constant shifts."""
    if t1.generator_set() != t2.generator_set():
        raise IncompatibleGenerators("transforms use different generator sets")
    return GaloisTransform({g: t1.shifts[g] + t2.shifts[g] for g in t1.shifts})


def invert_transform(t: GaloisTransform) -> GaloisTransform:
    return GaloisTransform({g: -c for g, c in t.shifts.items()})


class FactorizationReport:
    """Outcome of checking ms o transform == evaluator on a test set."""

    def __init__(self, entries: list[tuple[str, Fraction, Fraction, Fraction, bool]]):
        self.entries = entries

    @property
    def all_ok(self) -> bool:
        return all(ok for *_, ok in self.entries)

    def __repr__(self):
        lines = [f"{'PASS' if ok else 'FAIL'} {name}: ms={float(lhs):.9g} "
                 f"e={float(rhs):.9g} |diff|={float(diff):.3g}"
                 for name, lhs, rhs, diff, ok in self.entries]
        return "\n".join(lines)


def check_factorization(e: Evaluator, t: GaloisTransform, tests: Sequence[GermCombo],
                        tol: Fraction = Fraction(0),
                        q: InnerProduct = DEFAULT_Q) -> FactorizationReport:
    """Verify |ms(apply(t, x)) - e(x)| <= tol on each test combo."""
    tol = _as_fraction(tol)
    entries = []
    for x in tests:
        lhs = ms_eval(apply_transform(t, x, q).germ(), q)
        rhs, _err = e.eval_combo(x)
        diff = abs(lhs - rhs)
        entries.append((repr(x), lhs, rhs, diff, diff <= tol))
    return FactorizationReport(entries)
