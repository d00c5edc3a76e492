"""Exact rational linear algebra on the sparse filtered space spanned by z1, z2, ...

Linear forms live in the direct limit of the duals of Q^k: a form is a finite
sparse map from 1-based variable indices to nonzero rationals.  Everything here
is exact (fractions.Fraction), immutable and pure.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

Q = Fraction  # the coefficient field


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot coerce {x!r} to a rational")


class LinearForm:
    """A rational linear form sum(c_v * z_v) with finite support."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Mapping[int, Q] | Iterable[tuple[int, Q]] = ()):
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        clean = {}
        for v, c in items:
            if not isinstance(v, int) or v < 1:
                raise ValueError(f"variable index must be a positive integer, got {v!r}")
            c = _as_fraction(c)
            if c:
                clean[v] = clean.get(v, Fraction(0)) + c
        object.__setattr__(self, "coeffs", {v: c for v, c in sorted(clean.items()) if c})
        object.__setattr__(self, "_hash", hash(tuple(self.coeffs.items())))

    def __setattr__(self, *a):  # immutable
        raise AttributeError("LinearForm is immutable")

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return isinstance(other, LinearForm) and self.coeffs == other.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        c = dict(self.coeffs)
        for v, x in other.coeffs.items():
            c[v] = c.get(v, Fraction(0)) + x
        return LinearForm(c)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def __neg__(self) -> "LinearForm":
        return LinearForm({v: -c for v, c in self.coeffs.items()})

    def scale(self, k) -> "LinearForm":
        k = _as_fraction(k)
        if not k:
            return LinearForm()
        return LinearForm({v: k * c for v, c in self.coeffs.items()})

    def __getitem__(self, v: int) -> Q:
        return self.coeffs.get(v, Fraction(0))

    def support(self) -> tuple[int, ...]:
        return tuple(self.coeffs)

    def evaluate(self, point: Mapping[int, Q]) -> Q:
        return sum((c * _as_fraction(point.get(v, 0)) for v, c in self.coeffs.items()),
                   Fraction(0))

    def key(self) -> tuple:
        """Total-order key: compare coefficient sequences along z1, z2, ...

        Missing coefficients count as 0, so e.g. z1 > z2 and z1+z2 > z1.
        """
        if not self.coeffs:
            return ()
        top = max(self.coeffs)
        return tuple(self.coeffs.get(v, Fraction(0)) for v in range(1, top + 1))

    def primitive(self) -> tuple["LinearForm", Q]:
        """Return (canonical primitive form, scalar) with self = scalar * form.

        The canonical representative has coprime integer coefficients and a
        positive coefficient on its smallest variable.
        """
        if not self.coeffs:
            return self, Fraction(1)
        from math import gcd, lcm
        den = lcm(*(c.denominator for c in self.coeffs.values()))
        num = gcd(*(abs(c.numerator) for c in self.coeffs.values()))
        scalar = Fraction(num, den)
        first = self.coeffs[min(self.coeffs)]
        if first < 0:
            scalar = -scalar
        return self.scale(1 / scalar), scalar

    def __repr__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for v, c in self.coeffs.items():
            if c == 1:
                s = f"z{v}"
            elif c == -1:
                s = f"-z{v}"
            else:
                s = f"{c}*z{v}"
            parts.append(s)
        out = parts[0]
        for s in parts[1:]:
            out += f" - {s[1:]}" if s.startswith("-") else f" + {s}"
        return out


def zvar(v: int) -> LinearForm:
    """The coordinate form z_v."""
    return LinearForm({v: Fraction(1)})


def zset(indices: Iterable[int]) -> LinearForm:
    """z_I = sum of z_i over a finite index set."""
    return LinearForm({i: Fraction(1) for i in indices})


class InnerProduct:
    """Inner product on the filtered space: a rational SPD Gram block on the
    first n variables, extended by the identity beyond.

    The default (no block) is the standard dot product for the orthonormal
    coordinates z1, z2, ...
    """

    def __init__(self, gram: Optional[Sequence[Sequence]] = None):
        if gram is None:
            self.gram: tuple[tuple[Q, ...], ...] = ()
        else:
            g = tuple(tuple(_as_fraction(x) for x in row) for row in gram)
            n = len(g)
            if any(len(row) != n for row in g):
                raise ValueError("gram block must be square")
            for i in range(n):
                for j in range(i):
                    if g[i][j] != g[j][i]:
                        raise ValueError("gram block must be symmetric")
            for k in range(1, n + 1):
                if _det([row[:k] for row in g[:k]]) <= 0:
                    raise ValueError("gram block must be positive definite")
            self.gram = g

    @property
    def block_size(self) -> int:
        return len(self.gram)

    def __call__(self, a: LinearForm, b: LinearForm) -> Q:
        return inner(self, a, b)

    def __eq__(self, other):
        return isinstance(other, InnerProduct) and self.gram == other.gram

    def __repr__(self):
        return "InnerProduct(default)" if not self.gram else f"InnerProduct({len(self.gram)}x{len(self.gram)} block)"


DEFAULT_Q = InnerProduct()


def _det(m: list[list[Q]]) -> Q:
    """Determinant by fraction-free-ish Gaussian elimination (exact)."""
    m = [list(row) for row in m]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col]), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            if m[r][col]:
                f = m[r][col] * inv
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def inner(q: InnerProduct, a: LinearForm, b: LinearForm) -> Q:
    """Symmetric bilinear value of the two forms under q."""
    n = q.block_size
    total = Fraction(0)
    for i, ai in a.coeffs.items():
        if i <= n:
            for j, bj in b.coeffs.items():
                if j <= n:
                    total += ai * q.gram[i - 1][j - 1] * bj
        else:
            bi = b.coeffs.get(i)
            if bi:
                total += ai * bi
    return total


class Subspace:
    """A finite-dimensional subspace of linear forms, held as a reduced
    row-echelon basis over the ascending variable support.  Canonical: two
    constructions of the same subspace compare equal.
    """

    __slots__ = ("basis", "_hash")

    def __init__(self, basis: Sequence[LinearForm]):
        object.__setattr__(self, "basis", tuple(basis))
        object.__setattr__(self, "_hash", hash(self.basis))

    def __setattr__(self, *a):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other):
        return isinstance(other, Subspace) and self.basis == other.basis

    def __hash__(self):
        return self._hash

    def __le__(self, other: "Subspace") -> bool:
        return all(other.contains(f) for f in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self.dim < other.dim and self <= other

    def contains(self, form: LinearForm) -> bool:
        return not _reduce(form, self.basis)

    def key(self) -> tuple:
        return tuple(f.key() for f in self.basis)

    def __repr__(self):
        return f"span[{', '.join(map(repr, self.basis))}]"


ZERO_SPACE = Subspace(())


def _reduce(form: LinearForm, echelon: Sequence[LinearForm]) -> LinearForm:
    """Reduce a form against echelon rows (each row's pivot is its smallest
    variable with the convention used by span)."""
    for row in echelon:
        piv = min(row.coeffs)
        c = form[piv]
        if c:
            form = form - row.scale(c / row.coeffs[piv])
    return form


def span(forms: Iterable[LinearForm]) -> Subspace:
    """Canonical subspace spanned by the given forms (RREF, pivots ascending)."""
    rows: list[LinearForm] = []
    for f in forms:
        f = _reduce(f, rows)
        if f:
            piv = min(f.coeffs)
            f = f.scale(1 / f.coeffs[piv])
            rows = [r - f.scale(r[piv]) for r in rows]
            rows.append(f)
    rows.sort(key=lambda r: min(r.coeffs))
    return Subspace(rows)


def subspace_sum(*spaces: Subspace) -> Subspace:
    forms = [f for s in spaces for f in s.basis]
    return span(forms)


def orthogonal(q: InnerProduct, u: Subspace, v: Subspace) -> bool:
    """True iff every basis pair across the two subspaces is q-orthogonal."""
    return all(inner(q, a, b) == 0 for a in u.basis for b in v.basis)


def orth_decompose(q: InnerProduct, f: LinearForm, u: Subspace) -> tuple[LinearForm, LinearForm]:
    """Split f = a + b with a in u and b q-orthogonal to u (unique, exact)."""
    basis = u.basis
    if not basis:
        return LinearForm(), f
    n = len(basis)
    gram = [[inner(q, basis[i], basis[j]) for j in range(n)] for i in range(n)]
    rhs = [inner(q, basis[i], f) for i in range(n)]
    x = _solve(gram, rhs)
    a = LinearForm()
    for xi, bi in zip(x, basis):
        a = a + bi.scale(xi)
    return a, f - a


def _solve(m: list[list[Q]], rhs: list[Q]) -> list[Q]:
    """Solve a nonsingular rational system by Gaussian elimination."""
    n = len(m)
    aug = [list(row) + [r] for row, r in zip(m, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [aug[r][n] for r in range(n)]


def find_circuit(forms: Sequence[LinearForm]) -> Optional[tuple[tuple[int, ...], tuple[Q, ...]]]:
    """Find a minimal linearly dependent subset (a circuit) of the form list.

    Returns None when the forms are independent; otherwise (indices, coeffs)
    with sum(coeffs[i] * forms[indices[i]]) = 0 exactly, scaled so that the
    lexicographically-largest form in the circuit has coefficient -1.

    Scans prefixes in list order, so the result is deterministic; the circuit
    is the fundamental circuit of the first form that depends on its
    predecessors (minimality: dropping any member leaves an independent set).
    """
    rows: list[LinearForm] = []          # echelon rows
    combos: list[dict[int, Q]] = []      # row = sum combos[r][i] * forms[i]
    for idx, f in enumerate(forms):
        combo = {idx: Fraction(1)}
        red = f
        for r, row in enumerate(rows):
            piv = min(row.coeffs)
            c = red[piv]
            if c:
                k = c / row.coeffs[piv]
                red = red - row.scale(k)
                for i, x in combos[r].items():
                    combo[i] = combo.get(i, Fraction(0)) - k * x
        if not red:
            members = sorted(i for i, c in combo.items() if c)
            coeffs = {i: combo[i] for i in members}
            largest = max(members, key=lambda i: forms[i].key())
            scale = -1 / coeffs[largest]
            return tuple(members), tuple(coeffs[i] * scale for i in members)
        piv = min(red.coeffs)
        k = red.coeffs[piv]
        red = red.scale(1 / k)
        combo = {i: x / k for i, x in combo.items()}
        rows.append(red)
        combos.append(combo)
    return None


def load_inner_product(path: str) -> InnerProduct:
    """Read an inner-product config file: {"gram": [["p/q", ...], ...]}."""
    import json

    with open(path) as fh:
        data = json.load(fh)
    gram = data.get("gram")
    return InnerProduct(gram)
