"""Ordered fractions under a letter-to-linear-form assignment.

An L-map sends alphabet letters to linear forms; a fraction spec
f[s1,...,sk; u1,...,uk] denotes the ordered fraction

    1 / ((L_{u1}+...+L_{uk})^{s1} (L_{u2}+...+L_{uk})^{s2} ... L_{uk}^{sk}),

the i-th factor being the cumulative sum from letter i to the end.  The word
map Phi sends x0^{s1-1}x_{u1}...x0^{sk-1}x_{uk} to f[s;u], block by block, and
with this alignment it is an algebra homomorphism from the shuffle product to
the germ product (the aligned-from-the-front reading fails multiplicativity
already on 1/z1 * 1/z2^2).  On locality words Phi is injective, which is what
the Lyndon decomposition exploits.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Optional, Sequence

from .errors import (NotLocal, NotLocalSpec, WordEndsInX0, ZeroCumulativeForm)
from .exactlin import DEFAULT_Q, InnerProduct, LinearForm, inner, zset, zvar
from .germs import (RationalGerm, germ_mul, germ_scale, germ_sum,
                    is_local_pair)

from .words import (Alphabet, EMPTY_WORD, Word, WordPolynomial, X0,
                    integer_alphabet, lyndon_rewrite, shuffle,
                    subset_alphabet, word_str)


class LMap:
    """Alphabet plus assignment letter -> linear form.

    When `check_locality_on` letters are supplied, the locality-map property
    (u local v implies the assigned forms are q-orthogonal) is verified at
    construction.
    """

    def __init__(self, alphabet: Alphabet, assign: Callable[[object], LinearForm],
                 name: str, q: InnerProduct = DEFAULT_Q,
                 check_locality_on: Optional[Sequence] = None):
        self.alphabet = alphabet
        self.assign = assign
        self.name = name
        self.q = q
        if check_locality_on is not None:
            letters = list(check_locality_on)
            for i, u in enumerate(letters):
                for v in letters[i + 1:]:
                    if alphabet.local_letters(u, v) and inner(q, assign(u), assign(v)) != 0:
                        raise ValueError(
                            f"not a locality map: {u!r} local {v!r} but forms not orthogonal")

    def form(self, letter) -> LinearForm:
        f = self.assign(letter)
        if not isinstance(f, LinearForm):
            raise TypeError("assignment must produce a LinearForm")
        return f

    def __repr__(self):
        return f"LMap({self.name})"


def chen_lmap() -> LMap:
    """Integer letters u -> z_u with distinctness locality."""
    return LMap(integer_alphabet(), lambda u: zvar(u), "chen")


def weak_chen_lmap() -> LMap:
    """Same assignment as the Chen map; specs may repeat letters (and are then
    outside the locality family, so only the plain homomorphism applies)."""
    return LMap(integer_alphabet(), lambda u: zvar(u), "weak-chen")


def speer_lmap() -> LMap:
    """Finite-set letters I -> z_I with disjointness locality."""
    return LMap(subset_alphabet(), lambda s: zset(s), "speer")


def _canon_letter(letter):
    if isinstance(letter, (set, frozenset, tuple, list)) and not isinstance(letter, str):
        return frozenset(int(i) for i in letter)
    return letter


class FractionSpec:
    """Exponent vector + letter vector under an L-map."""

    __slots__ = ("exponents", "letters", "lmap", "_hash")

    def __init__(self, exponents: Iterable[int], letters: Iterable, lmap: LMap):
        exps = tuple(int(s) for s in exponents)
        lets = tuple(_canon_letter(u) for u in letters)
        if len(exps) != len(lets):
            raise ValueError("exponent and letter vectors must have equal length")
        if any(s < 1 for s in exps):
            raise ValueError("exponents must be positive integers")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "letters", lets)
        object.__setattr__(self, "lmap", lmap)
        object.__setattr__(self, "_hash", hash((exps, lets, lmap.name)))

    def __setattr__(self, *a):
        raise AttributeError("FractionSpec is immutable")

    def __eq__(self, other):
        return (isinstance(other, FractionSpec) and self.exponents == other.exponents
                and self.letters == other.letters and self.lmap.name == other.lmap.name)

    def __hash__(self):
        return self._hash

    @property
    def depth(self) -> int:
        return len(self.exponents)

    @property
    def weight(self) -> int:
        return sum(self.exponents)

    def is_local(self) -> bool:
        n = len(self.letters)
        return all(self.lmap.alphabet.local_letters(self.letters[i], self.letters[j])
                   for i in range(n) for j in range(i + 1, n))

    def word(self) -> Word:
        w: list = []
        for s, u in zip(self.exponents, self.letters):
            w.extend([X0] * (s - 1))
            w.append(u)
        return tuple(w)

    def germ(self) -> RationalGerm:
        return RationalGerm(1, self.denominator_entries())

    def denominator_entries(self) -> list:
        dens = []
        acc = LinearForm()
        for s, u in zip(reversed(self.exponents), reversed(self.letters)):
            acc = acc + self.lmap.form(u)
            if not acc:
                raise ZeroCumulativeForm(f"cumulative form vanished at letter {u!r}")
            dens.append((acc, s))
        return dens

    def evaluate(self, point) -> Fraction:
        """Exact value at a rational point off the pole locus."""
        val = Fraction(1)
        for form, e in self.denominator_entries():
            d = form.evaluate(point)
            if d == 0:
                raise ZeroDivisionError(f"point lies on the pole {form!r}")
            val /= d ** e
        return val

    def variables(self) -> tuple[int, ...]:
        vs: set[int] = set()
        for u in self.letters:
            vs.update(self.lmap.form(u).support())
        return tuple(sorted(vs))

    def sort_key(self):
        return (self.lmap.alphabet.word_key(self.word()),)

    def __repr__(self):
        def letter(u):
            if isinstance(u, frozenset):
                return "{" + ",".join(map(str, sorted(u))) + "}"
            return str(u)
        return (f"f[{','.join(map(str, self.exponents))};"
                f"{','.join(letter(u) for u in self.letters)}]")


def phi(w: Word, lmap: LMap) -> RationalGerm:
    """The word-to-fraction map on W1 (words not ending in x0)."""
    spec = spec_of_word(w, lmap)
    return spec.germ()


def spec_of_word(w: Word, lmap: LMap) -> FractionSpec:
    if not w:
        return FractionSpec((), (), lmap)
    if w[-1] is X0:
        raise WordEndsInX0(f"{word_str(w)} ends in x0")
    exps: list[int] = []
    letters: list = []
    run = 0
    for a in w:
        if a is X0:
            run += 1
        else:
            exps.append(run + 1)
            letters.append(a)
            run = 0
    return FractionSpec(exps, letters, lmap)


def word_of_fraction(spec: FractionSpec) -> Word:
    """Inverse of phi on the locality family."""
    if not spec.is_local():
        raise NotLocalSpec(f"{spec!r} has non-local letters")
    return spec.word()


Combination = list[tuple[FractionSpec, Fraction]]


def expand_product(a: FractionSpec, b: FractionSpec) -> Combination:
    """Product of two local ordered fractions as a combination of ordered
    fractions: shuffle the words and map back through phi."""
    if a.lmap.name != b.lmap.name:
        raise ValueError("specs use different L-maps")
    ga, gb = a.germ(), b.germ()
    if not is_local_pair(ga, gb, a.lmap.q):
        raise NotLocal(f"{a!r} and {b!r} are not q-orthogonal")
    out: Combination = []
    for w, c in shuffle(a.word(), b.word()).items():
        out.append((spec_of_word(w, a.lmap), c))
    return out


def combination_germ(combo: Combination) -> RationalGerm:
    return germ_sum([germ_scale(s.germ(), c) for s, c in combo])


SpecMonomial = tuple  # tuple of FractionSpec, canonically sorted


def _monomial_of_words(words: Sequence[Word], lmap: LMap) -> SpecMonomial:
    specs = [spec_of_word(w, lmap) for w in words]
    specs.sort(key=FractionSpec.sort_key)
    return tuple(specs)


def lyndon_decompose(combo: Combination) -> dict[SpecMonomial, Fraction]:
    """Rewrite a combination of locality fractions as a commutative polynomial
    in the Lyndon-word fractions (the locality polynomial generators)."""
    out: dict[SpecMonomial, Fraction] = {}
    for spec, coeff in combo:
        if not spec.is_local():
            raise NotLocalSpec(f"{spec!r} has non-local letters")
        w = spec.word()
        if not w:
            m: SpecMonomial = ()
            out[m] = out.get(m, Fraction(0)) + coeff
            continue
        for mono, c in lyndon_rewrite(w, spec.lmap.alphabet).items():
            key = _monomial_of_words(mono, spec.lmap)
            out[key] = out.get(key, Fraction(0)) + coeff * c
    return {m: c for m, c in out.items() if c}


def monomial_germ(mono: SpecMonomial) -> RationalGerm:
    g = RationalGerm(1)
    for s in mono:
        g = germ_mul(g, s.germ())
    return g


def spec_poly_germ(poly: dict[SpecMonomial, Fraction]) -> RationalGerm:
    return germ_sum([germ_scale(monomial_germ(m), c) for m, c in poly.items()])


class ForestNode:
    """Node of a nested-set forest: an index set, an exponent, children with
    pairwise-disjoint subsets of this set."""

    __slots__ = ("index_set", "exponent", "children")

    def __init__(self, index_set: Iterable[int], children: Sequence["ForestNode"] = (),
                 exponent: int = 1):
        s = frozenset(int(i) for i in index_set)
        if not s:
            raise ValueError("node index set must be nonempty")
        if exponent < 1:
            raise ValueError("node exponent must be positive")
        kids = tuple(children)
        for k in kids:
            if not k.index_set <= s:
                raise ValueError("child set must be contained in the parent set")
        _check_disjoint([k.index_set for k in kids])
        object.__setattr__(self, "index_set", s)
        object.__setattr__(self, "exponent", int(exponent))
        object.__setattr__(self, "children", kids)

    def __setattr__(self, *a):
        raise AttributeError("ForestNode is immutable")

    def nodes(self):
        yield self
        for k in self.children:
            yield from k.nodes()

    def __repr__(self):
        inner_part = f", children={list(self.children)!r}" if self.children else ""
        exp = f", exp={self.exponent}" if self.exponent != 1 else ""
        return f"Node({set(self.index_set)}{exp}{inner_part})"


def _check_disjoint(sets: Sequence[frozenset]):
    seen: set[int] = set()
    for s in sets:
        if seen & s:
            raise ValueError("sibling sets must be pairwise disjoint")
        seen |= s


class Forest:
    """A tuple of root nodes with pairwise-disjoint index sets."""

    __slots__ = ("roots",)

    def __init__(self, roots: Sequence[ForestNode]):
        roots = tuple(roots)
        _check_disjoint([r.index_set for r in roots])
        object.__setattr__(self, "roots", roots)

    def __setattr__(self, *a):
        raise AttributeError("Forest is immutable")

    def nodes(self):
        for r in self.roots:
            yield from r.nodes()

    @staticmethod
    def from_json(data) -> "Forest":
        def node(d) -> ForestNode:
            return ForestNode(d["set"], [node(c) for c in d.get("children", [])],
                              d.get("exp", 1))
        return Forest([node(d) for d in data["nodes"]])

    def to_json(self) -> dict:
        def node(n: ForestNode, next_id: list[int]) -> dict:
            nid = next_id[0]
            next_id[0] += 1
            return {"id": nid, "set": sorted(n.index_set), "exp": n.exponent,
                    "children": [node(c, next_id) for c in n.children]}
        counter = [1]
        return {"nodes": [node(r, counter) for r in self.roots]}

    def __repr__(self):
        return f"Forest({list(self.roots)!r})"


def forest_fraction(f: Forest) -> RationalGerm:
    """Product over all nodes of 1/z_{I(node)}^{exp}."""
    dens = [(zset(n.index_set), n.exponent) for n in f.nodes()]
    return RationalGerm(1, dens)


def _tree_words(node: ForestNode, lmap: LMap) -> WordPolynomial:
    below = _forest_words(node.children, lmap)
    acc: dict[Word, Fraction] = {}
    for w, c in below.items():
        covered: frozenset = frozenset().union(*[set(a) for a in w if a is not X0]) \
            if w else frozenset()
        fresh = node.index_set - covered
        # the root factor is the largest cumulative sum, i.e. the first block
        if fresh:
            new = (X0,) * (node.exponent - 1) + (frozenset(fresh),) + w
        else:
            # root adds no new indices: raise the first block's exponent
            new = (X0,) * node.exponent + w
        acc[new] = acc.get(new, Fraction(0)) + c
    return WordPolynomial(acc)


def _forest_words(nodes: Sequence[ForestNode], lmap: LMap) -> WordPolynomial:
    out = WordPolynomial({EMPTY_WORD: 1})
    for n in nodes:
        out = out.shuffle_with(_tree_words(n, lmap))
    return out


def flatten_forest(f: Forest, lmap: Optional[LMap] = None) -> Combination:
    """Write the forest fraction as a rational combination of set-indexed
    ordered fractions: flatten subtrees to ladder words, shuffle-merge the
    disjoint siblings, then fold in each root factor."""
    lmap = lmap or speer_lmap()
    words = _forest_words(f.roots, lmap)
    return [(spec_of_word(w, lmap), c) for w, c in words.items()]
