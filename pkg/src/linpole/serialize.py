"""JSON forms for the CLI; rationals are serialized as "p/q" strings."""

from __future__ import annotations

from fractions import Fraction

from .exactlin import LinearForm, Subspace
from .germs import Decomposition, PolarTerm, RationalGerm, SimplexFraction
from .poly import Polynomial


def rational_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s)


def form_to_json(f: LinearForm) -> dict:
    return {str(v): rational_str(c) for v, c in f.coeffs.items()}


def form_from_json(d: dict) -> LinearForm:
    return LinearForm({int(v): Fraction(c) for v, c in d.items()})


def poly_to_json(p: Polynomial) -> list:
    return [{"exps": {str(v): e for v, e in mono}, "coeff": rational_str(c)}
            for mono, c in p.terms]


def poly_from_json(data: list) -> Polynomial:
    return Polynomial({tuple(sorted((int(v), e) for v, e in t["exps"].items())):
                       Fraction(t["coeff"]) for t in data})


def germ_to_json(g: RationalGerm) -> dict:
    return {"num": poly_to_json(g.numerator),
            "den": [{"form": form_to_json(f), "exp": e} for f, e in g.denominator]}


def germ_from_json(d: dict) -> RationalGerm:
    return RationalGerm(poly_from_json(d["num"]),
                        [(form_from_json(t["form"]), t["exp"]) for t in d["den"]])


def decomposition_to_json(d: Decomposition) -> dict:
    return {"terms": [{"num": poly_to_json(t.numerator),
                       "den": [{"form": form_to_json(f), "exp": e}
                               for f, e in t.simplex.entries]}
                      for t in d.terms],
            "holo": poly_to_json(d.holomorphic)}


def decomposition_from_json(data: dict) -> Decomposition:
    terms = [PolarTerm(poly_from_json(t["num"]),
                       SimplexFraction([(form_from_json(e["form"]), e["exp"])
                                        for e in t["den"]]))
             for t in data["terms"]]
    return Decomposition(terms, poly_from_json(data["holo"]))


def subspace_to_json(s: Subspace) -> dict:
    return {"dim": s.dim, "basis": [form_to_json(f) for f in s.basis]}


def eval_result_json(value, error_bound, evaluator: str) -> dict:
    if isinstance(value, Fraction) and error_bound == 0:
        val = rational_str(value)
    else:
        val = f"{float(value):.15g}"
    return {"value": val,
            "error_bound": f"{float(error_bound):.3g}",
            "evaluator": evaluator}
