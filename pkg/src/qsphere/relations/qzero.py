"""The relations at q=0 and their comparison with the odd-sphere presentation."""
from __future__ import annotations

from fractions import Fraction

import sympy

from .ncpoly import Coef, Letter, NCPoly, Relation
from .presentation import PresentationParams, build_presentation, family_residuals

__all__ = ["q_zero_presentation", "sphere_presentation", "normal_form",
           "normalized_set", "compare_q0", "Q0Record"]

_q = sympy.Symbol("q")


def normal_form(poly: NCPoly):
    """Collected terms sorted by word with a positive leading coefficient."""
    acc: dict = {}
    for c, w in poly.terms:
        if c.omq or c.eps or c.qconst or c.qrho:
            raise ValueError("normal form needs constant coefficients")
        acc[w] = acc.get(w, Fraction(0)) + c.const
    terms = sorted(((w, v) for w, v in acc.items() if v), key=lambda t: (len(t[0]), t[0]))
    if terms and terms[0][1] < 0:
        terms = [(w, -v) for w, v in terms]
    return tuple(terms)


def _poly_from_normal(nf) -> NCPoly:
    return NCPoly([(Coef(Fraction(v)), w) for w, v in nf])


def _limit_poly(poly: NCPoly, params: PresentationParams) -> NCPoly:
    rho, eps = params.rho_map, params.eps_map
    acc: dict = {}
    for c, w in poly.terms:
        v = c.limit0(rho, eps)
        if v is None:
            raise ArithmeticError("coefficient diverges at q=0")
        if v:
            acc[w] = acc.get(w, Fraction(0)) + v
    return NCPoly([(Coef(v), w) for w, v in acc.items() if v])


def _sym(c: Coef):
    return sympy.Rational(c.const.numerator, c.const.denominator) * (1 - _q ** 2) ** c.omq * _q ** c.qconst


def _c2_zero(n: int) -> list[Relation]:
    """Descend from i=2n, rewriting z_k z_k' (k > i) by the already resolved forms."""
    size = 2 * n
    resolved: dict = {}
    out = []
    for i in range(size, n, -1):
        ip = size + 1 - i
        expr = {(Letter(ip), Letter(i)): _q ** 2}
        for k in range(i + 1, size + 1):
            for w, c in resolved[k].items():
                expr[w] = expr.get(w, 0) - (1 - _q ** 2) * _q ** (i - k) * c
        expr = {w: sympy.expand(c) for w, c in expr.items()}
        resolved[i] = expr
        poly = NCPoly.monomial(Letter(i), Letter(ip))
        for w, c in expr.items():
            lim = sympy.limit(c, _q, 0)
            if not lim.is_finite:
                raise ArithmeticError(f"c2 at i={i} diverges at q=0")
            if lim != 0:
                poly = poly - NCPoly([(Coef(Fraction(int(lim.p), int(lim.q))), w)])
        out.append(Relation("c2", (("i", i),), poly))
    return out[::-1]


def q_zero_presentation(n: int, params: PresentationParams | None = None) -> list[Relation]:
    """The q=0 relation system, one normalized relation per index tuple."""
    params = params or PresentationParams.standard(n)
    out = []
    for rel in build_presentation(params):
        if rel.family == "c2":
            continue
        out.append(Relation(rel.family, rel.index, _limit_poly(rel.poly, params)))
    out.extend(_c2_zero(n))
    order = {f: r for r, f in enumerate(("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"))}
    out.sort(key=lambda r: (order[r.family], r.index))
    return [Relation(r.family, r.index, _poly_from_normal(normal_form(r.poly))) for r in out]


def sphere_presentation(ell: int) -> list[Relation]:
    """Relations of the odd sphere of dimension 2*ell+1 at q=0 in letters z_1..z_{ell+1}."""
    size = ell + 1
    z = Letter
    rels = []
    for i in range(1, size + 1):
        for j in range(1, i):
            rels.append(Relation("s1", (("i", i), ("j", j)), NCPoly.monomial(z(i), z(j))))
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            if i != j:
                rels.append(Relation("s2", (("i", i), ("j", j)),
                                     NCPoly.monomial(z(i, True), z(j))))
    for i in range(1, size + 1):
        rhs = NCPoly.monomial(z(i), z(i, True))
        for k in range(i + 1, size + 1):
            rhs = rhs + NCPoly.monomial(z(k), z(k, True))
        rels.append(Relation("s3", (("i", i),), NCPoly.monomial(z(i, True), z(i)), rhs))
    total = NCPoly()
    for i in range(1, size + 1):
        total = total + NCPoly.monomial(z(i), z(i, True))
    rels.append(Relation("s4", (), total, NCPoly.const(1)))
    return rels


def normalized_set(rels) -> frozenset:
    return frozenset(nf for nf in (normal_form(r.poly) for r in rels) if nf)


class Q0Record(dict):
    """One check of compare_q0: id, value, pass and a detail string."""


def _record(check: str, value, passed: bool, detail: str = "") -> Q0Record:
    return Q0Record(id=check, value=value, passed=bool(passed), detail=detail)


def compare_q0(n: int, D: int, band: int = 2, ell: int | None = None) -> list[Q0Record]:
    """Compare the q=0 relations and images with the odd sphere of dimension 4n-1.

    ``ell`` overrides the sphere parameter (default 2n-1); a wrong value
    serves as a negative control.
    """
    from ..fock import materialize
    from ..reps import eta, eta_space
    from ..spheres import (q0_intertwiner, q0_literal_deviation, sphere_generators,
                           sphere_space)

    ell = 2 * n - 1 if ell is None else ell
    rels = q_zero_presentation(n)
    recs = []
    ours, theirs = normalized_set(rels), normalized_set(sphere_presentation(ell))
    missing = sorted(_poly_from_normal(x).text() for x in theirs - ours)
    extra = sorted(_poly_from_normal(x).text() for x in ours - theirs)
    recs.append(_record("relation-sets", len(ours ^ theirs), ours == theirs,
                        "; ".join([f"missing: {m}" for m in missing[:3]]
                                  + [f"extra: {e}" for e in extra[:3]])))
    gens = sphere_generators(ell)
    space = sphere_space(ell, D)
    imgs = {i + 1: materialize(g, space, 0.0) for i, g in enumerate(gens)}
    try:
        res = family_residuals(rels, imgs, band, 0.0)
        worst = max(res, key=res.get)
        recs.append(_record("annihilates-sphere", res[worst], res[worst] == 0.0, worst))
    except KeyError as exc:
        recs.append(_record("annihilates-sphere", None, False, f"missing generator {exc}"))
    if ell == 2 * n - 1:
        a_space = eta_space(2 * n, D)
        a_imgs = {i + 1: materialize(y, a_space, 0.0) for i, y in enumerate(eta(2 * n, n))}
        res = family_residuals(rels, a_imgs, band, 0.0)
        worst = max(res, key=res.get)
        recs.append(_record("annihilates-images", res[worst], res[worst] == 0.0, worst))
        dev = q0_literal_deviation(n, D)
        recs.append(_record("images-equal-generators", dev, dev == 0.0,
                            "entrywise after factor reversal"))
        w = q0_intertwiner(n, D, band=band)
        recs.append(_record("signed-permutation-intertwiner", w.max_deviation, w.passed,
                            f"mapped {w.mapped} of {w.interior} interior basis vectors"))
    return recs
