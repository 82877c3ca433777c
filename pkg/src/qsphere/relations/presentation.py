"""The defining relations of the quantum quaternion sphere."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.sparse as sp

from ..fock import interior_mask, op_norm
from .ncpoly import Coef, Letter, NCPoly, Relation

__all__ = ["PresentationParams", "build_presentation", "eval_residual",
           "family_residuals", "FAMILIES", "RHO_EPS_FREE"]

FAMILIES = ("c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8")
# families whose coefficients do not involve rho or eps
RHO_EPS_FREE = ("c1", "c2", "c3", "c4", "c6", "c8")


@dataclass(frozen=True)
class PresentationParams:
    """Rank n with the integer table rho_i and the signs eps_i (1-based)."""

    n: int
    rho: tuple
    eps: tuple

    def __post_init__(self):
        if len(self.rho) != 2 * self.n or len(self.eps) != 2 * self.n:
            raise ValueError("rho and eps need 2n entries")
        if any(e not in (1, -1) for e in self.eps):
            raise ValueError("eps entries must be +1 or -1")

    def prime(self, i: int) -> int:
        return 2 * self.n + 1 - i

    @property
    def rho_map(self) -> dict:
        return {i + 1: r for i, r in enumerate(self.rho)}

    @property
    def eps_map(self) -> dict:
        return {i + 1: e for i, e in enumerate(self.eps)}

    @classmethod
    def standard(cls, n: int) -> "PresentationParams":
        """rho = (n, ..., 1, -1, ..., -n), eps = (+1 x n, -1 x n)."""
        return cls(n, tuple(range(n, 0, -1)) + tuple(range(-1, -n - 1, -1)),
                   (1,) * n + (-1,) * n)


def _z(i, star=False):
    return Letter(i, star)


OMQ = Coef(omq=1)


def build_presentation(params: PresentationParams, families=FAMILIES) -> list[Relation]:
    n = params.n
    size = 2 * n
    pr = params.prime
    rels: list[Relation] = []
    if "c1" in families:
        for i in range(1, size + 1):
            for j in range(1, i):
                if i + j != size + 1:
                    rels.append(Relation("c1", (("i", i), ("j", j)),
                                         NCPoly.monomial(_z(i), _z(j)),
                                         NCPoly.monomial(_z(j), _z(i), coef=Coef(qconst=1))))
    if "c2" in families:
        for i in range(n + 1, size + 1):
            rhs = NCPoly.monomial(_z(pr(i)), _z(i), coef=Coef(qconst=2))
            for k in range(i + 1, size + 1):
                rhs = rhs - NCPoly.monomial(_z(k), _z(pr(k)), coef=Coef(omq=1, qconst=i - k))
            rels.append(Relation("c2", (("i", i),), NCPoly.monomial(_z(i), _z(pr(i))), rhs))
    if "c3" in families:
        for i in range(1, size + 1):
            rels.append(Relation("c3", (("i", i),),
                                 NCPoly.monomial(_z(i, True), _z(pr(i))),
                                 NCPoly.monomial(_z(pr(i)), _z(i, True), coef=Coef(qconst=2))))
    if "c4" in families:
        for i in range(1, size + 1):
            for j in range(1, size + 1):
                if i != j and i + j > size + 1:
                    rels.append(Relation("c4", (("i", i), ("j", j)),
                                         NCPoly.monomial(_z(i, True), _z(j)),
                                         NCPoly.monomial(_z(j), _z(i, True), coef=Coef(qconst=1))))
    if "c5" in families:
        for i in range(1, size + 1):
            for j in range(1, size + 1):
                if i != j and i + j < size + 1:
                    extra = Coef(omq=1, eps=tuple(sorted((i, j))),
                                 qrho=tuple(sorted(((i, 1), (j, 1)))))
                    rhs = (NCPoly.monomial(_z(j), _z(i, True), coef=Coef(qconst=1))
                           + NCPoly.monomial(_z(pr(i)), _z(pr(j), True), coef=extra))
                    rels.append(Relation("c5", (("i", i), ("j", j)),
                                         NCPoly.monomial(_z(i, True), _z(j)), rhs))
    if "c6" in families:
        for i in range(n + 1, size + 1):
            rhs = NCPoly.monomial(_z(i), _z(i, True))
            for k in range(i + 1, size + 1):
                rhs = rhs + NCPoly.monomial(_z(k), _z(k, True), coef=OMQ)
            rels.append(Relation("c6", (("i", i),), NCPoly.monomial(_z(i, True), _z(i)), rhs))
    if "c7" in families:
        for i in range(1, n + 1):
            rhs = NCPoly.monomial(_z(i), _z(i, True))
            rhs = rhs + NCPoly.monomial(_z(pr(i)), _z(pr(i), True),
                                        coef=Coef(omq=1, qrho=((i, 2),)))
            for k in range(i + 1, size + 1):
                rhs = rhs + NCPoly.monomial(_z(k), _z(k, True), coef=OMQ)
            rels.append(Relation("c7", (("i", i),), NCPoly.monomial(_z(i, True), _z(i)), rhs))
    if "c8" in families:
        lhs = NCPoly()
        for i in range(1, size + 1):
            lhs = lhs + NCPoly.monomial(_z(i), _z(i, True))
        rels.append(Relation("c8", (), lhs, NCPoly.const(Fraction(1))))
    return rels


class _InteriorProducts:
    """Interior blocks of letter products, computed from row and column slices."""

    def __init__(self, images, band: int):
        some = next(iter(images.values()))
        self.images = images
        self.idx = np.flatnonzero(interior_mask(some.space, band))
        self.full: dict = {}
        self.rows: dict = {}
        self.cols: dict = {}
        self.words: dict = {}

    def _full(self, letter):
        if letter not in self.full:
            if letter.index not in self.images:
                raise KeyError(f"missing image for z{letter.index}")
            m = self.images[letter.index].mat
            self.full[letter] = m.conj().T.tocsr() if letter.star else m
        return self.full[letter]

    def _rows(self, letter):
        if letter not in self.rows:
            self.rows[letter] = self._full(letter)[self.idx]
        return self.rows[letter]

    def _cols(self, letter):
        if letter not in self.cols:
            self.cols[letter] = self._full(letter).tocsc()[:, self.idx].tocsr()
        return self.cols[letter]

    def product(self, word):
        if word not in self.words:
            if not word:
                m = sp.identity(len(self.idx), dtype=complex, format="csr")
            elif len(word) == 1:
                m = self._rows(word[0])[:, self.idx]
            else:
                m = self._rows(word[0])
                for letter in word[1:-1]:
                    m = m @ self._full(letter)
                m = m @ self._cols(word[-1])
            self.words[word] = m.tocsr()
        return self.words[word]


def eval_residual(rel: Relation, images, band: int, q: float,
                  params: PresentationParams | None = None, cache=None) -> float:
    """Interior norm of ``lhs - rhs`` with z_l replaced by ``images[l]``.

    ``cache`` may be shared between calls with the same images and band.
    """
    if cache is None or cache.get("band") != band:
        cache = {} if cache is None else cache
        cache.clear()
        cache["band"] = band
        cache["products"] = _InteriorProducts(images, band)
    products = cache["products"]
    rho = params.rho_map if params else None
    eps = params.eps_map if params else None
    total = None
    for c, w in rel.poly.terms:
        v = c.value(q, rho, eps)
        if v == 0.0:
            continue
        m = products.product(w) * v
        total = m if total is None else total + m
    if total is None:
        return 0.0
    total = total.tocsr()
    total.data[np.abs(total.data) < 1e-15] = 0
    total.eliminate_zeros()
    return op_norm(total)


def family_residuals(rels, images, band: int, q: float, params=None):
    """Per-relation residuals as ``{label: value}`` sharing one product cache."""
    cache: dict = {}
    return {rel.label: eval_residual(rel, images, band, q, params, cache) for rel in rels}
