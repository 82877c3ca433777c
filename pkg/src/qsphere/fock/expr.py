"""Symbolic operator expressions on tensor products of sequence spaces.

An expression is a finite sum of terms.  Each term carries a complex number,
an optional scalar factor ``q^k (1-q^2)^b`` and one primitive word per
tensor factor.  Composition concatenates words without rewriting them, so the
materialized matrix of a product is the product of the materialized matrices
even at the truncation boundary; :meth:`OperatorExpr.normalized` produces the
canonical form used for symbol-level comparisons.
"""
from __future__ import annotations

import itertools
import re
from types import MappingProxyType

from .primitives import (CoShift, Diag, Ge, Id, Proj, QPow, Shift, Sq1m,
                         word_adjoint)
from .words import normalize_word

__all__ = ["OperatorExpr", "tensor", "single", "word_text", "parse_word"]

PRUNE = 1e-15


def _fmt_complex(c: complex) -> str:
    c = complex(c)
    if c.imag == 0.0:
        r = c.real
        if r == int(r) and abs(r) < 1e15:
            return str(int(r))
        return repr(r)
    return repr(c)


def word_text(word: tuple) -> str:
    return ".".join(p.text() for p in word) if word else "1"


_EXP = re.compile(r"^(?:(-?\d*)N)?([+-]?\d+)?$")


def _parse_exp(s: str) -> tuple[int, int]:
    m = _EXP.match(s)
    if not m or s == "":
        raise ValueError(f"bad exponent {s!r}")
    a, b = m.groups()
    if "N" in s:
        alpha = 1 if a in ("", None) else (-1 if a == "-" else int(a))
    else:
        alpha = 0
    return alpha, int(b) if b else 0


def _parse_prim(tok: str):
    if tok == "S":
        return Shift()
    if tok == "S*":
        return CoShift()
    if tok == "1":
        return Id()
    if tok == "p":
        return Proj(0)
    if tok.startswith("p_"):
        return Proj(int(tok[2:]))
    if tok.startswith("q^{") and tok.endswith("}"):
        return Diag(QPow(*_parse_exp(tok[3:-1])))
    if tok.startswith("sqrt(1-q^{") and tok.endswith("})"):
        return Diag(Sq1m(*_parse_exp(tok[10:-2])))
    if tok.startswith("[N>=") and tok.endswith("]"):
        return Diag(Ge(int(tok[4:-1])))
    raise ValueError(f"unknown primitive {tok!r}")


def parse_word(text: str) -> tuple:
    return tuple(p for p in (_parse_prim(t) for t in text.split(".")) if not isinstance(p, Id))


class OperatorExpr:
    """Immutable formal sum of coefficient times elementary tensor.

    Terms are keyed by ``(words, qexp, omq)`` where ``words`` holds one
    primitive word per factor and the scalar factor is
    ``q**qexp * (1-q**2)**omq``.
    """

    __slots__ = ("kinds", "_terms")

    def __init__(self, kinds, terms=None):
        self.kinds = tuple(kinds)
        clean = {}
        for key, c in (terms or {}).items():
            words, qexp, omq = key
            if len(words) != len(self.kinds):
                raise ValueError("term factor count does not match the expression")
            if c != 0:
                clean[key] = complex(c)
        self._terms = MappingProxyType(clean)

    # construction
    @classmethod
    def zero(cls, kinds=()) -> "OperatorExpr":
        return cls(kinds)

    @classmethod
    def identity(cls, kinds=()) -> "OperatorExpr":
        return cls(kinds, {(((),) * len(tuple(kinds)), 0, 0): 1})

    @classmethod
    def scalar(cls, c: complex, kinds=(), qexp: int = 0, omq: int = 0) -> "OperatorExpr":
        return cls(kinds, {(((),) * len(tuple(kinds)), qexp, omq): c})

    @classmethod
    def word(cls, word, kind: str = "N") -> "OperatorExpr":
        if not isinstance(word, tuple):
            word = (word,)
        return cls((kind,), {((tuple(p for p in word if not isinstance(p, Id)),), 0, 0): 1})

    # inspection
    @property
    def terms(self):
        return self._terms

    @property
    def nfactors(self) -> int:
        return len(self.kinds)

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self):
        return len(self._terms)

    def __repr__(self):
        return f"OperatorExpr({self.text()!r})"

    # algebra
    def _check(self, other: "OperatorExpr"):
        if self.kinds != other.kinds:
            raise ValueError(f"shape mismatch: {self.kinds} vs {other.kinds}")

    def __add__(self, other):
        if not isinstance(other, OperatorExpr):
            other = OperatorExpr.scalar(other, self.kinds)
        self._check(other)
        acc = dict(self._terms)
        for k, c in other._terms.items():
            acc[k] = acc.get(k, 0) + c
        return OperatorExpr(self.kinds, acc)

    __radd__ = __add__

    def __neg__(self):
        return OperatorExpr(self.kinds, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        if not isinstance(other, OperatorExpr):
            other = OperatorExpr.scalar(other, self.kinds)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, c):
        if isinstance(c, OperatorExpr):
            return self @ c
        return OperatorExpr(self.kinds, {k: c * v for k, v in self._terms.items()})

    def __rmul__(self, c):
        return self * c

    def __matmul__(self, other: "OperatorExpr") -> "OperatorExpr":
        self._check(other)
        acc = {}
        for (w1, a1, b1), c1 in self._terms.items():
            for (w2, a2, b2), c2 in other._terms.items():
                key = (tuple(x + y for x, y in zip(w1, w2)), a1 + a2, b1 + b2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return OperatorExpr(self.kinds, acc)

    def tensor(self, other: "OperatorExpr") -> "OperatorExpr":
        acc = {}
        for (w1, a1, b1), c1 in self._terms.items():
            for (w2, a2, b2), c2 in other._terms.items():
                key = (w1 + w2, a1 + a2, b1 + b2)
                acc[key] = acc.get(key, 0) + c1 * c2
        return OperatorExpr(self.kinds + other.kinds, acc)

    def adjoint(self) -> "OperatorExpr":
        acc = {}
        for (words, a, b), c in self._terms.items():
            key = (tuple(word_adjoint(w) for w in words), a, b)
            acc[key] = acc.get(key, 0) + complex(c).conjugate()
        return OperatorExpr(self.kinds, acc)

    @property
    def H(self) -> "OperatorExpr":
        return self.adjoint()

    def power(self, m: int) -> "OperatorExpr":
        out = OperatorExpr.identity(self.kinds)
        for _ in range(m):
            out = out @ self
        return out

    def permute(self, order) -> "OperatorExpr":
        """Reorder tensor factors: factor ``i`` of the result is ``order[i]``."""
        order = tuple(order)
        acc = {}
        for (words, a, b), c in self._terms.items():
            acc[(tuple(words[i] for i in order), a, b)] = c
        return OperatorExpr(tuple(self.kinds[i] for i in order), acc)

    def reversed(self) -> "OperatorExpr":
        return self.permute(range(self.nfactors - 1, -1, -1))

    # canonical form
    def normalized(self) -> "OperatorExpr":
        acc = {}
        for (words, a, b), c in self._terms.items():
            parts = [normalize_word(w, k) for w, k in zip(words, self.kinds)]
            for combo in itertools.product(*parts):
                coef = c
                for ci, _ in combo:
                    coef = coef * ci
                key = (tuple(w for _, w in combo), a, b)
                acc[key] = acc.get(key, 0) + coef
        return OperatorExpr(self.kinds, {k: v for k, v in acc.items() if abs(v) > PRUNE})

    def equals(self, other: "OperatorExpr", tol: float = 0.0) -> bool:
        """Symbol-level equality of the normalized forms."""
        if self.kinds != other.kinds:
            return False
        diff = (self - other).normalized()
        return all(abs(c) <= tol for c in diff._terms.values())

    # text
    def _term_text(self, key, c) -> str:
        words, a, b = key
        toks = []
        if c != 1:
            toks.append(_fmt_complex(c))
        if a:
            toks.append(f"q^{a}")
        if b:
            toks.append(f"(1-q^2)^{b}")
        for f, w in enumerate(words):
            if w:
                toks.append(f"{word_text(w)}@{f + 1}")
        return " * ".join(toks) if toks else "1"

    def text(self) -> str:
        """Canonical text of the normalized expression."""
        norm = self.normalized()
        parts = sorted(norm._term_text(k, c) for k, c in norm._terms.items())
        return " + ".join(parts) if parts else "0"

    def raw_text(self) -> str:
        parts = [self._term_text(k, c) for k, c in self._terms.items()]
        return " + ".join(parts) if parts else "0"

    @classmethod
    def from_text(cls, text: str, kinds) -> "OperatorExpr":
        kinds = tuple(kinds)
        acc = {}
        text = text.strip()
        if text == "0":
            return cls(kinds)
        for term in text.split(" + "):
            c, a, b = 1 + 0j, 0, 0
            words = [()] * len(kinds)
            for tok in term.split(" * "):
                tok = tok.strip()
                if "@" in tok:
                    w, f = tok.rsplit("@", 1)
                    f = int(f) - 1
                    if not 0 <= f < len(kinds):
                        raise ValueError(f"factor index out of range in {tok!r}")
                    words[f] = words[f] + parse_word(w)
                elif tok.startswith("(1-q^2)^"):
                    b += int(tok[8:])
                elif tok.startswith("q^"):
                    a += int(tok[2:])
                else:
                    c *= complex(tok)
            key = (tuple(words), a, b)
            acc[key] = acc.get(key, 0) + c
        return cls(kinds, acc)


def tensor(*exprs: OperatorExpr) -> OperatorExpr:
    out = OperatorExpr.identity(())
    for e in exprs:
        out = out.tensor(e)
    return out


def single(*prims, kind: str = "N") -> OperatorExpr:
    """Single-factor expression holding the word ``prims``."""
    return OperatorExpr.word(tuple(prims), kind)
