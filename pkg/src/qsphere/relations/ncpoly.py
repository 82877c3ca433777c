"""Noncommutative polynomials in z_i, z_i* and their text format.

A relation line looks like::

    c5[i=1,j=2]: z1* z2 - q z2 z1* - (1-q^2) eps1 eps2 q^(rho1+rho2) z4 z3* = 0

Coefficients are products of a rational constant, a power of ``(1-q^2)``,
sign parameters ``eps_i`` and a power of ``q`` whose exponent is an integer
plus an integer combination of the parameters ``rho_i``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

__all__ = ["Coef", "NCPoly", "Letter", "Relation", "parse_relation", "parse_poly"]


@dataclass(frozen=True)
class Coef:
    const: Fraction = Fraction(1)
    omq: int = 0
    eps: tuple = ()
    qconst: int = 0
    qrho: tuple = ()  # sorted (index, multiplicity) pairs

    def __mul__(self, other: "Coef") -> "Coef":
        rho = dict(self.qrho)
        for i, m in other.qrho:
            rho[i] = rho.get(i, 0) + m
        return Coef(self.const * other.const, self.omq + other.omq,
                    tuple(sorted(self.eps + other.eps)), self.qconst + other.qconst,
                    tuple(sorted((i, m) for i, m in rho.items() if m)))

    def scaled(self, c) -> "Coef":
        return Coef(self.const * Fraction(c), self.omq, self.eps, self.qconst, self.qrho)

    def q_exponent(self, rho) -> int:
        return self.qconst + sum(m * rho[i] for i, m in self.qrho)

    def value(self, q: float, rho=None, eps=None) -> float:
        """Numeric value; ``rho`` and ``eps`` map indices to integers."""
        v = float(self.const) * (1 - q * q) ** self.omq
        for i in self.eps:
            v *= eps[i]
        e = self.q_exponent(rho) if self.qrho else self.qconst
        if q == 0.0:
            if e < 0:
                raise ZeroDivisionError("negative power of q at q=0")
            return v if e == 0 else 0.0
        return v * q ** e

    def limit0(self, rho=None, eps=None):
        """Value at q=0, or None when the coefficient diverges there."""
        e = self.q_exponent(rho) if self.qrho else self.qconst
        if e < 0:
            return None
        if e > 0:
            return Fraction(0)
        v = self.const
        for i in self.eps:
            v *= eps[i]
        return v

    def key(self):
        return (self.omq, self.eps, self.qconst, self.qrho)

    def body_tokens(self) -> list[str]:
        toks = []
        if self.omq:
            toks.append("(1-q^2)" if self.omq == 1 else f"(1-q^2)^{self.omq}")
        toks.extend(f"eps{i}" for i in self.eps)
        if self.qconst or self.qrho:
            if not self.qrho and self.qconst == 1:
                toks.append("q")
            elif not self.qrho and self.qconst > 0:
                toks.append(f"q^{self.qconst}")
            else:
                parts = []
                for i, m in self.qrho:
                    lead = "" if m == 1 else ("-" if m == -1 else str(m))
                    parts.append(f"{lead}rho{i}")
                if self.qconst:
                    parts.append(str(self.qconst))
                s = parts[0]
                for p in parts[1:]:
                    s += p if p.startswith("-") else "+" + p
                toks.append(f"q^({s})")
        return toks


@dataclass(frozen=True, order=True)
class Letter:
    index: int
    star: bool = False

    def text(self) -> str:
        return f"z{self.index}{'*' if self.star else ''}"

    def adjoint(self) -> "Letter":
        return Letter(self.index, not self.star)


@dataclass
class NCPoly:
    """Ordered list of (Coef, word) terms; words are tuples of Letters."""

    terms: list = field(default_factory=list)

    @classmethod
    def monomial(cls, *letters, coef: Coef | None = None) -> "NCPoly":
        return cls([(coef or Coef(), tuple(letters))])

    @classmethod
    def const(cls, c=1) -> "NCPoly":
        return cls([(Coef(Fraction(c)), ())])

    def __add__(self, other: "NCPoly") -> "NCPoly":
        return NCPoly(self.terms + other.terms)

    def __neg__(self) -> "NCPoly":
        return NCPoly([(c.scaled(-1), w) for c, w in self.terms])

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + (-other)

    def times(self, coef: Coef) -> "NCPoly":
        return NCPoly([(coef * c, w) for c, w in self.terms])

    def letters(self) -> set[int]:
        return {x.index for _, w in self.terms for x in w}

    def collected(self) -> "NCPoly":
        """Merge terms with the same word and coefficient shape."""
        acc: dict = {}
        for c, w in self.terms:
            key = (w, c.key())
            if key in acc:
                acc[key] = Coef(acc[key].const + c.const, *key[1])
            else:
                acc[key] = c
        return NCPoly([(c, w) for (w, _), c in acc.items() if c.const != 0])

    def text(self) -> str:
        if not self.terms:
            return "0"
        out = []
        for idx, (c, w) in enumerate(self.terms):
            const = c.const
            sign = "-" if const < 0 else "+"
            mag = abs(const)
            toks = [] if mag == 1 else [str(mag)]
            toks += c.body_tokens()
            toks += [x.text() for x in w]
            body = " ".join(toks) if toks else "1"
            if idx == 0:
                out.append(body if sign == "+" else f"- {body}")
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)

    def evaluate(self, images, q: float, rho=None, eps=None, identity=None, cache=None):
        """Sum of coefficient times the product of the letter images."""
        cache = {} if cache is None else cache
        total = None
        for c, w in self.terms:
            v = c.value(q, rho, eps)
            if v == 0.0:
                continue
            op = _word_product(w, images, identity, cache)
            total = op * v if total is None else total + op * v
        if total is None:
            total = identity * 0.0
        return total


def _word_product(word, images, identity, cache):
    if not word:
        if identity is None:
            raise ValueError("constant term needs an identity operator")
        return identity
    if word in cache:
        return cache[word]
    head = word[0]
    if head.index not in images:
        raise KeyError(f"missing image for z{head.index}")
    first = images[head.index]
    if head.star:
        key = (Letter(head.index, True),)
        if key not in cache:
            cache[key] = first.adjoint()
        first = cache[key]
    out = first if len(word) == 1 else first @ _word_product(word[1:], images, identity, cache)
    cache[word] = out
    return out


@dataclass
class Relation:
    """A defining relation ``lhs = rhs`` with its family id and index tuple."""

    family: str
    index: tuple  # ((name, value), ...)
    lhs: NCPoly
    rhs: NCPoly = field(default_factory=NCPoly)

    @property
    def poly(self) -> NCPoly:
        return self.lhs - self.rhs

    @property
    def label(self) -> str:
        if not self.index:
            return self.family
        inner = ",".join(f"{k}={v}" for k, v in self.index)
        return f"{self.family}[{inner}]"

    def text(self) -> str:
        return f"{self.label}: {self.poly.text()} = 0"


_TOKEN = re.compile(
    r"\(1-q\^2\)(?:\^(\d+))?|eps(\d+)|q\^\(([^)]*)\)|q\^(\d+)|q(?![\w^])|z(\d+)(\*?)|(\d+(?:/\d+)?)")
_RHO = re.compile(r"([+-]?)(\d*)rho(\d+)|([+-]?\d+)")


def _parse_exponent(s: str):
    s = s.replace(" ", "")
    qconst, rho = 0, {}
    pos = 0
    while pos < len(s):
        m = _RHO.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad exponent {s!r}")
        if m.group(3):
            mult = int(m.group(2)) if m.group(2) else 1
            if m.group(1) == "-":
                mult = -mult
            i = int(m.group(3))
            rho[i] = rho.get(i, 0) + mult
        else:
            qconst += int(m.group(4))
        pos = m.end()
    return qconst, tuple(sorted((i, m) for i, m in rho.items() if m))


def _parse_term(body: str, sign: int):
    const = Fraction(sign)
    omq, eps, qconst, qrho, word = 0, [], 0, (), []
    pos = 0
    body = body.strip()
    while pos < len(body):
        if body[pos] == " ":
            pos += 1
            continue
        m = _TOKEN.match(body, pos)
        if not m:
            raise ValueError(f"cannot parse term near {body[pos:]!r}")
        g = m.groups()
        tok = m.group(0)
        if tok.startswith("(1-q^2)"):
            omq += int(g[0]) if g[0] else 1
        elif g[1]:
            eps.append(int(g[1]))
        elif g[2] is not None:
            c, r = _parse_exponent(g[2])
            qconst += c
            qrho = r
        elif g[3]:
            qconst += int(g[3])
        elif tok == "q":
            qconst += 1
        elif g[4]:
            word.append(Letter(int(g[4]), g[5] == "*"))
        elif g[6]:
            const *= Fraction(g[6])
        pos = m.end()
    return Coef(const, omq, tuple(sorted(eps)), qconst, qrho), tuple(word)


def parse_poly(text: str) -> NCPoly:
    text = text.strip()
    if text == "0":
        return NCPoly()
    sign = 1
    if text[0] in "+-":
        sign = -1 if text[0] == "-" else 1
        text = text[1:].strip()
    # binary signs are surrounded by spaces; signs inside q^(...) are not
    parts = re.split(r"\s([+-])\s", text)
    terms = [_parse_term(parts[0], sign)]
    for s, body in zip(parts[1::2], parts[2::2]):
        terms.append(_parse_term(body, 1 if s == "+" else -1))
    return NCPoly(terms)


_REL = re.compile(r"^\s*(\w+)(?:\[([^\]]*)\])?\s*:\s*(.*?)\s*=\s*0\s*$")


def parse_relation(line: str) -> Relation:
    m = _REL.match(line)
    if not m:
        raise ValueError(f"not a relation line: {line!r}")
    family, idx, body = m.groups()
    index = ()
    if idx:
        index = tuple((k.strip(), int(v)) for k, v in (p.split("=") for p in idx.split(",")))
    return Relation(family, index, parse_poly(body))
