"""Primitive operators on a single sequence-space factor.

A factor is either the half-line space l2(N) (kind ``"N"``) or the
bilateral space l2(Z) (kind ``"Z"``).  Words are tuples of primitives read
as operator products, so the rightmost primitive acts first.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "QPow", "Sq1m", "Ge", "Shift", "CoShift", "Proj", "Diag", "Id",
    "Word", "power", "prim_adjoint", "word_adjoint", "DiagDomainError",
]


class DiagDomainError(ValueError):
    """A diagonal function was evaluated outside its real, finite range."""


def _exp_text(alpha: int, beta: int) -> str:
    if alpha == 0:
        return str(beta)
    lead = "N" if alpha == 1 else ("-N" if alpha == -1 else f"{alpha}N")
    if beta == 0:
        return lead
    return f"{lead}{beta:+d}"


def _qpow_values(alpha: int, beta: int, n: np.ndarray, q: float) -> np.ndarray:
    e = alpha * n + beta
    if q == 0.0:
        if np.any(e < 0):
            raise DiagDomainError(f"0^negative in q^{{{_exp_text(alpha, beta)}}}")
        return (e == 0).astype(float)
    return np.power(float(q), e.astype(float))


@dataclass(frozen=True)
class QPow:
    """n -> q^(alpha*n + beta), with 0^0 = 1."""

    alpha: int
    beta: int

    def shifted(self, s: int) -> "QPow":
        return QPow(self.alpha, self.beta + self.alpha * s)

    def values(self, n: np.ndarray, q: float) -> np.ndarray:
        return _qpow_values(self.alpha, self.beta, n, q)

    def text(self) -> str:
        return f"q^{{{_exp_text(self.alpha, self.beta)}}}"


@dataclass(frozen=True)
class Sq1m:
    """n -> sqrt(1 - q^(alpha*n + beta))."""

    alpha: int
    beta: int

    def shifted(self, s: int) -> "Sq1m":
        return Sq1m(self.alpha, self.beta + self.alpha * s)

    def values(self, n: np.ndarray, q: float) -> np.ndarray:
        inner = 1.0 - _qpow_values(self.alpha, self.beta, n, q)
        if np.any(inner < 0):
            raise DiagDomainError(
                f"negative radicand in sqrt(1-q^{{{_exp_text(self.alpha, self.beta)}}})")
        return np.sqrt(inner)

    def text(self) -> str:
        return f"sqrt(1-q^{{{_exp_text(self.alpha, self.beta)}}})"


@dataclass(frozen=True)
class Ge:
    """Indicator n -> [n >= a]."""

    a: int

    def shifted(self, s: int) -> "Ge":
        return Ge(self.a - s)

    def values(self, n: np.ndarray, q: float) -> np.ndarray:
        return (n >= self.a).astype(float)

    def text(self) -> str:
        return f"[N>={self.a}]"


@dataclass(frozen=True)
class Shift:
    """Left shift e_n -> e_(n-1)."""

    def text(self) -> str:
        return "S"


@dataclass(frozen=True)
class CoShift:
    """Right shift e_n -> e_(n+1)."""

    def text(self) -> str:
        return "S*"


@dataclass(frozen=True)
class Proj:
    """Rank-one projection onto e_i."""

    i: int = 0

    def text(self) -> str:
        return "p" if self.i == 0 else f"p_{self.i}"


@dataclass(frozen=True)
class Diag:
    """Diagonal operator e_n -> f(n) e_n for a named function f."""

    fn: QPow | Sq1m | Ge

    def text(self) -> str:
        return self.fn.text()


@dataclass(frozen=True)
class Id:
    def text(self) -> str:
        return "1"


Word = tuple


def power(prim: Shift | CoShift, m: int) -> Word:
    """m-fold product of a shift; negative powers use the opposite shift."""
    if m < 0:
        prim = CoShift() if isinstance(prim, Shift) else Shift()
        m = -m
    return (prim,) * m


def prim_adjoint(p):
    if isinstance(p, Shift):
        return CoShift()
    if isinstance(p, CoShift):
        return Shift()
    return p


def word_adjoint(word: Word) -> Word:
    return tuple(prim_adjoint(p) for p in reversed(word))
