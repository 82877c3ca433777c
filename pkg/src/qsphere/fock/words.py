"""Canonical forms, truncated action and symbol map for single-factor words.

Every word in the primitives acts as a single-offset operator
``e_n -> c(n) e_(n+d)``.  The canonical form records the offset and the
coefficient function:

* ``d >= 0``: ``(S*)^d`` followed by diagonals in the source index, so the
  diagonals stand to the right of the shifts;
* ``d < 0``: diagonals in the target index followed by ``S^|d|``.

On the half-line these placements make the diagonal part unique, because
``(S*)^d`` is injective and ``S^|d|`` is onto.  Indicator functions
``[N>=a]`` are expanded into ``1 - p_0 - ... - p_(a-1)`` on the half-line and
squares of ``sqrt(1-q^x)`` are expanded into ``1 - q^x``, so two words that
agree as operators on l2(N) for every q normalize to the same sums.
"""
from __future__ import annotations

from collections import Counter
from functools import lru_cache
from math import comb

import numpy as np

from .primitives import CoShift, Diag, Ge, Id, Proj, QPow, Shift, Sq1m

__all__ = ["normalize_word", "word_action", "word_offset", "symbol_value",
           "SymbolLimitError"]


class SymbolLimitError(ValueError):
    """The diagonal part of a word has no q-independent limit at infinity."""


def _scan(word: tuple, kind: str):
    d = 0
    lo = 0 if kind == "N" else None
    eq = None
    qa = qb = 0
    sq = Counter()
    for p in reversed(word):
        if isinstance(p, Id):
            continue
        if isinstance(p, Shift):
            if kind == "N":
                lo = max(lo, 1 - d)
            d -= 1
        elif isinstance(p, CoShift):
            d += 1
        elif isinstance(p, Proj):
            src = p.i - d
            if eq is not None and eq != src:
                return None
            eq = src
        elif isinstance(p, Diag):
            fn = p.fn.shifted(d)
            if isinstance(fn, QPow):
                qa += fn.alpha
                qb += fn.beta
            elif isinstance(fn, Sq1m):
                sq[fn] += 1
            else:
                lo = fn.a if lo is None else max(lo, fn.a)
        else:
            raise TypeError(f"not a primitive: {p!r}")
    return d, lo, eq, (qa, qb), sq


def _expand(qp, sq, eq):
    """Expand squared square roots; returns [(coef, (qa, qb), sorted sq atoms)]."""
    qa, qb = qp
    if eq is not None:
        qa, qb = 0, qa * eq + qb
        folded = Counter()
        for fn, c in sq.items():
            folded[Sq1m(0, fn.alpha * eq + fn.beta)] += c
        sq = folded
    out = [(1, (qa, qb), [])]
    for fn in sorted(sq, key=lambda f: (f.alpha, f.beta)):
        pairs, rem = divmod(sq[fn], 2)
        if rem and fn.alpha == 0 and fn.beta == 0:
            return []
        nxt = []
        for c, (a, b), atoms in out:
            for j in range(pairs + 1):
                nxt.append((c * comb(pairs, j) * (-1) ** j,
                            (a + j * fn.alpha, b + j * fn.beta),
                            atoms + [fn] * rem))
        out = nxt
    return out


def _render(d: int, eq, lo_atom, qp, atoms) -> tuple:
    diag = [Diag(fn) for fn in atoms]
    if qp != (0, 0):
        diag.append(Diag(QPow(*qp)))
    if lo_atom is not None:
        diag.append(Diag(Ge(lo_atom)))
    if eq is not None:
        diag.append(Proj(eq))
    if d >= 0:
        return (CoShift(),) * d + tuple(diag)
    moved = []
    for p in diag:
        if isinstance(p, Proj):
            moved.append(Proj(p.i + d))
        else:
            moved.append(Diag(p.fn.shifted(-d)))
    return tuple(moved) + (Shift(),) * (-d)


@lru_cache(maxsize=None)
def normalize_word(word: tuple, kind: str = "N") -> tuple:
    """Canonical expansion of a word as a tuple of (integer coefficient, word)."""
    scanned = _scan(word, kind)
    if scanned is None:
        return ()
    d, lo, eq, qp, sq = scanned
    variants = []
    if kind == "N":
        nat = max(0, -d)
        if eq is not None:
            if eq < max(nat, lo):
                return ()
            variants.append((1, eq, None))
        else:
            variants.append((1, None, None))
            variants.extend((-1, i, None) for i in range(nat, max(lo, nat)))
    else:
        if eq is not None:
            if lo is not None and eq < lo:
                return ()
            variants.append((1, eq, None))
        else:
            variants.append((1, None, lo))
    acc: dict = {}
    for sign, e, lo_atom in variants:
        for c, qpx, atoms in _expand(qp, sq, e):
            w = _render(d, e, lo_atom, qpx, atoms)
            acc[w] = acc.get(w, 0) + sign * c
    return tuple((c, w) for w, c in acc.items() if c != 0)


def word_offset(word: tuple) -> int:
    return sum(1 if isinstance(p, CoShift) else -1 if isinstance(p, Shift) else 0
               for p in word)


def word_action(word: tuple, factor, q: float):
    """Truncated action of a word as (target local index or -1, value) per source."""
    pos = factor.labels().copy()
    val = np.ones(factor.dim)
    alive = np.ones(factor.dim, dtype=bool)
    for p in reversed(word):
        if isinstance(p, Shift):
            pos -= 1
            alive &= pos >= factor.lo
        elif isinstance(p, CoShift):
            pos += 1
            alive &= pos <= factor.hi
        elif isinstance(p, Proj):
            alive &= pos == p.i
        elif isinstance(p, Diag):
            val[alive] *= p.fn.values(pos[alive], q)
        elif not isinstance(p, Id):
            raise TypeError(f"not a primitive: {p!r}")
    tgt = np.where(alive, pos - factor.lo, -1)
    return tgt, np.where(alive, val, 0.0)


def symbol_value(word: tuple) -> int:
    """Image of a canonical half-line word under the symbol map.

    Shifts go to 1, projections to 0 and diagonals to their limit at
    infinity.
    """
    if any(isinstance(p, Proj) for p in word):
        return 0
    value = 1
    for p in word:
        if isinstance(p, Diag):
            fn = p.fn
            if isinstance(fn, Ge):
                continue
            if fn.alpha > 0:
                if isinstance(fn, QPow):
                    value = 0
                continue
            if isinstance(fn, QPow) and fn.alpha == 0 and fn.beta == 0:
                continue
            raise SymbolLimitError(f"{fn.text()} has no q-independent limit")
    return value
