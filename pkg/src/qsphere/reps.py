"""Representations of the quantum symplectic group and its quotient spheres.

Tables are indexed by ``(k, l)``, meaning the image of the fundamental-matrix
entry ``u^k_l`` (row ``k``, column ``l``).  Convolution uses the
corepresentation coproduct ``Delta(u^i_j) = sum_k u^i_k (x) u^k_j``.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass, field

from .fock import (CoShift, Diag, IntTrunc, NatTrunc, OperatorExpr, QPow,
                   Shift, SpaceSpec, Sq1m, bil, nat)

__all__ = [
    "MatrixSymbol", "RepMap", "elementary_rep", "torus_char", "torus_bilateral",
    "convolve", "omega", "word_rep", "GeneratorAssignment", "DEFAULT_ASSIGNMENT",
    "candidate_assignments", "eta", "eta_space", "prime", "circle_points",
    "diagonal_closed_form",
]


@dataclass(frozen=True, order=True)
class MatrixSymbol:
    """Fundamental-matrix entry u^row_col."""

    row: int
    col: int

    def text(self) -> str:
        return f"u^{self.row}_{self.col}"


@dataclass(frozen=True)
class RepMap:
    """Assignment of an expression to every symbol ``u^k_l``, 1 <= k, l <= 2n."""

    n: int
    kinds: tuple
    table: dict = field(repr=False)

    def __post_init__(self):
        size = 2 * self.n
        for k in range(1, size + 1):
            for l in range(1, size + 1):
                e = self.table.get((k, l))
                if e is None or e.kinds != tuple(self.kinds):
                    raise ValueError(f"table entry ({k},{l}) missing or of the wrong shape")

    def __getitem__(self, key) -> OperatorExpr:
        if isinstance(key, MatrixSymbol):
            key = (key.row, key.col)
        return self.table[key]

    @property
    def size(self) -> int:
        return 2 * self.n

    def is_scalar(self) -> bool:
        return not self.kinds

    def scalar(self, k: int, l: int) -> complex:
        """Value of a scalar-valued table entry."""
        e = self.table[(k, l)].normalized()
        if e.kinds:
            raise ValueError("not a scalar representation")
        return sum(e.terms.values(), 0j)

    def equals(self, other: "RepMap", tol: float = 0.0) -> bool:
        return (self.n == other.n and self.kinds == other.kinds
                and all(self.table[key].equals(other.table[key], tol) for key in self.table))

    def dump(self) -> str:
        """Tab-separated ``row, col, canonical text`` lines."""
        head = f"# n={self.n}\tkinds={''.join(self.kinds) or '-'}"
        lines = [head]
        for (k, l) in sorted(self.table):
            lines.append(f"{k}\t{l}\t{self.table[(k, l)].text()}")
        return "\n".join(lines) + "\n"

    @classmethod
    def load(cls, text: str) -> "RepMap":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        meta = dict(part.split("=", 1) for part in lines[0].lstrip("# ").split("\t"))
        kinds = tuple("" if meta["kinds"] == "-" else meta["kinds"])
        table = {}
        for ln in lines[1:]:
            k, l, body = ln.split("\t", 2)
            table[(int(k), int(l))] = OperatorExpr.from_text(body, kinds)
        return cls(int(meta["n"]), kinds, table)


def prime(i: int, n: int) -> int:
    return 2 * n + 1 - i


def _delta_table(n: int, kinds: tuple, diag) -> dict:
    size = 2 * n
    return {(k, l): (diag(k) if k == l else OperatorExpr.zero(kinds))
            for k in range(1, size + 1) for l in range(1, size + 1)}


def elementary_rep(i: int, n: int) -> RepMap:
    """Representation attached to the simple reflection s_i on one half-line factor."""
    if not 1 <= i <= n:
        raise ValueError(f"reflection index {i} out of range 1..{n}")
    table = _delta_table(n, ("N",), lambda k: OperatorExpr.identity(("N",)))
    if i < n:
        down = nat(Diag(Sq1m(2, 2)), Shift())
        up = nat(CoShift(), Diag(Sq1m(2, 2)))
        j = 2 * n - i
        table[(i, i)] = down
        table[(j, j)] = down
        table[(i + 1, i + 1)] = up
        table[(j + 1, j + 1)] = up
        table[(i, i + 1)] = -nat(Diag(QPow(1, 1)))
        table[(i + 1, i)] = nat(Diag(QPow(1, 0)))
        table[(j, j + 1)] = nat(Diag(QPow(1, 1)))
        table[(j + 1, j)] = -nat(Diag(QPow(1, 0)))
    else:
        table[(n, n)] = nat(Diag(Sq1m(4, 4)), Shift())
        table[(n + 1, n + 1)] = nat(CoShift(), Diag(Sq1m(4, 4)))
        table[(n, n + 1)] = -nat(Diag(QPow(2, 2)))
        table[(n + 1, n)] = nat(Diag(QPow(2, 0)))
    return RepMap(n, ("N",), table)


def torus_char(t, n: int) -> RepMap:
    """One-dimensional representation at a point t of the n-torus."""
    t = tuple(complex(x) for x in t)
    if len(t) != n:
        raise ValueError(f"torus point needs {n} coordinates")
    if any(abs(abs(x) - 1) > 1e-12 for x in t):
        raise ValueError("torus coordinates must be unimodular")

    def value(k):
        c = t[k - 1].conjugate() if k <= n else t[2 * n - k]
        return OperatorExpr.scalar(c)

    return RepMap(n, (), _delta_table(n, (), value))


def torus_bilateral(n: int) -> RepMap:
    """Character with t_1 realized as the bilateral shift and t_2 = ... = t_n = 1."""

    def value(k):
        if k == 1:
            return bil(CoShift())
        if k == 2 * n:
            return bil(Shift())
        return OperatorExpr.identity(("Z",))

    return RepMap(n, ("Z",), _delta_table(n, ("Z",), value))


def convolve(phi: RepMap, psi: RepMap) -> RepMap:
    if phi.n != psi.n:
        raise ValueError("rank mismatch")
    size = phi.size
    kinds = tuple(phi.kinds) + tuple(psi.kinds)
    table = {}
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            acc = OperatorExpr.zero(kinds)
            for k in range(1, size + 1):
                a, b = phi[(i, k)], psi[(k, j)]
                if a.is_zero() or b.is_zero():
                    continue
                acc = acc + a.tensor(b)
            table[(i, j)] = acc.normalized()
    return RepMap(phi.n, kinds, table)


def omega(k: int, n: int) -> tuple[int, ...]:
    """Weyl word attached to the k-th quotient, 1 <= k <= 2n."""
    if not 1 <= k <= 2 * n:
        raise ValueError(f"k={k} out of range 1..{2 * n}")
    if k == 1:
        return ()
    if k <= n:
        return tuple(range(1, k))
    return tuple(range(1, n)) + (n,) + tuple(range(n - 1, 2 * n - k, -1))


def _circle_rep(circle, n: int) -> RepMap:
    if isinstance(circle, str):
        if circle != "bilateral":
            raise ValueError(f"unknown circle mode {circle!r}")
        return torus_bilateral(n)
    return torus_char((circle,) + (1,) * (n - 1), n)


def word_rep(word, circle, n: int) -> RepMap:
    """Left-to-right convolution of a torus character with elementary reps."""
    rep = circle if isinstance(circle, RepMap) else _circle_rep(circle, n)
    for i in word:
        rep = convolve(rep, elementary_rep(i, n))
    return rep


@dataclass(frozen=True)
class GeneratorAssignment:
    """Identification of z_j with an entry of row 1 or row 2n (or its adjoint).

    ``reverse`` pairs z_j with column ``2n+1-j`` instead of column ``j``.
    """

    row_is_last: bool
    reverse: bool
    starred: bool

    def entries(self, n: int):
        row = 2 * n if self.row_is_last else 1
        return [(MatrixSymbol(row, prime(j, n) if self.reverse else j), self.starred)
                for j in range(1, 2 * n + 1)]

    def images(self, rep: RepMap) -> list[OperatorExpr]:
        out = []
        for sym, star in self.entries(rep.n):
            e = rep[sym]
            out.append(e.adjoint().normalized() if star else e)
        return out

    def text(self) -> str:
        row = "2n" if self.row_is_last else "1"
        col = "2n+1-j" if self.reverse else "j"
        return f"z_j = (u^{row}_{col}){'*' if self.starred else ''}"

    def key(self) -> str:
        return f"{'last' if self.row_is_last else 'first'}-{'rev' if self.reverse else 'fwd'}-{'star' if self.starred else 'plain'}"

    @classmethod
    def from_key(cls, key: str) -> "GeneratorAssignment":
        row, col, star = key.split("-")
        if row not in ("last", "first") or col not in ("rev", "fwd") or star not in ("star", "plain"):
            raise ValueError(f"bad assignment key {key!r}")
        return cls(row == "last", col == "rev", star == "star")


DEFAULT_ASSIGNMENT = GeneratorAssignment(row_is_last=True, reverse=True, starred=False)


def candidate_assignments() -> list[GeneratorAssignment]:
    return [GeneratorAssignment(r, c, s) for r in (False, True)
            for c in (False, True) for s in (False, True)]


def eta(k: int, n: int, circle="bilateral",
        assignment: GeneratorAssignment | None = None) -> list[OperatorExpr]:
    """Images y^k_1 .. y^k_2n of the sphere generators in the k-th quotient."""
    if assignment is None:
        assignment = DEFAULT_ASSIGNMENT
    rep = word_rep(omega(k, n), circle, n)
    return assignment.images(rep)


def eta_space(k: int, D: int, circle="bilateral", radius: int | None = None) -> SpaceSpec:
    nats = (NatTrunc(D),) * (k - 1)
    if isinstance(circle, str):
        return SpaceSpec((IntTrunc(radius or D),) + nats)
    return SpaceSpec(nats)


def circle_points(count: int) -> list[complex]:
    """Equispaced sample points on the unit circle, starting at 1."""
    return [cmath.exp(2j * cmath.pi * r / count) for r in range(count)]


def diagonal_closed_form(k: int, n: int) -> OperatorExpr:
    """t (x) q^N (n-1 copies) (x) q^{2N} (x) q^N (k-n-1 copies), for n < k < 2n."""
    if not n < k < 2 * n:
        raise ValueError("closed form holds for n < k < 2n")
    qn = nat(Diag(QPow(1, 0)))
    parts = [bil(Shift())] + [qn] * (n - 1) + [nat(Diag(QPow(2, 0)))] + [qn] * (k - n - 1)
    out = parts[0]
    for x in parts[1:]:
        out = out.tensor(x)
    return out
