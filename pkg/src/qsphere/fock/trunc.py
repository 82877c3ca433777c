"""Sparse materialization of expressions and norm estimates."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import eigsh

from .. import kernels
from .expr import OperatorExpr
from .space import SpaceSpec
from .words import word_action

__all__ = ["TruncOp", "materialize", "op_norm", "interior_residual",
           "interior_mask", "ess_norm_est", "restrict", "PRUNE"]

PRUNE = 1e-15


def _prune(mat: sp.csr_matrix) -> sp.csr_matrix:
    mat.data[np.abs(mat.data) < PRUNE] = 0
    mat.eliminate_zeros()
    return mat


@dataclass(frozen=True)
class TruncOp:
    """Sparse complex matrix on a truncated space."""

    space: SpaceSpec
    mat: sp.csr_matrix

    def _check(self, other):
        if self.space != other.space:
            raise ValueError("shape mismatch: operators live on different spaces")

    def __add__(self, other):
        self._check(other)
        return TruncOp(self.space, _prune(self.mat + other.mat))

    def __sub__(self, other):
        self._check(other)
        return TruncOp(self.space, _prune(self.mat - other.mat))

    def __neg__(self):
        return TruncOp(self.space, -self.mat)

    def __mul__(self, c):
        if isinstance(c, TruncOp):
            return self @ c
        return TruncOp(self.space, _prune(self.mat * c))

    __rmul__ = __mul__

    def __matmul__(self, other):
        self._check(other)
        return TruncOp(self.space, _prune((self.mat @ other.mat).tocsr()))

    def adjoint(self):
        return TruncOp(self.space, self.mat.conj().T.tocsr())

    @property
    def H(self):
        return self.adjoint()

    def entry(self, row_labels, col_labels) -> complex:
        return complex(self.mat[self.space.flat_index(row_labels),
                                self.space.flat_index(col_labels)])

    def toarray(self) -> np.ndarray:
        return self.mat.toarray()

    @classmethod
    def identity(cls, space: SpaceSpec):
        return cls(space, sp.identity(space.dim, dtype=complex, format="csr"))

    @classmethod
    def zero(cls, space: SpaceSpec):
        return cls(space, sp.csr_matrix((space.dim, space.dim), dtype=complex))


def materialize(e: OperatorExpr, space: SpaceSpec, q: float) -> TruncOp:
    """Sparse matrix of ``e`` on ``space`` with deformation parameter ``q``."""
    if len(e.kinds) != len(space):
        raise ValueError(f"expression has {len(e.kinds)} factors, space has {len(space)}")
    if e.kinds != space.kinds:
        raise ValueError(f"factor kinds {e.kinds} do not match space {space.kinds}")
    if not 0.0 <= q < 1.0:
        raise ValueError("q must lie in [0, 1)")
    dim = space.dim
    cache = {}
    rows, cols, data = [], [], []
    for (words, qexp, omq), c in e.terms.items():
        if q == 0.0 and qexp < 0:
            raise ValueError("negative power of q at q=0")
        coef = c * (q ** qexp if qexp else 1.0) * ((1 - q * q) ** omq if omq else 1.0)
        if coef == 0:
            continue
        tgts, vals = [], []
        for f, (w, factor) in enumerate(zip(words, space.factors)):
            key = (f, w)
            if key not in cache:
                cache[key] = word_action(w, factor, q)
            t, v = cache[key]
            tgts.append(t)
            vals.append(v)
        r, cl, d = kernels.kron_coo(tgts, vals)
        rows.append(r)
        cols.append(cl)
        data.append(d * coef)
    if rows:
        r = np.concatenate(rows)
        cl = np.concatenate(cols)
        d = np.concatenate(data).astype(complex)
    else:
        r = cl = np.zeros(0, dtype=np.int64)
        d = np.zeros(0, dtype=complex)
    mat = sp.csr_matrix((d, (r, cl)), shape=(dim, dim))
    mat.sum_duplicates()
    return TruncOp(space, _prune(mat))


def op_norm(x, rtol: float = 1e-10, dense_limit: int = 400) -> float:
    """Largest singular value.

    Small operators use a dense SVD.  Larger ones run Lanczos on ``x*x``
    (the smaller Gram side) from the normalized all-ones vector, which stays
    accurate when the top of the spectrum is clustered.
    """
    mat = x.mat if isinstance(x, TruncOp) else sp.csr_matrix(x)
    if mat.shape[0] == 0 or mat.shape[1] == 0 or mat.nnz == 0:
        return 0.0
    if min(mat.shape) <= dense_limit:
        return float(np.linalg.norm(mat.toarray(), 2))
    mh = mat.conj().T.tocsr()
    gram = (mh @ mat) if mat.shape[1] <= mat.shape[0] else (mat @ mh)
    gram = gram.tocsr()
    v0 = np.ones(gram.shape[0], dtype=gram.dtype)
    val = eigsh(gram, k=1, which="LA", tol=rtol, v0=v0, return_eigenvectors=False)
    return float(np.sqrt(max(float(np.real(val[0])), 0.0)))


def interior_mask(space: SpaceSpec, band: int) -> np.ndarray:
    masks = []
    for f in space.factors:
        if band >= f.D:
            raise ValueError(f"band {band} too large for {f}")
        lab = f.labels()
        if f.kind == "N":
            masks.append(lab <= f.D - 1 - band)
        else:
            masks.append(np.abs(lab) <= f.D - band)
    return space.mask(masks)


def restrict(x: TruncOp, mask: np.ndarray) -> sp.csr_matrix:
    idx = np.flatnonzero(mask)
    return x.mat[idx][:, idx]


def interior_residual(x: TruncOp, band: int) -> float:
    """Norm of the compression of ``x`` to basis vectors away from the top edges."""
    return op_norm(restrict(x, interior_mask(x.space, band)))


def ess_norm_est(x: TruncOp, M: int, factor_set) -> float:
    """Norm of the compression to indices >= M in every selected half-line factor."""
    masks = []
    chosen = {f % len(x.space) for f in factor_set}
    for i, f in enumerate(x.space.factors):
        if i in chosen:
            if f.kind != "N":
                raise ValueError("tail compressions are defined on half-line factors only")
            if not 0 <= M < f.D:
                raise ValueError(f"tail start {M} out of range for {f}")
            masks.append(f.labels() >= M)
        else:
            masks.append(np.ones(f.dim, dtype=bool))
    return op_norm(restrict(x, x.space.mask(masks)))
