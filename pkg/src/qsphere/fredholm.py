"""Fredholm index of the compressed operators R_m = P theta_m(u) P."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .fock import (CoShift, IntTrunc, NatTrunc, OperatorExpr, P0, SpaceSpec, TruncOp, bil,
                   materialize, nat, one, power, single, tensor)
from .spheres import T, phi_m_images

__all__ = [
    "u_generator", "theta_images", "theta_u", "compress_Rm", "IndexResult", "index",
    "winding_oracle", "SIGMA_GLOBAL", "calibrate_sign", "am_unitary", "am_pairing",
    "kernel_counts", "NotStabilizedError", "RankAmbiguityError", "DEFAULT_LADDER",
]

SIGMA_GLOBAL = -1  # frozen from the (m=1, ell=1) run, see calibrate_sign
DEFAULT_LADDER = (8, 12, 16, 24, 32, 40)


class NotStabilizedError(RuntimeError):
    pass


class RankAmbiguityError(RuntimeError):
    pass


def _pl(ell: int) -> list[OperatorExpr]:
    return [nat(P0)] * ell


def u_generator(ell: int) -> OperatorExpr:
    """u = p^ell (x) t + 1 - p^ell (x) 1 on N^ell (x) Z."""
    if ell < 1:
        raise ValueError("ell must be at least 1")
    kinds = ("N",) * ell + ("Z",)
    return tensor(*_pl(ell), T) + OperatorExpr.identity(kinds) - tensor(*_pl(ell), one("Z"))


def theta_images(m: int, ell: int) -> list[OperatorExpr]:
    """Images of the sphere generators under theta_m; the last factor is bilateral."""
    imgs = []
    for r in range(1, ell + 1):
        imgs.append(tensor(*_pl(r - 1), nat(CoShift()), *[one("N")] * (ell - r), one("Z")))
    imgs.append(tensor(*_pl(ell), single(*power(CoShift(), m), kind="Z")))
    return imgs


def theta_u(m: int, ell: int) -> OperatorExpr:
    kinds = ("N",) * ell + ("Z",)
    shift = bil(*power(CoShift(), m))
    return tensor(*_pl(ell), shift) + OperatorExpr.identity(kinds) - tensor(*_pl(ell), one("Z"))


def _index_space(ell: int, D: int) -> SpaceSpec:
    return SpaceSpec((NatTrunc(D),) * ell + (IntTrunc(D),))


def compress_Rm(m: int, ell: int, D: int) -> TruncOp:
    """Compression of theta_m(u) to the nonnegative circle indices.

    The result lives on N^ell (x) N with the last factor truncated at D+1.
    """
    space = _index_space(ell, D)
    x = materialize(theta_u(m, ell), space, 0.0)
    mask = space.mask([np.ones(f.dim, dtype=bool) for f in space.factors[:-1]]
                      + [space.factors[-1].labels() >= 0])
    idx = np.flatnonzero(mask)
    sub = SpaceSpec((NatTrunc(D),) * ell + (NatTrunc(D + 1),))
    return TruncOp(sub, x.mat[idx][:, idx].tocsr())


def _edge_mask(space: SpaceSpec, band: int) -> np.ndarray:
    """Basis vectors within ``band`` of the top truncation edge of some factor."""
    masks = []
    for f in space.factors:
        masks.append(f.labels() >= f.hi - band)
    out = np.zeros(space.dim, dtype=bool)
    for i in range(len(masks)):
        parts = [m if j == i else np.ones(len(m), dtype=bool) for j, m in enumerate(masks)]
        out |= space.mask(parts)
    return out


def _null_vectors(mat: sp.csr_matrix, rank_tol: float):
    """Orthonormal kernel vectors as (support indices, values) per vector."""
    n_rows, n_cols = mat.shape
    row_nnz = np.diff(mat.indptr)
    csc = mat.tocsc()
    col_nnz = np.diff(csc.indptr)
    if mat.nnz:
        mags = np.abs(mat.data)
        if np.any((mags >= rank_tol / 10) & (mags <= rank_tol * 10)):
            raise RankAmbiguityError("an entry lies within 10x of the rank tolerance")
    if row_nnz.max(initial=0) <= 1 and col_nnz.max(initial=0) <= 1:
        csc.sum_duplicates()
        small = np.zeros(n_cols, dtype=bool)
        filled = np.flatnonzero(col_nnz)
        small[filled] = np.abs(csc.data[csc.indptr[filled]]) < rank_tol
        cols = np.flatnonzero((col_nnz == 0) | small)
        return [(np.array([c]), np.array([1.0])) for c in cols]
    # general path: dense SVD per connected block of the bipartite graph
    graph = sp.bmat([[None, mat], [mat.T, None]]).tocsr()
    graph.data[:] = 1
    _, labels = connected_components(graph, directed=False)
    row_lab, col_lab = labels[:n_rows], labels[n_rows:]
    out = []
    for lab in np.unique(col_lab):
        cols = np.flatnonzero(col_lab == lab)
        rows = np.flatnonzero(row_lab == lab)
        if len(rows) == 0:
            out.extend((np.array([c]), np.array([1.0])) for c in cols)
            continue
        block = mat[rows][:, cols].toarray()
        _, s, vh = np.linalg.svd(block)
        if np.any((s >= rank_tol / 10) & (s <= rank_tol * 10)):
            raise RankAmbiguityError("a singular value lies within 10x of the rank tolerance")
        rank = int(np.sum(s > rank_tol))
        for v in vh[rank:]:
            out.append((cols, v.conj()))
    return out


def kernel_counts(x: TruncOp, rank_tol: float = 1e-8, band: int = 2) -> tuple[int, int]:
    """Kernel and cokernel dimensions after discarding top-edge artifacts."""
    edge = _edge_mask(x.space, band)
    counts = []
    for mat in (x.mat.tocsr(), x.mat.conj().T.tocsr()):
        kept = 0
        for support, vals in _null_vectors(mat, rank_tol):
            w = np.abs(vals) ** 2
            if w[edge[support]].sum() >= 0.99 * w.sum():
                continue
            kept += 1
        counts.append(kept)
    return counts[0], counts[1]


@dataclass
class IndexResult:
    m: int
    ell: int
    ladder: tuple
    dims: list                      # (ker, coker) per rung
    stabilized: bool
    index: int | None               # ker - coker at the stabilized rungs
    sigma: int = SIGMA_GLOBAL
    stable_from: int | None = None  # first rung of the final constant run
    notes: list = field(default_factory=list)

    @property
    def pairing(self) -> int | None:
        return None if self.index is None else self.sigma * self.index


def _stable_run(dims) -> int | None:
    start = len(dims) - 1
    while start > 0 and dims[start - 1] == dims[-1]:
        start -= 1
    return start if len(dims) - start >= 3 else None


def index(m: int, ell: int, ladder=DEFAULT_LADDER, rank_tol: float = 1e-8,
          strict: bool = True) -> IndexResult:
    """Stabilized index of R_m over a ladder of truncations.

    The discard band is max(2, |m|-1), wide enough to hold all |m| boundary
    vectors that the truncated shift power loses at the top edge.
    """
    ladder = tuple(int(d) for d in ladder)
    if len(ladder) < 5 or any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("ladder needs at least 5 increasing truncations")
    band = max(2, abs(m) - 1)
    if ladder[0] <= band + 1:
        raise ValueError(f"smallest truncation must exceed {band + 1}")
    dims = [kernel_counts(compress_Rm(m, ell, D), rank_tol, band) for D in ladder]
    start = _stable_run(dims)
    if start is None:
        if strict:
            raise NotStabilizedError(f"(ker, coker) not constant on 3 final rungs: {dims}")
        return IndexResult(m, ell, ladder, dims, False, None)
    ker, coker = dims[-1]
    return IndexResult(m, ell, ladder, dims, True, ker - coker, SIGMA_GLOBAL, ladder[start])


def calibrate_sign(ladder=DEFAULT_LADDER) -> int:
    """Sign making the pairing of m=1 at ell=1 equal to +1."""
    raw = index(1, 1, ladder).index
    if raw not in (1, -1):
        raise RuntimeError(f"calibration run returned index {raw}")
    return raw


def winding_oracle(m: int) -> int:
    """Signed count of unmatched basis vectors of the one-sided block e_j -> e_{j+m}.

    Vectors missing from the range count +1, vectors sent below 0 count -1.
    """
    window = range(abs(m) + 1)
    hit = {j + m for j in range(2 * abs(m) + 1) if j + m >= 0}
    missing = sum(1 for k in window if k not in hit)
    killed = sum(1 for j in window if j + m < 0)
    return missing - killed


def am_unitary(m: int, ell: int) -> OperatorExpr:
    """p^ell (x) (S*)^m + (1 - p^ell) (x) 1 on N^(ell+1), built from the A_m family."""
    last = phi_m_images(m, ell)[-1]
    kinds = last.kinds[:-1]
    block = OperatorExpr(kinds, {(w[:-1], a, b): c for (w, a, b), c in last.terms.items()})
    proj = tensor(*_pl(ell), one("N"))
    return block + OperatorExpr.identity(kinds) - proj


def am_pairing(m: int, ell: int = 1, ladder=DEFAULT_LADDER, rank_tol: float = 1e-8) -> IndexResult:
    """Stabilized index of the unitary-modulo-compacts built from A_m generators."""
    ladder = tuple(int(d) for d in ladder)
    if len(ladder) < 5:
        raise ValueError("ladder needs at least 5 increasing truncations")
    band = max(2, abs(m) - 1)
    e = am_unitary(m, ell)
    dims = []
    for D in ladder:
        x = materialize(e, SpaceSpec((NatTrunc(D),) * (ell + 1)), 0.0)
        dims.append(kernel_counts(x, rank_tol, band))
    start = _stable_run(dims)
    if start is None:
        raise NotStabilizedError(f"(ker, coker) not constant on 3 final rungs: {dims}")
    ker, coker = dims[-1]
    return IndexResult(m, ell, ladder, dims, True, ker - coker, SIGMA_GLOBAL, ladder[start])
