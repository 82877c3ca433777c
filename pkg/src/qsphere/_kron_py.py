"""Numpy implementation of the tensor-term assembly kernel."""
import numpy as np


def kron_coo(tgts, vals):
    """COO triplets of a tensor product of single-offset factor matrices.

    ``tgts[f][s]`` is the local target index of source ``s`` in factor ``f``
    (``-1`` when the source is annihilated) and ``vals[f][s]`` its value.
    Returns flat ``(rows, cols, data)`` arrays in row-major order.
    """
    rows = np.zeros(1, dtype=np.int64)
    cols = np.zeros(1, dtype=np.int64)
    data = np.ones(1, dtype=np.float64)
    for t, v in zip(tgts, vals):
        t = np.asarray(t, dtype=np.int64)
        v = np.asarray(v, dtype=np.float64)
        dim = t.shape[0]
        alive = np.flatnonzero((t >= 0) & (v != 0.0))
        rows = (rows[:, None] * dim + t[alive][None, :]).ravel()
        cols = (cols[:, None] * dim + alive[None, :]).ravel()
        data = (data[:, None] * v[alive][None, :]).ravel()
    return rows, cols, data
