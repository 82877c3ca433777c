# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled tensor-term assembly kernel."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


def kron_coo(tgts, vals):
    """COO triplets of a tensor product of single-offset factor matrices.

    Same contract and output order as the numpy implementation.
    """
    cdef Py_ssize_t nf = len(tgts)
    cdef Py_ssize_t f, k, j, total = 1
    src_l, tgt_l, val_l = [], [], []
    for f in range(nf):
        t = np.asarray(tgts[f], dtype=np.int64)
        v = np.asarray(vals[f], dtype=np.float64)
        alive = np.flatnonzero((t >= 0) & (v != 0.0)).astype(np.int64)
        src_l.append(alive)
        tgt_l.append(np.ascontiguousarray(t[alive]))
        val_l.append(np.ascontiguousarray(v[alive]))
        total *= alive.shape[0]

    rows_a = np.empty(total, dtype=np.int64)
    cols_a = np.empty(total, dtype=np.int64)
    data_a = np.empty(total, dtype=np.float64)
    if total == 0:
        return rows_a, cols_a, data_a
    if nf == 0:
        rows_a[0] = 0
        cols_a[0] = 0
        data_a[0] = 1.0
        return rows_a, cols_a, data_a

    cdef long long[::1] rows = rows_a
    cdef long long[::1] cols = cols_a
    cdef double[::1] data = data_a

    cdef long long[::1] dims = np.array([len(t) for t in tgts], dtype=np.int64)
    cdef long long[::1] lens = np.array([a.shape[0] for a in src_l], dtype=np.int64)
    cdef long long[::1] ctr = np.zeros(max(nf, 1), dtype=np.int64)
    cdef long long[::1] offs = np.zeros(nf + 1, dtype=np.int64)
    for f in range(nf):
        offs[f + 1] = offs[f] + lens[f]
    cdef long long[::1] src = np.concatenate(src_l) if nf else np.zeros(0, np.int64)
    cdef long long[::1] tgt = np.concatenate(tgt_l) if nf else np.zeros(0, np.int64)
    cdef double[::1] val = np.concatenate(val_l) if nf else np.zeros(0)

    # prefix values of the outer factors, refreshed only when their counter moves
    cdef long long[::1] pr = np.zeros(nf + 1, dtype=np.int64)
    cdef long long[::1] pc = np.zeros(nf + 1, dtype=np.int64)
    cdef double[::1] px = np.ones(nf + 1)
    cdef Py_ssize_t last = nf - 1, lo, n_last, k0 = 0
    cdef long long dl, br, bc
    cdef double bx
    with nogil:
        lo = 0
        while True:
            for f in range(lo, last):
                j = offs[f] + ctr[f]
                pr[f + 1] = pr[f] * dims[f] + tgt[j]
                pc[f + 1] = pc[f] * dims[f] + src[j]
                px[f + 1] = px[f] * val[j]
            dl = dims[last]
            br = pr[last] * dl
            bc = pc[last] * dl
            bx = px[last]
            n_last = lens[last]
            for k in range(n_last):
                j = offs[last] + k
                rows[k0 + k] = br + tgt[j]
                cols[k0 + k] = bc + src[j]
                data[k0 + k] = bx * val[j]
            k0 += n_last
            f = last - 1
            while f >= 0:
                ctr[f] += 1
                if ctr[f] < lens[f]:
                    break
                ctr[f] = 0
                f -= 1
            if f < 0:
                break
            lo = f
    return rows_a, cols_a, data_a
