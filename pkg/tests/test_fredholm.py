import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qsphere.fock import IntTrunc, NatTrunc, SpaceSpec, interior_residual, materialize
from qsphere.fredholm import (SIGMA_GLOBAL, NotStabilizedError, RankAmbiguityError, am_pairing,
                              calibrate_sign, compress_Rm, index, kernel_counts, u_generator,
                              winding_oracle)
from qsphere.fock.trunc import TruncOp
import scipy.sparse as sp


def test_u_is_unitary_on_interior():
    space = SpaceSpec((NatTrunc(8), IntTrunc(8)))
    u = materialize(u_generator(1), space, 0.0)
    ident = materialize(u_generator(1) @ u_generator(1).adjoint(), space, 0.0)
    one = np.eye(space.dim)
    assert interior_residual(TruncOp(space, sp.csr_matrix(ident.mat.toarray() - one)), 2) == 0.0
    dense = u.mat.toarray()
    i = space.flat_index((0, 3))
    j = space.flat_index((0, 4))
    assert dense[i, j] == 1.0


def test_u_rejects_ell0():
    with pytest.raises(ValueError):
        u_generator(0)


def test_compress_m0_is_identity():
    x = compress_Rm(0, 1, 6)
    assert np.array_equal(x.mat.toarray(), np.eye(x.space.dim))


@pytest.mark.parametrize("m", [1, -1])
def test_compress_shift_direction(m):
    x = compress_Rm(m, 1, 6).mat.toarray()
    sub = compress_Rm(m, 1, 6).space
    a = sub.flat_index((0, 1))
    b = sub.flat_index((0, 1 + m))
    # p (x) (S*)^m sends e_j to e_{j+m} on the vacuum row
    assert x[b, a] == 1.0


def test_kernel_counts_shift():
    x = compress_Rm(1, 1, 10)
    ker, coker = kernel_counts(x, band=2)
    assert (ker, coker) == (0, 1)


def test_rank_ambiguity():
    space = SpaceSpec((NatTrunc(4),))
    x = TruncOp(space, sp.csr_matrix(np.diag([1.0, 1.0, 2e-8, 1.0])))
    with pytest.raises(RankAmbiguityError):
        kernel_counts(x, rank_tol=1e-8)


@pytest.mark.parametrize("m", [-3, -1, 0, 2])
def test_index_antisymmetric(m):
    assert index(m, 1).index + index(-m, 1).index == 0


@pytest.mark.parametrize("m", [-2, 1, 3])
def test_index_constant_in_ell(m):
    assert index(m, 1).index == index(m, 2).index


@settings(max_examples=6)
@given(st.integers(-4, 4))
def test_index_stabilizes_early(m):
    d0 = abs(m) + 4
    res = index(m, 1, ladder=tuple(d0 + 2 * i for i in range(5)))
    assert res.stabilized and res.stable_from == d0
    assert res.pairing == m


def test_short_ladder_rejected():
    with pytest.raises(ValueError):
        index(1, 1, ladder=(4, 5))
    with pytest.raises(ValueError):
        index(1, 1, ladder=(8, 7, 9, 10, 11))
    with pytest.raises(ValueError):
        index(6, 1, ladder=(5, 6, 7, 8, 9))


def test_minimal_ladder():
    res = index(1, 1, ladder=(4, 5, 6, 7, 8), strict=True)
    assert res.stabilized
    assert index(0, 1, ladder=(4, 5, 6, 7, 8), strict=False).index == 0


def test_winding_oracle():
    assert [winding_oracle(m) for m in range(-3, 4)] == [-3, -2, -1, 0, 1, 2, 3]


def test_frozen_sign():
    assert calibrate_sign() == SIGMA_GLOBAL


@pytest.mark.parametrize("m", [0, 1, 2])
def test_am_pairing(m):
    res = am_pairing(m)
    assert res.pairing == m


def test_am_pairing_short_ladder():
    with pytest.raises(ValueError):
        am_pairing(1, ladder=(8, 12))
    assert issubclass(NotStabilizedError, RuntimeError)
