import numpy as np
import pytest
from hypothesis import given, strategies as st

from qsphere import _kron_py, kernels
from qsphere.fock import (CoShift, Diag, DiagDomainError, Ge, Id, IntTrunc, NatTrunc,
                          OperatorExpr, P0, Proj, QPow, S, Sd, Shift, SpaceSpec, Sq1m,
                          TruncOp, bil, ess_norm_est, interior_residual, materialize, nat,
                          nat_space, one, op_norm, power, tensor)


def mat(e, D=4, q=0.5, kind="N"):
    space = nat_space(D, 1) if kind == "N" else SpaceSpec((IntTrunc(D),))
    return materialize(e, space, q).toarray()


def test_shift_matrix():
    m = mat(nat(S), D=3)
    expected = np.zeros((3, 3))
    expected[0, 1] = expected[1, 2] = 1
    assert np.array_equal(m, expected)


def test_qpow_at_zero_is_vacuum_projection():
    assert np.array_equal(mat(nat(Diag(QPow(1, 0))), D=3, q=0.0), np.diag([1, 0, 0]))
    for alpha in (1, 2, 4):
        assert np.array_equal(mat(nat(Diag(QPow(alpha, 0))), D=5, q=0.0), mat(nat(P0), D=5))


def test_sq1m_times_shift_entries():
    m = mat(nat(Diag(Sq1m(2, 2)), S), D=4, q=0.5)
    for n in (1, 2, 3):
        # the diagonal is evaluated at the target index n-1
        assert m[n - 1, n] == pytest.approx(np.sqrt(1 - 0.5 ** (2 * n)), abs=1e-15)
    assert np.count_nonzero(m) == 3


def test_power():
    assert power(CoShift(), 0) == ()
    assert power(CoShift(), -2) == (Shift(), Shift())
    assert power(Shift(), 3) == (Shift(),) * 3
    m = mat(nat(*power(Shift(), 3)), D=5)
    assert m[1, 4] == 1 and np.count_nonzero(m) == 2
    assert not m[:, 2].any()


def test_adjoint_of_shift():
    assert nat(S).adjoint().equals(nat(Sd))


def test_shift_products_on_half_line():
    # S S* loses only the top vector; S* S loses the vacuum
    space = nat_space(6, 1)
    top = materialize(nat(S) @ nat(Sd) - one(), space, 0.5)
    assert interior_residual(top, 0) == 1.0
    assert interior_residual(top, 1) == 0.0
    bottom = materialize(nat(Sd) @ nat(S) - one(), space, 0.5)
    assert np.array_equal(bottom.toarray(), -mat(nat(P0), D=6))
    assert all(interior_residual(bottom, b) == 1.0 for b in (0, 1, 3))
    assert (nat(S) @ nat(Sd)).normalized().equals(one())
    assert (nat(Sd) @ nat(S)).normalized().equals(one() - nat(P0))


def test_op_norm_examples():
    assert op_norm(TruncOp.zero(nat_space(4, 1))) == 0.0
    assert op_norm(materialize(nat(S), nat_space(8, 1), 0.5)) == pytest.approx(1.0, rel=1e-10)
    assert op_norm(materialize(nat(Diag(QPow(1, 0))), nat_space(6, 1), 0.5)) == pytest.approx(1.0, rel=1e-10)


def test_op_norm_large_operator_uses_krylov_path():
    d = np.linspace(0.1, 0.7, 3000)
    d[1234] = 0.9
    x = TruncOp(nat_space(3000, 1), __import__("scipy.sparse", fromlist=["diags"]).diags(d).tocsr())
    assert op_norm(x) == pytest.approx(0.9, rel=1e-10)


def test_interior_residual_errors():
    x = materialize(one(), nat_space(4, 1), 0.5)
    assert interior_residual(x * 0.0, 2) == 0.0
    with pytest.raises(ValueError):
        interior_residual(x, 4)


def test_ess_norm_examples():
    x = materialize(nat(Diag(QPow(2, 0))), nat_space(10, 1), 0.5)
    assert ess_norm_est(x, 3, [0]) == pytest.approx(0.5 ** 6, rel=1e-12)
    ident = materialize(one(), nat_space(10, 1), 0.5)
    assert all(ess_norm_est(ident, M, [0]) == pytest.approx(1.0) for M in range(10))
    y = materialize(nat(Diag(Sq1m(2, 0))), nat_space(40, 1), 0.5)
    assert abs(ess_norm_est(y, 2, [0]) - 1.0) < 1e-2
    with pytest.raises(ValueError):
        ess_norm_est(x, 10, [0])


def test_text_form_round_trip():
    text = "(1-q^2)^1 * q^{2N}@2 * S*@3"
    e = OperatorExpr.from_text(text, ("Z", "N", "N"))
    assert e.text() == text
    assert OperatorExpr.from_text(e.text(), e.kinds).equals(e)


def test_errors():
    with pytest.raises(ValueError):
        materialize(tensor(nat(S), nat(S)), nat_space(4, 1), 0.5)
    with pytest.raises(ValueError):
        materialize(bil(S), nat_space(4, 1), 0.5)
    with pytest.raises(ValueError):
        materialize(nat(S), nat_space(4, 1), 1.0)
    with pytest.raises(DiagDomainError):
        materialize(nat(Diag(QPow(1, -1))), nat_space(4, 1), 0.0)
    with pytest.raises(ValueError):
        NatTrunc(1)


def test_bilateral_shift_direction():
    m = mat(bil(S), D=3, kind="Z")
    labels = list(range(-3, 4))
    # S e_k = e_{k-1}; the bottom vector e_{-3} leaves the window
    assert m[labels.index(0), labels.index(1)] == 1
    assert m[labels.index(2), labels.index(3)] == 1
    assert not m[:, labels.index(-3)].any()


def test_ge_expansion_matches_numerics():
    e = nat(Sd, Sd, S, S)
    assert np.array_equal(mat(e, D=6), np.diag([0, 0, 1, 1, 1, 1]))
    assert np.array_equal(mat(e.normalized(), D=6), mat(e, D=6))
    assert np.allclose(mat(nat(Diag(Ge(2))), D=5), np.diag([0, 0, 1, 1, 1]))


def test_kernel_backends_agree():
    rng = np.random.default_rng(3)
    tg = [rng.integers(-1, 5, 5), rng.integers(-1, 3, 3), rng.integers(-1, 4, 4)]
    va = [rng.uniform(0, 1, 5), rng.uniform(0, 1, 3), rng.uniform(0, 1, 4)]
    a = _kron_py.kron_coo(tg, va)
    b = kernels.kron_coo(tg, va)
    assert all(np.array_equal(x, y) for x, y in zip(a, b))
    assert kernels.BACKEND in ("cython", "python")


# ---- properties ---------------------------------------------------------

PRIMS = [Shift(), CoShift(), Proj(0), Proj(1), Diag(QPow(1, 0)), Diag(QPow(2, 2)),
         Diag(Sq1m(2, 2)), Diag(Sq1m(4, 4)), Id()]
words = st.lists(st.sampled_from(PRIMS), min_size=0, max_size=4).map(tuple)
coefs = st.sampled_from([1, -1, 0.5, 2j, 1 - 1j])


@st.composite
def exprs(draw, nf=2):
    terms = draw(st.lists(st.tuples(coefs, st.tuples(*[words] * nf)), min_size=1, max_size=3))
    out = OperatorExpr.zero(("N",) * nf)
    for c, ws in terms:
        out = out + tensor(*[nat(*w) for w in ws]) * c
    return out


SPACE = nat_space(4, 2)
Q = 0.6


def m2(e):
    return materialize(e, SPACE, Q).toarray()


@given(exprs(), exprs())
def test_materialize_is_homomorphism(a, b):
    assert np.allclose(m2(a @ b), m2(a) @ m2(b), atol=1e-13)
    assert np.allclose(m2(a + b), m2(a) + m2(b), atol=1e-13)


@given(exprs(), exprs(), exprs())
def test_star_algebra_laws(a, b, c):
    assert np.allclose(m2((a @ b) @ c), m2(a @ (b @ c)), atol=1e-12)
    assert np.allclose(m2(a @ (b + c)), m2(a @ b) + m2(a @ c), atol=1e-12)
    assert np.allclose(m2((a @ b).adjoint()), m2(b.adjoint() @ a.adjoint()), atol=1e-12)
    assert np.allclose(m2(a.adjoint()), m2(a).conj().T, atol=1e-13)
    assert a.adjoint().adjoint().equals(a)


@given(exprs())
def test_normal_form_agrees_away_from_the_top_edge(a):
    x = materialize(a - a.normalized(), nat_space(12, 2), Q)
    assert interior_residual(x, 5) < 1e-12


@given(exprs(), exprs())
def test_normal_form_is_canonical(a, b):
    assert (a @ b).normalized().equals((a.normalized() @ b.normalized()).normalized())
    assert a.normalized().normalized().text() == a.normalized().text()


@given(exprs())
def test_text_round_trip(a):
    assert OperatorExpr.from_text(a.text(), a.kinds).equals(a)


@given(exprs(), st.integers(0, 3))
def test_ess_norm_is_monotone(a, M):
    x = materialize(a, nat_space(8, 2), Q)
    assert 0 <= ess_norm_est(x, M + 1, [1]) <= ess_norm_est(x, M, [1]) + 1e-10
