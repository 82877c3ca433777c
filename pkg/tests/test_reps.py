import re

import numpy as np
import pytest

from qsphere.fock import IntTrunc, NatTrunc, OperatorExpr, SpaceSpec, bil, materialize, S
from qsphere.relations import PresentationParams, build_presentation, family_residuals
from qsphere.reps import (DEFAULT_ASSIGNMENT, GeneratorAssignment, RepMap, candidate_assignments,
                          circle_points, convolve, diagonal_closed_form, elementary_rep, eta,
                          eta_space, omega, torus_char, word_rep)

# entries of the elementary representations in LaTeX notation
LATEX_S_I = {
    "(i,i)": r"\sqrt{1-q^{2N+2}}S", "(2n-i,2n-i)": r"\sqrt{1-q^{2N+2}}S",
    "(i+1,i+1)": r"S^*\sqrt{1-q^{2N+2}}", "(2n-i+1,2n-i+1)": r"S^*\sqrt{1-q^{2N+2}}",
    "(i,i+1)": "-q^{N+1}", "(i+1,i)": "q^N", "(2n-i,2n-i+1)": "q^{N+1}", "(2n-i+1,2n-i)": "-q^N",
}
LATEX_S_N = {
    "(n,n)": r"\sqrt{1-q^{4N+4}}S", "(n+1,n+1)": r"S^*\sqrt{1-q^{4N+4}}",
    "(n,n+1)": "-q^{2N+2}", "(n+1,n)": "q^{2N}",
}


def latex_to_text(s: str) -> str:
    """Translate LaTeX notation into the canonical expression text."""
    sign = s.startswith("-")
    s = s.lstrip("-")
    s = re.sub(r"q\^N(?![{\w])", "q^{N}", s)
    toks = re.findall(r"\\sqrt\{1-q\^\{[^}]*\}\}|S\^\*|S|q\^\{[^}]*\}", s)
    out = []
    for t in toks:
        if t.startswith(r"\sqrt"):
            out.append("sqrt(1-" + t[len(r"\sqrt{1-"):-1] + ")")
        elif t == "S^*":
            out.append("S*")
        else:
            out.append(t)
    body = ".".join(out) + "@1"
    return f"-1 * {body}" if sign else body


def resolve(key, i, n):
    k, l = key.strip("()").replace("2n", "2*n").split(",")
    env = {"i": i, "n": n}
    return eval(k, {}, env), eval(l, {}, env)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_elementary_tables_match_latex_entries(n):
    for i in range(1, n):
        rep = elementary_rep(i, n)
        seen = set()
        for key, latex in LATEX_S_I.items():
            kl = resolve(key, i, n)
            seen.add(kl)
            assert rep[kl].text() == latex_to_text(latex), (i, key)
        for k in range(1, 2 * n + 1):
            for l in range(1, 2 * n + 1):
                if (k, l) not in seen:
                    assert rep[(k, l)].text() == ("1" if k == l else "0")
    rep = elementary_rep(n, n)
    seen = set()
    for key, latex in LATEX_S_N.items():
        kl = resolve(key, n, n)
        seen.add(kl)
        assert rep[kl].text() == latex_to_text(latex)
    for k in range(1, 2 * n + 1):
        for l in range(1, 2 * n + 1):
            if (k, l) not in seen:
                assert rep[(k, l)].text() == ("1" if k == l else "0")


def test_elementary_rep_range():
    with pytest.raises(ValueError):
        elementary_rep(0, 2)
    with pytest.raises(ValueError):
        elementary_rep(3, 2)


def test_torus_character():
    t = (1j, -1)
    rep = torus_char(t, 2)
    assert rep.scalar(1, 1) == pytest.approx(-1j)
    assert rep.scalar(4, 4) == pytest.approx(1j)
    assert rep.scalar(2, 3) == 0
    with pytest.raises(ValueError):
        torus_char((2.0, 1), 2)


def test_omega_lengths():
    for n in (2, 3, 4):
        for k in range(1, 2 * n + 1):
            assert len(omega(k, n)) == k - 1
    assert omega(4, 2) == (1, 2, 1)
    with pytest.raises(ValueError):
        omega(5, 2)


@pytest.mark.parametrize("n", [2, 3])
def test_first_quotient_is_t_delta(n):
    imgs = eta(1, n)
    assert imgs[0].equals(bil(S))
    assert all(y.is_zero() for y in imgs[1:])
    pt = circle_points(8)[3]
    imgs = eta(1, n, circle=pt)
    assert imgs[0].kinds == ()
    assert sum(imgs[0].terms.values()) == pytest.approx(pt)


@pytest.mark.parametrize("n", [2, 3])
def test_images_vanish_beyond_k(n):
    for k in range(1, 2 * n + 1):
        imgs = eta(k, n)
        for l in range(k + 1, 2 * n + 1):
            assert imgs[l - 1].normalized().is_zero(), (k, l)
        assert not imgs[k - 1].is_zero()


def test_diagonal_image_closed_form_n3():
    for k in (4, 5):
        assert eta(k, 3)[k - 1].equals(diagonal_closed_form(k, 3))


def test_diagonal_image_n2_matches_up_to_sign():
    y = eta(3, 2)[2]
    ref = diagonal_closed_form(3, 2)
    assert not y.equals(ref)
    assert y.equals(-ref)
    assert ref.text() == "S@1 * q^{N}@2 * q^{2N}@3"


def test_q_zero_images_are_shift_and_projection_words():
    allowed = {"S", "S*", "p", "1"}
    for n in (2, 3):
        for k in range(1, 2 * n + 1):
            for y in eta(k, n):
                space = eta_space(k, 6)
                x = materialize(y, space, 0.0)
                if x.mat.nnz:
                    assert set(np.unique(np.abs(x.mat.data))) <= {1.0}
                for (ws, a, b) in y.normalized().terms:
                    for w in ws:
                        for prim in w:
                            tag = type(prim).__name__
                            assert tag in ("Shift", "CoShift", "Proj", "Diag", "Id")


def test_convolution_is_associative_on_subwords():
    n = 2
    word = (0,) + omega(4, n)  # 0 stands for the circle
    reps = {0: torus_char((1j, 1), n)}
    reps.update({i: elementary_rep(i, n) for i in (1, 2)})
    for start in range(len(word) - 2):
        a, b, c = (reps[x] for x in word[start:start + 3])
        left = convolve(convolve(a, b), c)
        right = convolve(a, convolve(b, c))
        assert left.equals(right)


def test_reduced_word_independence_residual_level():
    n = 2
    params = PresentationParams.standard(n)
    rels = build_presentation(params)
    space = SpaceSpec((NatTrunc(9),) * 4)
    out = []
    for word in ((1, 2, 1, 2), (2, 1, 2, 1)):
        rep = word_rep(word, 1.0, n)
        imgs = {i + 1: materialize(y, space, 0.5)
                for i, y in enumerate(DEFAULT_ASSIGNMENT.images(rep))}
        res = family_residuals(rels, imgs, 3, 0.5, params)
        assert max(res.values()) <= 1e-9
        vac = [complex(x.mat[0, 0]) for _, x in sorted(imgs.items())]
        out.append(vac)
    assert np.allclose(out[0], out[1], atol=1e-9)


def test_dump_round_trip():
    for rep in (elementary_rep(1, 2), word_rep(omega(3, 2), "bilateral", 2), torus_char((1,), 1)):
        back = RepMap.load(rep.dump())
        assert back.equals(rep)
        assert back.dump() == rep.dump()


def test_assignment_keys():
    assert len(candidate_assignments()) == 8
    for a in candidate_assignments():
        assert GeneratorAssignment.from_key(a.key()) == a
    assert DEFAULT_ASSIGNMENT.key() == "last-rev-plain"
    with pytest.raises(ValueError):
        GeneratorAssignment.from_key("middle-rev-plain")


def test_space_layout():
    sp = eta_space(3, 5)
    assert sp.factors[0] == IntTrunc(5)
    assert sp.factors[1:] == (NatTrunc(5), NatTrunc(5))
    assert eta_space(3, 5, circle=1.0).factors == (NatTrunc(5), NatTrunc(5))
