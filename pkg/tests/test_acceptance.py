"""Acceptance criteria 1-9, one test each.

Each test prints a ``criterion N: PASS|FAIL`` line; the lines are repeated in
the terminal summary.  Run on its own with ``python3 tests/test_acceptance.py``.
"""
import time

import numpy as np
import pytest

from qsphere.fock import interior_residual, materialize
from qsphere.fredholm import SIGMA_GLOBAL, am_pairing, index, winding_oracle
from qsphere.relations import build_presentation, compare_q0, family_residuals
from qsphere.relations.calibrate import assignment_search, calibrate_rho_eps, default_params
from qsphere.reps import diagonal_closed_form, elementary_rep, eta, eta_space
from qsphere.spheres import (homogeneity_probe, qds_as_sphere, qds_tower, sigma_check,
                             sphere_generators, sphere_space)

from test_reps import LATEX_S_I, LATEX_S_N, latex_to_text, resolve

RESULTS = {}
NOISE_FLOOR = 1e-13


def report(num, passed, detail):
    line = f"criterion {num}: {'PASS' if passed else 'FAIL'}  {detail}"
    RESULTS[num] = line
    print(line)
    return passed


def max_entry(x):
    return float(np.abs(x.mat.data).max()) if x.mat.nnz else 0.0


def test_criterion_1_index_pairing():
    worst_time, bad = 0.0, []
    for ell in (1, 2, 3):
        for m in range(-3, 4):
            start = time.perf_counter()
            res = index(m, ell, ladder=(8, 12, 16, 24, 32, 40))
            worst_time = max(worst_time, time.perf_counter() - start)
            if not res.stabilized or res.index != SIGMA_GLOBAL * m:
                bad.append((m, ell, res.index))
            if abs(res.index) != abs(winding_oracle(m)):
                bad.append((m, ell, "oracle"))
    ok = not bad and worst_time < 5.0
    assert report(1, ok, f"sigma={SIGMA_GLOBAL} mismatches={bad} worst={worst_time:.2f}s")


def relation_residuals(n, q, D, band=3):
    params = default_params(n)
    imgs = {i + 1: materialize(y, eta_space(2 * n, D), q) for i, y in enumerate(eta(2 * n, n))}
    return family_residuals(build_presentation(params), imgs, band, q, params)


def test_criterion_2_relation_suite():
    start = time.perf_counter()
    worst, growth = 0.0, []
    for n, D, D_big in ((2, 16, 32), (3, 8, 10)):
        for q in (0.2, 0.5, 0.8):
            small = relation_residuals(n, q, D)
            big = relation_residuals(n, q, D_big)
            worst = max(worst, max(small.values()))
            growth += [(n, q, k) for k, v in big.items()
                       if v > max(small[k], NOISE_FLOOR)]
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-9 and not growth and elapsed < 600
    assert report(2, ok, f"max residual={worst:.2e} growth={growth} {elapsed:.0f}s")


def test_criterion_3_closed_forms():
    n, k, D = 2, 3, 16
    y = eta(k, n)[k - 1]
    space = eta_space(k, D)
    dev = interior_residual(materialize(y - diagonal_closed_form(k, n), space, 0.5), 3)
    tables_ok = True
    for i in range(1, n):
        rep = elementary_rep(i, n)
        tables_ok &= all(rep[resolve(key, i, n)].text() == latex_to_text(v)
                         for key, v in LATEX_S_I.items())
    rep = elementary_rep(n, n)
    tables_ok &= all(rep[resolve(key, n, n)].text() == latex_to_text(v)
                     for key, v in LATEX_S_N.items())
    ok = dev <= 1e-10 and tables_ok
    assert report(3, ok, f"y_3^3 deviation={dev:.3g} tables={'match' if tables_ok else 'differ'}"
                         f" computed={y.text()!r}")


def test_criterion_4_sigma():
    recs = [(k, r) for k in (1, 2, 3) for r in sigma_check(k, 2)]
    ok = all(r.symbolic for _, r in recs)
    assert report(4, ok, f"{sum(r.symbolic for _, r in recs)}/{len(recs)} symbolic")


def test_criterion_5_homogeneity():
    lows, ok = [], True
    for k in (1, 2, 3):
        h = homogeneity_probe(k, 2, q=0.5, D=48, t0_samples=8, M_grid=(4, 8, 12, 16, 20))
        lows.append(min(v[-1] for v in h.values))
        ok &= h.passed and h.monotone
        ok &= all(0.95 <= v[-1] <= 1.0 + 1e-10 for v in h.values)
    assert report(5, ok, "min estimate per k=" + ", ".join(f"{v:.4f}" for v in lows))


def test_criterion_6_q_zero():
    recs = {r["id"]: r for r in compare_q0(2, 8)}
    literal = recs["images-equal-generators"]
    annihilate = recs["annihilates-sphere"]
    ok = literal["passed"] and annihilate["passed"] and recs["relation-sets"]["passed"]
    inter = recs["signed-permutation-intertwiner"]
    assert report(6, ok, f"entrywise deviation={literal['value']} annihilation="
                         f"{annihilate['value']} signed-intertwiner="
                         f"{'ok' if inter['passed'] else 'fails'}")


def test_criterion_7_qds_tower():
    worst = 0.0
    symbolic = True
    for ell in (1, 2, 3):
        ours = qds_as_sphere(qds_tower(ell))
        ref = sphere_generators(ell)
        symbolic &= all(a.equals(b) for a, b in zip(ours, ref))
        space = sphere_space(ell, 8)
        for a, b in zip(ours, ref):
            worst = max(worst, max_entry(materialize(a, space, 0.0) - materialize(b, space, 0.0)))
    assert report(7, symbolic and worst == 0.0, f"deviation={worst} symbolic={symbolic}")


def test_criterion_8_extension_classes():
    got = {m: am_pairing(m).index for m in (0, 1, 2)}
    ok = all(got[m] == SIGMA_GLOBAL * m for m in got)
    assert report(8, ok, f"index={got} sigma={SIGMA_GLOBAL}")


def test_criterion_9_calibration():
    a = assignment_search(2, D=16, q=0.5)
    r = calibrate_rho_eps(2, D=16, q=0.5)
    a_gap = a.gap_orders
    r_gap = np.inf if r.residual == 0 else np.log10(r.runner_up_residual / r.residual)
    ok = a_gap >= 6 and r_gap >= 6 and r.params == default_params(2)
    assert report(9, ok, f"assignment {a.winner.key()} gap={a_gap} orders; rho/eps gap="
                         f"{r_gap:.1f} orders")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
