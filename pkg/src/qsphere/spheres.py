"""Odd quantum spheres at q=0, their extensions and the quotient symbol maps."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .fock import (CoShift, IntTrunc, NatTrunc, OperatorExpr, P0, Shift,
                   SpaceSpec, bil, ess_norm_est, interior_mask, interior_residual, materialize,
                   nat, one, power, single, symbol_value, tensor)
from .reps import circle_points, eta, eta_space

__all__ = [
    "sphere_generators", "sphere_space", "qds", "qds_tower", "qds_as_sphere",
    "phi_m_images", "AmGenerators", "am_generators", "sigma", "sigma_check",
    "SigmaRecord", "homogeneity_probe", "HomogeneityReport", "q0_literal_deviation",
    "q0_intertwiner", "IntertwinerResult",
]

T = bil(Shift())  # coordinate function of the circle as the bilateral shift


def _p(count: int) -> list[OperatorExpr]:
    return [nat(P0)] * count


def _ones(count: int) -> list[OperatorExpr]:
    return [one("N")] * count


def sphere_generators(ell: int) -> list[OperatorExpr]:
    """Generators of the odd sphere of dimension 2*ell+1 on N^ell (x) Z."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    gens = []
    for r in range(1, ell + 1):
        gens.append(tensor(*_p(r - 1), nat(CoShift()), *_ones(ell - r), one("Z")))
    gens.append(tensor(*_p(ell), T))
    return gens


def sphere_space(ell: int, D: int, radius: int | None = None) -> SpaceSpec:
    return SpaceSpec((NatTrunc(D),) * ell + (IntTrunc(radius or D),))


def qds(gens: list[OperatorExpr]) -> list[OperatorExpr]:
    """Quantum double suspension: g -> g (x) p, together with 1 (x) S."""
    if not gens:
        raise ValueError("need at least one generator")
    kinds = gens[0].kinds
    return [g.tensor(nat(P0)) for g in gens] + [OperatorExpr.identity(kinds).tensor(nat(Shift()))]


def qds_tower(ell: int) -> list[OperatorExpr]:
    gens = [T]
    for _ in range(ell):
        gens = qds(gens)
    return gens


def qds_as_sphere(gens: list[OperatorExpr], reverse: bool = True) -> list[OperatorExpr]:
    """Bring an iterated suspension of [t] into the sphere-generator layout.

    Factors are reversed (the circle moves last), the list order is reversed
    and each generator coming from a ``1 (x) S`` step is replaced by its
    adjoint.  With ``reverse=False`` only the adjoints and the list order are
    applied.
    """
    out = []
    for k, g in enumerate(gens):
        h = g.reversed() if reverse else g
        out.append(h if k == 0 else h.adjoint())
    return out[::-1]


def phi_m_images(m: int, ell: int) -> list[OperatorExpr]:
    """Images of the 2*ell+1 sphere generators under the m-th extension map."""
    imgs = []
    for r in range(1, ell + 1):
        imgs.append(tensor(*_p(r - 1), nat(CoShift()), *_ones(ell - r), one("N"), one("Z")))
    imgs.append(tensor(*_p(ell), single(*power(CoShift(), m)), one("Z")))
    return imgs


@dataclass(frozen=True)
class AmGenerators:
    m: int
    ell: int
    exprs: list = field(repr=False)
    ideal: str = "K(l2(N^(ell+1))) (x) C(T)"

    @property
    def listed(self) -> int:
        return len(self.exprs) + 1


def am_generators(m: int, ell: int) -> AmGenerators:
    return AmGenerators(m, ell, phi_m_images(m, ell))


def sigma(e: OperatorExpr) -> OperatorExpr:
    """Apply the symbol map to the last (half-line) factor."""
    if not e.kinds or e.kinds[-1] != "N":
        raise ValueError("the symbol map acts on a trailing half-line factor")
    acc = {}
    for (words, a, b), c in e.normalized().terms.items():
        v = symbol_value(words[-1])
        if v:
            key = (words[:-1], a, b)
            acc[key] = acc.get(key, 0) + c * v
    return OperatorExpr(e.kinds[:-1], acc).normalized()


@dataclass(frozen=True)
class SigmaRecord:
    l: int
    symbolic: bool
    deviation: float
    passed: bool


def sigma_check(k: int, n: int, q: float = 0.5, D: int = 16, band: int = 3,
                tol: float = 1e-9) -> list[SigmaRecord]:
    """Compare the symbol of each image in quotient k+1 with the image in quotient k."""
    if not 1 <= k < 2 * n:
        raise ValueError("k must satisfy 1 <= k < 2n")
    upper = eta(k + 1, n)
    lower = eta(k, n)
    out = []
    space = eta_space(k, D)
    for l, (hi, lo) in enumerate(zip(upper, lower), start=1):
        s = sigma(hi)
        if s.equals(lo):
            out.append(SigmaRecord(l, True, 0.0, True))
            continue
        dev = interior_residual(materialize(s - lo, space, q), band)
        out.append(SigmaRecord(l, False, dev, dev <= tol))
    return out


@dataclass
class HomogeneityReport:
    k: int
    n: int
    q: float
    D: int
    grid: list
    points: list
    values: list            # values[point][M] for the lift product
    probe_values: list      # circle-injectivity probe at each point
    target: float = 1.0
    tol: float = 0.05
    monotone: bool = True
    converged: bool = True
    passed: bool = True


def homogeneity_probe(k: int, n: int, q: float = 0.5, D: int = 48, t0_samples: int = 8,
                      M_grid=(4, 8, 12, 16, 20), ess_tol: float = 0.05,
                      probe_min: float = 0.9) -> HomogeneityReport:
    """Tail-compression estimates of the essential norm of y y* at sample points.

    ``y`` is the image of z_k in quotient k+1 evaluated at a circle point,
    which lifts the image of z_k in quotient k.
    """
    if not 1 <= k <= 2 * n - 1:
        raise ValueError("k must satisfy 1 <= k <= 2n-1")
    grid = list(M_grid)
    space = SpaceSpec((NatTrunc(D),) * k)
    last = k - 1
    values, probes = [], []
    monotone = converged = ok = True
    for t0 in circle_points(t0_samples):
        lift = eta(k + 1, n, circle=t0)[k - 1]
        x = materialize(lift @ lift.adjoint(), space, q)
        est = [ess_norm_est(x, M, [last]) for M in grid]
        values.append(est)
        if any(b > a + 1e-10 for a, b in zip(est, est[1:])):
            monotone = False
        if len(est) > 1 and abs(est[-1] - est[-2]) >= 1e-3:
            converged = False
        if not (1.0 - ess_tol <= est[-1] <= 1.0 + 1e-10):
            ok = False
        probe = tensor(*_p(k - 1), nat(CoShift())) * t0
        pv = ess_norm_est(materialize(probe, space, q), grid[-1], [last])
        probes.append(pv)
        if pv < probe_min:
            ok = False
    return HomogeneityReport(k, n, q, D, grid, circle_points(t0_samples), values, probes,
                             1.0, ess_tol, monotone, converged, ok and monotone and converged)


def q0_literal_deviation(n: int, D: int, radius: int | None = None) -> float:
    """Largest entrywise gap between q=0 quotient images and sphere generators.

    The quotient images are brought to the sphere layout by reversing the
    tensor factors.
    """
    ell = 2 * n - 1
    space = sphere_space(ell, D, radius)
    dev = 0.0
    for y, g in zip(eta(2 * n, n), sphere_generators(ell)):
        diff = materialize(y.reversed(), space, 0.0) - materialize(g, space, 0.0)
        if diff.mat.nnz:
            dev = max(dev, float(np.abs(diff.mat.data).max()))
    return dev


@dataclass
class IntertwinerResult:
    mapped: int
    interior: int
    max_deviation: float
    injective: bool
    circle_signs: dict

    @property
    def passed(self) -> bool:
        return self.max_deviation == 0.0 and self.injective and self.mapped > 0


def _monomial_columns(mat):
    """Column -> (row, value) for a matrix with at most one entry per column."""
    csc = mat.tocsc()
    counts = np.diff(csc.indptr)
    if counts.max(initial=0) > 1:
        return None
    cols = np.flatnonzero(counts)
    return {int(c): (int(csc.indices[csc.indptr[c]]), complex(csc.data[csc.indptr[c]]))
            for c in cols}


def q0_intertwiner(n: int, D: int, radius: int | None = None, band: int = 2) -> IntertwinerResult:
    """Signed basis permutation W with W y_l = g_l W at q=0, built by search.

    Starting from the vacuum, W is propagated along the action of every
    generator and its adjoint.  Each step is checked for consistency; a
    step whose source and target both lie in the interior band is exact on
    both sides, so the reported deviation is an entrywise comparison of
    ``W y_l W*`` with ``g_l`` on the explored subspace.
    """
    ell = 2 * n - 1
    R = radius or D
    a_space = eta_space(2 * n, D, radius=R)
    b_space = sphere_space(ell, D, R)
    a_ops = [materialize(y, a_space, 0.0) for y in eta(2 * n, n)]
    b_ops = [materialize(g, b_space, 0.0) for g in sphere_generators(ell)]
    a_in = interior_mask(a_space, band)
    b_in = interior_mask(b_space, band)
    moves = []
    for x, y in zip(a_ops, b_ops):
        for xa, yb in ((x.mat, y.mat), (x.adjoint().mat, y.adjoint().mat)):
            ca, cb = _monomial_columns(xa), _monomial_columns(yb)
            if ca is None or cb is None:
                return IntertwinerResult(0, int(a_in.sum()), float("inf"), False, {})
            moves.append((ca, cb))
    start_a = a_space.flat_index((0,) + (0,) * ell)
    start_b = b_space.flat_index((0,) * ell + (0,))
    W = {start_a: (start_b, 1 + 0j)}
    used = {start_b}
    injective = True
    dev = 0.0
    queue = deque([start_a])
    while queue:
        a = queue.popleft()
        b, phase = W[a]
        for ca, cb in moves:
            ta, tb = ca.get(a), cb.get(b)
            if ta is None and tb is None:
                continue
            if ta is None or tb is None:
                dev = max(dev, abs((ta or tb)[1]))
                continue
            (ra, va), (rb, vb) = ta, tb
            new_phase = phase * vb / va
            if abs(abs(new_phase) - 1) > 0:
                dev = max(dev, abs(abs(new_phase) - 1))
            if not (a_in[ra] and b_in[rb]):
                continue
            if ra in W:
                ob, ophase = W[ra]
                if ob != rb:
                    dev = max(dev, abs(va))
                else:
                    dev = max(dev, abs(ophase - new_phase))
                continue
            if rb in used:
                injective = False
                continue
            W[ra] = (rb, new_phase)
            used.add(rb)
            queue.append(ra)
    signs = {}
    for a, (b, ph) in W.items():
        lab_a = a_space.labels_of(a)
        if all(x == 0 for x in lab_a[1:]):
            signs[lab_a[0]] = ph
    return IntertwinerResult(len(W), int(a_in.sum()), dev, injective,
                             dict(sorted(signs.items())))
