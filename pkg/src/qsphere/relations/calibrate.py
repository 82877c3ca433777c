"""Calibration of the generator dictionary and of the (rho, eps) table.

Both searches score candidates by interior relation residuals of the
quotient images of the last quotient and require a unique winner.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from ..fock import bil, materialize, op_norm, Shift
from ..reps import DEFAULT_ASSIGNMENT, GeneratorAssignment, candidate_assignments, eta, eta_space
from .ncpoly import Letter
from .presentation import (RHO_EPS_FREE, PresentationParams, _InteriorProducts,
                           build_presentation, family_residuals)

__all__ = ["CalibrationError", "AssignmentResult", "assignment_search", "k1_constraint",
           "RhoEpsResult", "calibrate_rho_eps", "load_defaults", "default_params",
           "default_assignment"]


class CalibrationError(RuntimeError):
    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table or {}


def k1_constraint(assignment: GeneratorAssignment, n: int) -> bool:
    """The first quotient must send z_1 to t and every other generator to 0."""
    imgs = eta(1, n, assignment=assignment)
    return imgs[0].equals(bil(Shift())) and all(y.is_zero() for y in imgs[1:])


def _images(n, D, q, assignment):
    space = eta_space(2 * n, D)
    return {i + 1: materialize(y, space, q)
            for i, y in enumerate(eta(2 * n, n, assignment=assignment))}


@dataclass
class AssignmentResult:
    winner: GeneratorAssignment
    residual: float
    runner_up: str | None
    runner_up_residual: float
    table: dict = field(default_factory=dict)  # key -> residual, None when rejected

    @property
    def gap_orders(self) -> float:
        if self.residual == 0.0:
            return float("inf")
        return float(np.log10(self.runner_up_residual / self.residual))


def assignment_search(n: int, D: int = 16, q: float = 0.5, candidates=None, band: int = 3,
                      threshold: float = 1e-8) -> AssignmentResult:
    """Pick the dictionary with the smallest total residual of the rho/eps-free families."""
    candidates = candidates or candidate_assignments()
    rels = build_presentation(PresentationParams.standard(n), RHO_EPS_FREE)
    table: dict = {}
    for cand in candidates:
        if not k1_constraint(cand, n):
            table[cand.key()] = None
            continue
        res = family_residuals(rels, _images(n, D, q, cand), band, q)
        table[cand.key()] = float(sum(res.values()))
    ranked = sorted((v, k) for k, v in table.items() if v is not None)
    if not ranked or ranked[0][0] > threshold:
        raise CalibrationError("no admissible dictionary meets the residual threshold", table)
    best, key = ranked[0]
    runner = ranked[1] if len(ranked) > 1 else (float("inf"), None)
    return AssignmentResult(GeneratorAssignment.from_key(key), best, runner[1], runner[0], table)


@dataclass
class RhoEpsResult:
    params: PresentationParams
    residual: float
    runner_up_residual: float
    class_size: int
    observables: dict


def _c5_pairs(n):
    size = 2 * n
    return [(i, j) for i in range(1, size + 1) for j in range(1, size + 1)
            if i != j and i + j < size + 1]


def _norm_tables(n, D, q, band, assignment):
    """Residual norms of c5 and c7 as a function of their parameter-dependent coefficient."""
    size = 2 * n
    pr = lambda i: size + 1 - i  # noqa: E731
    prod = _InteriorProducts(_images(n, D, q, assignment), band).product
    z = Letter
    s_range = np.arange(-2 * n, 2 * n + 1)
    c5 = {}
    for i, j in _c5_pairs(n):
        a = prod((z(i, True), z(j))) - prod((z(j), z(i, True))) * q
        b = prod((z(pr(i)), z(pr(j), True))) * (1 - q * q)
        c5[(i, j)] = np.array([[op_norm(a - b * (sign * q ** float(s))) for s in s_range]
                               for sign in (1, -1)])
    c7 = {}
    r_range = np.arange(-n, n + 1)
    for i in range(1, n + 1):
        a = prod((z(i, True), z(i))) - prod((z(i), z(i, True)))
        for k in range(i + 1, size + 1):
            a = a - prod((z(k), z(k, True))) * (1 - q * q)
        b = prod((z(pr(i)), z(pr(i), True))) * (1 - q * q)
        c7[i] = np.array([op_norm(a - b * q ** float(2 * r)) for r in r_range])
    return c5, c7


def _canonical_cost(rho, eps, n):
    size = 2 * n
    return (sum(abs(rho[i] + rho[size - 1 - i]) for i in range(size))
            + sum(eps[i] != -eps[size - 1 - i] for i in range(size)))


def calibrate_rho_eps(n: int, D: int = 16, q: float = 0.5, band: int = 3,
                      assignment: GeneratorAssignment = DEFAULT_ASSIGNMENT) -> RhoEpsResult:
    """Exhaustive search over rho_i in [-n, n] and eps_i in {+1, -1}.

    Only rho_i + rho_j, eps_i eps_j (c5 pairs) and rho_i (i <= n, c7) are
    observable.  Tables sharing these values form one class; the winning
    class must be unique and is represented by the member with eps_1 = +1
    closest to rho_i' = -rho_i, eps_i' = -eps_i.
    """
    size = 2 * n
    c5, c7 = _norm_tables(n, D, q, band, assignment)
    pairs = _c5_pairs(n)
    rhos = np.array(list(itertools.product(range(-n, n + 1), repeat=size)), dtype=np.int64)
    ok = np.ones(len(rhos), dtype=bool)
    for i, j in pairs:
        ok &= rhos[:, i - 1] + rhos[:, j - 1] > 0
    rhos = rhos[ok]
    c7_score = sum(c7[i][rhos[:, i - 1] + n] for i in range(1, n + 1))
    sums = np.stack([rhos[:, i - 1] + rhos[:, j - 1] for i, j in pairs], axis=1)
    all_eps = list(itertools.product((1, -1), repeat=size))

    def scored(eps):
        score = c7_score.copy()
        for col, (i, j) in enumerate(pairs):
            row = 0 if eps[i - 1] * eps[j - 1] == 1 else 1
            score += c5[(i, j)][row, sums[:, col] + 2 * n]
        return score

    best, best_at = np.inf, None
    for eps in all_eps:
        score = scored(eps)
        idx = int(np.argmin(score))
        if score[idx] < best:
            best, best_at = float(score[idx]), (eps, idx)
    eps0, idx0 = best_at
    sig_sums = sums[idx0]
    sig_prods = tuple(eps0[i - 1] * eps0[j - 1] for i, j in pairs)
    sig_rho = rhos[idx0, :n]
    same_rho = np.all(sums == sig_sums, axis=1) & np.all(rhos[:, :n] == sig_rho, axis=1)
    runner, class_size, members = np.inf, 0, []
    for eps in all_eps:
        score = scored(eps)
        prods = tuple(eps[i - 1] * eps[j - 1] for i, j in pairs)
        mask = same_rho if prods == sig_prods else np.zeros(len(rhos), dtype=bool)
        class_size += int(mask.sum())
        if (~mask).any():
            runner = min(runner, float(score[~mask].min()))
        if eps[0] == 1:
            members.extend((tuple(int(x) for x in rhos[k]), eps) for k in np.flatnonzero(mask))
    rho, eps = min(members, key=lambda m: (_canonical_cost(m[0], m[1], n), m[0], m[1]))
    best_sig = (tuple(int(x) for x in sig_sums), sig_prods, tuple(int(x) for x in sig_rho))
    observables = {"c5": {f"{i},{j}": [s, e] for (i, j), s, e in zip(pairs, best_sig[0], best_sig[1])},
                   "c7": {str(i + 1): r for i, r in enumerate(best_sig[2])}}
    return RhoEpsResult(PresentationParams(n, rho, eps), best, float(runner),
                        class_size, observables)


def load_defaults() -> dict:
    return json.loads(resources.files("qsphere").joinpath("data/defaults.json").read_text())


def default_params(n: int) -> PresentationParams:
    """Frozen calibrated table when stored, otherwise the standard pattern."""
    entry = load_defaults()["rho_eps"].get(str(n))
    if entry is None:
        return PresentationParams.standard(n)
    return PresentationParams(n, tuple(entry["rho"]), tuple(entry["eps"]))


def default_assignment() -> GeneratorAssignment:
    return GeneratorAssignment.from_key(load_defaults()["assignment"])
