"""Command-line driver: every verification as a command with a JSON report."""
from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .fock import materialize, OperatorExpr
from .fredholm import (NotStabilizedError, RankAmbiguityError, SIGMA_GLOBAL, index,
                       winding_oracle)
from .relations import (PresentationParams, build_presentation, compare_q0, family_residuals,
                        q_zero_presentation)
from .relations.calibrate import default_params
from .reps import (GeneratorAssignment, diagonal_closed_form, elementary_rep, eta, eta_space)
from .report import Report
from .spheres import (am_generators, homogeneity_probe, qds_as_sphere, qds_tower, sigma_check,
                      sphere_generators, sphere_space)

__all__ = ["main", "COMMANDS"]

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_INTERNAL = 0, 1, 2, 3


def _assignment(cfg: RunConfig) -> GeneratorAssignment:
    try:
        return GeneratorAssignment.from_key(cfg.assignment)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _params(cfg: RunConfig) -> PresentationParams:
    if cfg.rho is not None:
        return PresentationParams(cfg.n, tuple(cfg.rho), tuple(cfg.eps))
    return default_params(cfg.n)


def _max_dev(a: OperatorExpr, b: OperatorExpr, space, q: float) -> float:
    diff = materialize(a, space, q) - materialize(b, space, q)
    return float(np.abs(diff.mat.data).max()) if diff.mat.nnz else 0.0


def cmd_relations_verify(cfg: RunConfig, rep: Report) -> None:
    n = cfg.n
    params = _params(cfg)
    assignment = _assignment(cfg)
    rels = q_zero_presentation(n, params) if cfg.q == 0.0 else build_presentation(params)
    for k in cfg.k or (2 * n,):
        if not 1 <= k <= 2 * n:
            raise ConfigError(f"k={k} out of range 1..{2 * n}")
        space = eta_space(k, cfg.D)
        imgs = {i + 1: materialize(y, space, cfg.q)
                for i, y in enumerate(eta(k, n, assignment=assignment))}
        res = family_residuals(rels, imgs, cfg.band, cfg.q, params)
        for label, value in res.items():
            rep.add(f"{label}@k={k}", {"k": k, "band": cfg.band, "diagnostic_only": cfg.band == 0},
                    value, 0.0, cfg.residual_tol, value <= cfg.residual_tol)


def cmd_index(cfg: RunConfig, rep: Report) -> None:
    for ell in cfg.ell:
        for m in cfg.m:
            key = f"[m={m},ell={ell}]"
            try:
                res = index(m, ell, cfg.ladder, cfg.rank_tol)
            except (NotStabilizedError, RankAmbiguityError, ValueError) as exc:
                rep.add("index" + key, {"m": m, "ell": ell, "error": str(exc)},
                        None, SIGMA_GLOBAL * m, 0, False)
                continue
            params = {"m": m, "ell": ell, "dims": [list(d) for d in res.dims],
                      "stable_from": res.stable_from, "sigma": res.sigma,
                      "pairing": res.pairing}
            rep.add("index" + key, params, res.index, SIGMA_GLOBAL * m, 0,
                    res.index == SIGMA_GLOBAL * m)
            oracle = winding_oracle(m)
            rep.add("winding-oracle" + key, {"m": m, "ell": ell, "oracle": oracle},
                    abs(res.index), abs(oracle), 0, abs(res.index) == abs(oracle))


def cmd_ext_check(cfg: RunConfig, rep: Report) -> None:
    n = cfg.n
    ks = cfg.k or tuple(range(1, 2 * n))
    for k in ks:
        for r in sigma_check(k, n, cfg.q, cfg.D):
            rep.add(f"sigma[k={k},l={r.l}]", {"symbolic": r.symbolic}, r.deviation, 0.0,
                    0.0 if r.symbolic else 1e-9, r.passed)
    for k in ks:
        h = homogeneity_probe(k, n, cfg.q, cfg.ess_D, cfg.t0_samples, cfg.M_grid, cfg.ess_tol)
        rep.add(f"homogeneity[k={k}]",
                {"M_grid": h.grid, "D": h.D, "estimates": h.values, "monotone": h.monotone,
                 "converged": h.converged, "probe": h.probe_values},
                min(v[-1] for v in h.values), 1.0, cfg.ess_tol, h.passed)
    for ell in cfg.ell:
        am = am_generators(1, ell)
        sph = sphere_generators(ell + 1)
        space = sphere_space(ell + 1, cfg.D)
        dev = max(_max_dev(a, g, space, 0.0) for a, g in zip(am.exprs, sph))
        rep.add(f"am1-vs-sphere[ell={ell}]", {"listed": am.listed}, dev, 0.0, 0.0,
                dev == 0.0 and am.listed == ell + 2)


def cmd_qzero_diff(cfg: RunConfig, rep: Report) -> None:
    for rec in compare_q0(cfg.n, cfg.D, cfg.band, cfg.sphere_ell):
        target = 0 if isinstance(rec["value"], (int, float)) else None
        rep.add(rec["id"], {"detail": rec["detail"]}, rec["value"], target, 0, rec["passed"])


def cmd_qds_check(cfg: RunConfig, rep: Report) -> None:
    for ell in cfg.ell:
        ours = qds_as_sphere(qds_tower(ell), reverse=cfg.reverse)
        ref = sphere_generators(ell)
        space = sphere_space(ell, cfg.D)
        if any(a.kinds != b.kinds for a, b in zip(ours, ref)):
            rep.add(f"qds[ell={ell}]", {"reverse": cfg.reverse, "error": "factor layout mismatch"},
                    None, 0.0, 0.0, False)
            continue
        symbolic = all(a.equals(b) for a, b in zip(ours, ref))
        dev = max(_max_dev(a, b, space, 0.0) for a, b in zip(ours, ref))
        rep.add(f"qds[ell={ell}]", {"reverse": cfg.reverse, "symbolic": symbolic},
                dev, 0.0, 0.0, symbolic and dev == 0.0)


def _sn_reference(n: int) -> dict:
    return {(n, n): "sqrt(1-q^{4N+4}).S@1", (n + 1, n + 1): "S*.sqrt(1-q^{4N+4})@1",
            (n, n + 1): "-1 * q^{2N+2}@1", (n + 1, n): "q^{2N}@1"}


def rep_dump_tsv(n: int, assignment: GeneratorAssignment) -> str:
    chunks = []
    for i in range(1, n + 1):
        chunks.append(f"# elementary i={i}\n" + elementary_rep(i, n).dump())
    for k in range(1, 2 * n + 1):
        lines = [f"# eta k={k}"]
        lines += [f"{l}\t{y.text()}" for l, y in enumerate(eta(k, n, assignment=assignment), 1)]
        chunks.append("\n".join(lines) + "\n")
    return "".join(chunks)


def cmd_rep_dump(cfg: RunConfig, rep: Report) -> str:
    n = cfg.n
    assignment = _assignment(cfg)
    table = elementary_rep(n, n)
    for key, text in _sn_reference(n).items():
        got = table[key].text()
        rep.add(f"s_n-entry[{key[0]},{key[1]}]", {"text": got}, got, text, None, got == text)
    first = eta(1, n, assignment=assignment)
    ok = first[0].text() == "S@1" and all(y.is_zero() for y in first[1:])
    rep.add("k1-image", {"texts": [y.text() for y in first]}, ok, True, None, ok)
    for k in range(n + 1, 2 * n):
        y = eta(k, n, assignment=assignment)[k - 1]
        ref = diagonal_closed_form(k, n)
        space = eta_space(k, cfg.D)
        dev = _max_dev(y, ref, space, cfg.q)
        rep.add(f"closed-form[k={k}]", {"text": y.text(), "reference": ref.text()},
                dev, 0.0, 1e-10, dev <= 1e-10)
    return rep_dump_tsv(n, assignment)


COMMANDS = {
    "relations-verify": cmd_relations_verify,
    "index": cmd_index,
    "ext-check": cmd_ext_check,
    "qzero-diff": cmd_qzero_diff,
    "qds-check": cmd_qds_check,
    "rep-dump": cmd_rep_dump,
}

_FLAGS = {"n": int, "q": float, "D": int, "band": int, "k": str, "m": str, "ell": str,
          "ladder": str, "output": str, "format": str}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qsphere", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value file")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override any config key")
        for flag, typ in _FLAGS.items():
            p.add_argument(f"--{flag}", type=typ, default=None)
        p.add_argument("--timing", action="store_true", help="record wall time in the report")
    return parser


def run(argv=None) -> tuple[int, str, str, str | None]:
    """Execute a command; returns (exit code, stdout text, stderr text, output path)."""
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_CONFIG if exc.code else EXIT_PASS), "", "", None
    overrides = {k: getattr(args, k) for k in _FLAGS if getattr(args, k) is not None}
    if args.timing:
        overrides["timing"] = True
    try:
        for item in args.set:
            if "=" not in item:
                raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
            key, value = item.split("=", 1)
            overrides[key.strip()] = value.strip()
        cfg = load_config(args.config, overrides)
    except ConfigError as exc:
        return EXIT_CONFIG, "", f"config error: {exc}\n", None
    rep = Report(args.command, cfg.as_dict())
    start = time.perf_counter()
    try:
        extra = COMMANDS[args.command](cfg, rep)
    except ConfigError as exc:
        return EXIT_CONFIG, "", f"config error: {exc}\n", None
    except Exception as exc:  # noqa: BLE001
        return EXIT_INTERNAL, "", f"internal error: {type(exc).__name__}: {exc}\n", None
    if cfg.timing:
        rep.elapsed_ms = round((time.perf_counter() - start) * 1000.0, 3)
    code = EXIT_PASS if rep.passed else EXIT_FAIL
    if cfg.format == "tsv" and isinstance(extra, str):
        return code, extra, rep.to_json(), cfg.output
    return code, rep.to_json(), "", cfg.output


def main(argv=None) -> int:
    code, out, err, path = run(argv)
    if out and path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(out)
    elif out:
        sys.stdout.write(out)
    if err:
        sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
