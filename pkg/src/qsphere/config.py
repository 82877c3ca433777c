"""Run configuration: flat key=value files plus command-line overrides."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields

__all__ = ["RunConfig", "ConfigError", "parse_kv", "load_config"]


class ConfigError(ValueError):
    pass


def _ints(text) -> tuple:
    if isinstance(text, (list, tuple)):
        return tuple(int(x) for x in text)
    return tuple(int(x) for x in str(text).replace(" ", "").split(",") if x)


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    low = str(text).strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def _opt_ints(text):
    if text is None or str(text).strip().lower() in ("", "none", "default"):
        return None
    return _ints(text)


@dataclass
class RunConfig:
    n: int = 2
    q: float = 0.5
    D: int = 16
    ladder: tuple = (8, 12, 16, 24, 32, 40)
    band: int = 3
    k: tuple | None = None          # quotient indices; default depends on the command
    m: tuple = (-3, -2, -1, 0, 1, 2, 3)
    ell: tuple = (1, 2, 3)
    residual_tol: float = 1e-9
    ess_tol: float = 0.05
    rank_tol: float = 1e-8
    t0_samples: int = 8
    ess_D: int = 48
    M_grid: tuple = (4, 8, 12, 16, 20)
    assignment: str = "last-rev-plain"
    rho: tuple | None = None
    eps: tuple | None = None
    reverse: bool = True             # factor reversal in qds-check
    sphere_ell: int | None = None    # overrides 2n-1 in qzero-diff
    output: str | None = None
    format: str = "json"
    timing: bool = False

    _parsers = {
        "n": int, "q": float, "D": int, "ladder": _ints, "band": int, "k": _opt_ints,
        "m": _ints, "ell": _ints, "residual_tol": float, "ess_tol": float,
        "rank_tol": float, "t0_samples": int, "ess_D": int, "M_grid": _ints,
        "assignment": str, "rho": _opt_ints, "eps": _opt_ints, "reverse": _bool,
        "sphere_ell": lambda s: None if str(s).lower() in ("", "none") else int(s),
        "output": lambda s: None if str(s).lower() in ("", "none") else str(s),
        "format": str, "timing": _bool,
    }

    def update(self, values: dict) -> "RunConfig":
        names = {f.name for f in fields(self)}
        for key, raw in values.items():
            if key not in names:
                raise ConfigError(f"unknown config key {key!r}")
            try:
                setattr(self, key, self._parsers[key](raw))
            except (TypeError, ValueError) as exc:
                raise ConfigError(f"bad value for {key}: {raw!r}") from exc
        return self

    def validate(self) -> "RunConfig":
        if self.n < 1:
            raise ConfigError("n must be at least 1")
        if not 0.0 <= self.q < 1.0:
            raise ConfigError("q must lie in [0, 1)")
        if self.band < 0 or self.D < self.band + 4:
            raise ConfigError("need band >= 0 and D >= band + 4")
        for name in ("residual_tol", "ess_tol", "rank_tol"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive")
        if self.t0_samples < 1:
            raise ConfigError("t0_samples must be positive")
        if self.format not in ("json", "tsv"):
            raise ConfigError("format must be json or tsv")
        for name in ("rho", "eps"):
            v = getattr(self, name)
            if v is not None and len(v) != 2 * self.n:
                raise ConfigError(f"{name} needs 2n = {2 * self.n} entries")
        if self.eps is not None and any(e not in (1, -1) for e in self.eps):
            raise ConfigError("eps entries must be +1 or -1")
        if (self.rho is None) != (self.eps is None):
            raise ConfigError("rho and eps must be overridden together")
        return self

    def as_dict(self) -> dict:
        out = {}
        for key, value in asdict(self).items():
            out[key] = list(value) if isinstance(value, tuple) else value
        return out


def parse_kv(text: str) -> dict:
    out = {}
    for num, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {num}: expected key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    cfg = RunConfig()
    if path:
        try:
            with open(path, encoding="utf-8") as fh:
                cfg.update(parse_kv(fh.read()))
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if overrides:
        cfg.update(overrides)
    return cfg.validate()
