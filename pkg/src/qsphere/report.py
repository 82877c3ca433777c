"""Machine-readable verification reports."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

__all__ = ["Record", "Report"]


def _clean(value):
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return value
    if isinstance(value, complex):
        return [_clean(value.real), _clean(value.imag)]
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    if hasattr(value, "item"):  # numpy scalars
        return _clean(value.item())
    return value


@dataclass
class Record:
    id: str
    params: dict
    value: object
    target: object
    tolerance: object
    passed: bool

    def as_dict(self) -> dict:
        return {"id": self.id, "params": _clean(self.params), "value": _clean(self.value),
                "target": _clean(self.target), "tolerance": _clean(self.tolerance),
                "pass": bool(self.passed)}


@dataclass
class Report:
    command: str
    config: dict
    records: list = field(default_factory=list)
    elapsed_ms: float | None = None

    def add(self, id, params, value, target, tolerance, passed) -> Record:
        rec = Record(id, params, value, target, tolerance, bool(passed))
        self.records.append(rec)
        return rec

    @property
    def passed(self) -> bool:
        return bool(self.records) and all(r.passed for r in self.records)

    def as_dict(self) -> dict:
        return {"command": self.command, "config": _clean(self.config),
                "records": [r.as_dict() for r in self.records], "pass": self.passed,
                "elapsed_ms": self.elapsed_ms}

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"
