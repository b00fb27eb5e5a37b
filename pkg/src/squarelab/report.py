"""Experiment reports: JSON documents and plot-ready CSV series."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import __version__
from .errors import InvalidInputError


def _plain(v: Any) -> Any:
    """JSON-safe value: Fractions become ``"p/q"`` strings, non-finite floats become null."""
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    return v


@dataclass
class ExperimentReport:
    experiment: str
    params: dict[str, Any]
    results: list[dict[str, Any]] = field(default_factory=list)
    units: dict[str, str] = field(default_factory=dict)
    provenance: dict[str, Any] = field(default_factory=dict)

    def columns(self) -> list[str]:
        """Row keys in first-seen order; the declared units' keys when there are no rows."""
        if not self.results:
            return list(self.units)
        cols: list[str] = []
        for row in self.results:
            for k in row:
                if k not in cols:
                    cols.append(k)
        return cols

    def to_dict(self, stable: bool = False) -> dict[str, Any]:
        prov = dict(self.provenance)
        prov.setdefault("version", __version__)
        if stable:
            prov.pop("wall_time_s", None)
        cols = self.columns()
        return {
            "experiment": self.experiment,
            "params": _plain(self.params),
            "results": _plain(self.results),
            "units": {c: self.units.get(c, "1") for c in cols},
            "provenance": _plain(prov),
        }

    def to_json(self, stable: bool = False) -> str:
        return json.dumps(self.to_dict(stable), indent=2, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ExperimentReport":
        d = json.loads(text)
        return cls(d["experiment"], d["params"], d["results"], d.get("units", {}), d.get("provenance", {}))


def _cell(v: Any) -> str:
    v = _plain(v)
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, dict)):
        return json.dumps(v)
    return str(v)


def emit_series(report: ExperimentReport, columns: list[str] | None = None) -> str:
    """CSV with a header row; missing columns are an error unless there are no rows."""
    cols = list(columns) if columns else report.columns()
    known = set(report.columns())
    if report.results:
        missing = [c for c in cols if c not in known]
        if missing:
            raise InvalidInputError(f"unknown columns {missing}; available: {sorted(known)}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    for row in report.results:
        w.writerow([_cell(row.get(c)) for c in cols])
    return buf.getvalue()
