"""JSON and CSV encodings for states, constellations, reports and tables."""
from __future__ import annotations

import csv
import io as _io
import json
import math
from typing import Iterable

import numpy as np

from .anticoherence import MomentReport
from .baselines import ComparisonRow
from .designer import SupportSolution
from .errors import ValidationError
from .majorana import Constellation, MajoranaPoint
from .qfim import QfimReport, ScanTable
from .spin import SpinState, make_state

SIG_DIGITS = 12
SCAN_HEADER = ("angle1", "angle2", "angle3", "det", "trace_inv")
COMPARE_HEADER = ("scheme", "N", "angle1", "angle2", "bound")


def fmt(x: float) -> str:
    """12 significant digits, locale-free, 'inf' for divergences."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return format(x, f".{SIG_DIGITS}g")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _pairs(z: np.ndarray) -> list:
    z = np.asarray(z, dtype=complex)
    if z.ndim == 1:
        return [[float(v.real), float(v.imag)] for v in z]
    return [_pairs(row) for row in z]


# -- states and constellations ---------------------------------------------------


def state_to_dict(state: SpinState) -> dict:
    return {"n": int(state.n), "amplitudes": _pairs(state.amplitudes)}


def state_from_dict(d: dict, normalize: bool = False) -> SpinState:
    try:
        n = int(d["n"])
        amps = [complex(re, im) for re, im in d["amplitudes"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed state JSON: {exc}") from exc
    return make_state(n, amps, normalize=normalize)


def constellation_to_dict(c: Constellation) -> dict:
    return {
        "points": [
            {"theta": float(p.theta), "phi": float(p.phi), "mult": int(p.mult)} for p in c.points
        ]
    }


def constellation_from_dict(d: dict) -> Constellation:
    try:
        pts = tuple(MajoranaPoint(float(p["theta"]), float(p["phi"]), int(p["mult"])) for p in d["points"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed constellation JSON: {exc}") from exc
    return Constellation(pts)


def load_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


# -- reports -----------------------------------------------------------------------


def moment_report_to_dict(r: MomentReport) -> dict:
    return {
        "S": [float(v) for v in r.stokes_vector],
        "S2": _pairs(r.stokes_tensor),
        "order": int(r.order),
        "tol": float(r.tolerance),
        "t_max": int(r.t_max),
        "capped": bool(r.capped),
        "constants": [float(c) for c in r.directional_constants],
    }


def _opt_float(x):
    if x is None:
        return None
    return float(x) if math.isfinite(x) else None


def qfim_report_to_dict(r: QfimReport) -> dict:
    return {
        "kind": r.spec.kind,
        "angles": list(r.spec.params),
        "state": r.state_descriptor,
        "matrix": np.asarray(r.matrix, float).tolist(),
        "determinant": float(r.determinant),
        "singular": bool(r.singular),
        "inverse": None if r.inverse is None else np.asarray(r.inverse, float).tolist(),
        "trace_of_inverse": _opt_float(r.trace_of_inverse),
        "condition_number": _opt_float(r.condition_number),
    }


def support_solution_to_dict(s: SupportSolution) -> dict:
    return {
        "N": int(s.n),
        "support": list(s.support),
        "p": [float(v) for v in s.probabilities],
        "free": int(s.free_parameters),
        "phases": [float(v) for v in s.phases],
        "vertices": [[float(v) for v in vert] for vert in s.vertices],
        "truncated": bool(s.truncated),
    }


# -- tables --------------------------------------------------------------------------


def _csv(header: Iterable[str], rows: Iterable[Iterable[str]]) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def scan_to_csv(table: ScanTable) -> str:
    return _csv(SCAN_HEADER, ([*map(fmt, r.angles), fmt(r.det), fmt(r.trace_inv)] for r in table.rows))


def comparison_to_csv(rows: Iterable[ComparisonRow]) -> str:
    out = []
    for r in rows:
        a = list(r.angles) + [None, None]
        out.append([r.scheme, str(r.n), "" if a[0] is None else fmt(a[0]), "" if a[1] is None else fmt(a[1]), fmt(r.variance_sum_bound)])
    return _csv(COMPARE_HEADER, out)
