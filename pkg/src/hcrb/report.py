"""Bound evaluation rows and their CSV / JSON serialisation."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

from .errors import HypothesisError
from .model import StatisticalModel, validate
from .multi import multi_lower_bound
from .qcrb import scalar_bounds
from .simple import simple_bounds
from .tight import optimize_u

SCHEMA = "hcrb-table/1"
METHODS = ("qcrb", "simple2", "tight2", "multi-lower")
COLUMNS = ("descriptor", "method", "d", "D", "c_s", "c_r", "weak_comm_norm",
           "lower", "upper", "gap", "u_star", "certified", "error")
CERTIFY_TOL = 1e-6


@dataclass
class Row:
    descriptor: str
    method: str
    d: int | None = None
    D: int | None = None
    c_s: float | None = None
    c_r: float | None = None
    weak_comm_norm: float | None = None
    lower: float | None = None
    upper: float | None = None
    gap: float | None = None
    u_star: float | None = None
    certified: bool | None = None
    error: str | None = None
    wall_time_s: float | None = None

    def values(self, timing: bool = False) -> dict:
        out = {c: getattr(self, c) for c in COLUMNS}
        if timing:
            out["wall_time_s"] = self.wall_time_s
        return out


def compatible_methods(method: str, d: int) -> list[str]:
    """Methods run for ``method`` on a ``d``-parameter model (``all`` keeps the applicable ones)."""
    if method == "all":
        return [m for m in METHODS if m not in ("simple2", "tight2") or d == 2]
    return [method]


def evaluate(model: StatisticalModel, descriptor: str, method: str) -> list[Row]:
    """One row per method.

    ``qcrb`` reports ``max(c_s, c_r)`` and ``2 c_s`` as lower and upper
    bounds on the Holevo bound. ``multi-lower`` has no upper bound.
    """
    diag = validate(model)
    if not diag.full_rank:
        raise HypothesisError(f"state is not full rank (min eigenvalue {diag.min_eigenvalue:.3e})", "full rank")
    q = scalar_bounds(model)
    rows = []
    for name in compatible_methods(method, model.nparams):
        row = Row(descriptor, name, model.nparams, model.dim, q.c_s, q.c_r, q.weak_comm_norm)
        if name == "qcrb":
            row.lower, row.upper = max(q.c_s, q.c_r), 2 * q.c_s
        elif name == "simple2":
            s = simple_bounds(model)
            row.lower, row.upper = s.lower, s.upper
        elif name == "tight2":
            t = optimize_u(model)
            row.lower, row.upper, row.u_star = t.lower, t.upper, t.u_star
            row.certified = t.certified
        else:
            row.lower = multi_lower_bound(model).lower
        if row.upper is not None:
            row.gap = row.upper - row.lower
            if row.certified is None:
                row.certified = row.gap <= CERTIFY_TOL * max(1.0, abs(row.lower))
        else:
            row.certified = False
        rows.append(row)
    return rows


def format_number(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return "nan" if math.isnan(v) else format(v, ".17g")
    return str(v)


def to_csv(rows: list[Row], timing: bool = False) -> str:
    buf = io.StringIO()
    buf.write(f"# {SCHEMA}\n")
    w = csv.writer(buf, lineterminator="\n")
    cols = list(COLUMNS) + (["wall_time_s"] if timing else [])
    w.writerow(cols)
    for r in rows:
        vals = r.values(timing)
        w.writerow([format_number(vals[c]) for c in cols])
    return buf.getvalue()


def to_json(rows: list[Row], timing: bool = False) -> str:
    cols = list(COLUMNS) + (["wall_time_s"] if timing else [])
    doc = {"schema": SCHEMA, "columns": cols, "rows": [r.values(timing) for r in rows]}
    return json.dumps(doc, indent=1, allow_nan=False) + "\n"


def parse_csv(text: str) -> list[dict]:
    """Read a table written by :func:`to_csv` back into typed dictionaries."""
    lines = [ln for ln in text.splitlines() if not ln.startswith("#")]
    out = []
    for rec in csv.DictReader(lines):
        row = {}
        for k, v in rec.items():
            if v == "":
                row[k] = None
            elif v in ("true", "false"):
                row[k] = v == "true"
            elif k in ("d", "D"):
                row[k] = int(v)
            elif k in ("descriptor", "method", "error"):
                row[k] = v
            else:
                row[k] = float(v)
        out.append(row)
    return out
