"""Deterministic report serialization.

Reports are JSON with a fixed field order and floats printed with 17
significant digits (enough to round-trip doubles), so identical inputs
produce byte-identical files.
"""
from __future__ import annotations

import math

from .classify import ClassificationReport, Verdict

SCHEMA = "transurf-report-v1"


def fmt_float(x: float) -> str:
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return '"%s"' % x
    return format(float(x), ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Minimal JSON emitter with deterministic float formatting."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return '"' + obj.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        inner = ",\n".join(pad + "  " + dumps(x, indent + 2) for x in obj)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = []
        for k, v in obj.items():
            rows.append(pad + "  " + dumps(str(k)) + ": " + dumps(v, indent + 2))
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def verdict_doc(v: Verdict | None):
    if v is None:
        return None
    return {
        "tag": v.tag,
        "route": v.route,
        "conditions": [
            {"name": c.name, "value": c.value, "threshold": c.threshold,
             "satisfied": c.satisfied} for c in v.conditions],
        "hypotheses_checked": list(v.hypotheses_checked),
        "notes": list(v.notes),
    }


def classification_doc(point_info: dict, rep: ClassificationReport):
    doc = dict(point_info)
    doc.update({
        "conditions": list(rep.conditions),
        "dependence": rep.dependence,
        "corank": rep.corank,
        "verdict": verdict_doc(rep.final),
        "routes": {
            "gfs_cross_cap": verdict_doc(rep.gfs),
            "gfs_s1": verdict_doc(rep.s1),
            "framed_surface": verdict_doc(rep.framed),
            "generic_frontal": verdict_doc(rep.generic),
        },
        "notes": list(rep.notes),
    })
    return doc


def write_report(doc: dict, path: str):
    with open(path, "w") as fh:
        fh.write(dumps(doc) + "\n")
