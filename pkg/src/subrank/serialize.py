"""Canonical JSON documents for instances and traces.

Keys are sorted, floats are written with 17 significant digits, integers verbatim.
Serializing a parsed document is byte-stable.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from .errors import SubrankError
from .instance import Instance, validate_instance
from .solvers import RunTrace
from .valuations import CoverageValuation, ExplicitValuation, ModularValuation, ScaledValuation, Valuation

SCHEMA_VERSION = "1"


class DocumentError(SubrankError):
    pass


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            raise DocumentError(f"non-finite number {x}")
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x)
    if isinstance(x, dict):
        return "{" + ",".join(f"{json.dumps(str(k))}:{_fmt(x[k])}" for k in sorted(x)) + "}"
    if isinstance(x, (list, tuple, np.ndarray)):
        return "[" + ",".join(_fmt(v) for v in x) + "]"
    raise DocumentError(f"cannot serialize {type(x).__name__}")


def dumps(doc: dict) -> str:
    """Top-level keys one per line, values compact."""
    lines = [f"  {json.dumps(k)}: {_fmt(doc[k])}" for k in sorted(doc)]
    return "{\n" + ",\n".join(lines) + "\n}\n"


def valuation_to_dict(f: Valuation) -> dict:
    if isinstance(f, ModularValuation):
        return {"kind": "modular", "values": [float(v) for v in f.values]}
    if isinstance(f, CoverageValuation):
        return {
            "kind": "coverage",
            "universe_size": f.universe_size,
            "item_weights": [float(v) for v in f.item_weights],
            "element_sets": [sorted(s) for s in f.element_sets],
            "normalizer": float(f.normalizer),
        }
    if isinstance(f, ExplicitValuation):
        return {"kind": "explicit", "m": f.m, "table": [float(v) for v in f.table]}
    if isinstance(f, ScaledValuation):
        raise DocumentError("rescaled custom oracles have no document form")
    raise DocumentError(f"no document form for {type(f).__name__}")


def instance_to_dict(inst: Instance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "m": inst.m,
        "n": inst.n,
        "weights": [float(w) for w in inst.weights],
        "functions": [valuation_to_dict(f) for f in inst.valuations],
    }


def _floats(xs, what):
    try:
        return [float(x) for x in xs]
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{what} must be numbers") from exc


def valuation_from_dict(d: dict) -> Valuation:
    kind = d.get("kind")
    try:
        if kind == "modular":
            return ModularValuation(_floats(d["values"], "values"))
        if kind == "coverage":
            return CoverageValuation(
                [[int(x) for x in s] for s in d["element_sets"]],
                _floats(d["item_weights"], "item_weights"),
                float(d["normalizer"]),
                universe_size=int(d["universe_size"]),
            )
        if kind == "explicit":
            f = ExplicitValuation(_floats(d["table"], "table"))
            if f.m != int(d["m"]):
                raise DocumentError(f"explicit table has m={f.m}, document says {d['m']}")
            return f
    except KeyError as exc:
        raise DocumentError(f"{kind} function is missing field {exc}") from exc
    raise DocumentError(f"unknown function kind {kind!r}")


def instance_from_dict(doc: dict, tol: float | None = None) -> Instance:
    if not isinstance(doc, dict):
        raise DocumentError("instance document must be a JSON object")
    if str(doc.get("schema_version")) != SCHEMA_VERSION:
        raise DocumentError(f"unsupported schema_version {doc.get('schema_version')!r}")
    try:
        m, n = int(doc["m"]), int(doc["n"])
        weights = _floats(doc["weights"], "weights")
        funcs = [valuation_from_dict(f) for f in doc["functions"]]
    except KeyError as exc:
        raise DocumentError(f"missing field {exc}") from exc
    if len(funcs) != n:
        raise DocumentError(f"document declares n={n} but lists {len(funcs)} functions")
    return validate_instance(m, weights, funcs, tol=tol)


def loads_instance(text: str, tol: float | None = None) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return instance_from_dict(doc, tol=tol)


def dumps_instance(inst: Instance) -> str:
    return dumps(instance_to_dict(inst))


def read_instance(path, tol: float | None = None) -> Instance:
    return loads_instance(Path(path).read_text(), tol=tol)


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst), newline="\n")


def trace_to_dict(trace: RunTrace) -> dict:
    return {
        "kind": trace.kind,
        "ordering": list(trace.ordering.order),
        "potentials": trace.potentials.tolist(),
        "q": trace.q.tolist(),
        "prefix_values": trace.prefix_values.tolist(),
        "cover_times": list(trace.cover_times),
        "total_cost": trace.total_cost,
    }


def dumps_trace(trace: RunTrace) -> str:
    return dumps(trace_to_dict(trace))
