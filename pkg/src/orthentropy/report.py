"""JSON reports with every float written at 17 significant digits."""
from __future__ import annotations

import json
import math

import numpy as np

from .manifold import Catalog


def _float(x: float) -> str:
    if not math.isfinite(x):
        # JSON has no literal for these; callers should not produce them
        return json.dumps(str(x))
    s = format(x, ".17g")
    if "e" not in s and "." not in s and "n" not in s:
        s += ".0"
    return s


def dumps(obj, indent: int = 2) -> str:
    """Serialize a tree of dicts, lists, strings, bools, ints and floats."""
    out: list[str] = []
    _write(obj, out, 0, indent)
    return "".join(out) + "\n"


def _write(obj, out, level, indent):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (k, v) in enumerate(obj.items()):
            out.append(f"{pad}{json.dumps(str(k))}: ")
            _write(v, out, level + 1, indent)
            out.append(",\n" if i < len(obj) - 1 else "\n")
        out.append(end + "}")
    elif isinstance(obj, (list, tuple)):
        if not obj:
            out.append("[]")
        elif all(not isinstance(v, (dict, list, tuple)) for v in obj):
            out.append("[")
            for i, v in enumerate(obj):
                _write(v, out, level + 1, indent)
                if i < len(obj) - 1:
                    out.append(", ")
            out.append("]")
        else:
            out.append("[\n")
            for i, v in enumerate(obj):
                out.append(pad)
                _write(v, out, level + 1, indent)
                out.append(",\n" if i < len(obj) - 1 else "\n")
            out.append(end + "]")
    elif isinstance(obj, (bool, np.bool_)) or obj is None:
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(_float(float(obj)))
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def catalog_report(catalog: Catalog) -> dict:
    cfg = catalog.config
    best = catalog.best
    n = cfg.n
    return {
        "config": cfg.to_dict(),
        "summary": {
            "bound": n * math.log(n),
            "best_entropy": best.entropy if best else None,
            "best_classification": best.label if best else None,
            "best_fingerprint": str(best.fingerprint) if best else None,
            "runs": len(catalog.runs),
            "converged": catalog.n_converged,
            "stalled": catalog.n_stalled,
            "distinct_points": len(catalog.points),
        },
        "runs": [r.summary() for r in catalog.runs],
        "critical_points": [p.to_dict() for p in catalog.points],
    }
