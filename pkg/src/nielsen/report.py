"""Deterministic renderers for stage payloads.

A payload is a plain dict with lowerCamel keys. Exact rationals render as
"p/q" strings, floats with 12 significant digits, so identical inputs give
identical bytes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import ComplexApprox, QPoly, QRationalFunction

VERSION = "0.1.0"
HEADER = f"# nielsen {VERSION}"


def fmt_float(x: float) -> str:
    return f"{x:.12g}"


def jsonable(x):
    """Convert payload values to JSON-compatible objects."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return float(fmt_float(x))
    if isinstance(x, ComplexApprox):
        return {"real": float(fmt_float(x.real)), "imag": float(fmt_float(x.imag)),
                "errorRadius": float(f"{x.error_radius:.3g}")}
    if isinstance(x, QRationalFunction):
        return x.to_str()
    if isinstance(x, QPoly):
        return x.to_str()
    if isinstance(x, dict):
        return {k: jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    return str(x)


def _scalar_text(x) -> str:
    x = jsonable(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if x is None:
        return "-"
    if isinstance(x, float):
        return fmt_float(x)
    if isinstance(x, list):
        return ", ".join(_scalar_text(v) for v in x)
    if isinstance(x, dict):
        return json.dumps(x, sort_keys=False)
    return str(x)


@dataclass
class Stage:
    name: str
    payload: dict
    table: tuple[list[str], list[list]] | None = None  # csv header and rows
    status: str = "ok"
    notes: list[str] = field(default_factory=list)


def _text_lines(d: dict, indent: int = 0) -> list[str]:
    pad = "  " * indent
    out = []
    for k, v in d.items():
        if isinstance(v, dict):
            out.append(f"{pad}{k}:")
            out += _text_lines(v, indent + 1)
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            out.append(f"{pad}{k}:")
            for item in v:
                out.append(f"{pad}  - " + "; ".join(f"{ik}={_scalar_text(iv)}" for ik, iv in item.items()))
        else:
            out.append(f"{pad}{k}: {_scalar_text(v)}")
    return out


def render_text(stages: list[Stage], header: bool = True, partial: bool = False) -> str:
    lines = [HEADER] if header else []
    if partial:
        lines.append("partial: true")
    for st in stages:
        lines.append(f"== {st.name} ==")
        if st.status != "ok":
            lines.append(f"status: {st.status}")
        lines += _text_lines(st.payload)
        lines += [f"note: {n}" for n in st.notes]
    return "\n".join(lines) + "\n"


def _csv_cell(x) -> str:
    s = _scalar_text(x)
    # cells never need quoting; list values use ';'
    return s.replace(", ", ";").replace(",", ";")


def render_csv(stages: list[Stage], header: bool = True, partial: bool = False) -> str:
    lines = [HEADER] if header else []
    if partial:
        lines.append("# partial")
    many = len(stages) > 1
    for st in stages:
        if many:
            lines.append(f"# {st.name}")
        scalars = [(k, v) for k, v in st.payload.items()
                   if not isinstance(v, (dict, list)) or (isinstance(v, list) and not (v and isinstance(v[0], dict)))]
        if st.table is None or st.name in ("zeta", "classify"):
            lines.append("field,value")
            lines += [f"{k},{_csv_cell(v)}" for k, v in scalars]
        if st.table is not None:
            cols, rows = st.table
            lines.append(",".join(cols))
            lines += [",".join(_csv_cell(c) for c in row) for row in rows]
    return "\n".join(lines) + "\n"


def render_json(stages: list[Stage], header: bool = True, partial: bool = False) -> str:
    doc: dict = {}
    if header:
        doc["version"] = VERSION
    if partial:
        doc["partial"] = True
    for st in stages:
        body = dict(st.payload)
        if st.status != "ok":
            body["status"] = st.status
        if st.notes:
            body["notes"] = list(st.notes)
        doc[st.name] = body
    return json.dumps(jsonable(doc), indent=2) + "\n"


RENDERERS = {"text": render_text, "csv": render_csv, "json": render_json}


def render(stages: list[Stage], fmt: str = "text", header: bool = True, partial: bool = False) -> str:
    return RENDERERS[fmt](stages, header=header, partial=partial)
