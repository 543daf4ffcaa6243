"""Report records and their text / structured renderings.

Structured reports are JSON documents tagged with ``SCHEMA``.  Every
rational is written as ``{"exact": "p/q", "approx": float}`` so that
``decode`` recovers the exact value; key order is fixed so identical
inputs give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

from .configs import AffineAction

SCHEMA = "kstab.report/1"


@dataclass
class Record:
    title: str
    fields: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    compact: bool = False  # text rendering shows the notes only


def encode(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return {"exact": str(value), "approx": float(value)}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, AffineAction):
        return {"linear": encode(value.linear), "constant": encode(value.constant)}
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    raise TypeError(f"cannot encode {type(value).__name__}")


def decode(obj):
    """Inverse of ``encode`` up to container types: rationals come back as Fractions."""
    if isinstance(obj, dict):
        if set(obj) == {"exact", "approx"}:
            return Fraction(obj["exact"])
        return {k: decode(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [decode(v) for v in obj]
    return obj


def _text(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (int, Fraction)):
        v = Fraction(value)
        return str(v) if v.denominator == 1 else f"{v} ({float(v):.12g})"
    if isinstance(value, Enum):
        return str(value.value)
    if isinstance(value, (list, tuple)):
        if value and all(isinstance(v, (int, Fraction)) and not isinstance(v, bool) for v in value):
            exact = ", ".join(str(Fraction(v)) for v in value)
            approx = ", ".join(f"{float(v):.6g}" for v in value)
            return f"({exact})" if exact == approx else f"({exact}) ({approx})"
        return "[" + ", ".join(_text(v) for v in value) + "]"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_text(v)}" for k, v in value.items()) + "}"
    return str(value)


def render_text(blocks: list[tuple[str, list[Record], str | None]], show_fixture: bool) -> str:
    out = []
    for name, records, error in blocks:
        if show_fixture:
            out.append(f"== {name} ==")
        show_titles = len(records) > 1
        for rec in records:
            if rec.compact:
                out.extend(rec.notes)
                continue
            if show_titles:
                out.append(f"[{rec.title}]")
            out.extend(f"{k} = {_text(v)}" for k, v in rec.fields.items())
            out.extend(rec.notes)
        if error:
            out.append(f"error: {error}")
    return "\n".join(out) + "\n"


def render_structured(command: str, blocks, status: str) -> str:
    doc = {
        "schema": SCHEMA,
        "command": command,
        "status": status,
        "fixtures": [
            {
                "fixture": name,
                "error": error,
                "results": [{"title": r.title, "values": encode(r.fields), "notes": list(r.notes)} for r in records],
            }
            for name, records, error in blocks
        ],
    }
    return json.dumps(doc, indent=2) + "\n"
