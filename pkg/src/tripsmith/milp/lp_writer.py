"""CPLEX-LP-format emission.

The file layout is fully deterministic - objective, constraint rows in build
order, bounds for the integer counters, then Binaries/Generals sections - so
emitting the same model twice yields identical bytes.
"""

from __future__ import annotations

from decimal import Decimal
from pathlib import Path

from ..errors import TripsmithError
from .build import MilpModel

_SENSE = {"<=": "<=", ">=": ">=", "=": "="}


def _coef(value) -> str:
    if isinstance(value, Decimal):
        text = format(value, "f")
    else:
        text = str(value)
    return text


def _terms(terms) -> str:
    parts = []
    for coef, var in terms:
        if coef == 0:
            continue
        sign = "-" if coef < 0 else "+"
        magnitude = -coef if coef < 0 else coef
        parts.append(f"{sign} {_coef(magnitude)} {var}")
    if not parts:
        return "0 " + (terms[0][1] if terms else "zero")
    first = parts[0]
    first = first[2:] if first.startswith("+ ") else "-" + first[2:]
    return " ".join([first] + parts[1:])


def render_lp(model: MilpModel, name: str = "itinerary") -> str:
    lines = [f"\\ Problem: {name}", "Minimize"]
    if model.objective:
        lines.append(" obj: " + _terms(model.objective))
    else:
        lines.append(" obj: 0")
    lines.append("Subject To")
    for row in model.rows:
        lines.append(f" {row.name}: {_terms(row.terms)} {_SENSE[row.sense]} {_coef(row.rhs)}")
    integers = [info for info in model.variables.values() if info.kind == "integer"]
    if integers:
        lines.append("Bounds")
        for info in integers:
            lines.append(f" {info.lo} <= {info.name} <= {info.hi}")
    binaries = [info.name for info in model.variables.values() if info.kind == "binary"]
    if binaries:
        lines.append("Binaries")
        lines.extend(" " + " ".join(chunk) for chunk in _chunks(binaries, 8))
    if integers:
        lines.append("Generals")
        lines.extend(" " + " ".join(chunk) for chunk in _chunks([i.name for i in integers], 8))
    lines.append("End")
    return "\n".join(lines) + "\n"


def _chunks(items: list[str], size: int):
    for start in range(0, len(items), size):
        yield items[start:start + size]


def emit_lp(model: MilpModel, path: Path | str, name: str = "itinerary") -> Path:
    """Write the model to `path`; byte-stable across runs."""
    path = Path(path)
    try:
        path.write_text(render_lp(model, name), encoding="utf-8", newline="\n")
    except OSError as exc:
        raise TripsmithError(f"cannot write LP file {path}: {exc}") from None
    return path
