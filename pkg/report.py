"""
Report rendering.

Both output formats are produced from the same serialised dictionary, so
their numeric content is identical. Rationals are always written as "p/q".
"""

import json
import logging

import sympy

from connection import FormalMeromorphicConnection
from series_core import SeriesMatrix, TruncatedSeries, format_rational

logger = logging.getLogger(__name__)

FIELD_ORDER = (
    "mu", "basis", "weights", "t_matrix", "connection", "residues", "rotations", "orders",
    "exponents", "a0", "a1", "nilpotent_a0", "verdict", "precisions", "ranks",
)


def serialize_series(series: TruncatedSeries) -> dict:
    return {
        "valuation": series.valuation,
        "coefficients": [format_rational(c) for c in series.coefficients],
        "precision": series.precision,
    }


def serialize_series_matrix(matrix: SeriesMatrix) -> dict:
    return {
        "variable": matrix.variable,
        "precision": matrix.precision,
        "entries": [[serialize_series(entry) for entry in row] for row in matrix.entries],
    }


def serialize_connection(connection: FormalMeromorphicConnection) -> dict:
    return {"labels": list(connection.basis_labels), "matrix": serialize_series_matrix(connection.matrix)}


def serialize_rational_matrix(matrix: sympy.Matrix) -> list:
    return [[format_rational(matrix[i, j]) for j in range(matrix.cols)] for i in range(matrix.rows)]


def serialize(report: dict) -> dict:
    """Convert an internal report into JSON-ready values"""
    out = {}
    for key in FIELD_ORDER:
        if key not in report:
            continue
        value = report[key]
        if key in ("weights", "residues", "rotations", "exponents"):
            value = [format_rational(q) for q in value]
        elif key == "t_matrix":
            value = serialize_series_matrix(value)
        elif key == "connection":
            value = serialize_connection(value)
        elif key in ("a0", "a1"):
            value = serialize_rational_matrix(value)
        out[key] = value
    return out


def to_json(report: dict) -> str:
    return json.dumps(serialize(report), indent=2)


def _series_text(entry: dict, variable: str) -> str:
    terms = []
    for offset, coefficient in enumerate(entry["coefficients"]):
        if coefficient.startswith("0/"):
            continue
        power = entry["valuation"] + offset
        terms.append(coefficient if power == 0 else f"{coefficient}*{variable}^{power}")
    terms.append(f"O({variable}^{entry['precision']})")
    return " + ".join(terms)


def _matrix_rows(matrix: dict) -> list:
    return [" | ".join(_series_text(entry, matrix["variable"]) for entry in row) for row in matrix["entries"]]


def to_table(report: dict) -> str:
    """Aligned two-column table"""
    data = serialize(report)
    rows = []
    for key, value in data.items():
        if key == "t_matrix":
            rows.append((key, f"{value['variable']}-series, precision {value['precision']}"))
            rows.extend((f"  row {i}", text) for i, text in enumerate(_matrix_rows(value)))
        elif key == "connection":
            rows.append((key, f"labels {', '.join(value['labels'])}"))
            rows.extend((f"  row {i}", text) for i, text in enumerate(_matrix_rows(value["matrix"])))
        elif key in ("a0", "a1"):
            rows.append((key, ""))
            rows.extend((f"  row {i}", "  ".join(row)) for i, row in enumerate(value))
        elif isinstance(value, list):
            rows.append((key, ", ".join(str(v) for v in value)))
        elif isinstance(value, dict):
            rows.append((key, ", ".join(f"{k}={v}" for k, v in value.items())))
        elif isinstance(value, bool):
            rows.append((key, "true" if value else "false"))
        else:
            rows.append((key, str(value)))
    width = max(len(name) for name, _ in rows)
    return "\n".join(f"{name.ljust(width)}  {text}".rstrip() for name, text in rows)


def render(report: dict, fmt: str) -> str:
    return to_json(report) if fmt == "json" else to_table(report)
