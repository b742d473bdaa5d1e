"""Serialisation of sweep rows: CSV, JSON and a dependency-free SVG plot."""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from pathlib import Path
from xml.sax.saxutils import escape

from .experiments import Method, SweepRow
from .ser import ModulationScheme

CSV_FIELDS = ("scheme", "method", "snr_db", "distance_m", "jitter", "ser", "half_width", "a_param", "b_param")
FORMATS = ("csv", "json", "svg_plot")

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf", "#7f7f7f")
_DASHES = {
    Method.CLOSED_FORM: "",
    Method.QUADRATURE_EXACT: "6,3",
    Method.MC_SEMI: "2,3",
    Method.MC_SYMBOL: "8,3,2,3",
}


def format_float(x: float) -> str:
    return format(float(x), ".17g")


def _record(row: SweepRow) -> dict:
    return {
        "scheme": row.scheme.value,
        "method": row.method.value,
        "snr_db": row.snr_db,
        "distance_m": row.distance_m,
        "jitter": row.jitter_value,
        "ser": row.ser,
        "half_width": row.half_width,
        "a_param": row.a_param,
        "b_param": row.b_param,
    }


def rows_to_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_FIELDS)
    for row in rows:
        rec = _record(row)
        writer.writerow([rec[k] if isinstance(rec[k], str) else format_float(rec[k]) for k in CSV_FIELDS])
    return buf.getvalue()


def rows_to_json(rows) -> str:
    def clean(v):
        if isinstance(v, float) and not math.isfinite(v):
            return None
        return v

    records = [{k: clean(v) for k, v in _record(row).items()} for row in rows]
    return json.dumps(records, indent=1) + "\n"


def parse_csv_rows(text: str) -> list[SweepRow]:
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_FIELDS:
        raise ValueError(f"unexpected CSV header {reader.fieldnames}")
    return [
        SweepRow(
            scheme=ModulationScheme(rec["scheme"]),
            method=Method(rec["method"]),
            snr_db=float(rec["snr_db"]),
            distance_m=float(rec["distance_m"]),
            jitter_value=float(rec["jitter"]),
            ser=float(rec["ser"]),
            half_width=float(rec["half_width"]),
            a_param=float(rec["a_param"]),
            b_param=float(rec["b_param"]),
        )
        for rec in reader
    ]


def read_rows(path) -> list[SweepRow]:
    return parse_csv_rows(Path(path).read_text())


def _group_label(key) -> str:
    scheme, method, d, j = key
    return f"{scheme.value.upper()} {method.value} d={d:g} m jitter={j:g}"


def rows_to_svg(rows, width: int = 900, height: int = 560) -> str:
    """Log-scale SER versus SNR, one polyline per curve, with a legend."""
    groups: dict[tuple, list[tuple[float, float]]] = {}
    for row in rows:
        key = (row.scheme, row.method, row.distance_m, row.jitter_value)
        pts = groups.setdefault(key, [])
        if math.isfinite(row.ser) and row.ser > 0:
            pts.append((row.snr_db, row.ser))
    groups = {k: v for k, v in groups.items() if v}
    if not groups:
        raise ValueError("no plottable rows")

    xs = [p[0] for pts in groups.values() for p in pts]
    ys = [math.log10(p[1]) for pts in groups.values() for p in pts]
    x_lo, x_hi = min(xs), max(xs)
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    y_lo, y_hi = math.floor(min(ys)), max(0, math.ceil(max(ys)))
    if y_hi == y_lo:
        y_lo -= 1

    left, right, top, bottom = 70, 300, 30, 50
    pw, ph = width - left - right, height - top - bottom

    def px(x):
        return left + (x - x_lo) / (x_hi - x_lo) * pw

    def py(logy):
        return top + (y_hi - logy) / (y_hi - y_lo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'font-family="sans-serif" font-size="11">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    step = max(1, (y_hi - y_lo) // 10)
    for e in range(y_lo, y_hi + 1, step):
        y = py(e)
        out.append(f'<line x1="{left}" y1="{y:.2f}" x2="{left + pw}" y2="{y:.2f}" stroke="#ddd"/>')
        out.append(f'<text x="{left - 6}" y="{y + 4:.2f}" text-anchor="end">1e{e}</text>')
    for i in range(6):
        x = x_lo + i * (x_hi - x_lo) / 5
        out.append(f'<text x="{px(x):.2f}" y="{top + ph + 16}" text-anchor="middle">{x:.4g}</text>')
    out.append(f'<text x="{left + pw / 2:.2f}" y="{height - 10}" text-anchor="middle">average SNR (dB)</text>')
    out.append(
        f'<text x="16" y="{top + ph / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 16 {top + ph / 2:.2f})">average SER</text>'
    )

    for i, (key, pts) in enumerate(groups.items()):
        color = _COLORS[i % len(_COLORS)]
        dash = _DASHES.get(key[1], "")
        dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
        coords = " ".join(f"{px(x):.2f},{py(math.log10(y)):.2f}" for x, y in pts)
        out.append(f'<polyline fill="none" stroke="{color}"{dash_attr} stroke-width="1.5" points="{coords}"/>')
        ly = top + 10 + 16 * i
        lx = left + pw + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 25}" y2="{ly}" stroke="{color}"{dash_attr} stroke-width="1.5"/>')
        out.append(f'<text x="{lx + 30}" y="{ly + 4}">{escape(_group_label(key))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render(rows, fmt: str) -> str:
    if fmt == "csv":
        return rows_to_csv(rows)
    if fmt == "json":
        return rows_to_json(rows)
    if fmt == "svg_plot":
        return rows_to_svg(rows)
    raise ValueError(f"unknown format {fmt!r}")


def write_text(text: str, output_path) -> None:
    if output_path in (None, "-"):
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(output_path, "w", newline="\n") as fh:
        fh.write(text)


def emit_rows(rows, fmt: str, output_path) -> None:
    """Write sweep rows as csv, json or svg_plot to a path ('-' for stdout)."""
    rows = list(rows)
    if not rows:
        raise ValueError("no rows to emit")
    write_text(render(rows, fmt), output_path)
