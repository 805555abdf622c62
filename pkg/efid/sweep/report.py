"""
Sweep reporting: CSV summary, CSV read-back and SVG chart
"""
import csv
import io
import xml.etree.ElementTree as ET
from typing import List, Optional, Tuple

from efid.sweep.schemas import SweepResult, SweepRow
from efid.utils.exceptions import FailureKind, ReportError

CSV_HEADER = (
    "swept_param",
    "value",
    "trials",
    "successes",
    "success_fraction",
    "mean_quality_db",
    "std_quality_db",
    "fail_invalid_code",
    "fail_index",
    "fail_stream",
    "fail_limit",
)

FAILURE_COLUMNS = (
    ("fail_invalid_code", FailureKind.INVALID_CODE),
    ("fail_index", FailureKind.INDEX_OUT_OF_RANGE),
    ("fail_stream", FailureKind.STREAM_EXHAUSTED),
    ("fail_limit", FailureKind.LIMIT_EXCEEDED),
)

SVG_NS = "http://www.w3.org/2000/svg"
SVG_WIDTH = 640
SVG_HEIGHT = 400
MARGIN = 60


def _fixed(value: Optional[float]) -> str:
    return "" if value is None else "%.6f" % value


def summarize_csv(result: SweepResult) -> bytes:
    """
    One header line plus one line per row, %.6f floats, LF line endings

    Raises:
        ReportError: if the result has no rows
    """
    if not result.rows:
        raise ReportError("Cannot summarize an empty sweep result")
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in result.rows:
        writer.writerow(
            [
                result.swept_param,
                _fixed(row.value),
                row.trials,
                row.successes,
                _fixed(row.success_fraction),
                _fixed(row.mean_quality_db),
                _fixed(row.std_quality_db),
            ]
            + [row.failure_count(kind) for _, kind in FAILURE_COLUMNS]
        )
    return buffer.getvalue().encode("utf-8")


def read_csv(data: bytes) -> SweepResult:
    """
    Parse a summary CSV back into a SweepResult (rows only)

    Raises:
        ReportError: if the header or a row is malformed
    """
    reader = csv.reader(io.StringIO(data.decode("utf-8")))
    try:
        header = tuple(next(reader))
    except StopIteration:
        raise ReportError("CSV is empty")
    if header != CSV_HEADER:
        raise ReportError(f"Unexpected CSV header: {','.join(header)}")

    swept_param = None
    rows: List[SweepRow] = []
    for line_number, fields in enumerate(reader, start=2):
        if not fields:
            continue
        if len(fields) != len(CSV_HEADER):
            raise ReportError(f"Line {line_number}: expected {len(CSV_HEADER)} fields, got {len(fields)}")
        record = dict(zip(CSV_HEADER, fields))
        swept_param = record["swept_param"]
        try:
            rows.append(
                SweepRow(
                    value=float(record["value"]),
                    trials=int(record["trials"]),
                    successes=int(record["successes"]),
                    mean_quality_db=float(record["mean_quality_db"]) if record["mean_quality_db"] else None,
                    std_quality_db=float(record["std_quality_db"]) if record["std_quality_db"] else None,
                    failures={
                        kind: int(record[column])
                        for column, kind in FAILURE_COLUMNS
                        if int(record[column])
                    },
                )
            )
        except ValueError as e:
            raise ReportError(f"Line {line_number}: {e}")
    if not rows:
        raise ReportError("CSV has no data rows")
    return SweepResult(swept_param=swept_param, rows=rows)


def _scale(value: float, low: float, high: float, out_low: float, out_high: float) -> float:
    if high == low:
        return (out_low + out_high) / 2
    return out_low + (value - low) / (high - low) * (out_high - out_low)


def _points(coords: List[Tuple[float, float]]) -> str:
    return " ".join("%.2f,%.2f" % point for point in coords)


def plot_svg(result: SweepResult, title: Optional[str] = None) -> bytes:
    """
    Line chart of mean quality (left axis) and success fraction (right axis)
    against the swept value, one polyline per series

    Raises:
        ReportError: if the result has no rows
    """
    if not result.rows:
        raise ReportError("Cannot plot an empty sweep result")
    ET.register_namespace("", SVG_NS)

    values = [row.value for row in result.rows]
    x_low, x_high = min(values), max(values)
    qualities = [row.mean_quality_db for row in result.rows if row.mean_quality_db is not None]
    q_high = max(qualities + [1.0])
    q_low = min(qualities + [0.0])

    left, right = MARGIN, SVG_WIDTH - MARGIN
    top, bottom = MARGIN, SVG_HEIGHT - MARGIN

    root = ET.Element(
        f"{{{SVG_NS}}}svg",
        {"width": str(SVG_WIDTH), "height": str(SVG_HEIGHT), "viewBox": f"0 0 {SVG_WIDTH} {SVG_HEIGHT}"},
    )
    heading = title or " ".join(
        part for part in (result.kernel.value if result.kernel else "", result.target, f"vs {result.swept_param}") if part
    )
    ET.SubElement(root, f"{{{SVG_NS}}}text", {"x": str(SVG_WIDTH // 2), "y": "30", "text-anchor": "middle"}).text = heading

    axes = ET.SubElement(root, f"{{{SVG_NS}}}g", {"id": "axes", "stroke": "black"})
    ET.SubElement(axes, f"{{{SVG_NS}}}line", {"x1": str(left), "y1": str(bottom), "x2": str(right), "y2": str(bottom)})
    ET.SubElement(axes, f"{{{SVG_NS}}}line", {"x1": str(left), "y1": str(top), "x2": str(left), "y2": str(bottom)})
    ET.SubElement(axes, f"{{{SVG_NS}}}line", {"x1": str(right), "y1": str(top), "x2": str(right), "y2": str(bottom)})

    labels = ET.SubElement(root, f"{{{SVG_NS}}}g", {"id": "labels", "font-size": "12"})
    for text, x, y, anchor in (
        (result.swept_param, (left + right) // 2, SVG_HEIGHT - 20, "middle"),
        ("%.1f" % x_low, left, bottom + 18, "middle"),
        ("%.1f" % x_high, right, bottom + 18, "middle"),
        ("%.1f dB" % q_high, left - 6, top + 4, "end"),
        ("%.1f dB" % q_low, left - 6, bottom, "end"),
        ("1.0", right + 6, top + 4, "start"),
        ("0.0", right + 6, bottom, "start"),
    ):
        ET.SubElement(labels, f"{{{SVG_NS}}}text", {"x": str(x), "y": str(y), "text-anchor": anchor}).text = text

    quality_coords = [
        (_scale(row.value, x_low, x_high, left, right), _scale(row.mean_quality_db, q_low, q_high, bottom, top))
        for row in result.rows
        if row.mean_quality_db is not None
    ]
    success_coords = [
        (_scale(row.value, x_low, x_high, left, right), _scale(row.success_fraction, 0.0, 1.0, bottom, top))
        for row in result.rows
    ]
    for series, coords, colour in (
        ("mean_quality_db", quality_coords, "#1f77b4"),
        ("success_fraction", success_coords, "#d62728"),
    ):
        ET.SubElement(
            root,
            f"{{{SVG_NS}}}polyline",
            {"id": series, "fill": "none", "stroke": colour, "stroke-width": "2", "points": _points(coords)},
        )
        markers = ET.SubElement(root, f"{{{SVG_NS}}}g", {"id": f"{series}_points", "fill": colour})
        for x, y in coords:
            ET.SubElement(markers, f"{{{SVG_NS}}}circle", {"cx": "%.2f" % x, "cy": "%.2f" % y, "r": "3"})

    return ET.tostring(root, encoding="utf-8", xml_declaration=True)
