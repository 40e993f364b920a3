"""
Deterministic JSON and CSV rendering of run reports
"""

import csv
import io
import json
import logging
from fractions import Fraction
from typing import Any, Iterable, List

from models.errors import ValidationError
from models.tensor import format_rational

logger = logging.getLogger(__name__)

CSV_HEADER = ["m", "r", "formula", "sampled", "match"]

# wall-clock fields differ between otherwise identical runs
TIMING_KEYS = frozenset({"seconds"})


def to_jsonable(value: Any, include_timing: bool = False) -> Any:
    """Recursively convert report objects; rationals become "p/q" strings"""
    if hasattr(value, "to_dict"):
        value = value.to_dict()
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, float):
        return value
    if isinstance(value, dict):
        return {
            str(key): to_jsonable(item, include_timing)
            for key, item in value.items()
            if include_timing or key not in TIMING_KEYS
        }
    if isinstance(value, (list, tuple)):
        return [to_jsonable(item, include_timing) for item in value]
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(item, include_timing) for item in value)
    raise ValidationError(f"cannot serialize {type(value).__name__} into a report")


def write_json(report: Any, include_timing: bool = False) -> bytes:
    """Sorted keys, two-space indent, UTF-8"""
    document = to_jsonable(report if report is not None else {}, include_timing)
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False).encode("utf-8")


def write_csv(rows: Iterable[Any]) -> bytes:
    """Secant table rows under the header m,r,formula,sampled,match"""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        record = to_jsonable(row)
        writer.writerow(
            [str(record[key]).lower() if isinstance(record[key], bool) else record[key] for key in CSV_HEADER]
        )
    return buffer.getvalue().encode("utf-8")


def render(report: Any, report_format: str = "json", include_timing: bool = False) -> bytes:
    """
    Args:
        report: report object, dict, or list of table rows for CSV
        report_format: "json" or "csv"
        include_timing: keep wall-clock fields (breaks byte-identity between runs)
    """
    if report_format == "json":
        return write_json(report, include_timing)
    if report_format == "csv":
        rows: List[Any] = [] if not report else report
        if isinstance(rows, dict):
            rows = rows.get("rows", [])
        return write_csv(rows)
    raise ValidationError(f"unknown report format {report_format!r}")
