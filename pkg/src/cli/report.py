"""Verification reports: per-check records, summary counts and canonical output.

JSON is the canonical format. Field order is fixed by construction and every
float is written with 17 significant digits, so identical runs produce
byte-identical files. CSV is a flat projection of the records.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Iterable

import numpy as np
from typing_extensions import Literal

from src import __version__

SCHEMA_VERSION = 1

EXIT_CODES = {"check": 1, "precondition": 2, "parse": 3}

Status = Literal["pass", "fail", "skip", "info"]
Format = Literal["json", "csv", "text"]

CSV_FIELDS = ("name", "anchor", "status", "measured", "bound", "tolerance", "detail")


@dataclass
class CheckRecord:
    """One verification check.

    Attributes:
        name: Identifier of the check, unique within a report.
        anchor: The statement or formula the check exercises.
        status: "pass", "fail", "skip" or "info".
        measured: Measured quantity (residual, constant, value).
        bound: Bound the measured quantity is compared against.
        tolerance: Tolerance used in the comparison.
        detail: Short free-form explanation.
    """

    name: str
    anchor: str
    status: Status
    measured: float | None = None
    bound: float | None = None
    tolerance: float | None = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "status": self.status,
            "measured": self.measured,
            "bound": self.bound,
            "tolerance": self.tolerance,
            "detail": self.detail,
        }


@dataclass
class Report:
    """Ordered check records plus the structured results of one command.

    Attributes:
        command: Subcommand that produced the report.
        config: Echo of the run configuration.
        records: Check records in the order they were made.
        results: Command-specific payload (bundles, traces, values).
        error: Type, category and message of an aborting error, if any.
    """

    command: str
    config: dict[str, Any] = field(default_factory=dict)
    records: list[CheckRecord] = field(default_factory=list)
    results: dict[str, Any] = field(default_factory=dict)
    error: dict[str, Any] | None = None

    def add(self, record: CheckRecord) -> CheckRecord:
        self.records.append(record)
        return record

    def check(self, name: str, anchor: str, ok: bool, measured: float | None = None,
              bound: float | None = None, tolerance: float | None = None,
              detail: str = "") -> CheckRecord:
        """Record a pass/fail comparison."""
        return self.add(CheckRecord(name, anchor, "pass" if ok else "fail", _plain(measured),
                                    _plain(bound), _plain(tolerance), detail))

    def info(self, name: str, anchor: str, measured: float | None = None, detail: str = "") -> CheckRecord:
        return self.add(CheckRecord(name, anchor, "info", _plain(measured), detail=detail))

    def skip(self, name: str, anchor: str, detail: str = "") -> CheckRecord:
        return self.add(CheckRecord(name, anchor, "skip", detail=detail))

    def fail(self, name: str, anchor: str, detail: str) -> CheckRecord:
        return self.add(CheckRecord(name, anchor, "fail", detail=detail))

    def extend(self, other: "Report", prefix: str | None = None) -> None:
        """Append another report's records (names prefixed) and results (keyed by prefix)."""
        for record in other.records:
            name = f"{prefix}/{record.name}" if prefix else record.name
            self.records.append(CheckRecord(name, record.anchor, record.status, record.measured,
                                            record.bound, record.tolerance, record.detail))
        if prefix:
            self.results[prefix] = other.results
        else:
            self.results.update(other.results)
        if other.error is not None and self.error is None:
            self.error = other.error

    @property
    def counts(self) -> dict[str, int]:
        counts = {"total": len(self.records), "pass": 0, "fail": 0, "skip": 0, "info": 0}
        for record in self.records:
            counts[record.status] += 1
        return counts

    @property
    def failed(self) -> list[CheckRecord]:
        return [r for r in self.records if r.status == "fail"]

    @property
    def exit_code(self) -> int:
        """0 when nothing failed; otherwise the error category's code, or 1 for failed checks."""
        if self.error is not None:
            return EXIT_CODES.get(self.error["category"], 1)
        return 1 if self.failed else 0

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "version": __version__,
            "command": self.command,
            "config": self.config,
            "summary": self.counts,
            "error": self.error,
            "records": [r.to_dict() for r in self.records],
            "results": self.results,
        }

    # ------------------------------------------------------------------
    # Output
    # ------------------------------------------------------------------

    def to_json(self) -> str:
        return canonical_json(self.to_dict()) + "\n"

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for record in self.records:
            row = record.to_dict()
            writer.writerow({k: _format_cell(row[k]) for k in CSV_FIELDS})
        return buffer.getvalue()

    def to_text(self) -> str:
        lines = [f"{self.command}  (hpf {__version__})", "=" * 80]
        width = max((len(r.name) for r in self.records), default=4)
        for r in self.records:
            mark = {"pass": "✓", "fail": "✗", "skip": "-", "info": "·"}[r.status]
            measured = "" if r.measured is None else f"  measured={_format_cell(r.measured)}"
            bound = "" if r.bound is None else f"  bound={_format_cell(r.bound)}"
            detail = f"  [{r.detail}]" if r.detail else ""
            lines.append(f"{mark} {r.name:<{width}}  {r.anchor}{measured}{bound}{detail}")
        counts = self.counts
        lines.append("=" * 80)
        lines.append(f"{counts['pass']} passed, {counts['fail']} failed, "
                     f"{counts['skip']} skipped, {counts['info']} info")
        if self.error is not None:
            lines.append(f"error ({self.error['category']}): {self.error['message']}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: Format = "json") -> str:
        if fmt == "json":
            return self.to_json()
        if fmt == "csv":
            return self.to_csv()
        if fmt == "text":
            return self.to_text()
        raise ValueError(f"unknown format {fmt!r}")


# ----------------------------------------------------------------------------
# Canonical JSON
# ----------------------------------------------------------------------------


def _plain(value: Any) -> Any:
    """Python scalars for numpy scalars, unchanged otherwise."""
    if isinstance(value, np.generic):
        return value.item()
    return value


def format_float(value: float) -> str:
    """17 significant digits; non-finite values become the strings "nan", "inf", "-inf"."""
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    text = format(value, ".17g")
    if "e" not in text and "." not in text:
        text += ".0"
    return text


def _format_cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format_float(value).strip('"')
    return str(value)


def _encode(value: Any, indent: int, level: int) -> str:
    value = _plain(value)
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return _encode(value.value, indent, level)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        return format_float(value)
    if isinstance(value, complex):
        return _encode({"re": value.real, "im": value.imag}, indent, level)
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if hasattr(value, "to_dict"):
        return _encode(value.to_dict(), indent, level)
    if isinstance(value, np.ndarray):
        return _encode(value.tolist(), indent, level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {_encode(v, indent, level + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + close + "}"
    if isinstance(value, Iterable):
        items = list(value)
        if not items:
            return "[]"
        if all(isinstance(_plain(v), (int, float, bool)) or v is None for v in items):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in items) + "]"
        return "[\n" + ",\n".join(f"{pad}{_encode(v, indent, level + 1)}" for v in items) + "\n" + close + "]"
    raise TypeError(f"cannot encode {type(value).__name__} as JSON")


def canonical_json(value: Any, indent: int = 2) -> str:
    """JSON text with insertion-ordered keys and floats at 17 significant digits."""
    return _encode(value, indent, 0)
