"""Deterministic CSV/JSON report rendering.

A report is a header (command, effective config, input digest, generation
time) plus one or more named long-format tables. The generation time sits
alone on the ``# generated:`` line (CSV) or under ``header.generated``
(JSON) and is excluded from ``body_sha256``; everything else is a pure
function of input bytes and config.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import __version__

FORMATS = ("csv", "json")


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def _cell(value):
    if value is None:
        return None
    if isinstance(value, (np.datetime64,)):
        return str(value)
    if isinstance(value, (np.integer, int)) and not isinstance(value, bool):
        return int(value)
    if isinstance(value, (np.floating, float)):
        v = float(value)
        return None if not math.isfinite(v) else float(f"{v:.10g}")
    return value


@dataclass
class Table:
    name: str
    columns: list
    rows: list = field(default_factory=list)

    def add(self, *values):
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        self.rows.append([_cell(v) for v in values])


@dataclass
class Report:
    command: str
    config: dict
    input_name: str = ""
    input_sha256: str = ""
    tables: list = field(default_factory=list)

    def table(self, name, columns) -> Table:
        t = Table(name, list(columns))
        self.tables.append(t)
        return t

    def _body_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for i, t in enumerate(self.tables):
            if i:
                buf.write("\n")
            buf.write(f"# table: {t.name}\n")
            writer.writerow(t.columns)
            for row in t.rows:
                writer.writerow(["" if v is None else v for v in row])
        return buf.getvalue()

    def _body_json(self) -> dict:
        return {t.name: [dict(zip(t.columns, row)) for row in t.rows] for t in self.tables}

    def _header(self, body_digest: str) -> dict:
        return {
            "tool": f"weekday-mfdfa {__version__}",
            "command": self.command,
            "config": self.config,
            "input": self.input_name,
            "input_sha256": self.input_sha256,
            "body_sha256": body_digest,
        }

    def render(self, fmt: str = "csv") -> str:
        if fmt == "csv":
            body = self._body_csv()
            header = self._header(hashlib.sha256(body.encode()).hexdigest())
            lines = [f"# generated: {_timestamp()}"]
            for key, value in header.items():
                text = json.dumps(value, sort_keys=True) if isinstance(value, dict) else value
                lines.append(f"# {key}: {text}")
            return "\n".join(lines) + "\n" + body
        if fmt == "json":
            body = self._body_json()
            body_text = json.dumps(body, sort_keys=True)
            header = self._header(hashlib.sha256(body_text.encode()).hexdigest())
            header["generated"] = _timestamp()
            return json.dumps({"header": header, "body": body}, indent=1, sort_keys=True) + "\n"
        raise ValueError(f"unknown format {fmt!r}; choose from {FORMATS}")


def strip_generated(text: str) -> str:
    """Drop the generation-time line/field so two reports can be compared."""
    if text.lstrip().startswith("{"):
        doc = json.loads(text)
        doc["header"].pop("generated", None)
        return json.dumps(doc, sort_keys=True)
    return "".join(
        line for line in text.splitlines(keepends=True) if not line.startswith("# generated:")
    )
