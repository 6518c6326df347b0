"""CSV files with a ``#``-prefixed metadata header.

Layout: ``# key: <json>`` lines, then a column-name row, then values. Floats
are written with 12 significant digits, booleans as 0/1, missing as empty.
"""

from __future__ import annotations

import io
import json
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Iterable, Optional

from . import __version__

SIG_DIGITS = 12


@dataclass
class RunMetadata:
    command: str
    seed: Optional[int] = None
    sampler: Optional[dict] = None
    tolerances: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)
    version: str = __version__
    timestamp: Optional[str] = None

    def __post_init__(self):
        if self.timestamp is None:
            self.timestamp = default_timestamp()

    def header_lines(self) -> list[str]:
        return [f"# {key}: {json.dumps(value, sort_keys=True)}" for key, value in asdict(self).items()]


def default_timestamp() -> str:
    """Timestamp for output headers.

    Taken from SOURCE_DATE_EPOCH when set, otherwise ``"unset"`` so that
    repeated runs with the same flags stay byte-identical.
    """
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    if epoch is None:
        return "unset"
    import datetime as _dt

    return _dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc).isoformat()


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, (int, str)):
        return str(value)
    value = float(value)
    if math.isnan(value):
        return "nan"
    # normalise -0 so reruns do not differ on signed zeros
    if value == 0.0:
        value = 0.0
    return format(value, f".{SIG_DIGITS}g")


def render_csv(meta: RunMetadata, columns: list[str], rows: Iterable[dict]) -> str:
    out = io.StringIO()
    for line in meta.header_lines():
        out.write(line + "\n")
    out.write(",".join(columns) + "\n")
    for row in rows:
        out.write(",".join(format_value(row.get(col)) for col in columns) + "\n")
    return out.getvalue()


def parse_csv(text: str) -> tuple[dict, list[str], list[dict]]:
    """Inverse of :func:`render_csv`; values come back as strings."""
    meta = {}
    lines = text.splitlines()
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = json.loads(value)
        elif line.strip():
            body.append(line)
    if not body:
        return meta, [], []
    columns = body[0].split(",")
    rows = [dict(zip(columns, line.split(","))) for line in body[1:]]
    return meta, columns, rows


def column(rows: list[dict], name: str) -> list[Optional[float]]:
    return [float(r[name]) if r[name] != "" else None for r in rows]
