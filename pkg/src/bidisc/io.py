"""CSV and JSON writers for command output.

JSON documents carry ``schema: 1`` and a ``generated_at`` timestamp; keys are
sorted so two runs with equal inputs differ only in the timestamp.
"""

import csv
import io
import json
import math
import os
from datetime import datetime, timezone

import numpy as np

SCHEMA_VERSION = 1
OUT_DIR_ENV = "BIDISC_OUT_DIR"


def _plain(obj):
    """Convert numpy scalars/arrays, tuples and non-finite floats to JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    return obj


def json_document(command, params, result, timestamp=None):
    doc = {
        "schema": SCHEMA_VERSION,
        "command": command,
        "params": params,
        "result": result,
        "generated_at": timestamp or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return json.dumps(_plain(doc), indent=2, sort_keys=True) + "\n"


def strip_timestamp(text):
    doc = json.loads(text)
    doc.pop("generated_at", None)
    return doc


def csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v
                         for v in row])
    return buf.getvalue()


def default_path(command, fmt):
    """``$BIDISC_OUT_DIR/<command>.<fmt>`` when the variable is set, else None (stdout)."""
    base = os.environ.get(OUT_DIR_ENV)
    if not base:
        return None
    return os.path.join(base, f"{command}.{fmt}")


def emit(text, path, stream):
    if path is None:
        stream.write(text)
        return
    folder = os.path.dirname(path)
    if folder:
        os.makedirs(folder, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)
