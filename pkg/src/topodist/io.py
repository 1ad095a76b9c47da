"""On-disk formats: feature matrices, persistence diagrams and score reports.

Feature files (``.tdf``) are a 14-byte little-endian header followed by the
row-major float64 payload::

    magic   4s   b"TDF1"
    version u16  1
    n       u32  rows
    m       u32  columns

CSV feature files start with an ``n,m`` header line followed by ``n`` rows
of ``m`` comma-separated values.

Readers may run concurrently.  Writers overwrite the target path in place;
giving each writer its own path is the caller's job.
"""

import hashlib
import json
import math
import struct
from pathlib import Path

import numpy as np

from topodist.errors import (
    DimensionOverflowError,
    InputFormatError,
    MagicMismatchError,
    NonFiniteValueError,
    SchemaError,
    TrailingDataError,
    TruncatedFileError,
    UnsupportedVersionError,
)
from topodist.geometry import as_feature_matrix
from topodist.metrics.report import ScoreReport
from topodist.persistence import PersistenceDiagram

MAGIC = b"TDF1"
VERSION = 1
HEADER = struct.Struct("<4sHII")
MAX_ENTRIES = 1 << 31
DIAGRAM_FORMAT = "topodist-diagram"
REPORT_FORMAT = "topodist-report"


def _format_of(path, fmt):
    if fmt is not None:
        if fmt not in ("binary", "csv"):
            raise InputFormatError(f"unknown feature format {fmt!r}")
        return fmt
    return "csv" if Path(path).suffix.lower() == ".csv" else "binary"


def _check_dims(n, m):
    if n < 1 or m < 1:
        raise InputFormatError(f"feature file declares an empty matrix ({n} x {m})")
    if n * m > MAX_ENTRIES:
        raise DimensionOverflowError(f"{n} x {m} entries exceed the limit of {MAX_ENTRIES}")


def write_features(points, path, format=None) -> None:
    x = as_feature_matrix(points)
    n, m = x.shape
    _check_dims(n, m)
    if _format_of(path, format) == "csv":
        lines = [f"{n},{m}"]
        lines += [",".join(repr(float(v)) for v in row) for row in x]
        Path(path).write_text("\n".join(lines) + "\n")
        return
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(MAGIC, VERSION, n, m))
        fh.write(x.astype("<f8", copy=False).tobytes(order="C"))


def _read_binary(path) -> np.ndarray:
    raw = Path(path).read_bytes()
    if len(raw) < HEADER.size:
        raise TruncatedFileError(f"{path}: file is shorter than the {HEADER.size}-byte header")
    magic, version, n, m = HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise MagicMismatchError(f"{path}: bad magic {magic!r}, expected {MAGIC!r}")
    if version != VERSION:
        raise UnsupportedVersionError(f"{path}: unsupported version {version}")
    _check_dims(n, m)
    expected = HEADER.size + 8 * n * m
    if len(raw) < expected:
        raise TruncatedFileError(f"{path}: payload has {len(raw) - HEADER.size} bytes, expected {8 * n * m}")
    if len(raw) > expected:
        raise TrailingDataError(f"{path}: {len(raw) - expected} unexpected bytes after the payload")
    x = np.frombuffer(raw, dtype="<f8", count=n * m, offset=HEADER.size).astype(np.float64).reshape(n, m)
    if not np.all(np.isfinite(x)):
        raise NonFiniteValueError(f"{path}: payload contains NaN or infinite values")
    return x


def _read_csv(path) -> np.ndarray:
    lines = [ln.strip() for ln in Path(path).read_text().splitlines()]
    while lines and not lines[-1]:
        lines.pop()
    if not lines:
        raise TruncatedFileError(f"{path}: empty file")
    try:
        n, m = (int(tok) for tok in lines[0].split(","))
    except ValueError:
        raise InputFormatError(f"{path}: first line must be 'n,m', got {lines[0]!r}") from None
    _check_dims(n, m)
    rows = lines[1:]
    if len(rows) < n:
        raise TruncatedFileError(f"{path}: header declares {n} rows, found {len(rows)}")
    if len(rows) > n:
        raise TrailingDataError(f"{path}: header declares {n} rows, found {len(rows)}")
    x = np.empty((n, m))
    for i, row in enumerate(rows):
        cells = row.split(",")
        if len(cells) != m:
            raise InputFormatError(f"{path}: row {i + 1} has {len(cells)} values, expected {m}")
        try:
            x[i] = [float(c) for c in cells]
        except ValueError:
            raise InputFormatError(f"{path}: row {i + 1} has a non-numeric value") from None
    if not np.all(np.isfinite(x)):
        raise NonFiniteValueError(f"{path}: contains NaN or infinite values")
    return x


def read_features(path, format=None) -> np.ndarray:
    """Read a feature matrix; ``format`` defaults to the file extension."""
    try:
        if _format_of(path, format) == "csv":
            return _read_csv(path)
        return _read_binary(path)
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror or exc}") from exc


def file_sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


# -- diagrams ----------------------------------------------------------------


def _num(x: float) -> str:
    return format(x, ".17g")


def diagram_to_json(diagram: PersistenceDiagram, metadata: dict | None = None) -> str:
    pairs = ",\n    ".join(
        f"[{_num(b)}, {_num(d) if math.isfinite(d) else 'null'}]"
        for b, d in diagram.sorted_pairs().tolist()
    )
    head = {
        "format": DIAGRAM_FORMAT,
        "version": VERSION,
        "dimension": diagram.dim,
        "n_points": diagram.n_points,
        "metadata": metadata or {},
    }
    body = json.dumps(head, sort_keys=True, indent=2)[:-2]
    return body + f',\n  "pairs": [\n    {pairs}\n  ]\n}}\n' if pairs else body + ',\n  "pairs": []\n}\n'


def write_diagram(diagram: PersistenceDiagram, path, metadata: dict | None = None) -> None:
    Path(path).write_text(diagram_to_json(diagram, metadata))


def diagram_from_json(text: str) -> tuple[PersistenceDiagram, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"diagram is not valid JSON: {exc}") from None
    if not isinstance(doc, dict) or doc.get("format") != DIAGRAM_FORMAT:
        raise SchemaError("not a persistence-diagram document")
    if doc.get("version") != VERSION:
        raise UnsupportedVersionError(f"unsupported diagram version {doc.get('version')!r}")
    dim, n_points, pairs = doc.get("dimension"), doc.get("n_points"), doc.get("pairs")
    if dim not in (0, 1) or isinstance(dim, bool):
        raise SchemaError(f"dimension must be 0 or 1, got {dim!r}")
    if not isinstance(n_points, int) or isinstance(n_points, bool) or n_points < 0:
        raise SchemaError(f"n_points must be a nonnegative integer, got {n_points!r}")
    if not isinstance(pairs, list):
        raise SchemaError("pairs must be a list")
    births, deaths = [], []
    for k, pair in enumerate(pairs):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise SchemaError(f"pair {k} must be a [birth, death] list")
        b, d = pair
        if not _is_number(b) or not math.isfinite(b) or b < 0:
            raise SchemaError(f"pair {k}: birth must be a finite nonnegative number")
        if d is None:
            d = math.inf
        elif not _is_number(d) or not math.isfinite(d):
            raise SchemaError(f"pair {k}: death must be a finite number or null")
        elif d < b:
            raise SchemaError(f"pair {k}: death {d} precedes birth {b}")
        births.append(float(b))
        deaths.append(float(d))
    metadata = doc.get("metadata", {})
    if not isinstance(metadata, dict):
        raise SchemaError("metadata must be an object")
    return PersistenceDiagram(dim, births, deaths, n_points), metadata


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def read_diagram(path) -> tuple[PersistenceDiagram, dict]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror or exc}") from exc
    return diagram_from_json(text)


# -- reports -----------------------------------------------------------------


def _json_safe(obj):
    # NaN and infinities are not valid JSON; they are written as null
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, np.generic):
        return _json_safe(obj.item())
    if isinstance(obj, dict):
        return {str(k): _json_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_safe(v) for v in obj]
    return obj


def report_payload_bytes(report: ScoreReport) -> bytes:
    """Canonical bytes of the deterministic part of a report.

    A non-finite value is written as null with ``value_is_infinite`` set in
    the metadata; non-finite metadata numbers become null.
    """
    payload = _json_safe(report.payload())
    if not math.isfinite(report.value):
        payload["metadata"]["value_is_infinite"] = bool(math.isinf(report.value))
    return json.dumps(payload, sort_keys=True, separators=(",", ":"), allow_nan=False).encode()


def write_report(report: ScoreReport, path) -> None:
    payload = report_payload_bytes(report)
    doc = {
        "format": REPORT_FORMAT,
        "version": VERSION,
        "payload": json.loads(payload),
        "payload_sha256": hashlib.sha256(payload).hexdigest(),
        "runtime": {"wall_time_s": report.wall_time},
    }
    Path(path).write_text(json.dumps(doc, sort_keys=True, indent=2) + "\n")


def read_report(path) -> dict:
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != REPORT_FORMAT:
        raise SchemaError(f"{path}: not a score report")
    return doc
