"""File formats: PGM masks, CSV / raw float grids, pair manifests and the
canonical JSON report writer.

The raw float grid (``.slf``) is the 8-byte magic ``SEGLOSSF``, height and
width as little-endian uint32, then ``height * width`` little-endian float32
values in row-major order.
"""

from __future__ import annotations

import math
import os
import re
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    IoError,
    MalformedHeader,
    NotADirectory,
    RaggedRows,
    UnexpectedEof,
    UnsupportedMaxval,
    ValueOutOfRange,
)
from .fields import MaskField, _frozen, as_mask_field, make_mask_field, make_prob_field
from .geometry import DistanceField

RAW_MAGIC = b"SEGLOSSF"
_RAW_HEADER = struct.Struct("<8sII")
GRID_SUFFIXES = (".csv", ".slf")
MASK_SUFFIXES = (".pgm",)

# PGM


def _pgm_header(data: bytes):
    """Return (magic, width, height, maxval, offset of first raster byte)."""
    tokens = []
    i, n = 0, len(data)
    while len(tokens) < 4:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i : i + 1] == b"#":
            while i < n and data[i : i + 1] not in (b"\n", b"\r"):
                i += 1
            continue
        if i >= n:
            raise UnexpectedEof(f"PGM header ends after {len(tokens)} of 4 fields")
        start = i
        while i < n and not data[i : i + 1].isspace() and data[i : i + 1] != b"#":
            i += 1
        tokens.append(data[start:i])
        if len(tokens) == 1 and tokens[0] not in (b"P5", b"P2"):
            raise MalformedHeader(f"bad PGM magic {tokens[0][:8]!r}; expected P5 or P2")
    magic = tokens[0].decode()
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise MalformedHeader(f"non-integer PGM header field in {tokens[1:]!r}") from None
    if width < 1 or height < 1:
        raise MalformedHeader(f"PGM dimensions must be positive, got {width}x{height}")
    if maxval < 1:
        raise MalformedHeader(f"PGM maxval must be >= 1, got {maxval}")
    if maxval > 255:
        raise UnsupportedMaxval(f"PGM maxval {maxval} > 255 is not supported")
    # exactly one whitespace byte separates the header from a binary raster
    if i >= n:
        if magic == "P5":
            raise UnexpectedEof("PGM raster missing")
    else:
        i += 1
    return magic, width, height, maxval, i


def parse_pgm(data: bytes) -> MaskField:
    magic, width, height, maxval, offset = _pgm_header(data)
    count = width * height
    if magic == "P5":
        raster = data[offset : offset + count]
        if len(raster) < count:
            raise UnexpectedEof(f"PGM raster has {len(raster)} of {count} bytes")
        samples = np.frombuffer(raster, dtype=np.uint8).astype(np.int64)
    else:
        text = re.sub(rb"#[^\n\r]*", b"", data[offset:])
        try:
            values = [int(t) for t in text.split()]
        except ValueError:
            raise MalformedHeader("non-integer sample in ASCII PGM raster") from None
        if len(values) < count:
            raise UnexpectedEof(f"PGM raster has {len(values)} of {count} samples")
        samples = np.array(values[:count], dtype=np.int64)
    over = np.flatnonzero((samples > maxval) | (samples < 0))
    if over.size:
        i = int(over[0])
        raise ValueOutOfRange(i, int(samples[i]), f"sample {samples[i]} at index {i} exceeds maxval {maxval}")
    return make_mask_field(height, width, (samples >= 128).astype(np.float64))


def read_pgm(path) -> MaskField:
    """Read a P5 or P2 PGM as a mask: samples >= 128 are foreground."""
    return parse_pgm(_read_bytes(path))


def encode_pgm(mask) -> bytes:
    m = as_mask_field(mask)
    header = f"P5\n{m.width} {m.height}\n255\n".encode("ascii")
    return header + (m.values * 255).astype(np.uint8).tobytes()


def write_pgm(mask, path) -> None:
    _write_bytes(path, encode_pgm(mask))


# float grids


def format_float(value: float) -> str:
    """17 significant digits; enough to round-trip any float64."""
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"non-finite value {value!r} cannot be serialised")
    return format(value, ".17g")


def parse_csv_grid(text: str) -> np.ndarray:
    rows = [line for line in text.splitlines() if line.strip()]
    if not rows:
        raise MalformedHeader("CSV grid has no rows")
    out = []
    for r, line in enumerate(rows):
        cells = line.split(",")
        if out and len(cells) != len(out[0]):
            raise RaggedRows(f"row {r} has {len(cells)} values, row 0 has {len(out[0])}")
        row = []
        for c, cell in enumerate(cells):
            try:
                v = float(cell)
            except ValueError:
                raise ValueOutOfRange(
                    r * len(cells) + c, cell.strip(), f"row {r} col {c}: {cell.strip()!r} is not a number"
                ) from None
            if not math.isfinite(v):
                raise ValueOutOfRange(r * len(cells) + c, v, f"row {r} col {c}: non-finite value")
            row.append(v)
        out.append(row)
    return np.array(out, dtype=np.float64)


def encode_csv_grid(values) -> str:
    arr = np.asarray(getattr(values, "values", values), dtype=np.float64)
    return "".join(",".join(format_float(v) for v in row) + "\n" for row in arr)


def parse_raw_grid(data: bytes) -> np.ndarray:
    if data[: len(RAW_MAGIC)] != RAW_MAGIC[: len(data)]:
        raise MalformedHeader(f"bad magic {data[:8]!r}; expected {RAW_MAGIC!r}")
    if len(data) < _RAW_HEADER.size:
        raise UnexpectedEof(f"raw grid header needs {_RAW_HEADER.size} bytes, got {len(data)}")
    _, height, width = _RAW_HEADER.unpack_from(data)
    if height < 1 or width < 1:
        raise MalformedHeader(f"raw grid dimensions must be positive, got {height}x{width}")
    need = _RAW_HEADER.size + 4 * height * width
    if len(data) < need:
        raise UnexpectedEof(f"raw grid payload has {len(data) - _RAW_HEADER.size} of {need - _RAW_HEADER.size} bytes")
    if len(data) > need:
        raise MalformedHeader(f"{len(data) - need} trailing bytes after raw grid payload")
    arr = np.frombuffer(data, dtype="<f4", count=height * width, offset=_RAW_HEADER.size)
    bad = np.flatnonzero(~np.isfinite(arr))
    if bad.size:
        raise ValueOutOfRange(int(bad[0]), float(arr[bad[0]]), f"non-finite value at index {bad[0]}")
    return arr.astype(np.float64).reshape(height, width)


def encode_raw_grid(values) -> bytes:
    arr = np.asarray(getattr(values, "values", values), dtype=np.float64)
    height, width = arr.shape
    return _RAW_HEADER.pack(RAW_MAGIC, height, width) + arr.astype("<f4").tobytes()


def _grid_kind(path):
    suffix = Path(path).suffix.lower()
    if suffix not in GRID_SUFFIXES:
        raise IoError(f"{path}: float grids must end in .csv or .slf, got {suffix!r}")
    return suffix


def read_grid_array(path) -> np.ndarray:
    if _grid_kind(path) == ".csv":
        try:
            text = _read_bytes(path).decode("utf-8")
        except UnicodeDecodeError:
            raise MalformedHeader(f"{path}: CSV grid is not UTF-8 text") from None
        return parse_csv_grid(text)
    return parse_raw_grid(_read_bytes(path))


def read_float_grid(path, kind: str = "prob"):
    """Read a ``.csv`` or ``.slf`` grid.

    ``kind="prob"`` validates values into a ProbField, ``kind="distance"``
    requires non-negative values and returns a DistanceField.
    """
    arr = read_grid_array(path)
    if kind == "prob":
        return make_prob_field(arr.shape[0], arr.shape[1], arr)
    if kind == "distance":
        neg = np.flatnonzero(arr < 0)
        if neg.size:
            i = int(neg[0])
            raise ValueOutOfRange(i, float(arr.flat[i]), f"negative distance at index {i}")
        return DistanceField(_frozen(arr))
    raise ValueError(f"kind must be 'prob' or 'distance', got {kind!r}")


def write_float_grid(field, path) -> None:
    if _grid_kind(path) == ".csv":
        _write_bytes(path, encode_csv_grid(field).encode("ascii"))
    else:
        _write_bytes(path, encode_raw_grid(field))


def read_mask(path) -> MaskField:
    """A mask from PGM, or from a float grid holding only 0 and 1."""
    if Path(path).suffix.lower() in MASK_SUFFIXES:
        return read_pgm(path)
    arr = read_grid_array(path)
    return make_mask_field(arr.shape[0], arr.shape[1], arr)


def read_prediction(path):
    """A probability field from a float grid, or a PGM promoted to 0/1."""
    if Path(path).suffix.lower() in MASK_SUFFIXES:
        m = read_pgm(path)
        return make_prob_field(m.height, m.width, m.values)
    return read_float_grid(path, "prob")


# manifests


@dataclass
class PairManifest:
    pairs: list[tuple[str, str]] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    rule: str = "stem"


def _by_stem(directory, warnings, role):
    found = {}
    for entry in sorted(os.listdir(directory)):
        full = os.path.join(directory, entry)
        if entry.startswith(".") or not os.path.isfile(full):
            continue
        stem = Path(entry).stem
        if stem in found:
            warnings.append(f"{role} stem {stem!r} is ambiguous; using {found[stem]}, ignoring {full}")
            continue
        found[stem] = full
    return found


def build_manifest(pred_dir, truth_dir) -> PairManifest:
    """Pair prediction and truth files by filename stem, ignoring extensions."""
    for d in (pred_dir, truth_dir):
        if not os.path.isdir(d):
            raise NotADirectory(f"{d} is not a directory")
    manifest = PairManifest()
    preds = _by_stem(pred_dir, manifest.warnings, "prediction")
    truths = _by_stem(truth_dir, manifest.warnings, "truth")
    for stem in sorted(set(preds) | set(truths)):
        if stem in preds and stem in truths:
            manifest.pairs.append((preds[stem], truths[stem]))
        elif stem in preds:
            manifest.warnings.append(f"no truth file for prediction {preds[stem]}")
        else:
            manifest.warnings.append(f"no prediction file for truth {truths[stem]}")
    return manifest


# JSON


def _escape(s: str) -> str:
    out = ['"']
    for ch in s:
        if ch == '"':
            out.append('\\"')
        elif ch == "\\":
            out.append("\\\\")
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04x}")
        else:
            out.append(ch)
    out.append('"')
    return "".join(out)


def _json_float(v: float) -> str:
    text = format_float(v)
    if not any(ch in text for ch in ".e"):
        text += ".0"
    return text


def canonical_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, two-space indent, 17-digit floats."""
    pad = " " * indent
    inner = " " * (indent + 2)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _json_float(obj)
    if isinstance(obj, str):
        return _escape(obj)
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        body = ",\n".join(inner + canonical_json(v, indent + 2) for v in obj)
        return "[\n" + body + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        body = ",\n".join(
            f"{inner}{_escape(str(k))}: {canonical_json(obj[k], indent + 2)}"
            for k in sorted(obj, key=str)
        )
        return "{\n" + body + "\n" + pad + "}"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def report_json(report) -> str:
    data = report.to_dict() if hasattr(report, "to_dict") else report
    return canonical_json(data) + "\n"


def write_report_json(report, path) -> None:
    _write_bytes(path, report_json(report).encode("utf-8"))


def _read_bytes(path) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _write_bytes(path, data: bytes) -> None:
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from exc
