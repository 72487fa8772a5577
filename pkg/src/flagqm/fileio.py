"""Plain-text state/operator files and report serialization.

File layout: one header line, then whitespace-separated floats in row-major
order written with 17 significant digits::

    flagqm-v1 object=state kind=complex dims=2,2
    0.70710678118654757 0
    ...

``kind`` is ``complex`` (each entry written as ``re im``), ``compact-real``
(the whole re part followed by the whole im part) or ``real`` (an expanded
vector/matrix over mains then flags).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complexqm import ComplexOperator, ComplexState
from .realmap import RealOperator, RealState
from .tensor_core import SystemShape

MAGIC = "flagqm-v1"
KINDS = ("complex", "compact-real", "real")
OBJECTS = ("state", "operator")


class FileFormatError(ValueError):
    pass


def fmt(x: float) -> str:
    return format(float(x), ".17g")


@dataclass
class Payload:
    """Parsed file contents before interpretation."""

    obj: str
    kind: str
    shape: SystemShape
    values: np.ndarray

    def count_expected(self) -> int:
        d = self.shape.dim if self.kind != "real" else self.shape.expanded_dim
        n = d if self.obj == "state" else d * d
        return 2 * n if self.kind in ("complex", "compact-real") else n


def _header(obj: str, kind: str, shape: SystemShape) -> str:
    return f"{MAGIC} object={obj} kind={kind} dims={','.join(map(str, shape.dims))}"


def parse_text(text: str) -> Payload:
    lines = text.splitlines()
    if not lines:
        raise FileFormatError("empty file")
    head = lines[0].split()
    if not head or head[0] != MAGIC:
        raise FileFormatError(f"missing '{MAGIC}' header")
    fields = {}
    for tok in head[1:]:
        key, sep, value = tok.partition("=")
        if not sep:
            raise FileFormatError(f"malformed header token {tok!r}")
        fields[key] = value
    unknown = set(fields) - {"object", "kind", "dims"}
    if unknown:
        raise FileFormatError(f"unknown header fields {sorted(unknown)}")
    obj, kind = fields.get("object"), fields.get("kind")
    if obj not in OBJECTS:
        raise FileFormatError(f"object must be one of {OBJECTS}")
    if kind not in KINDS:
        raise FileFormatError(f"kind must be one of {KINDS}")
    try:
        shape = SystemShape(tuple(int(d) for d in fields["dims"].split(",")))
        values = np.array([float(t) for t in " ".join(lines[1:]).split()])
    except (KeyError, ValueError) as exc:
        raise FileFormatError(f"bad dims or numbers: {exc}") from None
    payload = Payload(obj, kind, shape, values)
    if values.size != payload.count_expected():
        raise FileFormatError(f"expected {payload.count_expected()} numbers, found {values.size}")
    return payload


def read_payload(path) -> Payload:
    return parse_text(Path(path).read_text())


def _rows(values: np.ndarray, width: int) -> str:
    flat = [fmt(v) for v in np.asarray(values).reshape(-1)]
    return "\n".join(" ".join(flat[i:i + width]) for i in range(0, len(flat), width))


def format_complex(x: ComplexState | ComplexOperator) -> str:
    obj = "state" if isinstance(x, ComplexState) else "operator"
    arr = x.amplitudes if obj == "state" else x.matrix
    pairs = np.stack([arr.real, arr.imag], axis=-1)
    width = 2 if obj == "state" else 2 * arr.shape[1]
    return _header(obj, "complex", x.shape) + "\n" + _rows(pairs, width) + "\n"


def format_compact(x: RealState | RealOperator) -> str:
    obj = "state" if isinstance(x, RealState) else "operator"
    width = x.shape.dim
    body = _rows(x.re, width if obj == "operator" else 1) + "\n" + _rows(x.im, width if obj == "operator" else 1)
    return _header(obj, "compact-real", x.shape) + "\n" + body + "\n"


def format_expanded(values: np.ndarray, shape: SystemShape) -> str:
    values = np.asarray(values, dtype=float)
    obj = "state" if values.ndim == 1 else "operator"
    width = 1 if obj == "state" else values.shape[1]
    return _header(obj, "real", shape) + "\n" + _rows(values, width) + "\n"


def to_object(p: Payload):
    """Interpret a payload as the matching library value (expanded stays an array)."""
    d = p.shape.dim
    if p.kind == "complex":
        z = p.values[0::2] + 1j * p.values[1::2]
        if p.obj == "state":
            return ComplexState(z, p.shape)
        return ComplexOperator(z.reshape(d, d), p.shape)
    if p.kind == "compact-real":
        half = p.values.size // 2
        re, im = p.values[:half], p.values[half:]
        if p.obj == "state":
            return RealState(re, im, p.shape)
        return RealOperator(re.reshape(d, d), im.reshape(d, d), p.shape)
    e = p.shape.expanded_dim
    return p.values if p.obj == "state" else p.values.reshape(e, e)


# --------------------------------------------------------------- reports

def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float written to 17 significant digits; NaN/inf become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + dumps(v, indent, _level + 1) for v in obj) + "\n" + end + "]"
    if isinstance(obj, np.ndarray):
        return dumps(obj.tolist(), indent, _level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt(obj) if math.isfinite(obj) else "null"
    if obj is None:
        return "null"
    return json.dumps(str(obj))
