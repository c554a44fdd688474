"""Readers for weight matrices, layers and input vectors."""

import json
from pathlib import Path

from imcsim.errors import ShapeError


def parse_bit_matrix(text):
    """Parse a 0/1 matrix from text or JSON.

    Text form: a ``rows cols`` header line, then one line of 0/1 characters
    per row (character j is column j). JSON form: a list of lists, or an
    object with ``rows``/``cols`` and ``bits``.
    """
    stripped = text.strip()
    if stripped.startswith(("[", "{")):
        data = json.loads(stripped)
        if isinstance(data, dict):
            bits = data["bits"]
            shape = (data.get("rows", len(bits)), data.get("cols", len(bits[0]) if bits else 0))
        else:
            bits = data
            shape = (len(bits), len(bits[0]) if bits else 0)
        matrix = [[int(b) for b in row] for row in bits]
    else:
        lines = [ln.strip() for ln in stripped.splitlines() if ln.strip()]
        try:
            shape = tuple(int(v) for v in lines[0].split())
        except (IndexError, ValueError):
            raise ShapeError("bit matrix header must be 'rows cols'") from None
        if len(shape) != 2:
            raise ShapeError("bit matrix header must be 'rows cols'")
        matrix = [[int(c) for c in ln.replace(" ", "")] for ln in lines[1:]]
    if len(matrix) != shape[0] or any(len(r) != shape[1] for r in matrix):
        raise ShapeError(f"bit matrix body does not match header {shape[0]}x{shape[1]}")
    if any(b not in (0, 1) for r in matrix for b in r):
        raise ShapeError("bit matrix entries must be 0 or 1")
    return matrix


def load_bit_matrix(path):
    return parse_bit_matrix(Path(path).read_text())


def load_layer(path):
    """JSON layer: ``{"shape": [out, in], "weights": [[+/-1, ...], ...]}``."""
    data = json.loads(Path(path).read_text())
    weights = data["weights"] if isinstance(data, dict) else data
    shape = data.get("shape") if isinstance(data, dict) else None
    if shape is not None:
        if len(weights) != shape[0] or any(len(r) != shape[1] for r in weights):
            raise ShapeError(f"layer weights do not match shape {shape}")
    return weights


def load_vector(path):
    """JSON vector: ``{"shape": [n], "values": [...]}`` or a bare list."""
    data = json.loads(Path(path).read_text())
    values = data["values"] if isinstance(data, dict) else data
    shape = data.get("shape") if isinstance(data, dict) else None
    if shape is not None and [len(values)] != list(shape):
        raise ShapeError(f"vector length {len(values)} does not match shape {shape}")
    return values
