"""
Dense binary-network layers mapped onto compute macros.

Weights and activations are +/-1 values stored as bits (+1 -> 1, -1 -> 0).
A layer larger than one macro is cut into rows x cols tiles; each tile's
XNOR row outputs are popcounted over its active lanes only, and the signed
partial sums are accumulated per output neuron across cycles.
"""

from dataclasses import dataclass

import numpy as np

from imcsim.bitcell import decode, encode
from imcsim.errors import DomainError, ShapeError
from imcsim.macroarray import MacroState, multiply_rows, write_weights


@dataclass(frozen=True)
class BinLayer:
    weights: tuple  # out_features rows of in_features +/-1 entries

    def __post_init__(self):
        w = np.asarray(self.weights)
        if w.ndim != 2 or 0 in w.shape:
            raise ShapeError(f"layer weights must be a non-empty 2-D matrix, got shape {w.shape}")
        if not np.all(np.isin(w, (-1, 1))):
            raise DomainError("layer weights must all be +1 or -1")
        object.__setattr__(self, "weights", tuple(tuple(int(v) for v in row) for row in w))

    @property
    def out_features(self):
        return len(self.weights)

    @property
    def in_features(self):
        return len(self.weights[0])

    def matrix(self):
        return np.array(self.weights, dtype=np.int64)


@dataclass(frozen=True)
class Tile:
    row_start: int
    row_stop: int
    col_start: int
    col_stop: int
    macro_id: int

    @property
    def active_rows(self):
        return self.row_stop - self.row_start

    @property
    def active_cols(self):
        return self.col_stop - self.col_start


@dataclass(frozen=True)
class TilingPlan:
    tiles: tuple
    accumulation_schedule: tuple  # tile indices, one per cycle
    rows: int
    cols: int
    out_features: int
    in_features: int

    def padding(self, tile):
        """``(padded_rows, padded_cols)`` of a tile."""
        return self.rows - tile.active_rows, self.cols - tile.active_cols


class PartialSumRegister:
    """Signed accumulator wide enough for +/- ``in_features``."""

    def __init__(self, in_features):
        self.width = int(in_features).bit_length() + 1
        self.value = 0

    def add(self, v):
        new = self.value + v
        if not -(1 << (self.width - 1)) <= new < (1 << (self.width - 1)):
            raise OverflowError(f"partial sum {new} overflows {self.width}-bit register")
        self.value = new
        return new


def encode_layer(layer, config):
    """Split ``layer`` into macro-sized tiles and program one macro per tile.

    Tiles are visited column-major within each group of output rows, which
    is also the accumulation order.
    """
    w = layer.matrix()
    tiles, macros = [], []
    for r0 in range(0, layer.out_features, config.rows):
        r1 = min(r0 + config.rows, layer.out_features)
        for c0 in range(0, layer.in_features, config.cols):
            c1 = min(c0 + config.cols, layer.in_features)
            bits = np.zeros((config.rows, config.cols), dtype=np.int64)
            bits[: r1 - r0, : c1 - c0] = (w[r0:r1, c0:c1] > 0)
            macros.append(write_weights(MacroState.empty(config.rows, config.cols), bits.tolist()))
            tiles.append(Tile(r0, r1, c0, c1, len(macros) - 1))
    plan = TilingPlan(tuple(tiles), tuple(range(len(tiles))), config.rows, config.cols,
                      layer.out_features, layer.in_features)
    return macros, plan


def decode_weights(macros, plan):
    """Reassemble the +/-1 weight matrix from programmed macros."""
    out = np.zeros((plan.out_features, plan.in_features), dtype=np.int64)
    for t in plan.tiles:
        stored = np.array(macros[t.macro_id].weights())
        out[t.row_start:t.row_stop, t.col_start:t.col_stop] = \
            2 * stored[: t.active_rows, : t.active_cols] - 1
    return out


def infer_dot(layer, x, plan, macros, schedule=None):
    """Signed dot product of every output neuron with ``x`` through the macros."""
    if len(x) != layer.in_features:
        raise ShapeError(f"input has {len(x)} features, layer expects {layer.in_features}")
    if (plan.out_features, plan.in_features) != (layer.out_features, layer.in_features):
        raise ShapeError("tiling plan does not match layer shape")
    bits = [encode(v) for v in x]
    regs = [PartialSumRegister(layer.in_features) for _ in range(layer.out_features)]
    for idx in plan.accumulation_schedule if schedule is None else schedule:
        t = plan.tiles[idx]
        lane_bits = bits[t.col_start:t.col_stop] + [0] * (plan.cols - t.active_cols)
        outputs = multiply_rows(macros[t.macro_id], lane_bits)
        for r in range(t.active_rows):
            pc = sum(outputs[r].bits[: t.active_cols])
            regs[t.row_start + r].add(2 * pc - t.active_cols)
    return [reg.value for reg in regs]


def reference_dot(layer, x):
    return (layer.matrix() @ np.asarray(x, dtype=np.int64)).tolist()


def sign_activation(v):
    return 1 if v >= 0 else -1


def to_values(bits):
    return [decode(b) for b in bits]
