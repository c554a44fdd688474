"""
The in-memory compute macro: a rows x cols grid of 10T cells.

Each row stores one weight word; column ``j`` holds bit ``j`` (weight
``2**j``). An input word is broadcast on the column wordline pairs and every
cell produces XNOR(input bit, weight bit) in one compute cycle.

Two accumulation topologies are supported:

* ``CONVENTIONAL``: every row output leaves the array on its own tracks and
  is summed by an external adder tree whose first level is ``cols`` wide.
* ``FUSED_PAIRS``: a row of full adders between each pair of rows adds the
  two row outputs inside the array (carry rippling along the columns), so
  only ``cols + 1`` tracks per pair leave the array and the external tree
  loses its first level.

Both produce the same integer; only the dataflow and cost differ.
"""

from dataclasses import dataclass, field
from enum import Enum

from imcsim.bitcell import BinBit, CellState, Level, SignalVector, apply_cycle, xnor_compute
from imcsim.datapath import FullAdderStyle, build_tree, rca_add, tree_sum
from imcsim.errors import ConfigError, ShapeError, WidthError


class Topology(str, Enum):
    CONVENTIONAL = "conventional"
    FUSED_PAIRS = "fused"

    @classmethod
    def parse(cls, v):
        if isinstance(v, cls):
            return v
        aliases = {"conventional": cls.CONVENTIONAL, "fused": cls.FUSED_PAIRS,
                   "fusedpairs": cls.FUSED_PAIRS, "fused_pairs": cls.FUSED_PAIRS}
        try:
            return aliases[str(v).lower()]
        except KeyError:
            raise ConfigError(f"unknown topology {v!r}") from None


class Mode(str, Enum):
    INTEGER_SUM = "integer"
    POPCOUNT = "popcount"

    @classmethod
    def parse(cls, v):
        if isinstance(v, cls):
            return v
        try:
            return cls(str(v).lower())
        except ValueError:
            raise ConfigError(f"unknown compute mode {v!r}") from None


DEFAULT_FA_STYLE = {Topology.CONVENTIONAL: FullAdderStyle.FA28T,
                    Topology.FUSED_PAIRS: FullAdderStyle.FA14T}
DEFAULT_CELL = {Topology.CONVENTIONAL: "10T-XNOR",
                Topology.FUSED_PAIRS: "proposed-10T"}


@dataclass(frozen=True)
class MacroConfig:
    """Macro geometry and dataflow.

    ``fa_style`` and ``cell`` only matter to the cost model; when left as
    None they follow the topology (28T adders and a conventional XNOR cell
    for the conventional macro, 14T adders and the 10T XNOR cell for the
    fused one).
    """

    rows: int = 16
    cols: int = 8
    topology: Topology = Topology.FUSED_PAIRS
    mode: Mode = Mode.INTEGER_SUM
    fa_style: FullAdderStyle = None
    cell: str = None

    def __post_init__(self):
        object.__setattr__(self, "topology", Topology.parse(self.topology))
        object.__setattr__(self, "mode", Mode.parse(self.mode))
        if self.fa_style is None:
            object.__setattr__(self, "fa_style", DEFAULT_FA_STYLE[self.topology])
        else:
            object.__setattr__(self, "fa_style", FullAdderStyle.parse(self.fa_style))
        if self.cell is None:
            object.__setattr__(self, "cell", DEFAULT_CELL[self.topology])
        if self.rows < 2:
            raise ConfigError(f"rows must be >= 2, got {self.rows}")
        if self.cols < 1:
            raise ConfigError(f"cols must be >= 1, got {self.cols}")
        if self.topology == Topology.FUSED_PAIRS and self.rows % 2:
            raise ConfigError(f"fused-pair topology needs an even row count, got {self.rows}")

    @property
    def precision(self):
        return self.cols

    def with_(self, **kw):
        d = dict(rows=self.rows, cols=self.cols, topology=self.topology, mode=self.mode,
                 fa_style=self.fa_style, cell=self.cell)
        if "topology" in kw:
            # let style/cell follow a topology change unless given explicitly
            d["fa_style"] = d["cell"] = None
        d.update(kw)
        return MacroConfig(**d)


@dataclass(frozen=True)
class MacroState:
    cells: tuple  # rows x cols of CellState

    @classmethod
    def empty(cls, rows, cols):
        zero = CellState.of(0)
        return cls(tuple(tuple(zero for _ in range(cols)) for _ in range(rows)))

    @property
    def rows(self):
        return len(self.cells)

    @property
    def cols(self):
        return len(self.cells[0]) if self.cells else 0

    def weights(self):
        """Stored bits, read back through non-destructive read cycles."""
        return [[read_cell(c) for c in row] for row in self.cells]


@dataclass(frozen=True)
class RowOutput:
    bits: tuple

    @property
    def value(self):
        return sum(b << j for j, b in enumerate(self.bits))

    @property
    def popcount(self):
        return sum(self.bits)


@dataclass(frozen=True)
class PairOutput:
    value: int
    width: int


@dataclass(frozen=True)
class LatencyTrace:
    """Latency of one MAC in delta units.

    ``tree_latency_delta`` is the external tree alone (the headline figure
    compared between topologies); ``total_latency_delta`` adds the in-array
    adder stage of the fused topology.
    """

    topology: Topology
    tree_levels: int
    in_array_stages: int
    tree_latency_delta: int
    total_latency_delta: int
    padded_inputs: int = 0
    stages: list = field(default_factory=list, compare=False)


_WRITE = (SignalVector.write(0), SignalVector.write(1))
_READ = SignalVector.read()


def read_cell(cell):
    _, bl, _ = apply_cycle(cell, _READ)
    return 1 if bl.rbl == Level.H else 0


def to_bits(word, width):
    """Column bits of ``word``: an int (bit j -> column j) or a 0/1 sequence."""
    if isinstance(word, int):
        if word < 0 or word >> width:
            raise WidthError(f"input word {word} exceeds {width} bits")
        return [(word >> j) & 1 for j in range(width)]
    bits = [int(b) for b in word]
    if len(bits) != width:
        raise WidthError(f"input has {len(bits)} bits, macro has {width} columns")
    if any(b not in (0, 1) for b in bits):
        raise WidthError("input bits must be 0 or 1")
    return bits


def write_weights(state, weights):
    """Write a full weight matrix row by row through write cycles."""
    if len(weights) != state.rows or any(len(r) != state.cols for r in weights):
        raise ShapeError(f"weight matrix must be {state.rows}x{state.cols}")
    for i, row in enumerate(weights):
        state = write_row(state, i, row)
    return state


def write_row(state, row, bits):
    """Write one row through write cycles.

    Unselected rows keep WWL low, which is a hold cycle; their cells are
    carried over unchanged.
    """
    if not 0 <= row < state.rows:
        raise IndexError(f"row {row} out of range")
    bits = to_bits(bits, state.cols)
    written = tuple(apply_cycle(c, _WRITE[b])[0] for c, b in zip(state.cells[row], bits))
    return MacroState(state.cells[:row] + (written,) + state.cells[row + 1:])


def multiply_rows(state, word):
    """One compute cycle: XNOR of the broadcast input with every row."""
    # each cell's XNOR depends only on (stored bit, input bit): evaluate the
    # cell model once per distinct pair and look it up per column
    lut = [[xnor_compute(CellState.of(q), BinBit(x))[0] for q in (0, 1)] for x in (0, 1)]
    column_luts = [lut[x] for x in to_bits(word, state.cols)]
    return [RowOutput(tuple(f[c.q] for f, c in zip(column_luts, cells))) for cells in state.cells]


def _pad_pow2(values):
    n = 1
    while n < len(values):
        n *= 2
    return list(values) + [0] * (n - len(values)), n - len(values)


def fuse_pairs(outputs, cols):
    """In-array stage: add each row pair with a ``cols``-bit ripple chain."""
    return [PairOutput(rca_add(outputs[k].value, outputs[k + 1].value, 0, cols), cols + 1)
            for k in range(0, len(outputs), 2)]


def _accumulate(values, width):
    """External tree over ``values``; returns (sum, levels, padding)."""
    if len(values) == 1:
        return values[0], 0, 0
    padded, pad = _pad_pow2(values)
    spec = build_tree(len(padded), width)
    return tree_sum(spec, padded), spec.depth, pad


def mac(state, word, config):
    """Multiply-accumulate the input word against every stored row.

    Returns ``(result, trace)``.
    """
    if (state.rows, state.cols) != (config.rows, config.cols):
        raise ShapeError(f"state is {state.rows}x{state.cols}, config is {config.rows}x{config.cols}")
    outputs = multiply_rows(state, word)
    fused = config.topology == Topology.FUSED_PAIRS

    if fused:
        pairs = fuse_pairs(outputs, config.cols)
        operands, width = [p.value for p in pairs], config.cols + 1
    else:
        operands, width = [o.value for o in outputs], config.cols

    if config.mode == Mode.INTEGER_SUM:
        result, levels, pad = _accumulate(operands, width)
    else:
        result = sum(o.popcount for o in outputs)
        n = len(operands)
        levels = max(n - 1, 0).bit_length()
        pad = (1 << levels) - n if n > 1 else 0

    stages = (["in-array pair add"] if fused else []) + [f"tree level {k + 1}" for k in range(levels)]
    trace = LatencyTrace(config.topology, levels, int(fused), levels, levels + int(fused), pad, stages)
    return result, trace


def bnn_dot(state, word, row):
    """Signed +/-1 dot product of one stored row with the input."""
    if not 0 <= row < state.rows:
        raise IndexError(f"row {row} out of range for {state.rows} rows")
    out = multiply_rows(state, word)[row]
    return 2 * out.popcount - state.cols
