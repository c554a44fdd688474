"""
Behavioral model of the read-decoupled 10T SRAM bitcell.

The 6T core holds complementary nodes Q/QB and is written through WWL and
BL/BLB. Four extra read transistors gate a discharge path from the
precharged read bitlines RBL/RBLB into the read wordlines RWL/RWLB, so a
read never disturbs the stored value. Driving the stored weight's cell with
an input-dependent wordline pair yields XNOR(input, weight) on RBL and XOR
on RBLB in one cycle.

Only the logic levels are modeled: precharge is a per-cycle precondition,
not a timed analog event.
"""

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

from imcsim.errors import DomainError, InvalidBias


class Level(str, Enum):
    H = "H"
    L = "L"
    X = "X"  # don't care / undriven


class ModeTag(str, Enum):
    HOLD = "Hold"
    WRITE = "Write"
    READ = "Read"
    COMPUTE = "Compute"


def _check_bit(b):
    if b not in (0, 1) or isinstance(b, float):
        raise DomainError(f"not a bit: {b!r}")
    return int(b)


@dataclass(frozen=True)
class CellState:
    """Storage nodes of one cell; ``qb`` always mirrors ``not q``."""

    q: int
    qb: int

    def __post_init__(self):
        _check_bit(self.q)
        _check_bit(self.qb)
        if self.q == self.qb:
            raise DomainError(f"storage nodes not complementary: q={self.q} qb={self.qb}")

    @classmethod
    def of(cls, bit):
        if type(bit) is int and 0 <= bit <= 1:
            return _CELLS[bit]
        bit = _check_bit(bit)
        return cls(bit, 1 - bit)

    @property
    def valid(self):
        return self.q != self.qb


_CELLS = (CellState(0, 1), CellState(1, 0))


@dataclass(frozen=True)
class SignalVector:
    """Drive values for one cycle.

    ``compute`` only changes the returned tag: a compute cycle uses the same
    wordline biasing as a read.
    """

    wwl: Level = Level.L
    rwl: Level = Level.H
    rwlb: Level = Level.H
    bl: Level = Level.X
    blb: Level = Level.X
    rbl_precharged: bool = True
    rblb_precharged: bool = True
    compute: bool = False

    def __post_init__(self):
        for name in ("wwl", "rwl", "rwlb", "bl", "blb"):
            object.__setattr__(self, name, Level(getattr(self, name)))

    @classmethod
    def hold(cls):
        return cls()

    @classmethod
    def write(cls, bit):
        bit = _check_bit(bit)
        bl, blb = (Level.H, Level.L) if bit else (Level.L, Level.H)
        return cls(wwl=Level.H, rwl=Level.X, rwlb=Level.H, bl=bl, blb=blb)

    @classmethod
    def read(cls, reversed_=False):
        if reversed_:
            return cls(rwl=Level.L, rwlb=Level.H)
        return cls(rwl=Level.H, rwlb=Level.L)


@dataclass(frozen=True)
class BitlineResult:
    rbl: Level
    rblb: Level

    def __post_init__(self):
        if self.rbl == Level.L and self.rblb == Level.L:
            raise InvalidBias("both read bitlines discharged in one cycle")


@dataclass(frozen=True)
class BinBit:
    """A binary value carried as logic 1 (+1) or logic 0 (-1)."""

    logic: int

    def __post_init__(self):
        _check_bit(self.logic)

    @property
    def value(self):
        return decode(self.logic)

    @classmethod
    def from_value(cls, v):
        return cls(encode(v))


def encode(v):
    if v == 1:
        return 1
    if v == -1:
        return 0
    raise DomainError(f"binary value must be +1 or -1, got {v!r}")


def decode(bit):
    _check_bit(bit)
    return 1 if bit == 1 else -1


_PRECHARGED = BitlineResult(Level.H, Level.H)


def apply_cycle(state, sig):
    """Apply one cycle of control signals to a cell.

    Returns ``(new_state, bitlines, mode)``. Raises InvalidBias for any
    combination outside hold, write and the two read biasings.
    """
    if sig.wwl == Level.H:
        if sig.rwlb != Level.H:
            raise InvalidBias("write requires RWLB high")
        if Level.X in (sig.bl, sig.blb) or sig.bl == sig.blb:
            raise InvalidBias(f"write needs complementary BL/BLB, got {sig.bl.value}/{sig.blb.value}")
        return CellState.of(1 if sig.bl == Level.H else 0), _PRECHARGED, ModeTag.WRITE

    if sig.wwl != Level.L:
        raise InvalidBias("WWL must be driven")

    if sig.rwl == Level.H and sig.rwlb == Level.H:
        return state, _PRECHARGED, ModeTag.HOLD

    if {sig.rwl, sig.rwlb} != {Level.H, Level.L}:
        raise InvalidBias(f"undefined read wordline biasing RWL={sig.rwl.value} RWLB={sig.rwlb.value}")
    if not (sig.rbl_precharged and sig.rblb_precharged):
        raise InvalidBias("read bitlines must be precharged before a read/compute cycle")

    # RWL=H/RWLB=L: the bitline facing the '0' node discharges into RWLB.
    rbl_discharges = state.q == 0
    if sig.rwl == Level.L:
        rbl_discharges = not rbl_discharges
    if rbl_discharges:
        bitlines = BitlineResult(Level.L, Level.H)
    else:
        bitlines = BitlineResult(Level.H, Level.L)
    return state, bitlines, ModeTag.COMPUTE if sig.compute else ModeTag.READ


def input_biasing(inp):
    """Wordline pair for an input bit: 1 -> (RWL=H, RWLB=L), 0 -> reversed."""
    if inp.logic:
        return SignalVector(rwl=Level.H, rwlb=Level.L, compute=True)
    return SignalVector(rwl=Level.L, rwlb=Level.H, compute=True)


@lru_cache(maxsize=None)
def xnor_compute(weight, inp):
    """Multiply stored weight by input in-cell.

    Returns ``(rbl_out, rblb_out)`` as bits: XNOR and XOR of the input and
    the stored bit. Memoized; the cell model is a pure function of its
    arguments.
    """
    _, bitlines, _ = apply_cycle(weight, input_biasing(inp))
    rbl_out = 1 if bitlines.rbl == Level.H else 0
    rblb_out = 1 if bitlines.rblb == Level.H else 0
    return rbl_out, rblb_out
