"""Bit-accurate simulator and cost model for an XNOR SRAM in-memory compute macro."""

from imcsim.bitcell import (BinBit, BitlineResult, CellState, Level, ModeTag,
                            SignalVector, apply_cycle, decode, encode,
                            xnor_compute)
from imcsim.datapath import (FullAdderStyle, TreeSpec, build_tree, full_add,
                             rca_add, tree_sum)
from imcsim.errors import (CalibrationError, ConfigError, DomainError,
                           ImcError, InvalidBias, MissingCalibration,
                           ShapeError, WidthError)
from imcsim.macroarray import (MacroConfig, MacroState, Mode, Topology,
                               bnn_dot, mac, multiply_rows, write_weights)

__version__ = "0.1.0"
