"""
Accumulation fabric: full adder, ripple-carry adder and the adder tree.

All arithmetic is done bit by bit through ``full_add`` so that results are
bit-accurate against the hardware dataflow. Word operands may be Python
ints or integer numpy arrays; arrays are processed lane-wise, which keeps
exhaustive checks fast.

Tree latency follows the level model: one delta per tree level, whatever
the adder width. ``TreeSpec.ripple_latency_delta`` gives the width-aware
alternative for reference only.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from imcsim.errors import ShapeError, WidthError


class FullAdderStyle(Enum):
    FA14T = 14
    FA28T = 28

    @property
    def transistor_count(self):
        return self.value

    @classmethod
    def parse(cls, name):
        if isinstance(name, cls):
            return name
        try:
            return cls[str(name).upper()]
        except KeyError:
            raise ValueError(f"unknown full-adder style {name!r}") from None


def full_add(a, b, cin):
    """One-bit full adder. Returns ``(sum, carry_out)``."""
    a_xor_b = a ^ b
    return a_xor_b ^ cin, (a & b) | (a_xor_b & cin)


def _fits(x, width):
    if isinstance(x, int):
        return 0 <= x and x >> width == 0
    arr = np.asarray(x)
    return bool(np.all(arr >= 0) and np.all((arr >> width) == 0))


def rca_add(a, b, cin=0, width=8):
    """Add two ``width``-bit words through a chain of ``width`` full adders.

    The result has ``width + 1`` bits; the top bit is the final carry.
    """
    if width < 1:
        raise WidthError(f"adder width must be >= 1, got {width}")
    if not (_fits(a, width) and _fits(b, width)):
        raise WidthError(f"operand exceeds {width} bits")
    if not _fits(cin, 1):
        raise WidthError("carry-in must be a single bit")
    carry = cin
    out = 0
    for i in range(width):
        s, carry = full_add((a >> i) & 1, (b >> i) & 1, carry)
        out = out | (s << i)
    return out | (carry << width)


@dataclass(frozen=True)
class RippleCarryAdder:
    width: int
    style: FullAdderStyle = FullAdderStyle.FA14T

    def __post_init__(self):
        if self.width < 1:
            raise WidthError(f"adder width must be >= 1, got {self.width}")

    @property
    def fa_count(self):
        return self.width

    @property
    def transistor_count(self):
        return self.width * self.style.transistor_count

    def __call__(self, a, b, cin=0):
        return rca_add(a, b, cin, self.width)


@dataclass(frozen=True)
class DelayModel:
    delta: float = 1.0

    def tree_latency(self, spec):
        return spec.latency_delta * self.delta


@dataclass(frozen=True)
class TreeSpec:
    input_count: int
    input_width: int
    levels: tuple  # ((adder_count, adder_width), ...) from the leaves up
    style: FullAdderStyle

    @property
    def depth(self):
        return len(self.levels)

    @property
    def output_width(self):
        return self.input_width + self.depth

    @property
    def fa_count(self):
        return sum(n * w for n, w in self.levels)

    @property
    def transistor_count(self):
        return self.fa_count * self.style.transistor_count

    @property
    def latency_delta(self):
        return self.depth

    @property
    def ripple_latency_delta(self):
        return sum(w for _, w in self.levels)

    @property
    def widths(self):
        return [w for _, w in self.levels]


def is_pow2(n):
    return n >= 1 and n & (n - 1) == 0


def build_tree(input_count, input_width, style=FullAdderStyle.FA28T):
    if input_count < 2 or not is_pow2(input_count):
        raise ShapeError(f"tree input count must be a power of two >= 2, got {input_count}")
    if input_width < 1:
        raise WidthError(f"input width must be >= 1, got {input_width}")
    levels = []
    n, w = input_count, input_width
    while n > 1:
        n //= 2
        levels.append((n, w))
        w += 1
    return TreeSpec(input_count, input_width, tuple(levels), FullAdderStyle.parse(style))


def tree_sum(spec, inputs):
    """Sum ``inputs`` pairwise, level by level, with ripple-carry adders."""
    if len(inputs) != spec.input_count:
        raise ShapeError(f"expected {spec.input_count} tree inputs, got {len(inputs)}")
    for x in inputs:
        if not _fits(x, spec.input_width):
            raise WidthError(f"tree input exceeds {spec.input_width} bits")
    words = list(inputs)
    for _, width in spec.levels:
        words = [rca_add(words[i], words[i + 1], 0, width) for i in range(0, len(words), 2)]
    return words[0]
