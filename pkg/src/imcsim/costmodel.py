"""
Analytical cost model for the compute macro.

Structural quantities (routing tracks, full-adder counts, transistor counts,
tree depth in delta units) come straight from the macro geometry. Anything
in nanoseconds, square millimetres or TOPS needs a ``Calibration``; the
shipped ``paper65nm`` calibration is fitted to published 65nm post-layout
ratios, so those numbers are calibrated, never derived.
"""

import json
from dataclasses import asdict, dataclass, field, fields
from enum import Enum
from importlib import resources
from pathlib import Path

from imcsim.datapath import FullAdderStyle, build_tree, is_pow2
from imcsim.errors import CalibrationError, ConfigError, MissingCalibration
from imcsim.macroarray import Topology

SCHEMA_VERSION = 1
CELL_TRANSISTORS = 10
REFERENCE_CELL = "6T-XNOR"
PROPOSED_CELL = "proposed-10T"


class Basis(str, Enum):
    TRANSISTOR_COUNT = "transistor"
    CALIBRATED = "calibrated"


@dataclass(frozen=True)
class Calibration:
    """Technology constants.

    Units: area_per_transistor in um^2, area_per_routing_track in um^2 per
    track, delta_ns is the 28T full-adder delay, xnor_latency_ns maps a cell
    variant to its multiply latency, frequency in MHz. The two fa_* factors
    scale a 14T adder relative to a 28T one.
    """

    area_per_transistor: float
    area_per_routing_track: float
    delta_ns: float
    xnor_latency_ns: dict
    fa_latency_factor: float
    fa_area_factor: float
    frequency: float
    ops_per_mac: int = 2
    schema_version: int = SCHEMA_VERSION
    description: str = ""

    def __post_init__(self):
        for name in ("area_per_transistor", "area_per_routing_track", "delta_ns",
                     "fa_latency_factor", "fa_area_factor", "frequency", "ops_per_mac"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                raise CalibrationError(f"{name} must be a positive number, got {v!r}")
        if not isinstance(self.xnor_latency_ns, dict) or not self.xnor_latency_ns:
            raise CalibrationError("xnor_latency_ns must map cell variants to latencies")
        for k, v in self.xnor_latency_ns.items():
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
                raise CalibrationError(f"xnor latency for {k!r} must be positive, got {v!r}")
        if self.schema_version != SCHEMA_VERSION:
            raise CalibrationError(f"unsupported calibration schema {self.schema_version!r}")

    @classmethod
    def from_dict(cls, d):
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(d) - known)
        if unknown:
            raise CalibrationError(f"unknown calibration fields: {', '.join(unknown)}")
        if "schema_version" not in d:
            raise CalibrationError("calibration is missing schema_version")
        try:
            return cls(**d)
        except TypeError as e:
            raise CalibrationError(str(e)) from None

    @classmethod
    def load(cls, path):
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise CalibrationError(f"cannot read calibration {path}: {e}") from None
        if not isinstance(d, dict):
            raise CalibrationError("calibration file must hold a JSON object")
        return cls.from_dict(d)

    def to_dict(self):
        return asdict(self)

    def xnor_latency(self, cell):
        try:
            return self.xnor_latency_ns[cell]
        except KeyError:
            raise MissingCalibration(f"no XNOR latency calibrated for cell {cell!r}") from None

    def fa_area_um2(self, style):
        full = FullAdderStyle.FA28T.transistor_count * self.area_per_transistor
        return full * self.fa_area_factor if style == FullAdderStyle.FA14T else full

    def fa_delay_ns(self, style):
        f = self.fa_latency_factor if style == FullAdderStyle.FA14T else 1.0
        return self.delta_ns * f


def paper_calibration_path():
    return resources.files("imcsim") / "calibration" / "paper65nm.json"


def paper_calibration():
    return Calibration.from_dict(json.loads(paper_calibration_path().read_text()))


def routing_tracks(rows, precision, topology):
    topology = Topology.parse(topology)
    if rows < 1 or precision < 1:
        raise ConfigError("rows and precision must be positive")
    if topology == Topology.CONVENTIONAL:
        return rows * precision
    if rows % 2:
        raise ConfigError(f"fused-pair topology needs an even row count, got {rows}")
    return rows // 2 * (precision + 1)


def fa_area_reduction(style_a, style_b, basis=Basis.TRANSISTOR_COUNT, cal=None):
    """Fractional area saved by ``style_a`` relative to ``style_b``."""
    a, b = FullAdderStyle.parse(style_a), FullAdderStyle.parse(style_b)
    if Basis(basis) == Basis.TRANSISTOR_COUNT:
        return 1 - a.transistor_count / b.transistor_count
    cal = cal or paper_calibration()
    return 1 - cal.fa_area_um2(a) / cal.fa_area_um2(b)


def tree_cost(spec):
    """``(fa_count, transistor_count, latency_delta)`` of a built tree."""
    if spec is None:
        return 0, 0, 0
    return spec.fa_count, spec.transistor_count, spec.latency_delta


def external_tree(config):
    """Adder tree fed by the macro, or None when one operand needs no tree."""
    fused = config.topology == Topology.FUSED_PAIRS
    n = config.rows // 2 if fused else config.rows
    width = config.cols + 1 if fused else config.cols
    if n == 1:
        return None
    while not is_pow2(n):
        n += 1
    return build_tree(n, width, config.fa_style)


def array_fa_count(config):
    if config.topology == Topology.FUSED_PAIRS:
        return config.rows // 2 * config.cols
    return 0


def tree_area_um2(spec, cal):
    return 0.0 if spec is None else spec.fa_count * cal.fa_area_um2(spec.style)


def tree_area_reduction(config_a, config_b, basis=Basis.TRANSISTOR_COUNT, cal=None):
    """Fractional adder-tree area saved by ``config_a``'s tree versus ``config_b``'s."""
    ta, tb = external_tree(config_a), external_tree(config_b)
    if Basis(basis) == Basis.TRANSISTOR_COUNT:
        return 1 - tree_cost(ta)[1] / tree_cost(tb)[1]
    cal = cal or paper_calibration()
    return 1 - tree_area_um2(ta, cal) / tree_area_um2(tb, cal)


@dataclass(frozen=True)
class CostReport:
    topology: str
    fa_style: str
    cell: str
    rows: int
    cols: int
    routing_tracks: int
    tree_levels: int
    tree_latency_delta: int
    total_latency_delta: int
    fa_count_tree: int
    fa_count_array: int
    transistor_count: int
    area: float  # mm^2
    latency: float  # ns, external tree only (headline figure)
    latency_total: float  # ns, including the in-array adder stage
    throughput: float  # TOPS
    area_efficiency: float  # TOPS/mm^2

    def to_dict(self):
        return asdict(self)


def cost_report(config, cal):
    tree = external_tree(config)
    fa_tree, tree_transistors, levels = tree_cost(tree)
    fa_array = array_fa_count(config)
    in_array = 1 if config.topology == Topology.FUSED_PAIRS else 0
    tracks = routing_tracks(config.rows, config.cols, config.topology)
    cells = config.rows * config.cols

    transistors = (cells * CELL_TRANSISTORS
                   + (fa_tree + fa_array) * config.fa_style.transistor_count)
    area_um2 = (cells * CELL_TRANSISTORS * cal.area_per_transistor
                + (fa_tree + fa_array) * cal.fa_area_um2(config.fa_style)
                + tracks * cal.area_per_routing_track)
    fa_ns = cal.fa_delay_ns(config.fa_style)
    latency = cal.xnor_latency(config.cell) + levels * fa_ns
    latency_total = latency + in_array * fa_ns

    # one macro cycle per XNOR + tree pass, capped by the clock
    rate_hz = min(cal.frequency * 1e6, 1e9 / latency)
    throughput = cells * cal.ops_per_mac * rate_hz / 1e12
    area_mm2 = area_um2 * 1e-6
    return CostReport(
        topology=config.topology.value, fa_style=config.fa_style.name, cell=config.cell,
        rows=config.rows, cols=config.cols, routing_tracks=tracks,
        tree_levels=levels, tree_latency_delta=levels, total_latency_delta=levels + in_array,
        fa_count_tree=fa_tree, fa_count_array=fa_array, transistor_count=transistors,
        area=area_mm2, latency=latency, latency_total=latency_total,
        throughput=throughput, area_efficiency=throughput / area_mm2,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Two cost reports and the ``b / a`` ratio of the key quantities."""

    a: CostReport
    b: CostReport
    ratios: dict = field(default_factory=dict)


def _ratio(x, y):
    return x / y if y else (1.0 if x == y else float("inf"))


def compare_architectures(config_a, config_b, cal):
    if (config_a.rows, config_a.cols) != (config_b.rows, config_b.cols):
        raise ConfigError("architectures must share rows and cols to be compared")
    a, b = cost_report(config_a, cal), cost_report(config_b, cal)
    ta, tb = external_tree(config_a), external_tree(config_b)
    ratios = {
        "routing_tracks": _ratio(b.routing_tracks, a.routing_tracks),
        "tree_transistors": _ratio(tree_cost(tb)[1], tree_cost(ta)[1]),
        "tree_latency_delta": _ratio(b.tree_latency_delta, a.tree_latency_delta),
        "latency": _ratio(b.latency, a.latency),
        "area": _ratio(b.area, a.area),
        "area_efficiency": _ratio(b.area_efficiency, a.area_efficiency),
    }
    return ComparisonReport(a, b, ratios)


def xnor_latency_comparison(cal, reference=REFERENCE_CELL):
    """Rows of ``(variant, latency_ns, reduction vs reference)``."""
    ref = cal.xnor_latency(reference)
    return [(name, lat, 1 - lat / ref) for name, lat in cal.xnor_latency_ns.items()]
