"""
Quantitative claims checked against the simulator and cost model.

Each claim carries the published value, the value computed here, whether
that value is structural (derived from geometry alone) or calibrated, and
the tolerance it is held to.
"""

import json
from dataclasses import dataclass
from importlib import resources

from imcsim.costmodel import (Basis, compare_architectures, external_tree,
                              fa_area_reduction, array_fa_count, routing_tracks,
                              tree_area_reduction, xnor_latency_comparison,
                              PROPOSED_CELL)
from imcsim.datapath import FullAdderStyle, build_tree
from imcsim.macroarray import MacroConfig, Topology

# acceptance criteria that must each own at least one claim row
CRITERIA = (1, 2, 3, 4, 5, 6, 7)


@dataclass(frozen=True)
class Claim:
    criterion: int
    claim: str
    paper_value: object
    computed_value: object
    basis: str  # "structural" | "calibrated" | "citation"
    tolerance: float = 0.0
    relative: bool = False
    unit: str = ""

    @property
    def passed(self):
        p, c = self.paper_value, self.computed_value
        if isinstance(p, str) or isinstance(c, str):
            return p == c
        bound = self.tolerance * abs(p) if self.relative else self.tolerance
        return abs(c - p) <= bound + 1e-12

    def row(self):
        return {
            "criterion": self.criterion,
            "claim": self.claim,
            "paper_value": _fmt(self.paper_value, self.unit),
            "computed_value": _fmt(self.computed_value, self.unit),
            "basis": self.basis,
            "tolerance": _fmt_tol(self),
            "status": "PASS" if self.passed else "FAIL",
        }


def _fmt(v, unit):
    if isinstance(v, str):
        return v
    if unit == "%":
        return f"{round(v * 100, 2):g}%"
    if unit == "x":
        return f"{round(v, 3):g}x"
    if unit == "delta":
        return f"{v:g}δ"
    if isinstance(v, float):
        return f"{round(v, 4):g}"
    return str(v)


def _fmt_tol(c):
    if isinstance(c.paper_value, str) or c.tolerance == 0:
        return "exact"
    if c.relative:
        return f"±{c.tolerance * 100:g}% rel"
    if c.unit == "%":
        return f"±{round(c.tolerance * 100, 4):g} pp"
    return f"±{c.tolerance:g}"


def load_table3():
    path = resources.files("imcsim") / "data" / "table3.json"
    return json.loads(path.read_text())


def _conservation_sweep():
    for rows in (2, 4, 8, 16, 32, 64):
        for p in range(1, 17):
            conv = MacroConfig(rows, p, Topology.CONVENTIONAL)
            fused = MacroConfig(rows, p, Topology.FUSED_PAIRS)
            ft = external_tree(fused)
            fused_total = array_fa_count(fused) + (ft.fa_count if ft else 0)
            if fused_total != external_tree(conv).fa_count:
                return f"fails at rows={rows} p={p}"
    return "holds"


def paper_claims(cal, rows=16, cols=8):
    conv = MacroConfig(rows, cols, Topology.CONVENTIONAL)
    fused = MacroConfig(rows, cols, Topology.FUSED_PAIRS)
    conv_tree = build_tree(rows, cols, FullAdderStyle.FA28T)
    fused_tree = build_tree(rows // 2, cols + 1, FullAdderStyle.FA14T)
    cmp = compare_architectures(conv, fused, cal)
    xnor = {name: red for name, _, red in xnor_latency_comparison(cal)}
    table = {r["work"]: r["area_efficiency_tops_mm2"] for r in load_table3()["rows"]}
    widths = lambda t: "/".join(str(w) for w in t.widths)

    return [
        Claim(1, "routing tracks, conventional", 128,
              routing_tracks(rows, cols, Topology.CONVENTIONAL), "structural"),
        Claim(1, "routing tracks, fused pairs", 72,
              routing_tracks(rows, cols, Topology.FUSED_PAIRS), "structural"),
        Claim(2, "conventional tree level widths", "8/9/10/11", widths(conv_tree), "structural"),
        Claim(2, "conventional tree output width", 12, conv_tree.output_width, "structural"),
        Claim(2, "conventional tree latency", 4, conv_tree.latency_delta, "structural", unit="delta"),
        Claim(2, "fused tree level widths", "9/10/11", widths(fused_tree), "structural"),
        Claim(2, "fused tree latency", 3, fused_tree.latency_delta, "structural", unit="delta"),
        Claim(2, "tree latency reduction", 0.25,
              1 - fused_tree.latency_delta / conv_tree.latency_delta, "structural", unit="%"),
        Claim(3, "full adders, fused array + tree vs conventional tree", 131,
              array_fa_count(fused) + fused_tree.fa_count, "structural"),
        Claim(3, "full-adder conservation, rows 2..64 x precision 1..16", "holds",
              _conservation_sweep(), "structural"),
        Claim(4, "tree area reduction, transistor count", 0.7443,
              tree_area_reduction(fused, conv, Basis.TRANSISTOR_COUNT), "structural",
              tolerance=1e-4, unit="%"),
        Claim(4, "tree area reduction", 0.76,
              tree_area_reduction(fused, conv, Basis.CALIBRATED, cal), "calibrated",
              tolerance=0.03, unit="%"),
        Claim(5, "full adder area reduction, transistor count", 0.50,
              fa_area_reduction("FA14T", "FA28T", Basis.TRANSISTOR_COUNT), "structural", unit="%"),
        Claim(5, "full adder area reduction", 0.54,
              fa_area_reduction("FA14T", "FA28T", Basis.CALIBRATED, cal), "calibrated",
              tolerance=0.005, unit="%"),
        Claim(5, "full adder latency increase", 0.19, cal.fa_latency_factor - 1, "calibrated",
              tolerance=0.005, unit="%"),
        Claim(6, "XNOR multiply latency reduction vs 6T", 0.5885, xnor[PROPOSED_CELL], "calibrated",
              tolerance=0.0005, unit="%"),
        Claim(7, "area efficiency improvement", 2.67, float(cmp.ratios["area_efficiency"]),
              "calibrated", tolerance=0.02, relative=True, unit="x"),
        Claim(7, "area efficiency improvement, published table", 2.67,
              table["proposed"] / table["aicsp"], "citation", tolerance=0.02, relative=True,
              unit="x"),
    ]


def covered_criteria(claims):
    return sorted({c.criterion for c in claims})
