"""Exit criteria for the simulator and cost model, one test per criterion."""

import itertools
import random
import subprocess
import sys
import time

import numpy as np
import pytest

from imcsim.bitcell import (BinBit, CellState, Level, ModeTag, SignalVector,
                            apply_cycle, decode, xnor_compute)
from imcsim.bnn import BinLayer, encode_layer, infer_dot
from imcsim.costmodel import (Basis, compare_architectures, cost_report, fa_area_reduction,
                              paper_calibration, routing_tracks, tree_area_reduction,
                              xnor_latency_comparison)
from imcsim.datapath import FullAdderStyle, build_tree, rca_add, tree_sum
from imcsim.macroarray import MacroConfig, MacroState, Topology, bnn_dot, mac, write_weights
from imcsim.repro import load_table3

CAL = paper_calibration()
CONV = MacroConfig(16, 8, Topology.CONVENTIONAL)
FUSED = MacroConfig(16, 8, Topology.FUSED_PAIRS)


def test_c1_routing_tracks(criterion):
    criterion("1  routing tracks 16x8: conventional 128, fused 72 (exact)")
    assert routing_tracks(16, 8, Topology.CONVENTIONAL) == 128
    assert routing_tracks(16, 8, Topology.FUSED_PAIRS) == 72
    assert cost_report(CONV, CAL).routing_tracks == 128
    assert cost_report(FUSED, CAL).routing_tracks == 72


def test_c2_adder_tree_schedule(criterion):
    criterion("2  tree widths 8/9/10/11 -> 12b at 4δ; fused 9/10/11 at 3δ; -25% latency (exact)")
    conv = build_tree(16, 8, FullAdderStyle.FA28T)
    fused = build_tree(8, 9, FullAdderStyle.FA14T)
    assert conv.widths == [8, 9, 10, 11] and conv.output_width == 12 and conv.latency_delta == 4
    assert fused.widths == [9, 10, 11] and fused.output_width == 12 and fused.latency_delta == 3
    assert 1 - fused.latency_delta / conv.latency_delta == 0.25
    assert compare_architectures(CONV, FUSED, CAL).ratios["tree_latency_delta"] == 0.75


def test_c3_full_adder_conservation(criterion):
    criterion("3  FA conservation: 64 + 67 == 131, all pow2 rows 2..64 x precision 1..16 (exact)")
    fused = cost_report(FUSED, CAL)
    assert (fused.fa_count_array, fused.fa_count_tree) == (64, 67)
    assert cost_report(CONV, CAL).fa_count_tree == 131
    for rows, p in itertools.product([2, 4, 8, 16, 32, 64], range(1, 17)):
        c = cost_report(MacroConfig(rows, p, Topology.CONVENTIONAL), CAL)
        f = cost_report(MacroConfig(rows, p, Topology.FUSED_PAIRS), CAL)
        assert f.fa_count_array + f.fa_count_tree == c.fa_count_tree, (rows, p)


def test_c4_tree_area(criterion):
    criterion("4  tree area: 0.7443 ± 1e-4 (transistors); 76% ± 3 pp (calibrated)")
    structural = tree_area_reduction(FUSED, CONV, Basis.TRANSISTOR_COUNT)
    assert structural == pytest.approx(1 - (67 * 14) / (131 * 28))
    assert abs(structural - 0.7443) <= 1e-4
    assert abs(tree_area_reduction(FUSED, CONV, Basis.CALIBRATED, CAL) - 0.76) <= 0.03


def test_c5_full_adder_area_and_latency(criterion):
    criterion("5  FA area 50% (transistors, exact), 54% ± 0.5 pp (calibrated); latency x1.19 ± 0.005")
    assert fa_area_reduction("FA14T", "FA28T", Basis.TRANSISTOR_COUNT) == 0.5
    assert abs(fa_area_reduction("FA14T", "FA28T", Basis.CALIBRATED, CAL) - 0.54) <= 0.005
    assert abs(CAL.fa_delay_ns(FullAdderStyle.FA14T) / CAL.fa_delay_ns(FullAdderStyle.FA28T)
               - 1.19) <= 0.005


def test_c6_xnor_latency(criterion):
    criterion("6  XNOR latency -58.85% ± 0.05 pp vs 6T (calibrated)")
    red = {name: r for name, _, r in xnor_latency_comparison(CAL)}
    assert abs(red["proposed-10T"] - 0.5885) <= 0.0005


def test_c7_area_efficiency(criterion):
    criterion("7  area efficiency fused/conventional 2.67 ± 2%; published 59.58/22.3 = 2.672")
    ratio = compare_architectures(CONV, FUSED, CAL).ratios["area_efficiency"]
    assert abs(ratio - 2.67) <= 0.02 * 2.67
    table = {r["work"]: r["area_efficiency_tops_mm2"] for r in load_table3()["rows"]}
    assert table["proposed"] == 59.58 and table["aicsp"] == 22.3
    assert round(table["proposed"] / table["aicsp"], 3) == 2.672


class TestC8Functional:
    def test_a_xnor_truth_table(self, criterion):
        criterion("8a bitcell XNOR truth table, 4 cases")
        for w, i in itertools.product((0, 1), repeat=2):
            rbl, rblb = xnor_compute(CellState.of(w), BinBit(i))
            assert rbl == int(w == i) and rblb == w ^ i
            assert decode(rbl) == decode(w) * decode(i)

    def test_b_memory_modes(self, criterion):
        criterion("8b hold/write/read behaviour over every defined biasing")
        H, L, X = Level.H, Level.L, Level.X
        for q in (0, 1):
            s = CellState.of(q)
            assert apply_cycle(s, SignalVector(wwl=L, rwl=H, rwlb=H))[::2] == (s, ModeTag.HOLD)
            for rwl in (H, L, X):
                for d in (0, 1):
                    bl, blb = (H, L) if d else (L, H)
                    new, _, mode = apply_cycle(s, SignalVector(wwl=H, rwl=rwl, rwlb=H, bl=bl, blb=blb))
                    assert (new.q, mode) == (d, ModeTag.WRITE)
            _, b, m = apply_cycle(s, SignalVector(wwl=L, rwl=H, rwlb=L))
            assert m == ModeTag.READ and (b.rbl, b.rblb) == ((H, L) if q else (L, H))
            _, b, m = apply_cycle(s, SignalVector(wwl=L, rwl=L, rwlb=H))
            assert m == ModeTag.READ and (b.rbl, b.rblb) == ((L, H) if q else (H, L))

    def test_c_rca_exhaustive(self, criterion):
        criterion("8c 8-bit ripple-carry adder exhaustive, 131072 cases < 1 s")
        start = time.perf_counter()
        a, b, c = (g.ravel() for g in np.meshgrid(np.arange(256), np.arange(256), np.arange(2),
                                                  indexing="ij"))
        out = rca_add(a, b, c, 8)
        elapsed = time.perf_counter() - start
        assert a.size == 131_072
        np.testing.assert_array_equal(out, a + b + c)
        assert elapsed < 1.0

    def test_d_tree_sum_random(self, criterion):
        criterion("8d tree_sum == arithmetic sum on 10^4 random vectors")
        rng = np.random.default_rng(2024)
        for n, w in ((16, 8), (8, 9), (4, 3)):
            lanes = rng.integers(0, 1 << w, size=(n, 10_000))
            np.testing.assert_array_equal(tree_sum(build_tree(n, w), list(lanes)),
                                          lanes.sum(axis=0))

    def test_e_cross_topology(self, criterion):
        criterion("8e conventional == fused MAC on 10^4 random 16x8 (weights, input) pairs")
        rng = random.Random(77)
        for _ in range(10_000):
            w = [[rng.getrandbits(1) for _ in range(8)] for _ in range(16)]
            state = write_weights(MacroState.empty(16, 8), w)
            x = rng.getrandbits(8)
            a, _ = mac(state, x, CONV)
            b, _ = mac(state, x, FUSED)
            assert a == b < 1 << 12

    def test_f_bnn_dot(self, criterion):
        criterion("8f bnn_dot == brute-force signed dot, exhaustive N <= 4, random N = 8")
        for n in range(1, 5):
            for wb in itertools.product((0, 1), repeat=n):
                state = write_weights(MacroState.empty(2, n), [list(wb), list(wb)])
                for xb in itertools.product((0, 1), repeat=n):
                    want = sum(decode(p) * decode(q) for p, q in zip(wb, xb))
                    assert bnn_dot(state, list(xb), 0) == want
        rng = random.Random(8)
        for _ in range(5000):
            wb = [rng.getrandbits(1) for _ in range(8)]
            xb = [rng.getrandbits(1) for _ in range(8)]
            state = write_weights(MacroState.empty(2, 8), [wb, wb])
            assert bnn_dot(state, xb, 1) == sum(decode(p) * decode(q) for p, q in zip(wb, xb))

    def test_g_tiled_inference(self, criterion):
        criterion("8g infer_dot == dense reference on padded, non-divisible tilings")
        rng = np.random.default_rng(11)
        for out_f, in_f in ((16, 20), (17, 9), (3, 29), (50, 50)):
            w = 2 * rng.integers(0, 2, size=(out_f, in_f)) - 1
            layer = BinLayer(w.tolist())
            macros, plan = encode_layer(layer, MacroConfig(16, 8))
            for _ in range(10):
                x = 2 * rng.integers(0, 2, size=in_f) - 1
                assert infer_dot(layer, x.tolist(), plan, macros) == (w @ x).tolist()


COMMANDS = [
    ["simulate", "--rows", "16", "--cols", "8", "--mode", "integer", "--seed", "7"],
    ["simulate", "--topology", "conventional", "--mode", "popcount", "--seed", "7", "--format", "csv"],
    ["compare", "--format", "json"],
    ["tree-cost", "--format", "csv"],
    ["xnor-latency"],
    ["bnn-infer", "--seed", "5", "--format", "json"],
    ["paper-repro", "--format", "json"],
]


def test_c9_determinism(criterion):
    criterion("9  every CLI command is byte-identical across runs with a fixed seed")
    for argv in COMMANDS:
        outs = [subprocess.run([sys.executable, "-m", "imcsim.cli", *argv], capture_output=True,
                               check=True).stdout for _ in range(2)]
        assert outs[0] == outs[1] and outs[0], argv
