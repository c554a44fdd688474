import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from imcsim import datapath
from imcsim.datapath import (DelayModel, FullAdderStyle, RippleCarryAdder,
                             build_tree, full_add, rca_add, tree_sum)
from imcsim.errors import ShapeError, WidthError


@pytest.mark.parametrize("a, b, c", [(a, b, c) for a in (0, 1) for b in (0, 1) for c in (0, 1)])
def test_full_add_truth_table(a, b, c):
    s, cout = full_add(a, b, c)
    assert s + 2 * cout == a + b + c


def test_full_add_examples():
    assert full_add(0, 0, 0) == (0, 0)
    assert full_add(1, 1, 0) == (0, 1)
    assert full_add(1, 1, 1) == (1, 1)


def test_style_transistor_counts():
    assert FullAdderStyle.FA14T.transistor_count == 14
    assert FullAdderStyle.FA28T.transistor_count == 28
    assert FullAdderStyle.parse("fa14t") is FullAdderStyle.FA14T


def test_rca_examples():
    assert rca_add(0, 0, 0, 8) == 0
    assert rca_add(255, 255, 0, 8) == 510
    assert rca_add(255, 255, 1, 8) == 511
    assert rca_add(1, 0, 1, 1) == 2


@pytest.mark.parametrize("width", range(1, 9))
def test_rca_exhaustive(width):
    n = 1 << width
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(2), indexing="ij")
    a, b, c = a.ravel(), b.ravel(), c.ravel()
    out = rca_add(a, b, c, width)
    np.testing.assert_array_equal(out, a + b + c)
    assert out.max() < 1 << (width + 1)


def test_rca_uses_one_full_adder_per_bit(monkeypatch):
    calls = []
    real = datapath.full_add

    def counting(a, b, c):
        calls.append(1)
        return real(a, b, c)

    monkeypatch.setattr(datapath, "full_add", counting)
    assert rca_add(200, 100, 0, 11) == 300
    assert len(calls) == 11
    assert RippleCarryAdder(11).fa_count == 11


def test_rca_rejects_wide_operands():
    with pytest.raises(WidthError):
        rca_add(256, 0, 0, 8)
    with pytest.raises(WidthError):
        rca_add(-1, 0, 0, 8)
    with pytest.raises(WidthError):
        rca_add(0, 0, 2, 8)
    with pytest.raises(WidthError):
        rca_add(np.array([1, 300]), np.array([0, 0]), 0, 8)
    with pytest.raises(WidthError):
        RippleCarryAdder(0)


def test_tree_schedule_conventional():
    t = build_tree(16, 8, FullAdderStyle.FA28T)
    assert t.levels == ((8, 8), (4, 9), (2, 10), (1, 11))
    assert t.output_width == 12
    assert t.latency_delta == 4
    assert t.fa_count == 131
    assert t.transistor_count == 3668


def test_tree_schedule_fused():
    t = build_tree(8, 9, FullAdderStyle.FA14T)
    assert t.levels == ((4, 9), (2, 10), (1, 11))
    assert t.output_width == 12
    assert t.latency_delta == 3
    assert t.fa_count == 67
    assert t.transistor_count == 938


def test_minimal_tree():
    t = build_tree(2, 1, FullAdderStyle.FA14T)
    assert t.levels == ((1, 1),)
    assert t.output_width == 2
    assert t.latency_delta == 1


@pytest.mark.parametrize("n", [0, 1, 3, 6, 12])
def test_tree_needs_power_of_two(n):
    with pytest.raises(ShapeError):
        build_tree(n, 8)


@given(k=st.integers(1, 8), w=st.integers(1, 24))
def test_tree_invariants(k, w):
    n = 1 << k
    t = build_tree(n, w, FullAdderStyle.FA14T)
    assert t.depth == k
    assert t.output_width == w + k
    # closed form: sum over levels of (n / 2^j) * (w + j - 1)
    assert t.fa_count == sum((n >> j) * (w + j - 1) for j in range(1, k + 1))
    assert t.latency_delta == int(math.log2(n))
    assert DelayModel(0.5).tree_latency(t) == 0.5 * k


def test_tree_sum_examples():
    t = build_tree(16, 8)
    assert tree_sum(t, [255] * 16) == 4080
    assert tree_sum(t, [0] * 16) == 0
    # 4080 needs all 12 output bits
    assert 1 << 11 <= 4080 < 1 << 12


def test_tree_sum_random_vectors():
    rng = np.random.default_rng(1234)
    t = build_tree(16, 8)
    lanes = rng.integers(0, 256, size=(16, 10_000))
    out = tree_sum(t, list(lanes))
    np.testing.assert_array_equal(out, lanes.sum(axis=0))


@pytest.mark.parametrize("width", range(1, 5))
def test_tree_sum_exhaustive_pairs(width):
    t = build_tree(2, width)
    for a in range(1 << width):
        for b in range(1 << width):
            assert tree_sum(t, [a, b]) == a + b


def test_tree_sum_errors():
    t = build_tree(4, 4)
    with pytest.raises(ShapeError):
        tree_sum(t, [1, 2, 3])
    with pytest.raises(WidthError):
        tree_sum(t, [1, 2, 3, 16])
