from fractions import Fraction

import numpy as np
import pytest

from sigma_align import channel, numerics
from sigma_align.channel import compute_t, draw, expand, stack, t_diagonal
from sigma_align.errors import UnknownPath
from sigma_align.region import SigmaConfig


def test_draw_deterministic(s1_cfg):
    a = draw(s1_cfg, 12, seed=5)
    b = draw(s1_cfg, 12, seed=5)
    assert np.array_equal(a.h_b1, b.h_b1)
    assert np.array_equal(a.h_b2, b.h_b2)
    c = draw(s1_cfg, 12, seed=6)
    assert not np.array_equal(a.h_b1, c.h_b1)


def test_draw_shapes(s1_cfg):
    d = draw(s1_cfg, 12, seed=0)
    assert d.h_b1.shape == (2, 1, 12)
    assert d.h_b2.shape == (2, 1, 12)
    assert d.h_a.shape == (0, 1, 12)


def test_draw_bounded_support(s1_cfg):
    d = draw(s1_cfg, 500, seed=1)
    assert d.h_b1.min() >= 0.5
    assert d.h_b1.max() <= 2.0


def test_draw_rational_values(s1_cfg):
    d = draw(s1_cfg, 12, seed=1, mode="rational")
    vals = [d.h_b1[u, 0, t] for u in range(2) for t in range(12)]
    assert all(Fraction(1, 2) <= v <= 2 for v in vals)
    assert all(v.denominator in (1, 2, 4, 8, 16, 32, 64) for v in vals)
    # no repeats within one time series
    for u in range(2):
        series = [d.h_b1[u, 0, t] for t in range(12)]
        assert len(set(series)) == 12


def test_draw_rational_slot_cap(s1_cfg):
    with pytest.raises(ValueError):
        draw(s1_cfg, 98, seed=0, mode="rational")


def test_expand_single_slot(s1_cfg):
    d = draw(s1_cfg, 1, seed=2)
    m = expand(d, ("b", 1, 1))
    assert m.shape == (1, 1)
    assert m[0, 0] == d.h_b1[0, 0, 0]


def test_expand_block_structure():
    cfg = SigmaConfig(2, 1, 1, 0, 0)
    d = draw(cfg, 3, seed=2)
    m = expand(d, ("a", 1))
    assert m.shape == (6, 3)
    assert np.count_nonzero(m) == 6
    for t in range(3):
        col = m[:, t]
        assert np.count_nonzero(col[: 2 * t]) == 0
        assert np.count_nonzero(col[2 * (t + 1):]) == 0


def test_expand_unknown_path(s1_cfg):
    d = draw(s1_cfg, 2, seed=0)
    with pytest.raises(UnknownPath):
        expand(d, ("c", 1))
    with pytest.raises(UnknownPath):
        expand(d, ("b", 3, 1))


def test_stack_rank(s1_cfg):
    d = draw(s1_cfg, 12, seed=3)
    st = stack(d, 1, (1,))
    assert st.matrix.shape == (12, 12)
    assert numerics.rank(st.matrix) == 12


def test_stack_exact_invertible(s1_cfg):
    d = draw(s1_cfg, 12, seed=3, mode="rational")
    st = stack(d, 1, (1,))
    assert numerics.rank(st.matrix) == 12


def test_compute_t_scalar_ratio(s1_cfg):
    d = draw(s1_cfg, 1, seed=4)
    [t] = compute_t(d, 1, 2, (1,))
    assert t.shape == (1, 1)
    assert np.isclose(t[0, 0], d.h_b1[1, 0, 0] / d.h_b1[0, 0, 0])


def test_compute_t_exact_ratios(s1_cfg):
    d = draw(s1_cfg, 12, seed=4, mode="rational")
    [t] = compute_t(d, 1, 2, (1,))
    diag = t_diagonal(t)
    for slot in range(12):
        assert diag[slot] == d.h_b1[1, 0, slot] / d.h_b1[0, 0, slot]


@pytest.mark.parametrize("mode", ["float", "rational"])
def test_compute_t_diagonal_and_reconstructs(mode):
    cfg = SigmaConfig(2, 2, 0, 3, 0)
    d = draw(cfg, 8, seed=9, mode=mode)
    blocks = compute_t(d, 1, 3, (1, 2))
    assert len(blocks) == 2
    st = stack(d, 1, (1, 2)).matrix
    x = np.vstack(blocks)
    recon = numerics.matmul(st, x)
    target = expand(d, ("b", 1, 3))
    if mode == "rational":
        assert all(recon[i, j] == target[i, j]
                   for i in range(16) for j in range(8))
    else:
        scale = np.max(np.abs(target))
        assert np.max(np.abs(recon - target)) < 1e-9 * scale


def test_compute_t_rejects_set_member(s1_cfg):
    d = draw(s1_cfg, 4, seed=0)
    with pytest.raises(ValueError):
        compute_t(d, 1, 1, (1,))
