import math
from fractions import Fraction

import numpy as np
import pytest

from sigma_align import region
from sigma_align.errors import DimensionMismatch, SubsetExplosion
from sigma_align.region import (DofPoint, SigmaConfig, check_point,
                                check_point_bruteforce, enumerate_constraints,
                                max_sum_dof, mu0)


def random_point(cfg, rng):
    """Random rational point straddling the feasibility boundary."""
    def grp(k):
        return tuple(Fraction(int(rng.integers(0, 9)),
                              int(rng.integers(1, 8))) / 4 for _ in range(k))
    return DofPoint(grp(cfg.la), grp(cfg.lb), grp(cfg.lb), grp(cfg.lc))


def test_config_validation():
    with pytest.raises(ValueError):
        SigmaConfig(0, 1, 1, 0, 0)
    with pytest.raises(ValueError):
        SigmaConfig(1, 1, 0, 0, 0)
    assert SigmaConfig(2, 2, 1, 3, 1).num_messages == 8


def test_count_x_network(s1_cfg):
    # 2 pair bounds + 3 subsets per BS family (empty, {1}, {2})
    cons = enumerate_constraints(s1_cfg)
    assert len(cons) == 8


def test_count_single_user_mac():
    cfg = SigmaConfig(1, 1, 1, 0, 0)
    cons = enumerate_constraints(cfg)
    labels = {c.label for c in cons}
    assert "single:a1<=1" in labels
    # family cut with the empty subset duplicates the same bound at N1=1
    assert any(l.startswith("mac:bs1") for l in labels)


def test_count_binomial_family(big_cfg):
    cons = enumerate_constraints(big_cfg)
    bs1 = [c for c in cons if c.label.startswith("mac:bs1")]
    assert len(bs1) == math.comb(3, 0) + math.comb(3, 1) + math.comb(3, 2)


def test_subset_explosion():
    cfg = SigmaConfig(10, 10, 0, 25, 0)
    with pytest.raises(SubsetExplosion):
        enumerate_constraints(cfg, cap=100)


def test_origin_feasible(big_cfg):
    zero = DofPoint.make(db1=[0, 0, 0], db2=[0, 0, 0])
    assert check_point(big_cfg, zero).feasible
    assert check_point_bruteforce(big_cfg, zero).feasible


def test_x_network_boundary(s1_cfg, s1_point):
    res = check_point(s1_cfg, s1_point)
    assert res.feasible
    # the family cut is tight: 1/3 + 1/3 + 1/3 = 1
    vec = s1_point.as_vector()
    tight = [c for c in enumerate_constraints(s1_cfg)
             if c.label.startswith("mac") and c.value(vec) == c.bound]
    assert tight


def test_violation_reported(big_cfg):
    d = DofPoint.make(db1=["1/2"] * 3, db2=["1/2"] * 3)
    res = check_point(big_cfg, d)
    assert not res.feasible
    assert any(c.label.startswith("mac:bs1") for c in res.violated)
    # 3/2 own + top-two cross 1 = 5/2 > 2
    mac = next(c for c in res.violated if c.label.startswith("mac:bs1"))
    assert mac.value(d.as_vector()) == Fraction(5, 2)


def test_dimension_mismatch(s1_cfg):
    with pytest.raises(DimensionMismatch):
        check_point(s1_cfg, DofPoint.make(db1=["1/3"], db2=["1/3"]))


@pytest.mark.parametrize("shape", [(1, 1, 0, 2, 0), (2, 2, 1, 3, 1),
                                   (2, 1, 2, 2, 0)])
def test_fast_agrees_with_bruteforce(shape):
    cfg = SigmaConfig(*shape)
    rng = np.random.default_rng(42)
    for _ in range(300):
        d = random_point(cfg, rng)
        fast = check_point(cfg, d)
        brute = check_point_bruteforce(cfg, d)
        assert fast.feasible == brute.feasible
        brute_labels = {c.label for c in brute.violated}
        assert {c.label for c in fast.violated} <= brute_labels


def test_downward_closure(big_cfg):
    rng = np.random.default_rng(7)
    found = 0
    while found < 50:
        d = random_point(big_cfg, rng)
        if not check_point(big_cfg, d).feasible:
            continue
        found += 1
        t = Fraction(int(rng.integers(0, 5)), 4)
        assert check_point(big_cfg, d.scaled(t)).feasible


def test_symmetry_under_bs_swap():
    cfg = SigmaConfig(2, 1, 2, 2, 1)
    rng = np.random.default_rng(3)
    for _ in range(100):
        d = random_point(cfg, rng)
        assert (check_point(cfg, d).feasible
                == check_point(cfg.mirrored(), d.mirrored()).feasible)


def test_mu0():
    assert mu0(DofPoint.make(db1=["1/3", "1/3"], db2=["1/3", "1/3"])) == 3
    assert mu0(DofPoint.make(da=[1, 2])) == 1
    assert mu0(DofPoint.make(da=["1/2", "1/3"])) == 6


def test_max_sum_x_network(s1_cfg):
    value, point = max_sum_dof(s1_cfg, [1, 1, 1, 1])
    assert value == Fraction(4, 3)
    assert check_point(s1_cfg, point).feasible
    vec = point.as_vector()
    assert any(c.value(vec) == c.bound for c in enumerate_constraints(s1_cfg))


def test_max_sum_mac():
    cfg = SigmaConfig(2, 1, 3, 0, 0)
    value, point = max_sum_dof(cfg, [1, 1, 1])
    assert value == Fraction(2)
    assert check_point(cfg, point).feasible


def test_max_sum_zero_weights(big_cfg):
    value, _ = max_sum_dof(big_cfg, [0] * big_cfg.num_messages)
    assert value == 0


def test_max_sum_weighted(s1_cfg):
    # favoring one pair message saturates its pair bound
    value, _ = max_sum_dof(s1_cfg, [1, 0, 0, 0])
    assert value == 1
