from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from shopd.littledisks import (EPS_B, ConfigError, DiskConfig, PointConfig, check_all,
                               check_associativity, check_equivariance, check_homotopy,
                               common_radius, compose_disks, containment_in_disk, disk_margins,
                               identity_disk, include_with_radii, lipschitz_probe, radius_kink,
                               random_disks, random_points, retract_to_points,
                               straight_line_homotopy)


def test_radius_examples():
    assert common_radius([[0.0, 0.0]]) == pytest.approx(1 / 3, abs=1e-15)
    assert common_radius([[-0.25, 0.0], [0.25, 0.0]]) == pytest.approx(1 / 6, abs=1e-15)
    ip = include_with_radii(PointConfig([[-0.25, 0.0], [0.25, 0.0]]))
    assert np.allclose(ip.radii, [1 / 6, 1 / 6])


def test_radius_kink():
    k = radius_kink()
    assert k["kink"]
    assert k["left"] == pytest.approx(2 / 3, abs=1e-4)
    assert k["right"] == pytest.approx(-1 / 3, abs=1e-4)


def test_lipschitz():
    assert lipschitz_probe(np.random.default_rng(1), 4, 200) <= 2 / 3 + 1e-6


def test_config_validation():
    with pytest.raises(ConfigError):
        PointConfig([[0.0, 0.0], [0.0, 0.0]])
    with pytest.raises(ConfigError):
        PointConfig([[1.0, 0.0]])
    with pytest.raises(ConfigError):
        DiskConfig([[0.0, 0.0], [0.3, 0.0]], [0.2, 0.2])
    with pytest.raises(ConfigError):
        DiskConfig([[0.0, 0.0]], [-0.1])
    with pytest.raises(ConfigError):
        DiskConfig([[0.0, 0.0]], [0.1, 0.1])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 2 ** 32 - 1))
def test_inclusion_valid_and_retract(n, seed):
    rng = np.random.default_rng(seed)
    p = random_points(rng, n)
    ip = include_with_radii(p)
    assert retract_to_points(ip) == p
    m = disk_margins(ip, EPS_B / 3)
    assert m["containment"] >= 0 and m["disjointness"] >= 0


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2 ** 32 - 1))
def test_radius_symmetric(n, seed):
    p = random_points(np.random.default_rng(seed), n)
    for s in permutations(range(n)):
        assert include_with_radii(p.permute(s)) == include_with_radii(p).permute(s)


def test_homotopy_endpoints_and_margins():
    rng = np.random.default_rng(3)
    c = random_disks(rng, 3)
    assert straight_line_homotopy(c, 0.0) == c
    assert straight_line_homotopy(c, 1.0) == include_with_radii(retract_to_points(c))
    for tau in np.linspace(0, 1, 11):
        m = disk_margins(straight_line_homotopy(c, tau))
        assert m["containment"] >= -1e-12 and m["disjointness"] >= -1e-12
    with pytest.raises(ValueError):
        straight_line_homotopy(c, 1.5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_homotopy_sampled(n):
    rep = check_homotopy(np.random.default_rng(n), n, 100)
    assert rep["ok"] and rep["endpoints"]


def test_equivariance():
    assert check_equivariance(3, 20)["ok"]


def test_compose_by_hand():
    a = DiskConfig([[0.5, 0.0]], [0.25])
    b = DiskConfig([[0.0, 0.5]], [0.25])
    c = compose_disks(a, 1, b)
    # x -> (0.5, 0) + 0.25 x
    assert np.allclose(c.centers, [[0.5, 0.125]]) and np.allclose(c.radii, [0.0625])
    assert containment_in_disk(a, 1, b) == pytest.approx(0.25 - 0.125 - 0.0625, abs=1e-15)


def test_nominal_identity():
    rng = np.random.default_rng(0)
    a = random_disks(rng, 3)
    e = identity_disk()
    for k in (1, 2, 3):
        c = compose_disks(a, k, e)
        assert np.allclose(c.centers, a.centers, atol=1e-15)
        assert np.allclose(c.radii, a.radii, atol=1e-15)
    assert compose_disks(e, 1, a) == a


def test_compose_index_error():
    a = random_disks(np.random.default_rng(0), 2)
    with pytest.raises(IndexError):
        compose_disks(a, 3, a)


def test_associativity():
    rep = check_associativity(np.random.default_rng(5), 300)
    assert rep["ok"] and rep["maxDeviation"] <= 1e-12 and rep["containmentMargin"] >= 0


def test_check_all_small():
    rep = check_all(3, 50, seed=1)
    assert rep["ok"]
