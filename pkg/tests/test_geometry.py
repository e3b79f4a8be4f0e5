"""Disc model: Mobius action, kernel, metric, distance, the D-F constant."""

import math

import numpy as np
import pytest
from scipy.integrate import quad

from discforms.errors import BoundaryPoint, NonUnitary
from discforms.geometry import (
    bergman_kernel, bergman_metric, check_su11, dbar_log_kernel_norm_sq,
    df_constant, distance, jacobian, mobius_apply,
)
from discforms.group import GroupElement

from conftest import random_disc_points


def random_elements(rng, n):
    out = []
    for _ in range(n):
        b = (rng.random() + 1j * rng.random()) * 1.5
        a = math.sqrt(1.0 + abs(b) ** 2) * np.exp(2j * np.pi * rng.random())
        out.append(GroupElement(a, b, ()))
    return out


def test_identity_action():
    g = GroupElement.identity()
    z = 0.3 + 0.1j
    assert mobius_apply(g, z) == z
    assert jacobian(g, z) == 1.0


def test_forced_value_at_zero():
    g = GroupElement(math.sqrt(2), 1.0, ())
    assert mobius_apply(g, 0.0) == pytest.approx(1.0 / math.sqrt(2))


def test_boundary_guard():
    with pytest.raises(BoundaryPoint):
        mobius_apply(GroupElement.identity(), 1.0 - 1e-13)
    with pytest.raises(BoundaryPoint):
        bergman_kernel(1.0 + 0j, 0.0)


def test_non_unitary_rejected():
    with pytest.raises(NonUnitary):
        check_su11(1.5, 0.2)


def test_composition(rng):
    zs = random_disc_points(rng, 100)
    for g1, g2 in zip(random_elements(rng, 10), random_elements(rng, 10)):
        both = g1.compose(g2)
        direct = mobius_apply(both, zs)
        chained = mobius_apply(g1, mobius_apply(g2, zs))
        assert np.max(np.abs(direct - chained)) < 1e-12


def test_jacobian_cocycle(rng):
    zs = random_disc_points(rng, 100)
    gs = random_elements(rng, 10)
    for g1, g2 in zip(gs, reversed(gs)):
        lhs = jacobian(g1.compose(g2), zs)
        rhs = jacobian(g1, mobius_apply(g2, zs)) * jacobian(g2, zs)
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_jacobian_conformal_identity(rng):
    # |j_g(z)| (1 - |z|^2) = 1 - |g z|^2
    zs = random_disc_points(rng, 200)
    for g in random_elements(rng, 10):
        lhs = np.abs(jacobian(g, zs)) * (1.0 - np.abs(zs) ** 2)
        rhs = 1.0 - np.abs(mobius_apply(g, zs)) ** 2
        assert np.max(np.abs(lhs - rhs)) < 1e-12


def test_kernel_center_value_and_mass():
    assert bergman_kernel(0.0, 0.0) == pytest.approx(1.0 / math.pi)
    # reproducing check for f = 1: Int K(0, w) d(lambda)(w) = 1
    val, _ = quad(lambda r: 2.0 * math.pi * r / math.pi, 0.0, 1.0)
    assert val == pytest.approx(1.0, abs=1e-12)


def test_kernel_transformation(rng):
    zs = random_disc_points(rng, 100)
    for g in random_elements(rng, 10):
        lhs = bergman_kernel(mobius_apply(g, zs), mobius_apply(g, zs)) \
            * np.abs(jacobian(g, zs)) ** 2
        rhs = bergman_kernel(zs, zs)
        assert np.max(np.abs(lhs - rhs) / np.abs(rhs)) < 1e-12


def test_kernel_radial_monotonicity(rng):
    zs = random_disc_points(rng, 50, r_max=0.95)
    ts = np.linspace(0.02, 1.0, 40)
    for z in zs:
        vals = np.real(bergman_kernel(ts * z, ts * z))
        assert np.all(np.diff(vals) >= -1e-14)
        assert vals[-1] <= np.real(bergman_kernel(z, z)) + 1e-14


def test_metric_invariance(rng):
    assert bergman_metric(0.0) == pytest.approx(2.0)
    zs = random_disc_points(rng, 100)
    for g in random_elements(rng, 10):
        lhs = bergman_metric(mobius_apply(g, zs)) * np.abs(jacobian(g, zs)) ** 2
        assert np.max(np.abs(lhs - bergman_metric(zs))) < 1e-10


def test_metric_is_laplacian_of_log_kernel(rng):
    # (1/4) Laplacian log K(z, z) = g(z)
    zs = random_disc_points(rng, 50, r_max=0.6)
    h = 1e-4

    def logk(z):
        return np.log(np.real(bergman_kernel(z, z)))

    lap = (logk(zs + h) + logk(zs - h) + logk(zs + 1j * h)
           + logk(zs - 1j * h) - 4.0 * logk(zs)) / h ** 2
    assert np.max(np.abs(0.25 * lap - bergman_metric(zs))) < 1e-6


def test_distance_basics(rng):
    zs = random_disc_points(rng, 50)
    assert np.max(distance(zs, zs)) == 0.0
    # closed form vs line-element quadrature along [0, 0.5]
    val, _ = quad(lambda r: 2.0 / (1.0 - r * r), 0.0, 0.5)
    assert distance(0.0, 0.5) == pytest.approx(val, abs=1e-10)


def test_distance_invariance_and_triangle(rng):
    zs = random_disc_points(rng, 60)
    ws = random_disc_points(rng, 60)
    us = random_disc_points(rng, 60)
    for g in random_elements(rng, 10):
        lhs = distance(mobius_apply(g, zs), mobius_apply(g, ws))
        assert np.max(np.abs(lhs - distance(zs, ws))) < 1e-10
    assert np.all(distance(zs, ws) <= distance(zs, us) + distance(us, ws)
                  + 1e-10)


def test_df_constant():
    assert dbar_log_kernel_norm_sq(0.0) == 0.0
    grid_sup, analytic = df_constant()
    assert analytic == 2.0
    assert grid_sup < 2.0
    assert grid_sup == pytest.approx(2.0, abs=1e-6)
