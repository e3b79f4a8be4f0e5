"""Dirichlet fundamental domain: geometry, quadrature and the tiling test."""

import math

import numpy as np
import pytest

from discforms.domain import (
    dirichlet_domain, disc_domain, klein_to_poincare, poincare_to_klein,
)
from discforms.geometry import distance
from discforms.group import enumerate_ball

from conftest import random_disc_points

# regular octagon vertex distance: arccosh(cot^2(pi/8))
VERTEX_DIST = math.acosh(1.0 / math.tan(math.pi / 8) ** 2)


@pytest.fixture(scope="module")
def domain(octagon):
    return dirichlet_domain(octagon, 0.0j, spacing=0.01)


def test_klein_chart_roundtrip(rng):
    zs = random_disc_points(rng, 100, r_max=0.95)
    assert np.max(np.abs(klein_to_poincare(poincare_to_klein(zs)) - zs)) \
        < 1e-12


def test_octagon_shape(domain):
    assert len(domain.vertices) == 8
    dists = np.array([distance(0.0j, v) for v in domain.vertices])
    assert np.max(np.abs(dists - VERTEX_DIST)) < 1e-6
    # D8 symmetry: vertices at odd multiples of pi/8
    ang = np.sort(np.angle(np.array(domain.vertices)))
    assert np.max(np.abs(np.diff(ang) - math.pi / 4)) < 1e-9


def test_contains_center_and_boundary(domain):
    assert domain.contains(0.0j)
    assert not domain.contains(0.99)
    assert not domain.contains(1.2 + 0j)     # outside the disc entirely


def test_quadrature_mass_matches_area(domain):
    area = domain.euclidean_area
    mass = float(domain.weights.sum())
    assert np.all(domain.weights > 0)
    assert abs(mass - area) / area < 1e-3


def test_tiling(octagon, domain, rng):
    # every z with rho(0,z) < 2 is moved into F by exactly one gamma
    ball = enumerate_ball(octagon, 0.0j, 2.0 + 2.0 * VERTEX_DIST + 0.5)
    zs = random_disc_points(rng, 200, r_max=math.tanh(1.0))
    for z in zs:
        orbit = (ball.alphas * z + ball.betas) \
            / (np.conj(ball.betas) * z + np.conj(ball.alphas))
        hits = int(np.sum(domain.contains(orbit)))
        assert hits == 1


def test_off_center_domain(octagon):
    dom = dirichlet_domain(octagon, 0.15 + 0.1j, spacing=0.02)
    assert dom.contains(0.15 + 0.1j)
    area = dom.euclidean_area
    assert abs(float(dom.weights.sum()) - area) / area < 1e-3


def test_disc_domain_mass():
    dom = disc_domain(spacing=0.02)
    # 1024-gon inscribed at r ~ 1: mass just under pi
    assert abs(float(dom.weights.sum()) - math.pi) < 0.02
    assert abs(float(dom.weights.sum()) - dom.euclidean_area) \
        / dom.euclidean_area < 1e-3
