"""Injectivity radius, density, the cut-off potential and thresholds."""

import math

import numpy as np
import pytest

from discforms.geometry import distance
from discforms.group import orbit_count
from discforms.seshadri import (
    ampleness_thresholds, cutoff_a, density, injectivity_radius, psi_x,
    psi_values, quasi_psh_check, seshadri_lower_bound,
)

from conftest import random_disc_points

D0 = 2.0 * math.acosh(1.0 + math.sqrt(2.0))


@pytest.fixture(scope="module")
def rho0(octagon):
    return injectivity_radius(octagon, 0.0j)


def test_injectivity_radius_preset(octagon, rho0):
    assert rho0 == pytest.approx(D0 / 2.0, abs=1e-12)


def test_injectivity_conjugation_invariance(octagon, rho0):
    g = octagon.generators[2]
    assert injectivity_radius(octagon, g.apply(0.0j)) \
        == pytest.approx(rho0, abs=1e-9)


def test_injectivity_lipschitz(octagon, rng):
    pts = random_disc_points(rng, 5, r_max=0.5)
    rhos = [injectivity_radius(octagon, z) for z in pts]
    for i in range(len(pts)):
        for j in range(i):
            assert abs(rhos[i] - rhos[j]) \
                <= distance(pts[i], pts[j]) + 1e-10


def test_density_at_injectivity_radius(octagon, rho0):
    assert density(octagon, 0.0j, rho0) == 1.0 / rho0 ** 2


def test_density_count_monotone(octagon):
    z = 0.2 + 0.1j
    counts = [orbit_count(octagon, 0.0j, z, r)
              for r in (0.5, 1.0, 1.8, 2.5, 3.2)]
    assert counts == sorted(counts)


def test_density_refinement_monotone(octagon, rho0):
    r = 1.5 * rho0
    coarse = density(octagon, 0.0j, r, refine=False)
    fine = density(octagon, 0.0j, r, refine=True)
    assert fine >= coarse


def test_cutoff_values():
    v, d = cutoff_a(0.0)
    assert v == 0.0 and d == 0.0
    v, _ = cutoff_a(-1.0)
    assert v == pytest.approx(-math.exp(-1.0), abs=1e-15)
    assert cutoff_a(2.0) == (0.0, 0.0)
    # slope tends to 1; a(t)/t converges only at 1/|t| rate
    _, d20 = cutoff_a(-20.0)
    assert abs(d20 - 1.0) < 1e-8
    v, _ = cutoff_a(-1e9)
    assert abs(v / -1e9 - 1.0) < 1e-8


def test_cutoff_c1_and_lipschitz():
    eps = 1e-7
    vm, dm = cutoff_a(-eps)
    assert abs(vm) < 1e-13 and abs(dm) < 1e-6
    ts = np.linspace(-10.0, 10.0, 20001)
    _, der = cutoff_a(ts)
    slopes = np.abs(np.diff(der) / np.diff(ts))
    assert np.max(slopes) <= 1.0 + 1e-9


def test_psi_empty_support(octagon, rho0):
    # z deep inside F, away from every orbit point of 0 by more than r
    z = 0.45 + 0.1j
    r = 0.5
    assert distance(z, 0.0j) > r
    assert psi_x(octagon, 0.0j, r, z) == 0.0


def test_psi_invariance_and_singularity(octagon, rho0):
    g = octagon.generators[5]
    z = 0.25 - 0.1j
    r = 1.5 * rho0
    assert abs(psi_x(octagon, 0.0j, r, g.apply(z))
               - psi_x(octagon, 0.0j, r, z)) < 1e-12
    assert psi_x(octagon, 0.0j, r, 0.0j) == -math.inf
    # psi - log rho^2 stays bounded as z -> x, differences stabilizing
    vals = [psi_x(octagon, 0.0j, rho0, eps)
            - math.log(float(distance(eps, 0.0j)) ** 2)
            for eps in (1e-2, 1e-3, 1e-4, 1e-5)]
    diffs = np.abs(np.diff(vals))
    assert diffs[-1] < diffs[0]
    assert diffs[-1] < 1e-4


def test_quasi_psh_preset(octagon, rho0):
    rep = quasi_psh_check(octagon, 0.0j, rho0, spacing=0.03)
    assert rep.n_violations == 0
    assert rep.n_checked > 1000


def test_quasi_psh_single_center(trivial):
    # one center: the sharper -2 omega / r^2 bound of the display
    rep = quasi_psh_check(trivial, 0.0j, 1.0, spacing=0.03, lower=2.0)
    assert rep.n_violations == 0


def test_seshadri_consistency(octagon, rho0):
    rep = seshadri_lower_bound(octagon, 0.0j)
    assert rep.rho_x == pytest.approx(rho0, abs=1e-15)
    assert rep.bound_inj == pytest.approx(rho0 ** 2 / 2.0, abs=1e-15)
    r_eq = 1.0 / (2.0 * density(octagon, 0.0j, rho0))
    assert abs(rep.bound_inj - r_eq) < 1e-10
    assert rep.epsilon_lower >= rep.bound_inj
    assert rep.best_r >= rho0 - 1e-12
    assert len(rep.candidates) == 5


def test_thresholds():
    assert ampleness_thresholds(2.0, 1) == {"demailly": 3, "main": 4}
    assert ampleness_thresholds(2.0, 1, C=2.0) \
        == {"demailly": 3, "main": 4, "df": 3}
    assert ampleness_thresholds(0.5, 1) == {"demailly": 6, "main": 7}
    assert ampleness_thresholds(2.0, 2) == {"demailly": 4, "main": 5}
    # epsilon -> infinity: demailly and df reach the standing floor m = 2;
    # the main inequality is vacuous at m = 2 ((m-2) eps = 0), so it stops
    # at 3 whatever epsilon
    big = ampleness_thresholds(1e12, 1, C=2.0)
    assert big == {"demailly": 2, "main": 3, "df": 2}
    with pytest.raises(ValueError):
        ampleness_thresholds(-1.0, 1)


def test_psi_values_vector(octagon, rho0):
    zs = np.array([0.1 + 0.1j, 0.45 + 0.1j])
    out = psi_values(octagon, 0.0j, 0.5, zs)
    assert out.shape == (2,)
    assert out[1] == 0.0
