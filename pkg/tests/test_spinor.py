from __future__ import annotations

import math

import numpy as np
import pytest

from harmonia.numcore import I, binomial, sqrt_surd
from harmonia.spinor import (
    INF,
    NullVector,
    Pole,
    TwoSpinor,
    canonical_direction,
    cartan_map,
    cartesian_to_spherical,
    chordal_distance,
    couple,
    ncomb_rhs,
    null_product,
    null_spinor,
    pole_from_conjugate_pair,
    pole_from_root,
    spherical_to_cartesian,
    spinor_contract,
)


def test_cartan_map_is_null_and_matches_cartesian_formulas():
    rng = np.random.default_rng(0)
    for _ in range(20):
        psi = TwoSpinor.random(rng)
        b = cartan_map(psi)
        assert b.null_residual() < 1e-14
        x, y, z = b.cartesian
        xi, eta = psi.xi, psi.eta
        assert x == pytest.approx(1j * (eta**2 - xi**2) / math.sqrt(2), abs=1e-14)
        assert y == pytest.approx((xi**2 + eta**2) / math.sqrt(2), abs=1e-14)
        assert z == pytest.approx(1j * math.sqrt(2) * xi * eta, abs=1e-14)


def test_spherical_cartesian_round_trip_exact():
    v = (1, 2, 3)
    s = cartesian_to_spherical(v)
    assert spherical_to_cartesian(s) == v
    assert s[1] == -3 * I


def test_null_spinor_generating_function():
    # alpha^m xi_m = (eta alpha - xi beta)^(2j)
    rng = np.random.default_rng(1)
    for tj in range(1, 6):
        j = tj / 2
        psi, phi = TwoSpinor.random(rng), TwoSpinor.random(rng)
        x = null_spinor(j, psi)
        a = null_spinor(j, phi)
        lhs = spinor_contract(j, a, x)
        rhs = (psi.eta * phi.xi - psi.xi * phi.eta) ** tj
        assert lhs == pytest.approx(rhs, rel=1e-12)


def test_null_spinor_exact():
    x = null_spinor(1, TwoSpinor(1, I))
    assert x == [-1, sqrt_surd(2) * I, 1]


def test_ncomb_product_law():
    rng = np.random.default_rng(2)
    for tj1 in range(1, 5):
        for tj2 in range(1, 5 - tj1 + 1):
            j1, j2 = tj1 / 2, tj2 / 2
            psi = TwoSpinor.random(rng)
            x1, x2 = null_spinor(j1, psi), null_spinor(j2, psi)
            xJ = null_spinor(j1 + j2, psi)
            assert np.abs(np.outer(x1, x2) - ncomb_rhs(j1, j2, xJ)).max() < 1e-12
            assert np.abs(null_product(j1, x1, j2, x2) - xJ).max() < 1e-12


def test_null_coupling_below_top_spin_vanishes():
    rng = np.random.default_rng(3)
    psi = TwoSpinor.random(rng)
    x1, x2 = null_spinor(1, psi), null_spinor(1, psi)
    for j3 in (0, 1):
        assert np.abs(couple(1, x1, 1, x2, j3)).max() < 1e-14


def test_null_product_rejects_different_sources():
    rng = np.random.default_rng(4)
    a, b = TwoSpinor.random(rng), TwoSpinor.random(rng)
    with pytest.raises(ValueError):
        null_product(1, null_spinor(1, a), 1, null_spinor(1, b))


def test_chordal_distance():
    assert chordal_distance(INF, INF) == 0
    assert chordal_distance(0, INF) == pytest.approx(1.0)
    assert chordal_distance(1j, -1j) == pytest.approx(1.0)


def test_pole_from_root_examples():
    assert pole_from_root(INF).direction == (0.0, 0.0, 1.0)
    assert pole_from_root(0).direction == (0.0, 0.0, 1.0)
    t = (1 - 1j) * (1 + math.sqrt(3)) / 2
    p = pole_from_root(t).as_array()
    assert np.allclose(p, np.ones(3) / math.sqrt(3), atol=1e-14)
    # t and -1/conj(t) give the same pole
    assert np.allclose(pole_from_root(-1 / np.conj(t)).as_array(), p, atol=1e-14)


def test_pole_from_conjugate_pair_agrees_with_root_formula():
    rng = np.random.default_rng(5)
    for _ in range(20):
        t = complex(rng.normal(), rng.normal())
        b = cartan_map((t, 1))
        assert np.allclose(pole_from_conjugate_pair(b).as_array(), pole_from_root(t).as_array(), atol=1e-12)


def test_canonical_sign_and_exact_poles():
    assert canonical_direction((1.0, 0.0, -0.0)) == (1.0, 0.0, -0.0)
    assert canonical_direction((0.0, -1.0, 0.0)) == (-0.0, 1.0, -0.0)
    s2 = sqrt_surd(2)
    p = Pole((s2 / 2, -s2 / 2, 0))
    assert p.direction == (-s2 / 2, s2 / 2, 0)
    with pytest.raises(ValueError):
        Pole((1, 1, 0))
    assert Pole((0.0, -0.0, -1.0)).direction == (0.0, 0.0, 1.0)
