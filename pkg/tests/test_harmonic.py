from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from harmonia.harmonic import (
    HarmonicNormalForm,
    NotHarmonicError,
    addition_sum,
    biaxial_harmonic,
    compose_harmonics,
    compose_to_poly,
    cone_constant,
    gauss_constant,
    gauss_decompose,
    harmonic_projection,
    is_harmonic,
    normal_form_to_poly,
    poly_to_normal_form,
    reconstruct_from_conic,
    restrict_to_conic,
    solid_harmonic,
    solid_harmonic_upper,
)
from harmonia.numcore import I, binomial, sqrt_surd
from harmonia.poly import BinaryForm, TernaryPoly, divide_by_r2
from harmonia.spinor import TwoSpinor, cartan_map, null_spinor

from helpers import random_rational_harmonic, random_rational_poly, random_real_phi

x, y, z = TernaryPoly.x(), TernaryPoly.y(), TernaryPoly.z()
r2 = TernaryPoly.r2()
s2 = sqrt_surd(2)


def test_low_order_solid_harmonics():
    assert solid_harmonic(0, 0) == TernaryPoly.constant(1)
    assert solid_harmonic(1, 0) == z * (-I)
    assert solid_harmonic(1, 1) == (x * I + y) / s2
    assert solid_harmonic(1, -1) == (x * -I + y) / s2


def test_solid_harmonics_are_harmonic():
    for L in range(7):
        for M in range(-L, L + 1):
            assert solid_harmonic(L, M).laplacian().is_zero()


def test_solid_harmonic_restriction_is_cone_monomial():
    # C^L_M on the cone = kappa_L sqrt(C(2L, L-M)) xi^(L+M) eta^(L-M)
    for L in range(6):
        kappa = cone_constant(L)
        for M in range(-L, L + 1):
            B = restrict_to_conic(solid_harmonic(L, M))
            expect = [0] * (2 * L + 1)
            expect[L - M] = kappa * sqrt_surd(binomial(2 * L, L - M))
            assert B == BinaryForm(expect)


def test_generating_function_identity():
    # kappa_L (a.r)^L = xi^(L)_M C^M_L(r) for a null vector a built from psi
    rng = np.random.default_rng(0)
    for L in range(1, 6):
        psi = TwoSpinor.random(rng)
        a = np.array(cartan_map(psi).cartesian, dtype=complex)
        xi = null_spinor(L, psi)
        r = rng.normal(size=3)
        rhs = sum(solid_harmonic_upper(L, M).numeric()(*r) * xi[M + L] for M in range(-L, L + 1))
        assert complex(cone_constant(L)) * (a @ r) ** L == pytest.approx(rhs, rel=1e-12)


def test_addition_theorem():
    rng = np.random.default_rng(1)
    for L in range(6):
        r, rp = rng.normal(size=3), rng.normal(size=3)
        assert addition_sum(L, r, rp) == pytest.approx(biaxial_harmonic(L, r, rp), rel=1e-11, abs=1e-12)
    # on the z axis the biaxial harmonic is r^L r'^L P_L(cos gamma)
    g = 0.7
    assert biaxial_harmonic(3, (0, 0, 1), (0, math.sin(g), math.cos(g))) == pytest.approx(
        0.5 * (5 * math.cos(g) ** 3 - 3 * math.cos(g))
    )


def test_composition_law_exact():
    for L1, L2 in ((1, 1), (1, 2), (2, 2), (2, 3)):
        for M1 in range(-L1, L1 + 1):
            for M2 in range(-L2, L2 + 1):
                lhs = solid_harmonic_upper(L1, M1) * solid_harmonic_upper(L2, M2)
                rhs = compose_to_poly(compose_harmonics(L1, M1, L2, M2), L1, L2)
                assert lhs == rhs


def test_harmonic_projection_properties():
    rng = np.random.default_rng(2)
    for n in range(0, 9):
        f = random_rational_poly(rng, n)
        H = harmonic_projection(f)
        assert H.laplacian().is_zero()
        q, rem = divide_by_r2(f - H)
        assert rem.is_zero()
        assert harmonic_projection(H) == H


def test_harmonic_projection_example():
    assert harmonic_projection(x * x) == x * x - r2 / 3


def test_gauss_decomposition_exact():
    rng = np.random.default_rng(3)
    for n in range(0, 9):
        f = random_rational_poly(rng, n)
        g = gauss_decompose(f)
        assert g.reconstruct() == f
        assert all(Y.laplacian().is_zero() for Y in g)
        assert len(g) == n // 2 + 1


def test_gauss_constant_values():
    # A_1(n) = 2(2n-1): Laplacian of r^2 Y_(n-2) is 2(2n-1) Y_(n-2)
    assert gauss_constant(4, 1) == 2 * 7
    assert gauss_constant(4, 0) == 1
    Y = x * y
    assert (r2 * Y).laplacian() == Y * gauss_constant(4, 1)


def test_restriction_of_quadratic_example():
    B = restrict_to_conic(x * y + y * z + z * x)
    expect = BinaryForm([-I / 2, 1 + I, 0, -1 + I, I / 2])
    assert B == expect


def test_restriction_of_tetrahedral_quartic():
    H = (
        x**4 * -3 - y**4 * 3 - z**4 * 8 - x * x * y * y * 6 + y * y * z * z * 24 + x * x * z * z * 24
        - x * x * y * z * (60 * s2) + y**3 * z * (20 * s2)
    )
    B = restrict_to_conic(H)
    xi, eta = BinaryForm([1, 0]), BinaryForm([0, 1])
    expect = xi * eta * (((xi**6 + eta**6) * (2 * I * s2)) - (xi * eta) ** 3 * 7) * 20
    assert B == expect


def test_restriction_kills_r2_multiples():
    rng = np.random.default_rng(4)
    g = random_rational_poly(rng, 3)
    assert restrict_to_conic(r2 * g).is_zero()


def test_restrict_reconstruct_round_trip_exact():
    rng = np.random.default_rng(5)
    for d in range(0, 25, 2):
        B = BinaryForm([Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4))) for _ in range(d + 1)])
        nf = reconstruct_from_conic(B)
        assert nf.to_binary() == B
        assert restrict_to_conic(normal_form_to_poly(nf)) == B


def test_reconstruct_of_restriction_is_leading_gauss_term():
    rng = np.random.default_rng(6)
    for n in range(0, 7):
        f = random_rational_poly(rng, n)
        nf = reconstruct_from_conic(restrict_to_conic(f))
        assert normal_form_to_poly(nf) == gauss_decompose(f).components[0]


def test_quadratic_recovered_and_real():
    nf = reconstruct_from_conic(BinaryForm([-I / 2, 1 + I, 0, -1 + I, I / 2]))
    assert nf.is_real()
    assert normal_form_to_poly(nf) == x * y + y * z + z * x


def test_reality_condition_matches_real_coefficients():
    rng = np.random.default_rng(7)
    for L in range(1, 6):
        nf = random_real_phi(rng, L)
        f = normal_form_to_poly(nf)
        assert f.is_real(1e-12)
        bad = HarmonicNormalForm(L, tuple(c * 1j if i == 0 else c for i, c in enumerate(nf.phi)))
        assert not bad.is_real(1e-10)


def test_poly_to_normal_form_rejects_non_harmonic():
    with pytest.raises(NotHarmonicError):
        poly_to_normal_form(x * x)
    nf = poly_to_normal_form(x * y)
    assert normal_form_to_poly(nf) == x * y


def test_is_harmonic_tolerance():
    rng = np.random.default_rng(8)
    f = random_rational_harmonic(rng, 4).numeric()
    assert is_harmonic(f)
    assert not is_harmonic(f + r2 * r2 * 1e-3)
