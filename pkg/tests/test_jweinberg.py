from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.linalg import expm

from harmonia.numcore import I, half
from harmonia.spinor import TwoSpinor
from harmonia.jweinberg import (
    ck_pi,
    contract_tensor,
    jw_spatial_tensor,
    null_sandwich_check,
    rho_j,
    rotation_pi,
    spin_matrices,
)

SPINS = [Fraction(k, 2) for k in range(1, 9)]


def _unit(rng):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v)


def test_spin_half_is_half_pauli():
    S = spin_matrices(Fraction(1, 2))
    assert_allclose(S.Jx, [[0, 0.5], [0.5, 0]])
    assert_allclose(S.Jy, [[0, -0.5j], [0.5j, 0]])
    assert_allclose(S.Jz, [[0.5, 0], [0, -0.5]])


@pytest.mark.parametrize("j", [Fraction(k, 2) for k in range(0, 9)])
def test_commutators_casimir_spectrum(j):
    S = spin_matrices(j)
    Jx, Jy, Jz = S.components()
    assert_allclose(Jx @ Jy - Jy @ Jx, 1j * Jz, atol=1e-12)
    assert_allclose(Jy @ Jz - Jz @ Jy, 1j * Jx, atol=1e-12)
    assert_allclose(Jz @ Jx - Jx @ Jz, 1j * Jy, atol=1e-12)
    assert_allclose(S.casimir(), float(j * (j + 1)) * np.eye(S.dim), atol=1e-12)
    assert_allclose(np.sort(np.linalg.eigvalsh(Jz)), [float(-j + k) for k in range(S.dim)], atol=1e-12)
    # ladder elements real and non-negative
    Jp = Jx + 1j * Jy
    assert np.all(np.abs(Jp.imag) < 1e-15) and np.all(Jp.real >= -1e-15)


def test_negative_spin_rejected():
    with pytest.raises(ValueError):
        spin_matrices(Fraction(-1, 2))


def test_ck_tables():
    assert ck_pi(1).c == {0: 1, 2: -2}
    assert ck_pi(Fraction(3, 2)).c == {1: I * Fraction(7, 3), 3: I * Fraction(-4, 3)}
    assert ck_pi(2).c == {0: 1, 2: Fraction(-8, 3), 4: Fraction(2, 3)}
    assert ck_pi(Fraction(1, 2)).c == {1: 2 * I}
    with pytest.raises(ValueError):
        ck_pi(0)


@pytest.mark.parametrize("j", SPINS)
def test_ck_reproduce_the_eigenvalue_phases(j):
    t = ck_pi(j)
    tj = half(j).twice
    if tj % 2 == 0:
        assert t.c[0] == 1
    for k in range(tj + 1):
        m = -j + k
        want = (-1) ** int(m) if tj % 2 == 0 else I * (-1) ** int(m - Fraction(1, 2))
        assert t.value(m) == want


@pytest.mark.parametrize("j", SPINS)
def test_ck_matrix_is_the_pi_rotation(j):
    rng = np.random.default_rng(int(2 * j))
    t = ck_pi(j)
    for _ in range(5):
        n = _unit(rng)
        # conjugated coefficients give exp(-i pi n.J) in every case
        assert_allclose(t.matrix(n, conjugate=True), rotation_pi(j, n), atol=1e-10)
        if half(j).twice % 2:
            assert_allclose(t.matrix(n), expm(1j * np.pi * spin_matrices(j).along(n)), atol=1e-10)


@pytest.mark.parametrize("j", SPINS)
def test_tensor_symmetry_and_hermiticity(j):
    t = jw_spatial_tensor(j)
    rank = half(j).twice
    assert t.shape == (3,) * rank + (rank + 1, rank + 1)
    for perm in itertools.permutations(range(rank)):
        assert np.array_equal(t, np.transpose(t, perm + (rank, rank + 1)))
        if rank > 4:
            break
    for idx in itertools.product(range(3), repeat=rank):
        assert_allclose(t[idx], t[idx].conj().T, atol=1e-12)


def test_spin_half_tensor_is_pauli():
    t = jw_spatial_tensor(Fraction(1, 2))
    S = spin_matrices(Fraction(1, 2))
    for i, Ji in enumerate(S.components()):
        assert_allclose(t[i], 2 * Ji, atol=1e-14)


def test_spin_one_quadratic_form():
    S = spin_matrices(1)
    t = jw_spatial_tensor(1)
    rng = np.random.default_rng(0)
    for _ in range(10):
        r = rng.normal(size=3)
        A = S.along(r)
        assert_allclose(contract_tensor(t, r), 2 * A @ A - (r @ r) * np.eye(3), atol=1e-12)


@pytest.mark.parametrize("j", SPINS)
def test_tensor_against_matrix_exponential(j):
    rng = np.random.default_rng(10 + int(2 * j))
    t = jw_spatial_tensor(j)
    phase = np.exp(1j * np.pi * float(j))
    for _ in range(20):
        n = _unit(rng)
        s = rng.uniform(0.5, 2.0)
        want = phase * s ** (2 * float(j)) * rotation_pi(j, n)
        assert_allclose(contract_tensor(t, s * n), want, atol=1e-10 * s ** (2 * float(j)))


def test_tensor_size_limit():
    with pytest.raises(ValueError):
        jw_spatial_tensor(Fraction(9, 2))


@pytest.mark.parametrize("j", SPINS[:6])
def test_null_sandwich(j):
    rng = np.random.default_rng(20 + int(2 * j))
    for _ in range(3):
        psi = TwoSpinor.random(rng)
        rep = null_sandwich_check(j, psi, seed=int(2 * j))
        assert rep["passed"], rep
        assert rep["tracel_ok"]
        # the measured constant of the sandwich identity
        assert rep["closed_form_matches"]


def test_null_sandwich_normalizations():
    psi = TwoSpinor(0.6, 0.8j)
    half_rep = null_sandwich_check(Fraction(1, 2), psi)
    assert half_rep["rho_matches"]
    # the quoted normalization agrees only at j = 1/2; higher j is reported
    rep = null_sandwich_check(2, psi)
    assert rep["passed"] and not rep["rho_matches"]
    assert rep["sandwich_constant"] == pytest.approx(rep["closed_form_constant"], rel=1e-9)
    assert abs(rho_j(2)) == pytest.approx(2.0**-4 * np.sqrt(40320.0))
