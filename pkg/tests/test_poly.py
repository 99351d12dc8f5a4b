from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest

from harmonia.numcore import I, sqrt_surd
from harmonia.poly import BinaryForm, MultiPoly, TernaryPoly, divide_by_r2, laplacian, random_ternary

from helpers import random_rotation

x, y, z = TernaryPoly.x(), TernaryPoly.y(), TernaryPoly.z()
r2 = TernaryPoly.r2()


def test_laplacian_examples():
    assert laplacian(x * y + y * z + z * x).is_zero()
    assert laplacian(x * x) == TernaryPoly.constant(2)
    assert laplacian(r2 * r2) == r2 * 20


def test_divide_by_r2_round_trip():
    rng = np.random.default_rng(1)
    for n in range(2, 8):
        g = random_ternary(rng, n - 2)
        h = random_ternary(rng, n)
        q, rem = divide_by_r2(r2 * g + h)
        # the remainder has no z^2 factor, so h splits off uniquely
        q2, rem2 = divide_by_r2(h)
        assert q == g + q2
        assert rem == rem2
        assert all(e[2] < 2 for e in rem.terms)


def test_exact_arithmetic_stays_exact():
    f = x * Fraction(1, 3) + y * sqrt_surd(2)
    assert f.is_exact()
    assert (f / 2).coefficient(1, 0, 0) == Fraction(1, 6)
    assert (x / 2).coefficient(1, 0, 0) == Fraction(1, 2)


def test_evaluate_and_substitute():
    f = x * x * y - z * z * z * 3 + x * y * z
    p = (0.3, -1.2, 0.7)
    lin = (TernaryPoly.linear(1, 2, 0), TernaryPoly.linear(0, 1, -1), TernaryPoly.linear(3, 0, 1))
    g = f.substitute(*lin)
    q = tuple(l(*p) for l in lin)
    assert g(*p) == pytest.approx(f(*q), rel=1e-13)


def test_rotate_preserves_harmonicity_and_composes():
    rng = np.random.default_rng(2)
    f = x * y + y * z + z * x
    R1, R2 = random_rotation(rng), random_rotation(rng)
    g = f.rotate(R1)
    assert g.laplacian().norm() < 1e-12
    p = rng.normal(size=3)
    assert g(*p) == pytest.approx(f(*(R1.T @ p)), rel=1e-12)
    assert f.rotate(R1).rotate(R2)(*p) == pytest.approx(f.rotate(R2 @ R1)(*p), rel=1e-12)


def test_binary_views_round_trip():
    B = BinaryForm([1, 4, 6, 4, 1])
    assert B.classical() == [1, 1, 1, 1, 1]
    assert BinaryForm.from_classical(B.classical()) == B
    assert BinaryForm.from_phi(B.phi()) == B
    assert B.phi()[2] == sqrt_surd(6)


def test_binary_from_roots_and_derivatives():
    B = BinaryForm.from_roots([1, -1])
    assert B == BinaryForm([1, 0, -1])
    assert B.d_xi() == BinaryForm([2, 0])
    assert B.derivative(0, 2) == BinaryForm([-2])
    assert BinaryForm.from_roots([float("inf")]) == BinaryForm([0, 1])


def test_binary_substitute_matches_evaluation():
    rng = np.random.default_rng(3)
    B = BinaryForm(list(rng.normal(size=5)))
    l, m = (0.3, 1.1), (-0.7, 0.4)
    C = B.substitute(l, m)
    u, v = 0.9, -1.3
    assert C(u, v) == pytest.approx(B(l[0] * u + m[0] * v, l[1] * u + m[1] * v), rel=1e-12)


def test_binary_gaussian_coefficients():
    B = BinaryForm([I, 1])
    assert (B * B).coeffs[0] == -1


def test_multipoly_calculus():
    vs = ("a0", "a1", "a2")
    a0, a1, a2 = (MultiPoly.var(v, vs) for v in vs)
    F = a0 * a2 - a1 * a1
    assert F.diff("a1") == a1 * -2
    assert F.evaluate({"a0": 1, "a1": 2, "a2": 3}) == -1
    assert F.total_degree() == {2}
