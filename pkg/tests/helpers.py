"""Generators shared by the test modules."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from harmonia.harmonic import HarmonicNormalForm, harmonic_projection, normal_form_to_poly
from harmonia.poly import BinaryForm, TernaryPoly, random_ternary


def random_rational_poly(rng, degree: int, span: int = 5) -> TernaryPoly:
    return random_ternary(rng, degree, "rational", span=span)


def random_real_phi(rng, L: int) -> HarmonicNormalForm:
    """Random phi obeying conj(phi^M) = (-1)^(L-M) phi^(-M)."""
    phi = [0j] * (2 * L + 1)
    for M in range(1, L + 1):
        c = complex(rng.normal(), rng.normal())
        phi[M + L] = c
        phi[-M + L] = (-1) ** (L - M) * c.conjugate()
    # phi^0 must satisfy conj(phi^0) = (-1)^L phi^0
    a = rng.normal()
    phi[L] = complex(a) if L % 2 == 0 else 1j * a
    return HarmonicNormalForm(L, tuple(phi))


def random_real_harmonic(rng, L: int) -> TernaryPoly:
    return normal_form_to_poly(random_real_phi(rng, L)).real_part()


def random_rational_harmonic(rng, L: int, span: int = 5) -> TernaryPoly:
    return harmonic_projection(random_rational_poly(rng, L, span))


def random_binary(rng, degree: int, exact: bool = True, span: int = 6) -> BinaryForm:
    if exact:
        return BinaryForm([Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, 4))) for _ in range(degree + 1)])
    return BinaryForm(list(rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)))


def random_rotation(rng) -> np.ndarray:
    q = rng.normal(size=4)
    q /= np.linalg.norm(q)
    w, x, y, z = q
    return np.array(
        [
            [1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)],
            [2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)],
            [2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)],
        ]
    )
