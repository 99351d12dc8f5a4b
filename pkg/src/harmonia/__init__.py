"""Solid spherical harmonics, their Maxwell poles and the binary invariant
theory behind them.

Modules: numcore (exact scalars, 3j symbols), poly (ternary and binary
polynomials), spinor (two-spinors, null spinors, poles), harmonic (solid
harmonics, projection, restriction to the null cone), poles (the pole
pipeline), invariants (transvectants, annihilators, Upsilon), jweinberg
(spin matrices and pi-rotation tensors) and cli.
"""

from __future__ import annotations

from .harmonic import (
    HarmonicNormalForm,
    NotHarmonicError,
    gauss_decompose,
    harmonic_projection,
    normal_form_to_poly,
    poly_to_normal_form,
    reconstruct_from_conic,
    restrict_to_conic,
    solid_harmonic,
)
from .numcore import HalfInt, Surd, half, sqrt_surd, wigner_3j
from .poles import PoleDecomposition, find_projective_roots, maxwell_poles, verify_decomposition
from .poly import BinaryForm, MultiPoly, TernaryPoly
from .spinor import Pole, TwoSpinor, cartan_map, null_spinor

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "HalfInt",
    "HarmonicNormalForm",
    "MultiPoly",
    "NotHarmonicError",
    "Pole",
    "PoleDecomposition",
    "Surd",
    "TernaryPoly",
    "TwoSpinor",
    "cartan_map",
    "find_projective_roots",
    "gauss_decompose",
    "half",
    "harmonic_projection",
    "maxwell_poles",
    "normal_form_to_poly",
    "null_spinor",
    "poly_to_normal_form",
    "reconstruct_from_conic",
    "restrict_to_conic",
    "solid_harmonic",
    "sqrt_surd",
    "verify_decomposition",
    "wigner_3j",
]
