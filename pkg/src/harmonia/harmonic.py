"""Solid harmonics, harmonic projection, the Gauss decomposition and the
passage between ternary harmonics and binary forms on the null cone.

Solid harmonics C^L_M are generated from the three linear ones
C^1_1 = (ix + y)/sqrt2, C^1_0 = -iz, C^1_-1 = (-ix + y)/sqrt2 by coupling
with 3j symbols, and restrict on the cone to

    C^L_M(cartan(xi, eta)) = sqrt((2L)!)/(2^(L/2) L!) * sqrt(C(2L, L-M)) xi^(L+M) eta^(L-M).

Upper-index harmonics are C^M_L = (-1)^(L+M) C^L_(-M).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .numcore import I, Surd, binomial, factorial, is_exact, simplify, sqrt_surd, wigner_3j
from .poly import BinaryForm, TernaryPoly, _div

__all__ = [
    "HarmonicNormalForm",
    "GaussDecomposition",
    "NotHarmonicError",
    "solid_harmonic",
    "solid_harmonic_upper",
    "solid_harmonic_numeric",
    "cone_constant",
    "harmonic_projection",
    "gauss_decompose",
    "restrict_to_conic",
    "reconstruct_from_conic",
    "normal_form_to_poly",
    "poly_to_normal_form",
    "compose_harmonics",
    "biaxial_harmonic",
    "addition_sum",
    "is_harmonic",
]


class NotHarmonicError(ValueError):
    """The input polynomial has a nonzero Laplacian."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


def _sign(k: int) -> int:
    return -1 if k % 2 else 1


# ---------------------------------------------------------------------------
# solid harmonics

_SH_LOCK = threading.Lock()
_SH: dict[tuple[int, int], TernaryPoly] = {}


def _c1(M: int) -> TernaryPoly:
    h = sqrt_surd(Fraction(1, 2))
    if M == 1:
        return TernaryPoly.linear(I * h, h, 0)
    if M == 0:
        return TernaryPoly.linear(0, 0, -I)
    return TernaryPoly.linear(-I * h, h, 0)


def _build(L: int, M: int) -> TernaryPoly:
    if L == 0:
        return TernaryPoly.constant(1)
    if L == 1:
        return _c1(M)
    pref = sqrt_surd(Fraction(4 * L * L - 1, L))
    out = TernaryPoly(L)
    for m1 in (-1, 0, 1):
        m2 = M - m1
        if abs(m2) > L - 1:
            continue
        w = wigner_3j(L, 1, L - 1, M, -m1, -m2)
        if not w:
            continue
        w = w.to_surd() * (_sign(1 + m1) * _sign(L - 1 + m2))
        out = out + (solid_harmonic(L - 1, m2) * _c1(m1)) * (pref * w)
    return out


def solid_harmonic(L: int, M: int) -> TernaryPoly:
    """Exact C^L_M (lower index) as a TernaryPoly with Surd coefficients."""
    if L < 0 or abs(M) > L:
        raise ValueError(f"no solid harmonic with L={L}, M={M}")
    key = (L, M)
    f = _SH.get(key)
    if f is None:
        f = _build(L, M)
        with _SH_LOCK:
            f = _SH.setdefault(key, f)
    return f


@lru_cache(maxsize=None)
def solid_harmonic_numeric(L: int, M: int) -> TernaryPoly:
    return solid_harmonic(L, M).numeric()


def solid_harmonic_upper(L: int, M: int) -> TernaryPoly:
    """C^M_L = (-1)^(L+M) C^L_(-M)."""
    return solid_harmonic(L, -M) * _sign(L + M)


def cone_constant(L: int) -> Surd:
    """sqrt((2L)!) / (2^(L/2) L!)."""
    return sqrt_surd(Fraction(factorial(2 * L), 2**L * factorial(L) ** 2))


# ---------------------------------------------------------------------------
# projection and Gauss decomposition


def is_harmonic(f: TernaryPoly, tol: float = 1e-9) -> bool:
    lap = f.laplacian()
    if f.is_exact():
        return lap.is_zero()
    return lap.norm() <= tol * max(f.norm(), 1e-300)


def _r2k(k: int) -> TernaryPoly:
    return TernaryPoly.r2() ** k


def harmonic_projection(f: TernaryPoly) -> TernaryPoly:
    """Harmonic leading term of f: sum_k (-1)^k r^2k D^k f / (2.4...2k (2m-1)(2m-3)...(2m-2k+1))."""
    m = f.degree
    out = f
    lap = f
    den = 1
    k = 0
    while True:
        lap = lap.laplacian()
        if lap.is_zero() or m - 2 * (k + 1) < 0:
            break
        k += 1
        den *= (2 * k) * (2 * m - 2 * k + 1)
        out = out + (_r2k(k) * lap) * Fraction(_sign(k), den)
    return out


@dataclass(frozen=True)
class GaussDecomposition:
    """f = sum_s r^(2s) Y_(n-2s); components[s] holds Y_(n-2s)."""

    degree: int
    components: tuple

    def reconstruct(self) -> TernaryPoly:
        out = TernaryPoly(self.degree)
        for s, Y in enumerate(self.components):
            out = out + _r2k(s) * Y
        return out

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)


def gauss_constant(n: int, s: int) -> int:
    """A_s(n) = (2.4...2s) (2n-2s+1)(2n-2s-1)...(2n-4s+3)."""
    a = 1
    for k in range(1, s + 1):
        a *= 2 * k
    for k in range(s):
        a *= 2 * n - 2 * s + 1 - 2 * k
    return a


def gauss_decompose(f: TernaryPoly) -> GaussDecomposition:
    n = f.degree
    comps = []
    lap = f
    for s in range(n // 2 + 1):
        if s:
            lap = lap.laplacian()
        comps.append(_div_poly(harmonic_projection(lap), gauss_constant(n, s)))
    return GaussDecomposition(n, tuple(comps))


def _div_poly(f: TernaryPoly, k: int) -> TernaryPoly:
    return TernaryPoly(f.degree, {e: _div(c, k) for e, c in f.terms.items()})


# ---------------------------------------------------------------------------
# restriction to the null cone

# x = (i/sqrt2)(eta^2 - xi^2), y = (xi^2 + eta^2)/sqrt2, z = i sqrt2 xi eta,
# so x^p y^q z^r = 2^(-n/2) i^(p+r) 2^r (eta^2 - xi^2)^p (xi^2 + eta^2)^q (xi eta)^r.


@lru_cache(maxsize=4096)
def _cone_monomial(p: int, q: int, r: int) -> tuple[int, ...]:
    """Integer coefficients of 2^r (eta^2-xi^2)^p (xi^2+eta^2)^q (xi eta)^r."""
    X = BinaryForm([-1, 0, 1])
    Y = BinaryForm([1, 0, 1])
    Z = BinaryForm([0, 1, 0])
    f = (X**p) * (Y**q) * (Z**r) * (2**r)
    return tuple(int(c) for c in f.coeffs)


def restrict_to_conic(f: TernaryPoly) -> BinaryForm:
    """The binary 2n-ic f(x(xi, eta), y(xi, eta), z(xi, eta))."""
    n = f.degree
    size = 2 * n + 1
    if not f.terms:
        return BinaryForm.zero(2 * n)
    if f.is_exact():
        rational = all(not isinstance(c, Surd) for c in f.terms.values())
        if rational:
            re = [Fraction(0)] * size
            im = [Fraction(0)] * size
            for (p, q, r), c in f.terms.items():
                k = (p + r) % 4
                tgt = re if k % 2 == 0 else im
                c = c if k < 2 else -c
                for idx, v in enumerate(_cone_monomial(p, q, r)):
                    if v:
                        tgt[idx] += c * v
            acc = [Surd.gaussian(a, b) for a, b in zip(re, im)]
        else:
            acc = [Surd()] * size
            units = [Surd.of(1), I, Surd.of(-1), -I]
            for (p, q, r), c in f.terms.items():
                cu = units[(p + r) % 4] * c
                for idx, v in enumerate(_cone_monomial(p, q, r)):
                    if v:
                        acc[idx] = acc[idx] + cu * v
        scale = sqrt_surd(Fraction(1, 2**n))
        return BinaryForm([a * scale for a in acc])
    acc = np.zeros(size, dtype=complex)
    for (p, q, r), c in f.terms.items():
        acc += complex(c) * (1j ** ((p + r) % 4)) * np.array(_cone_monomial(p, q, r), dtype=float)
    return BinaryForm(list(acc * 2.0 ** (-n / 2)))


# ---------------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class HarmonicNormalForm:
    """Phi_L = sum_M phi^M C^L_M with phi ordered M = -L..L."""

    L: int
    phi: tuple

    def __post_init__(self):
        phi = tuple(simplify(c) if is_exact(c) else complex(c) for c in self.phi)
        if len(phi) != 2 * self.L + 1:
            raise ValueError(f"need {2 * self.L + 1} coefficients for L={self.L}")
        object.__setattr__(self, "phi", phi)

    @classmethod
    def from_dict(cls, L: int, coeffs: dict) -> "HarmonicNormalForm":
        return cls(L, tuple(coeffs.get(M, 0) for M in range(-L, L + 1)))

    def component(self, M: int):
        return self.phi[M + self.L]

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.phi)

    def numeric(self) -> "HarmonicNormalForm":
        return HarmonicNormalForm(self.L, tuple(complex(c) for c in self.phi))

    def reality_residual(self) -> float:
        """max |conj(phi^M) - (-1)^(L-M) phi^(-M)| relative to max |phi|."""
        L = self.L
        ph = [complex(c) for c in self.phi]
        scale = max((abs(c) for c in ph), default=0.0)
        res = max(abs(ph[M + L].conjugate() - _sign(L - M) * ph[-M + L]) for M in range(-L, L + 1))
        return res / scale if scale else 0.0

    def is_real(self, tol: float = 1e-10) -> bool:
        if self.is_exact():
            L = self.L
            return all(
                _conj(self.phi[M + L]) == _sign(L - M) * self.phi[-M + L] for M in range(-L, L + 1)
            )
        return self.reality_residual() <= tol

    def to_poly(self) -> TernaryPoly:
        return normal_form_to_poly(self)

    def to_binary(self) -> BinaryForm:
        """Restriction to the cone, read directly from the coefficients."""
        L = self.L
        b = [0] * (2 * L + 1)
        kappa = cone_constant(L)
        for M in range(-L, L + 1):
            c = self.phi[M + L]
            k = L - M
            s = kappa * sqrt_surd(binomial(2 * L, k))
            b[k] = simplify(c * s) if is_exact(c) else c * complex(s)
        return BinaryForm(b)


def _conj(c):
    return c.conjugate() if isinstance(c, (Surd, complex)) else c


def normal_form_to_poly(nf: HarmonicNormalForm) -> TernaryPoly:
    L = nf.L
    exact = nf.is_exact()
    out = TernaryPoly(L)
    for M in range(-L, L + 1):
        c = nf.phi[M + L]
        if c == 0:
            continue
        C = solid_harmonic(L, M) if exact else solid_harmonic_numeric(L, M)
        out = out + C * c
    return out


def reconstruct_from_conic(B: BinaryForm) -> HarmonicNormalForm:
    """The unique harmonic whose restriction to the cone is B."""
    d = B.degree
    if d % 2:
        raise ValueError("restrictions of ternary forms have even degree")
    L = d // 2
    phi = []
    for M in range(-L, L + 1):
        k = L - M
        c = B.coeffs[k]
        inv = sqrt_surd(Fraction(2**L * factorial(L) ** 2, factorial(2 * L) * binomial(2 * L, k)))
        phi.append(simplify(c * inv) if is_exact(c) else complex(c) * complex(inv))
    return HarmonicNormalForm(L, tuple(phi))


def poly_to_normal_form(f: TernaryPoly, tol: float = 1e-9) -> HarmonicNormalForm:
    """Inverse of normal_form_to_poly; rejects non-harmonic input."""
    lap = f.laplacian()
    if f.is_exact():
        if not lap.is_zero():
            raise NotHarmonicError("polynomial is not harmonic", lap.norm())
    elif lap.norm() > tol * max(f.norm(), 1e-300):
        raise NotHarmonicError(
            f"polynomial is not harmonic (Laplacian residual {lap.norm():.3e})", lap.norm()
        )
    return reconstruct_from_conic(restrict_to_conic(f))


# ---------------------------------------------------------------------------
# composition and addition theorems


def compose_harmonics(L1: int, M1: int, L2: int, M2: int) -> list[tuple[int, int, Surd]]:
    """Expand C^(M1)_(L1) C^(M2)_(L2) = sum coeff * r^(L1+L2-L3) C^(M3)_(L3).

    Returns (L3, M3, coeff) with
    coeff = (2L3+1) (-1)^L3 i^(L1+L2-L3) 3j(L1 L2 L3; 0 0 0) W,
    W = (-1)^(L1+M1+L2+M2) 3j(L1 L2 L3; -M1 -M2 M3) the symbol with M1, M2
    raised, and M3 = M1 + M2.
    """
    M3 = M1 + M2
    out = []
    for L3 in range(abs(L1 - L2), L1 + L2 + 1):
        if (L1 + L2 + L3) % 2 or abs(M3) > L3:
            continue
        a = wigner_3j(L1, L2, L3, 0, 0, 0)
        w = wigner_3j(L1, L2, L3, -M1, -M2, M3)
        if not a or not w:
            continue
        k = (L1 + L2 - L3) // 2  # i^(L1+L2-L3) = (-1)^k
        c = (a * w).to_surd() * ((2 * L3 + 1) * _sign(L3 + L1 + M1 + L2 + M2 + k))
        out.append((L3, M3, simplify(c)))
    return out


def compose_to_poly(terms, L1: int, L2: int) -> TernaryPoly:
    out = TernaryPoly(L1 + L2)
    for L3, M3, c in terms:
        out = out + (_r2k((L1 + L2 - L3) // 2) * solid_harmonic_upper(L3, M3)) * c
    return out


def biaxial_harmonic(L: int, r, rp) -> complex:
    """2^-L sum_K (-1)^K C(L,K) C(2L-2K, L) |r'|^2K |r|^2K (r.r')^(L-2K)."""
    r = np.asarray(r)
    rp = np.asarray(rp)
    rr = np.dot(r, r)
    pp = np.dot(rp, rp)
    rd = np.dot(r, rp)
    out = 0
    for K in range(L // 2 + 1):
        out += _sign(K) * binomial(L, K) * binomial(2 * L - 2 * K, L) * (pp * rr) ** K * rd ** (L - 2 * K)
    return out / 2**L


def addition_sum(L: int, r, rp) -> complex:
    """sum_M C^L_M(r') C^M_L(r)."""
    out = 0j
    for M in range(-L, L + 1):
        lo = solid_harmonic_numeric(L, M)(*rp)
        up = _sign(L + M) * solid_harmonic_numeric(L, -M)(*r)
        out += lo * up
    return out
