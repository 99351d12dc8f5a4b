"""Two-spinors, null (2j+1)-spinors, the Cartan map onto the null cone and
the formulas turning projective roots into real unit vectors (poles).

Spherical components of a vector follow r_1 = i(x - iy)/sqrt2, r_0 = -iz,
r_-1 = -i(x + iy)/sqrt2, and the Cartan map sends (xi, eta) to the null
vector with spherical components (xi^2, sqrt2 xi eta, eta^2).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .numcore import Surd, binomial, half, is_exact, m_range, simplify, sqrt_surd, wigner_3j

__all__ = [
    "TwoSpinor",
    "NullVector",
    "Pole",
    "INF",
    "null_spinor",
    "spinor_contract",
    "couple",
    "null_product",
    "ncomb_rhs",
    "cartan_map",
    "spherical_to_cartesian",
    "cartesian_to_spherical",
    "pole_from_conjugate_pair",
    "pole_from_root",
    "canonical_direction",
    "chordal_distance",
    "is_infinite",
]

INF = math.inf
SQRT2 = math.sqrt(2.0)
SIGN_TOL = 1e-9


def is_infinite(t) -> bool:
    if t is None:
        return True
    try:
        return cmath.isinf(complex(t))
    except TypeError:
        return False


def chordal_distance(a, b) -> float:
    """Chordal distance between two points of the Riemann sphere."""
    ia, ib = is_infinite(a), is_infinite(b)
    if ia and ib:
        return 0.0
    if ia:
        return 1.0 / math.sqrt(1.0 + abs(b) ** 2)
    if ib:
        return 1.0 / math.sqrt(1.0 + abs(a) ** 2)
    a, b = complex(a), complex(b)
    return abs(a - b) / (math.sqrt(1.0 + abs(a) ** 2) * math.sqrt(1.0 + abs(b) ** 2))


@dataclass(frozen=True)
class TwoSpinor:
    xi: complex
    eta: complex

    def is_zero(self) -> bool:
        return self.xi == 0 and self.eta == 0

    def ratio(self):
        """The projective coordinate t = xi/eta (INF when eta = 0)."""
        if self.eta == 0:
            return INF
        return self.xi / self.eta

    @classmethod
    def random(cls, rng) -> "TwoSpinor":
        v = rng.normal(size=4)
        v /= np.linalg.norm(v)
        return cls(complex(v[0], v[1]), complex(v[2], v[3]))


def _as_spinor(psi) -> TwoSpinor:
    if isinstance(psi, TwoSpinor):
        return psi
    xi, eta = psi
    return TwoSpinor(xi, eta)


# ---------------------------------------------------------------------------
# null spinors


def null_spinor(j, psi):
    """Components C(2j, j-m)^(1/2) xi^(j+m) eta^(j-m), ordered m = -j..j.

    Exact spinor input gives an exact list, otherwise a complex array.
    """
    psi = _as_spinor(psi)
    n = half(j).twice
    exact = is_exact(psi.xi) and is_exact(psi.eta)
    out = []
    for i in range(n + 1):
        # m = -j + i, j + m = i, j - m = n - i
        c = binomial(n, n - i)
        if exact:
            out.append(simplify(sqrt_surd(c) * psi.xi**i * psi.eta ** (n - i)))
        else:
            out.append(math.sqrt(c) * complex(psi.xi) ** i * complex(psi.eta) ** (n - i))
    return out if exact else np.array(out, dtype=complex)


def spinor_contract(j, x, y):
    """x^m y_m: x raised with (-1)^(j+m) x_(-m), summed against y."""
    n = half(j).twice
    if len(x) != n + 1 or len(y) != n + 1:
        raise ValueError("component count does not match the spin")
    out = 0
    for i in range(n + 1):
        up = x[n - i] if i % 2 == 0 else -x[n - i]
        out = out + up * y[i]
    return out


def couple(j1, x1, j2, x2, j3):
    """sum x1_m1 x2_m2 3j(j1 j2 j3; m1 m2 -m3), for m3 = -j3..j3."""
    j1, j2, j3 = half(j1), half(j2), half(j3)
    m1s, m2s, m3s = m_range(j1), m_range(j2), m_range(j3)
    if len(x1) != len(m1s) or len(x2) != len(m2s):
        raise ValueError("component count does not match the spin")
    out = np.zeros(len(m3s), dtype=complex)
    for k, m3 in enumerate(m3s):
        s = 0j
        for a, m1 in enumerate(m1s):
            m2 = m3 - m1
            if abs(m2) > j2:
                continue
            b = (m2.twice + j2.twice) // 2
            w = wigner_3j(j1, j2, j3, m1, m2, -m3)
            if w:
                s += complex(x1[a]) * complex(x2[b]) * float(w)
        out[k] = s
    return out


def _projective_point(j, x):
    """Recover t = xi/eta from a null spinor of spin j > 0 (None if j = 0)."""
    n = half(j).twice
    if n == 0:
        return None
    u = [complex(x[i]) / math.sqrt(binomial(n, n - i)) for i in range(n + 1)]
    # u[i] = xi^i eta^(n-i)
    if abs(u[n]) >= abs(u[0]):
        if u[n - 1] == 0:
            return INF
        return u[n] / u[n - 1]
    return u[1] / u[0]


def null_product(j1, x1, j2, x2, tol: float = 1e-8):
    """Null spinor of spin j1+j2 recovered from the coupling of x1 and x2.

    The coupled spin-(j1+j2) part of x1 (x) x2 is
    xi_(m3) = (2J+1) (-1)^(J+m3) / K * couple(j1, x1, j2, x2, J)[m3]
    with K = (-1)^(2 j2) sqrt(2J+1); for null spinors of one two-spinor this
    reproduces the product law ``ncomb_rhs`` exactly.
    """
    j1, j2 = half(j1), half(j2)
    t1, t2 = _projective_point(j1, x1), _projective_point(j2, x2)
    if t1 is not None and t2 is not None and chordal_distance(t1, t2) > tol:
        raise ValueError("null spinors come from different two-spinors")
    J = j1 + j2
    K = (-1) ** (j2.twice % 2) * math.sqrt(J.twice + 1)
    c = couple(j1, x1, j2, x2, J)
    out = np.zeros(J.twice + 1, dtype=complex)
    for i, m3 in enumerate(m_range(J)):
        sgn = -1 if ((J + m3).twice // 2) % 2 else 1
        out[i] = (J.twice + 1) * sgn / K * c[i]
    return out


def ncomb_rhs(j1, j2, xJ) -> np.ndarray:
    """Matrix (-1)^(2j2) sqrt(2J+1) 3j(j1 j2 J; m1 m2 ^m3) xi^(J)_m3.

    The upper m3 is taken as (-1)^(J+m3) times the symbol with -m3, the
    same raising rule as ``spinor_contract``.  With that rule the sign
    factor is (-1)^(2j2); raising with (-1)^(J-m3) instead turns it into
    (-1)^(2j1).  Rows run over m1 = -j1..j1, columns over m2 = -j2..j2.
    """
    j1, j2 = half(j1), half(j2)
    J = j1 + j2
    K = (-1) ** (j2.twice % 2) * math.sqrt(J.twice + 1)
    m1s, m2s = m_range(j1), m_range(j2)
    out = np.zeros((len(m1s), len(m2s)), dtype=complex)
    for a, m1 in enumerate(m1s):
        for b, m2 in enumerate(m2s):
            m3 = m1 + m2
            k = (m3.twice + J.twice) // 2
            sgn = -1 if ((J + m3).twice // 2) % 2 else 1
            w = wigner_3j(j1, j2, J, m1, m2, -m3)
            out[a, b] = K * sgn * float(w) * complex(xJ[k])
    return out


# ---------------------------------------------------------------------------
# vectors


def spherical_to_cartesian(s):
    """(r_1, r_0, r_-1) -> (x, y, z)."""
    r1, r0, rm1 = s
    if all(is_exact(v) for v in s):
        i = Surd.gaussian(0, 1)
        h = sqrt_surd(2) / 2
        return (simplify(i * h * (rm1 - r1)), simplify(h * (r1 + rm1)), simplify(i * r0))
    r1, r0, rm1 = complex(r1), complex(r0), complex(rm1)
    return (1j * (rm1 - r1) / SQRT2, (r1 + rm1) / SQRT2, 1j * r0)


def cartesian_to_spherical(v):
    """(x, y, z) -> (r_1, r_0, r_-1)."""
    x, y, z = v
    if all(is_exact(c) for c in v):
        i = Surd.gaussian(0, 1)
        h = sqrt_surd(2) / 2
        return (simplify(i * h * (x - i * y)), simplify(-i * z), simplify(-i * h * (x + i * y)))
    x, y, z = complex(x), complex(y), complex(z)
    return (1j * (x - 1j * y) / SQRT2, -1j * z, -1j * (x + 1j * y) / SQRT2)


@dataclass(frozen=True)
class NullVector:
    """Null vector given by spherical components (b_1, b_0, b_-1)."""

    b1: complex
    b0: complex
    bm1: complex

    @property
    def spherical(self):
        return (self.b1, self.b0, self.bm1)

    @property
    def cartesian(self):
        return spherical_to_cartesian(self.spherical)

    def null_residual(self) -> float:
        """|2 b_1 b_-1 - b_0^2| relative to the squared size."""
        b1, b0, bm1 = (complex(v) for v in self.spherical)
        scale = abs(b1) ** 2 + abs(b0) ** 2 + abs(bm1) ** 2
        return abs(2 * b1 * bm1 - b0 * b0) / max(scale, 1e-300)

    def dot(self, v):
        """Euclidean (bilinear) product with a Cartesian vector."""
        bx, by, bz = self.cartesian
        return bx * v[0] + by * v[1] + bz * v[2]


def cartan_map(psi) -> NullVector:
    psi = _as_spinor(psi)
    xi, eta = psi.xi, psi.eta
    if is_exact(xi) and is_exact(eta):
        return NullVector(simplify(xi * xi), simplify(sqrt_surd(2) * xi * eta), simplify(eta * eta))
    xi, eta = complex(xi), complex(eta)
    return NullVector(xi * xi, SQRT2 * xi * eta, eta * eta)


# ---------------------------------------------------------------------------
# poles


def canonical_direction(v, tol: float = SIGN_TOL):
    """Flip v so that its first nonzero entry in the order (z, y, x) is positive."""
    for c in (v[2], v[1], v[0]):
        if is_exact(c):
            s = Surd.of(c).sign()
            if s == 0:
                continue
        else:
            if abs(c) <= tol:
                continue
            s = 1 if c > 0 else -1
        if s < 0:
            return tuple(simplify(-w) if is_exact(w) else -w for w in v)
        return tuple(v)
    return tuple(v)


@dataclass(frozen=True)
class Pole:
    """A real unit direction with a multiplicity, in canonical sign."""

    direction: tuple
    multiplicity: int = 1
    canonical: bool = field(default=True, compare=False)

    def __post_init__(self):
        d = tuple(self.direction)
        if len(d) != 3:
            raise ValueError("a pole needs three coordinates")
        if self.multiplicity < 1:
            raise ValueError("multiplicity must be positive")
        if all(is_exact(c) for c in d):
            n2 = simplify(sum((Surd.of(c) * c for c in d), Surd()))
            if n2 != 1:
                raise ValueError(f"pole direction {d} is not a unit vector")
            d = tuple(simplify(c) for c in d)
        else:
            d = tuple(float(np.real(c)) + 0.0 for c in d)
            nrm = math.sqrt(sum(c * c for c in d))
            if abs(nrm - 1.0) > 1e-12:
                raise ValueError(f"pole direction {d} is not a unit vector")
        if self.canonical:
            d = canonical_direction(d)
            if not all(is_exact(c) for c in d):
                d = tuple(c + 0.0 for c in d)
        object.__setattr__(self, "direction", d)

    @classmethod
    def from_vector(cls, v, multiplicity: int = 1, canonical: bool = True) -> "Pole":
        v = np.asarray(v, dtype=float)
        return cls(tuple(v / np.linalg.norm(v)), multiplicity, canonical)

    def as_array(self) -> np.ndarray:
        return np.array([float(c) for c in self.direction])

    def linear_form(self):
        """The ternary linear form r . p."""
        from .poly import TernaryPoly

        return TernaryPoly.linear(*self.direction)


def pole_from_conjugate_pair(b: NullVector, tol: float = 1e-10) -> Pole:
    """Direction +-i (b x b*)/(b . b*) in Cartesian components."""
    v = np.array([complex(c) for c in b.cartesian])
    vc = v.conj()
    den = np.dot(v, vc).real
    if den <= 0:
        raise ValueError("zero null vector has no pole")
    w = 1j * np.cross(v, vc) / den
    if np.max(np.abs(w.imag)) > tol * max(np.max(np.abs(w)), 1e-300):
        raise ArithmeticError(f"pole direction is not real: imaginary residue {np.max(np.abs(w.imag)):.3e}")
    return Pole.from_vector(w.real)


def pole_from_root(t) -> Pole:
    """Pole of the root t = xi/eta (t may be INF)."""
    if is_infinite(t):
        return Pole((0.0, 0.0, 1.0))
    t = complex(t)
    a2 = abs(t) ** 2
    # written through (xi, eta) = (t, 1) or (1, 1/t) to stay finite
    if a2 <= 1.0:
        xi, eta = t, 1.0
    else:
        xi, eta = 1.0, 1.0 / t
    w = xi * np.conj(eta)
    n = abs(xi) ** 2 + abs(eta) ** 2
    v = (2 * w.real / n, -2 * w.imag / n, (abs(xi) ** 2 - abs(eta) ** 2) / n)
    return Pole.from_vector(v)
