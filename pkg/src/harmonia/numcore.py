"""Exact scalars and Wigner 3j symbols.

Three exact number types live here:

* ``HalfInt`` stores a spin label j through the integer 2j.
* ``SqrtRational`` is a signed square root of a rational, the natural type
  of a 3j symbol.
* ``Surd`` is an element of Q(i) extended by square roots of rationals.
  Every coefficient met in the solid harmonics, the null-cone substitution
  and the normal forms lives in such a field, so all of those objects can
  be manipulated without rounding.

Rationals are ``fractions.Fraction``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, total_ordering
from numbers import Rational

__all__ = [
    "HalfInt",
    "half",
    "m_range",
    "SqrtRational",
    "IncommensurableError",
    "Surd",
    "I",
    "sqrt_surd",
    "is_exact",
    "simplify",
    "to_complex",
    "factorial",
    "binomial",
    "wigner_3j",
    "raise_lower",
]


# ---------------------------------------------------------------------------
# half integers


@total_ordering
@dataclass(frozen=True)
class HalfInt:
    """A spin label j = twice/2."""

    twice: int

    @classmethod
    def of(cls, x) -> "HalfInt":
        if isinstance(x, HalfInt):
            return x
        if isinstance(x, bool):
            raise TypeError("bool is not a spin label")
        if isinstance(x, int):
            return cls(2 * x)
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, float):
            if not (2 * x).is_integer():
                raise ValueError(f"{x} is not a half integer")
            return cls(int(2 * x))
        if isinstance(x, Rational):
            t = Fraction(x) * 2
            if t.denominator != 1:
                raise ValueError(f"{x} is not a half integer")
            return cls(int(t))
        raise TypeError(f"cannot read a half integer from {x!r}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.twice, 2)

    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def __int__(self) -> int:
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def __float__(self) -> float:
        return self.twice / 2

    def __add__(self, other):
        try:
            other = HalfInt.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return HalfInt(self.twice + other.twice)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = HalfInt.of(other)
        except (TypeError, ValueError):
            return NotImplemented
        return HalfInt(self.twice - other.twice)

    def __rsub__(self, other):
        return HalfInt.of(other) - self

    def __neg__(self):
        return HalfInt(-self.twice)

    def __abs__(self):
        return HalfInt(abs(self.twice))

    def __eq__(self, other):
        if isinstance(other, HalfInt):
            return self.twice == other.twice
        try:
            return self.twice == HalfInt.of(other).twice
        except (TypeError, ValueError):
            return False

    def __lt__(self, other):
        return self.twice < HalfInt.of(other).twice

    def __hash__(self):
        return hash(Fraction(self.twice, 2))

    def __str__(self):
        return str(self.twice // 2) if self.twice % 2 == 0 else f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half(x) -> HalfInt:
    return HalfInt.of(x)


def m_range(j) -> list[HalfInt]:
    """Projections m = -j, -j+1, ..., j."""
    t = half(j).twice
    if t < 0:
        raise ValueError("negative spin")
    return [HalfInt(-t + 2 * k) for k in range(t + 1)]


# ---------------------------------------------------------------------------
# factorials

_FACT_LOCK = threading.Lock()
_FACT = [1]
FACTORIAL_CACHE_BOUND = 200


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError("factorial of a negative number")
    if n < len(_FACT):
        return _FACT[n]
    if n > FACTORIAL_CACHE_BOUND:
        return math.factorial(n)
    with _FACT_LOCK:
        while len(_FACT) <= n:
            _FACT.append(_FACT[-1] * len(_FACT))
    return _FACT[n]


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# square-free parts

_SMALL_PRIMES = [p for p in range(2, 2000) if all(p % q for q in range(2, math.isqrt(p) + 1))]


@lru_cache(maxsize=4096)
def _squarefree_split(n: int) -> tuple[int, int]:
    """Write n > 0 as k**2 * s with s square free; return (k, s)."""
    k, s = 1, 1
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            k *= p ** (e // 2)
            if e % 2:
                s *= p
    if n > 1:
        r = math.isqrt(n)
        if r * r == n:
            k *= r
        elif n < _SMALL_PRIMES[-1] ** 2:
            s *= n
        else:
            from sympy import factorint

            for p, e in factorint(n).items():
                k *= p ** (e // 2)
                if e % 2:
                    s *= p
    return k, s


# ---------------------------------------------------------------------------
# signed square roots of rationals


class IncommensurableError(ArithmeticError):
    """Raised when a sum of square roots cannot stay a single square root."""


def _sign(x) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class SqrtRational:
    """sign * sqrt(radicand) with a non-negative rational radicand."""

    sign: int
    radicand: Fraction

    def __post_init__(self):
        r = Fraction(self.radicand)
        if r < 0:
            raise ValueError("negative radicand")
        s = 0 if r == 0 else _sign(self.sign)
        if s == 0:
            r = Fraction(0)
        object.__setattr__(self, "radicand", r)
        object.__setattr__(self, "sign", s)

    @classmethod
    def from_rational(cls, q) -> "SqrtRational":
        q = Fraction(q)
        return cls(_sign(q), q * q)

    @classmethod
    def sqrt(cls, q) -> "SqrtRational":
        return cls(1, Fraction(q))

    def is_zero(self) -> bool:
        return self.sign == 0

    def square(self) -> Fraction:
        return self.radicand if self.sign else Fraction(0)

    def signed_square(self) -> Fraction:
        """sign * radicand, which determines the value exactly."""
        return self.sign * self.radicand

    def is_rational(self) -> bool:
        r = self.radicand
        return _is_square(r.numerator) and _is_square(r.denominator)

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is irrational")
        r = self.radicand
        return self.sign * Fraction(math.isqrt(r.numerator), math.isqrt(r.denominator))

    def to_surd(self) -> "Surd":
        return self.sign * sqrt_surd(self.radicand)

    def __float__(self):
        return self.sign * math.sqrt(self.radicand)

    def __complex__(self):
        return complex(float(self))

    def __neg__(self):
        return SqrtRational(-self.sign, self.radicand)

    def __abs__(self):
        return SqrtRational(abs(self.sign), self.radicand)

    def __mul__(self, other):
        if isinstance(other, SqrtRational):
            return SqrtRational(self.sign * other.sign, self.radicand * other.radicand)
        if isinstance(other, (int, Fraction)):
            return self * SqrtRational.from_rational(other)
        if isinstance(other, Surd):
            return self.to_surd() * other
        if isinstance(other, (float, complex)):
            return float(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtRational.from_rational(other)
        if isinstance(other, SqrtRational):
            if other.sign == 0:
                raise ZeroDivisionError("division by a zero square root")
            return SqrtRational(self.sign * other.sign, self.radicand / other.radicand)
        if isinstance(other, (float, complex)):
            return float(self) / other
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return SqrtRational.from_rational(other) / self
        if isinstance(other, (float, complex)):
            return other / float(self)
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return SqrtRational(1, Fraction(1)) / (self ** (-k))
        return SqrtRational(self.sign**k, self.radicand**k)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = SqrtRational.from_rational(other)
        if not isinstance(other, SqrtRational):
            if isinstance(other, (float, complex)):
                return float(self) + other
            return NotImplemented
        if self.sign == 0:
            return other
        if other.sign == 0:
            return self
        ratio = other.radicand / self.radicand
        if not (_is_square(ratio.numerator) and _is_square(ratio.denominator)):
            raise IncommensurableError(f"{self} + {other} is not a single square root")
        q = self.sign + other.sign * Fraction(math.isqrt(ratio.numerator), math.isqrt(ratio.denominator))
        return SqrtRational(_sign(q), self.radicand * q * q)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __eq__(self, other):
        if isinstance(other, SqrtRational):
            return self.sign == other.sign and self.radicand == other.radicand
        if isinstance(other, (int, Fraction)):
            return self == SqrtRational.from_rational(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.sign, self.radicand))

    def __bool__(self):
        return self.sign != 0

    def __str__(self):
        if self.sign == 0:
            return "0"
        s = "-" if self.sign < 0 else ""
        return f"{s}sqrt({self.radicand})"


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


# ---------------------------------------------------------------------------
# exact numbers in Q(i, sqrt 2, sqrt 3, ...)


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _primes_of(n: int) -> list[int]:
    out = []
    for p in _SMALL_PRIMES:
        if p * p > n:
            break
        if n % p == 0:
            out.append(p)
            n //= p
    if n > 1:
        out.append(n)
    return out


class Surd:
    """Exact number sum_s (a_s + i b_s) sqrt(s) over square-free integers s.

    The representation is canonical, so equality is structural.  Mixing a
    Surd with a float or complex drops to ``complex``.
    """

    __slots__ = ("_t", "_hash")

    def __init__(self, terms=None):
        t = {}
        if terms:
            for s, (a, b) in terms.items():
                a, b = Fraction(a), Fraction(b)
                if a or b:
                    t[s] = (a, b)
        self._t = t
        self._hash = None

    # construction ---------------------------------------------------------
    @classmethod
    def of(cls, x) -> "Surd":
        if isinstance(x, Surd):
            return x
        if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
            return cls({1: (x, 0)}) if x else cls()
        if isinstance(x, SqrtRational):
            return x.to_surd()
        raise TypeError(f"{x!r} is not an exact number")

    @classmethod
    def gaussian(cls, re, im=0) -> "Surd":
        return cls({1: (re, im)})

    # inspection -----------------------------------------------------------
    def terms(self) -> dict:
        return dict(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_gaussian(self) -> bool:
        return all(s == 1 for s in self._t)

    def is_rational(self) -> bool:
        if not self._t:
            return True
        if len(self._t) != 1 or 1 not in self._t:
            return False
        return self._t[1][1] == 0

    def is_real(self) -> bool:
        return all(b == 0 for _, b in self._t.values())

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._t[1][0] if self._t else Fraction(0)

    def gaussian_parts(self) -> tuple[Fraction, Fraction]:
        if not self.is_gaussian():
            raise ValueError(f"{self} carries a radical")
        return self._t.get(1, (Fraction(0), Fraction(0)))

    @property
    def real(self) -> "Surd":
        return Surd({s: (a, 0) for s, (a, _) in self._t.items()})

    @property
    def imag(self) -> "Surd":
        return Surd({s: (b, 0) for s, (_, b) in self._t.items()})

    def conjugate(self) -> "Surd":
        return Surd({s: (a, -b) for s, (a, b) in self._t.items()})

    def __complex__(self):
        re = im = 0.0
        for s, (a, b) in self._t.items():
            r = math.sqrt(s)
            re += float(a) * r
            im += float(b) * r
        return complex(re, im)

    def __float__(self):
        if not self.is_real():
            raise TypeError(f"{self} is not real")
        return complex(self).real

    def sign(self) -> int:
        """Sign of a real Surd."""
        if not self.is_real():
            raise ValueError("sign of a non-real number")
        if not self._t:
            return 0
        v = float(self)
        if abs(v) > 1e-9 * max(abs(float(a)) * math.sqrt(s) for s, (a, _) in self._t.items()):
            return _sign(v)
        # tiny but nonzero: refine with exact rational bounds on the radicals
        lo = hi = Fraction(0)
        for s, (a, _) in self._t.items():
            r = math.isqrt(s * 10**40)
            lo += a * (Fraction(r, 10**20) if a > 0 else Fraction(r + 1, 10**20))
            hi += a * (Fraction(r + 1, 10**20) if a > 0 else Fraction(r, 10**20))
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        raise ArithmeticError("cannot resolve the sign of a near-zero surd")

    # arithmetic -----------------------------------------------------------
    def __neg__(self):
        return Surd({s: (-a, -b) for s, (a, b) in self._t.items()})

    def __pos__(self):
        return self

    def _coerce(self, other):
        if isinstance(other, Surd):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Surd.of(other)
        if isinstance(other, SqrtRational):
            return other.to_surd()
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) + other
            return NotImplemented
        t = dict(self._t)
        for s, (a, b) in o._t.items():
            if s in t:
                c, d = t[s]
                a, b = a + c, b + d
            t[s] = (a, b)
        return Surd(t)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) - other
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other - complex(self)
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Surd({s: (a * other, b * other) for s, (a, b) in self._t.items()})
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) * other
            return NotImplemented
        t = {}
        for s1, c1 in self._t.items():
            for s2, c2 in o._t.items():
                a, b = _gmul(c1, c2)
                if s1 == 1 or s2 == 1:
                    s = s1 * s2
                else:
                    g = math.gcd(s1, s2)
                    s = (s1 // g) * (s2 // g)
                    a, b = a * g, b * g
                if s in t:
                    c, d = t[s]
                    a, b = a + c, b + d
                t[s] = (a, b)
        return Surd(t)

    __rmul__ = __mul__

    def _primes(self) -> list[int]:
        ps = set()
        for s in self._t:
            ps.update(_primes_of(s))
        return sorted(ps)

    def _flip(self, p: int) -> "Surd":
        return Surd({s: ((-a, -b) if s % p == 0 else (a, b)) for s, (a, b) in self._t.items()})

    def inverse(self) -> "Surd":
        if not self._t:
            raise ZeroDivisionError("inverse of zero")
        num = Surd.of(1)
        den = self
        for p in self._primes():
            c = den._flip(p)
            num = num * c
            den = den * c
        a, b = den.gaussian_parts()
        n2 = a * a + b * b
        return num * Surd.gaussian(a / n2, -b / n2)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return Surd({s: (a / other, b / other) for s, (a, b) in self._t.items()})
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) / other
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return other / complex(self)
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return (self ** (-k)).inverse()
        out = Surd.of(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # comparison -----------------------------------------------------------
    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            if isinstance(other, (float, complex)):
                return complex(self) == other
            return NotImplemented
        return self._t == o._t

    def __hash__(self):
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self.to_fraction())
            else:
                self._hash = hash(frozenset(self._t.items()))
        return self._hash

    def __bool__(self):
        return bool(self._t)

    def __abs__(self):
        return abs(complex(self))

    def __repr__(self):
        return f"Surd({self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for s in sorted(self._t):
            a, b = self._t[s]
            if a and b:
                c = f"({a}{'+' if b > 0 else '-'}{abs(b)}i)"
            elif b:
                c = f"{b}i"
            else:
                c = f"{a}"
            parts.append(c if s == 1 else f"{c}*sqrt({s})")
        return " + ".join(parts)


I = Surd.gaussian(0, 1)


def sqrt_surd(q) -> Surd:
    """Exact square root of a rational, as a Surd (i*sqrt(-q) for q < 0)."""
    q = Fraction(q)
    if q == 0:
        return Surd()
    neg = q < 0
    q = abs(q)
    # sqrt(p/d) = sqrt(p*d)/d
    k, s = _squarefree_split(q.numerator * q.denominator)
    c = Fraction(k, q.denominator)
    return Surd({s: (0, c) if neg else (c, 0)})


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction, Surd)) and not isinstance(x, bool)


def simplify(x):
    """Demote a rational-valued Surd to Fraction; leave other values alone."""
    if isinstance(x, Surd) and x.is_rational():
        return x.to_fraction()
    if isinstance(x, SqrtRational):
        return simplify(x.to_surd())
    return x


def to_complex(x) -> complex:
    return complex(x)


# ---------------------------------------------------------------------------
# Wigner 3j


def wigner_3j(j1, j2, j3, m1, m2, m3) -> SqrtRational:
    """Exact Wigner 3j symbol (Racah single-sum formula)."""
    t = [half(v).twice for v in (j1, j2, j3, m1, m2, m3)]
    return _wigner_3j_twice(*t)


@lru_cache(maxsize=65536)
def _wigner_3j_twice(tj1, tj2, tj3, tm1, tm2, tm3) -> SqrtRational:
    for tj, tm in ((tj1, tm1), (tj2, tm2), (tj3, tm3)):
        if tj < 0:
            raise ValueError("negative angular momentum")
        if (tj + tm) % 2:
            raise ValueError("j + m must be an integer")
    zero = SqrtRational(0, Fraction(0))
    if tm1 + tm2 + tm3 != 0:
        return zero
    if (tj1 + tj2 + tj3) % 2:
        return zero
    if abs(tm1) > tj1 or abs(tm2) > tj2 or abs(tm3) > tj3:
        return zero
    if tj3 > tj1 + tj2 or tj3 < abs(tj1 - tj2):
        return zero
    j1, j2, j3 = tj1, tj2, tj3  # still doubled
    a = (j1 + j2 - j3) // 2
    b = (j1 - j2 + j3) // 2
    c = (-j1 + j2 + j3) // 2
    tri = Fraction(factorial(a) * factorial(b) * factorial(c), factorial((j1 + j2 + j3) // 2 + 1))
    pre = tri
    for tj, tm in ((j1, tm1), (j2, tm2), (j3, tm3)):
        pre *= factorial((tj + tm) // 2) * factorial((tj - tm) // 2)
    # summation bounds
    k1 = (j3 - j2 + tm1) // 2
    k2 = (j3 - j1 - tm2) // 2
    k3 = (j1 + j2 - j3) // 2
    k4 = (j1 - tm1) // 2
    k5 = (j2 + tm2) // 2
    kmin = max(0, -k1, -k2)
    kmax = min(k3, k4, k5)
    s = Fraction(0)
    for k in range(kmin, kmax + 1):
        d = factorial(k) * factorial(k1 + k) * factorial(k2 + k) * factorial(k3 - k) * factorial(k4 - k) * factorial(k5 - k)
        s += Fraction((-1) ** k, d)
    if s == 0:
        return zero
    phase = (j1 - j2 - tm3) // 2
    sign = _sign(s) * (-1) ** (phase % 2)
    return SqrtRational(sign, pre * s * s)


def raise_lower(phi, j) -> list:
    """Raise (or lower) a spin-j index: out^m = (-1)^(j+m) phi_(-m).

    Entries are ordered m = -j..j.  Applying the map twice multiplies by
    (-1)^(2j).
    """
    t = half(j).twice
    if t < 0:
        raise ValueError("negative spin")
    phi = list(phi)
    if len(phi) != t + 1:
        raise ValueError(f"expected {t + 1} components for j={half(j)}, got {len(phi)}")
    return [phi[t - i] if i % 2 == 0 else -phi[t - i] for i in range(t + 1)]
