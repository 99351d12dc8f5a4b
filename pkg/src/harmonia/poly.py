"""Homogeneous polynomials: ternary forms in (x, y, z), binary forms in
(xi, eta), and sparse polynomials in named variables.

Coefficients may be exact (int, Fraction, Surd) or floating (float,
complex); the arithmetic is written once and works for either.  Exact
inputs give exact outputs as long as no float enters.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .numcore import Surd, binomial, is_exact, simplify, sqrt_surd

__all__ = [
    "TernaryPoly",
    "BinaryForm",
    "MultiPoly",
    "laplacian",
    "divide_by_r2",
    "evaluate",
    "monomials",
]


def _clean(c):
    if isinstance(c, bool):
        c = int(c)
    return simplify(c)


def _iszero(c) -> bool:
    return c == 0


def monomials(n: int):
    """Exponent triples (p, q, r) with p+q+r = n, in lexicographic order."""
    for p in range(n, -1, -1):
        for q in range(n - p, -1, -1):
            yield (p, q, n - p - q)


class TernaryPoly:
    """Homogeneous polynomial sum c_pqr x^p y^q z^r of a fixed degree."""

    __slots__ = ("degree", "terms")

    def __init__(self, degree: int, terms=None):
        if degree < 0:
            raise ValueError("negative degree")
        self.degree = degree
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != 3 or min(e) < 0 or sum(e) != degree:
                raise ValueError(f"monomial {e} does not have degree {degree}")
            c = _clean(c)
            if not _iszero(c):
                t[e] = c
        self.terms = t

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, degree: int = 0) -> "TernaryPoly":
        return cls(degree)

    @classmethod
    def constant(cls, c) -> "TernaryPoly":
        return cls(0, {(0, 0, 0): c})

    @classmethod
    def monomial(cls, p: int, q: int, r: int, c=1) -> "TernaryPoly":
        return cls(p + q + r, {(p, q, r): c})

    @classmethod
    def x(cls):
        return cls.monomial(1, 0, 0)

    @classmethod
    def y(cls):
        return cls.monomial(0, 1, 0)

    @classmethod
    def z(cls):
        return cls.monomial(0, 0, 1)

    @classmethod
    def r2(cls):
        return cls(2, {(2, 0, 0): 1, (0, 2, 0): 1, (0, 0, 2): 1})

    @classmethod
    def linear(cls, a, b, c) -> "TernaryPoly":
        """a x + b y + c z."""
        return cls(1, {(1, 0, 0): a, (0, 1, 0): b, (0, 0, 1): c})

    # inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def coefficient(self, p: int, q: int, r: int):
        return self.terms.get((p, q, r), 0)

    def items(self):
        return sorted(self.terms.items(), reverse=True)

    def norm(self) -> float:
        """Euclidean norm of the coefficient vector."""
        return math.sqrt(sum(abs(complex(c)) ** 2 for c in self.terms.values()))

    def is_real(self, tol: float = 0.0) -> bool:
        if self.is_exact():
            return all(not isinstance(c, Surd) or c.is_real() for c in self.terms.values())
        scale = max(self.norm(), 1e-300)
        return all(abs(complex(c).imag) <= tol * scale for c in self.terms.values())

    # conversions ----------------------------------------------------------
    def numeric(self) -> "TernaryPoly":
        return TernaryPoly(self.degree, {e: complex(c) for e, c in self.terms.items()})

    def real_part(self) -> "TernaryPoly":
        """Real part of every coefficient (as floats, or exact when exact)."""
        out = {}
        for e, c in self.terms.items():
            if isinstance(c, Surd):
                out[e] = c.real
            elif isinstance(c, complex):
                out[e] = c.real
            else:
                out[e] = c
        return TernaryPoly(self.degree, out)

    def conjugate(self) -> "TernaryPoly":
        return TernaryPoly(self.degree, {e: _conj(c) for e, c in self.terms.items()})

    def map_coeffs(self, fn) -> "TernaryPoly":
        return TernaryPoly(self.degree, {e: fn(c) for e, c in self.terms.items()})

    # arithmetic -----------------------------------------------------------
    def _check_same_degree(self, other: "TernaryPoly"):
        if self.degree != other.degree and self.terms and other.terms:
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")

    def __add__(self, other):
        if not isinstance(other, TernaryPoly):
            if other == 0:
                return self
            if self.degree == 0:
                other = TernaryPoly.constant(other)
            else:
                return NotImplemented
        self._check_same_degree(other)
        deg = self.degree if self.terms else other.degree
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return TernaryPoly(deg, t)

    __radd__ = __add__

    def __neg__(self):
        return TernaryPoly(self.degree, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, TernaryPoly):
            return self + (-other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TernaryPoly):
            t = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2])
                    c = c1 * c2
                    t[e] = t[e] + c if e in t else c
            return TernaryPoly(self.degree + other.degree, t)
        if isinstance(other, (BinaryForm, MultiPoly)):
            return NotImplemented
        return TernaryPoly(self.degree, {e: c * other for e, c in self.terms.items()})

    def __rmul__(self, other):
        return TernaryPoly(self.degree, {e: other * c for e, c in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, TernaryPoly):
            return NotImplemented
        return TernaryPoly(self.degree, {e: _div(c, other) for e, c in self.terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = TernaryPoly.constant(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, TernaryPoly):
            if not self.terms and not other.terms:
                return True
            return self.degree == other.degree and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.degree, frozenset(self.terms.items())))

    # calculus -------------------------------------------------------------
    def diff(self, var: int) -> "TernaryPoly":
        """Partial derivative along x (0), y (1) or z (2)."""
        if self.degree == 0:
            return TernaryPoly(0)
        t = {}
        for e, c in self.terms.items():
            if e[var]:
                f = list(e)
                f[var] -= 1
                t[tuple(f)] = c * e[var]
        return TernaryPoly(self.degree - 1, t)

    def laplacian(self) -> "TernaryPoly":
        if self.degree < 2:
            return TernaryPoly(0)
        t = {}
        for (p, q, r), c in self.terms.items():
            for e, k in (((p - 2, q, r), p * (p - 1)), ((p, q - 2, r), q * (q - 1)), ((p, q, r - 2), r * (r - 1))):
                if k:
                    v = c * k
                    t[e] = t[e] + v if e in t else v
        return TernaryPoly(self.degree - 2, t)

    def divide_by_r2(self) -> tuple["TernaryPoly", "TernaryPoly"]:
        """Split f = r^2 q + rem with rem free of z^2 (z^2 -> r^2 - x^2 - y^2)."""
        work = dict(self.terms)
        quot = {}
        for rr in range(self.degree, 1, -1):
            for e in [e for e in work if e[2] == rr]:
                c = work.pop(e)
                if _iszero(c):
                    continue
                p, q, _ = e
                k = (p, q, rr - 2)
                quot[k] = quot[k] + c if k in quot else c
                for f in ((p + 2, q, rr - 2), (p, q + 2, rr - 2)):
                    work[f] = work[f] - c if f in work else -c
        qdeg = max(self.degree - 2, 0)
        if self.degree < 2:
            return TernaryPoly(0), TernaryPoly(self.degree, work)
        return TernaryPoly(qdeg, quot), TernaryPoly(self.degree, work)

    # evaluation -----------------------------------------------------------
    def evaluate(self, x, y, z):
        """Value at a point; x, y, z may be numbers or numpy arrays."""
        if not self.terms:
            return 0 * np.asarray(x, dtype=complex) if np.ndim(x) else 0j
        n = self.degree
        xs = _powers(x, n)
        ys = _powers(y, n)
        zs = _powers(z, n)
        out = 0
        for (p, q, r), c in self.terms.items():
            out = out + complex(c) * xs[p] * ys[q] * zs[r]
        return out

    def __call__(self, x, y, z):
        return self.evaluate(x, y, z)

    def evaluate_exact(self, x, y, z):
        """Exact value at an exact point."""
        out = 0
        for (p, q, r), c in self.terms.items():
            out = out + c * x**p * y**q * z**r
        return simplify(out) if is_exact(out) else out

    def substitute(self, fx: "TernaryPoly", fy: "TernaryPoly", fz: "TernaryPoly") -> "TernaryPoly":
        """Compose with linear forms: f(fx, fy, fz)."""
        n = self.degree
        px, py, pz = _poly_powers(fx, n), _poly_powers(fy, n), _poly_powers(fz, n)
        out = TernaryPoly(n * fx.degree)
        for (p, q, r), c in self.terms.items():
            out = out + (px[p] * py[q] * pz[r]) * c
        return out

    def rotate(self, R) -> "TernaryPoly":
        """The polynomial r -> f(R^T r), i.e. f carried along by the rotation R."""
        R = np.asarray(R, dtype=float)
        # (R^T r)_i = sum_k R[k, i] r_k
        lin = [TernaryPoly.linear(R[0, i], R[1, i], R[2, i]) for i in range(3)]
        return self.numeric().substitute(*lin)

    # display --------------------------------------------------------------
    def __repr__(self):
        return f"TernaryPoly({self.degree}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (p, q, r), c in self.items():
            mono = "*".join(
                f"{v}^{k}" if k > 1 else v for v, k in (("x", p), ("y", q), ("z", r)) if k
            )
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def _conj(c):
    if isinstance(c, (Surd, complex)):
        return c.conjugate()
    return c


def _powers(v, n):
    out = [np.ones_like(v, dtype=complex) if np.ndim(v) else 1 + 0j]
    for _ in range(n):
        out.append(out[-1] * v)
    return out


def _poly_powers(f, n):
    out = [TernaryPoly.constant(1)]
    for _ in range(n):
        out.append(out[-1] * f)
    return out


def laplacian(f: TernaryPoly) -> TernaryPoly:
    return f.laplacian()


def divide_by_r2(f: TernaryPoly) -> tuple[TernaryPoly, TernaryPoly]:
    return f.divide_by_r2()


def evaluate(f: TernaryPoly, point) -> complex:
    x, y, z = point
    return f.evaluate(x, y, z)


# ---------------------------------------------------------------------------


class BinaryForm:
    """Binary form sum_k b_k xi^(d-k) eta^k, stored as the tuple (b_0..b_d).

    Besides the raw coefficients two other views are available: the
    classical one a_r = b_r / C(d, r) and the spin-normalized one
    phi^(j-r) = b_r / sqrt(C(d, r)) with d = 2j.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        cs = tuple(_clean(c) for c in coeffs)
        if not cs:
            raise ValueError("a binary form needs at least one coefficient")
        self.coeffs = cs

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def zero(cls, degree: int) -> "BinaryForm":
        return cls([0] * (degree + 1))

    @classmethod
    def monomial(cls, a: int, b: int, c=1) -> "BinaryForm":
        """c xi^a eta^b."""
        cs = [0] * (a + b + 1)
        cs[b] = c
        return cls(cs)

    @classmethod
    def linear(cls, alpha, beta) -> "BinaryForm":
        """alpha xi + beta eta."""
        return cls([alpha, beta])

    @classmethod
    def from_roots(cls, roots, scale=1) -> "BinaryForm":
        """scale * prod (xi - t eta) over finite t, times eta for t = inf."""
        out = cls([scale])
        for t in roots:
            if t is None or (isinstance(t, float) and math.isinf(t)):
                out = out * cls([0, 1])
            else:
                out = out * cls([1, -t])
        return out

    @classmethod
    def from_classical(cls, a) -> "BinaryForm":
        n = len(a) - 1
        return cls([binomial(n, r) * c for r, c in enumerate(a)])

    def classical(self) -> list:
        n = self.degree
        return [_div(c, binomial(n, r)) for r, c in enumerate(self.coeffs)]

    @classmethod
    def from_phi(cls, phi) -> "BinaryForm":
        """Inverse of ``phi``; phi is ordered m = -j..j."""
        n = len(phi) - 1
        b = [0] * (n + 1)
        for i, c in enumerate(phi):
            r = n - i
            b[r] = c * _sqrt_int(binomial(n, r), c)
        return cls(b)

    def phi(self) -> list:
        """phi^m for m = -j..j, with phi^(j-r) = b_r / sqrt(C(n, r))."""
        n = self.degree
        out = []
        for i in range(n + 1):
            r = n - i
            c = self.coeffs[r]
            out.append(_div(c, _sqrt_int(binomial(n, r), c)))
        return out

    # inspection -----------------------------------------------------------
    def is_zero(self) -> bool:
        return all(_iszero(c) for c in self.coeffs)

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.coeffs)

    def norm(self) -> float:
        return math.sqrt(sum(abs(complex(c)) ** 2 for c in self.coeffs))

    def numeric(self) -> "BinaryForm":
        return BinaryForm([complex(c) for c in self.coeffs])

    def as_array(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs])

    def conjugate(self) -> "BinaryForm":
        return BinaryForm([_conj(c) for c in self.coeffs])

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        if self.degree != other.degree:
            if self.is_zero():
                return other
            if other.is_zero():
                return self
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        return BinaryForm([a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return BinaryForm([-c for c in self.coeffs])

    def __sub__(self, other):
        if not isinstance(other, BinaryForm):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, BinaryForm):
            d1, d2 = self.degree, other.degree
            out = [0] * (d1 + d2 + 1)
            for i, a in enumerate(self.coeffs):
                if _iszero(a):
                    continue
                for k, b in enumerate(other.coeffs):
                    if not _iszero(b):
                        out[i + k] = out[i + k] + a * b
            return BinaryForm(out)
        if isinstance(other, (TernaryPoly, MultiPoly)):
            return NotImplemented
        return BinaryForm([c * other for c in self.coeffs])

    def __rmul__(self, other):
        return BinaryForm([other * c for c in self.coeffs])

    def __truediv__(self, other):
        return BinaryForm([_div(c, other) for c in self.coeffs])

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = BinaryForm([1])
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, BinaryForm):
            if self.is_zero() and other.is_zero():
                return True
            return self.coeffs == other.coeffs
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    # calculus -------------------------------------------------------------
    def d_xi(self) -> "BinaryForm":
        d = self.degree
        if d == 0:
            return BinaryForm([0])
        return BinaryForm([(d - k) * self.coeffs[k] for k in range(d)])

    def d_eta(self) -> "BinaryForm":
        d = self.degree
        if d == 0:
            return BinaryForm([0])
        return BinaryForm([k * self.coeffs[k] for k in range(1, d + 1)])

    def derivative(self, i: int, k: int) -> "BinaryForm":
        """d^(i+k) / d xi^i d eta^k."""
        f = self
        for _ in range(i):
            f = f.d_xi()
        for _ in range(k):
            f = f.d_eta()
        return f

    # evaluation -----------------------------------------------------------
    def evaluate(self, xi, eta):
        d = self.degree
        out = 0
        for k, c in enumerate(self.coeffs):
            if not _iszero(c):
                out = out + c * xi ** (d - k) * eta**k
        return out

    def __call__(self, xi, eta):
        return self.evaluate(xi, eta)

    def substitute(self, l, m) -> "BinaryForm":
        """The form in new variables after (xi, eta) -> l*xi' + m*eta'.

        l and m are the columns of the 2x2 substitution matrix.
        """
        X = BinaryForm([l[0], m[0]])
        Y = BinaryForm([l[1], m[1]])
        d = self.degree
        xs = [BinaryForm([1])]
        ys = [BinaryForm([1])]
        for _ in range(d):
            xs.append(xs[-1] * X)
            ys.append(ys[-1] * Y)
        out = BinaryForm.zero(d)
        for k, c in enumerate(self.coeffs):
            if not _iszero(c):
                out = out + (xs[d - k] * ys[k]) * c
        return out

    def __repr__(self):
        return f"BinaryForm({list(self.coeffs)})"

    def __str__(self):
        d = self.degree
        parts = []
        for k, c in enumerate(self.coeffs):
            if _iszero(c):
                continue
            mono = "*".join(f"{v}^{e}" if e > 1 else v for v, e in (("xi", d - k), ("eta", k)) if e)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts) if parts else "0"


def _div(c, k):
    """c / k without letting int / int fall into floating point."""
    if isinstance(c, int) and isinstance(k, int):
        return Fraction(c, k)
    return c / k


def _sqrt_int(n: int, like):
    """sqrt(n) in the same number system as ``like``."""
    if is_exact(like):
        return simplify(sqrt_surd(n))
    return math.sqrt(n)


# ---------------------------------------------------------------------------


class MultiPoly:
    """Sparse polynomial in a fixed tuple of named variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables, terms=None):
        self.variables = tuple(variables)
        nv = len(self.variables)
        t = {}
        for e, c in (terms or {}).items():
            e = tuple(int(v) for v in e)
            if len(e) != nv or min(e, default=0) < 0:
                raise ValueError(f"bad exponent vector {e}")
            c = _clean(c)
            t[e] = t[e] + c if e in t else c
        self.terms = {e: c for e, c in t.items() if not _iszero(c)}

    @classmethod
    def var(cls, name: str, variables) -> "MultiPoly":
        variables = tuple(variables)
        e = [0] * len(variables)
        e[variables.index(name)] = 1
        return cls(variables, {tuple(e): 1})

    @classmethod
    def constant(cls, c, variables) -> "MultiPoly":
        variables = tuple(variables)
        return cls(variables, {(0,) * len(variables): c})

    def index(self, name: str) -> int:
        return self.variables.index(name)

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other):
        if self.variables != other.variables:
            raise ValueError("variable lists differ")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            if other == 0:
                return self
            other = MultiPoly.constant(other, self.variables)
        self._check(other)
        t = dict(self.terms)
        for e, c in other.terms.items():
            t[e] = t[e] + c if e in t else c
        return MultiPoly(self.variables, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            t = {}
            for e1, c1 in self.terms.items():
                for e2, c2 in other.terms.items():
                    e = tuple(a + b for a, b in zip(e1, e2))
                    c = c1 * c2
                    t[e] = t[e] + c if e in t else c
            return MultiPoly(self.variables, t)
        if isinstance(other, (TernaryPoly, BinaryForm)):
            return NotImplemented
        return MultiPoly(self.variables, {e: c * other for e, c in self.terms.items()})

    def __rmul__(self, other):
        return MultiPoly(self.variables, {e: other * c for e, c in self.terms.items()})

    def __truediv__(self, other):
        return MultiPoly(self.variables, {e: _div(c, other) for e, c in self.terms.items()})

    def __pow__(self, k: int):
        out = MultiPoly.constant(1, self.variables)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.variables == other.variables and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.variables, frozenset(self.terms.items())))

    def diff(self, name: str) -> "MultiPoly":
        i = self.index(name)
        t = {}
        for e, c in self.terms.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                t[tuple(f)] = c * e[i]
        return MultiPoly(self.variables, t)

    def times_var(self, name: str) -> "MultiPoly":
        i = self.index(name)
        t = {}
        for e, c in self.terms.items():
            f = list(e)
            f[i] += 1
            t[tuple(f)] = c
        return MultiPoly(self.variables, t)

    def evaluate(self, values: dict):
        out = 0
        for e, c in self.terms.items():
            v = c
            for name, k in zip(self.variables, e):
                if k:
                    v = v * values[name] ** k
            out = out + v
        return out

    def total_degree(self, names=None) -> set[int]:
        idx = range(len(self.variables)) if names is None else [self.index(n) for n in names]
        return {sum(e[i] for i in idx) for e in self.terms}

    def __repr__(self):
        return f"MultiPoly({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), reverse=True):
            mono = "*".join(f"{v}^{k}" if k > 1 else v for v, k in zip(self.variables, e) if k)
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)


def random_ternary(rng, degree: int, kind: str = "rational", density: float = 1.0, span: int = 5) -> TernaryPoly:
    """Random homogeneous ternary polynomial (used by tests and the CLI)."""
    terms = {}
    for e in monomials(degree):
        if density < 1.0 and rng.random() > density:
            continue
        if kind == "rational":
            terms[e] = Fraction(int(rng.integers(-span, span + 1)), int(rng.integers(1, span + 1)))
        elif kind == "integer":
            terms[e] = int(rng.integers(-span, span + 1))
        else:
            terms[e] = complex(rng.normal(), rng.normal()) if kind == "complex" else float(rng.normal())
    return TernaryPoly(degree, terms)

