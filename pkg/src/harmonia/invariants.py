"""Binary invariant theory: polars, transvectants, apolarity, joint
invariants, the annihilators Omega and O with the projectors built from
them, induced transformations, equal-root systems, the Clebsch form
Upsilon and the quartic resolvent.

Binary forms are written f = sum_r C(n, r) a_r xi^(n-r) eta^r in the
classical view and f = sum_m phi^m xi_m (null-spinor basis) in the spin
view, with phi^(j-r) = sqrt(C(n, r)) a_r and n = 2j.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .harmonic import NotHarmonicError, restrict_to_conic
from .numcore import Surd, binomial, factorial, half, is_exact, simplify, wigner_3j
from .poly import BinaryForm, MultiPoly, TernaryPoly, _div
from .spinor import cartan_map, spherical_to_cartesian

__all__ = [
    "QuanticCoefficients",
    "WeightError",
    "polar",
    "apolar",
    "polar_contractions",
    "transvectant",
    "hessian",
    "joint_invariant",
    "joint_invariant_phi",
    "coefficient_variables",
    "gradient",
    "annihilator_omega",
    "annihilator_O",
    "weight_operator",
    "weight",
    "hilbert_project",
    "loewdin_project",
    "induced_transform",
    "equal_root_system",
    "clebsch_upsilon",
    "QuarticResolvent",
    "quartic_invariants",
    "quartic_resolvent",
    "mixed_polarization",
    "schlesinger_point",
    "schlesinger_check",
]


def _zero(c, tol: float) -> bool:
    if is_exact(c):
        return c == 0
    return abs(complex(c)) <= tol


def _exact_scalar(c):
    """SqrtRational -> Surd (or Fraction when rational)."""
    return simplify(c.to_surd())


# ---------------------------------------------------------------------------
# coefficient views


@dataclass(frozen=True)
class QuanticCoefficients:
    """Classical coefficients a_0..a_n of a binary n-ic."""

    a: tuple

    @property
    def n(self) -> int:
        return len(self.a) - 1

    @classmethod
    def from_form(cls, f: BinaryForm) -> "QuanticCoefficients":
        return cls(tuple(f.classical()))

    @classmethod
    def from_phi(cls, phi) -> "QuanticCoefficients":
        return cls.from_form(BinaryForm.from_phi(phi))

    def form(self) -> BinaryForm:
        return BinaryForm.from_classical(list(self.a))

    def phi(self) -> list:
        return self.form().phi()

    def __call__(self, xi, eta):
        return self.form()(xi, eta)


def _form(f) -> BinaryForm:
    if isinstance(f, QuanticCoefficients):
        return f.form()
    if isinstance(f, BinaryForm):
        return f
    return BinaryForm(list(f))


# ---------------------------------------------------------------------------
# polars and transvectants


def polar(f, g) -> BinaryForm:
    """((n-m)!/n!) g(d/deta, -d/dxi) f.

    For g = c prod_k (eta_k xi - xi_k eta) the operator is
    c prod_k (xi_k d/dxi + eta_k d/deta): f polarized at the roots of g.
    """
    f, g = _form(f), _form(g)
    n, m = f.degree, g.degree
    if n < m:
        return BinaryForm.zero(0)
    out = BinaryForm.zero(n - m)
    for k, c in enumerate(g.coeffs):
        if _zero(c, 0.0):
            continue
        # xi^(m-k) eta^k  ->  (d/deta)^(m-k) (-d/dxi)^k
        term = f.derivative(k, m - k) * c
        out = out + (term if k % 2 == 0 else -term)
    return out * Fraction(factorial(n - m), factorial(n))


def transvectant(f, g, r: int) -> BinaryForm:
    """r-th transvectant (f, g)^r, normalized by (n-r)!(m-r)!/(n! m!)."""
    f, g = _form(f), _form(g)
    n, m = f.degree, g.degree
    if not 0 <= r <= min(n, m):
        raise ValueError(f"transvectant order {r} outside 0..{min(n, m)}")
    out = BinaryForm.zero(n + m - 2 * r)
    for k in range(r + 1):
        term = f.derivative(r - k, k) * g.derivative(k, r - k) * binomial(r, k)
        out = out + (term if k % 2 == 0 else -term)
    return out * Fraction(factorial(n - r) * factorial(m - r), factorial(n) * factorial(m))


def hessian(f) -> BinaryForm:
    """f_xixi f_etaeta - f_xieta^2."""
    f = _form(f)
    if f.degree < 2:
        raise ValueError("the Hessian needs degree >= 2")
    return f.derivative(2, 0) * f.derivative(0, 2) - f.derivative(1, 1) ** 2


def polar_contractions(f, g) -> list:
    """The 2(j1-j2)+1 couplings of the phi views of f and g to J = j1 - j2.

    Component M is sum 3j(j1 j2 J; m1 m2 -M) phi_f^m1 phi_g^m2; these all
    vanish exactly when f and g are apolar.
    """
    f, g = _form(f), _form(g)
    n, m = f.degree, g.degree
    if n < m:
        return []
    j1, j2 = Fraction(n, 2), Fraction(m, 2)
    J = j1 - j2
    pf, pg = f.phi(), g.phi()
    exact = f.is_exact() and g.is_exact()
    out = []
    for iM in range(n - m + 1):
        M = -J + iM
        s = 0
        for i1, c1 in enumerate(pf):
            m1 = -j1 + i1
            m2 = M - m1
            if abs(m2) > j2:
                continue
            c2 = pg[int(m2 + j2)]
            if _zero(c1, 0.0) or _zero(c2, 0.0):
                continue
            w = wigner_3j(half(j1), half(j2), half(J), half(m1), half(m2), half(-M))
            if w.is_zero():
                continue
            s = s + (_exact_scalar(w) if exact else float(w)) * c1 * c2
        out.append(simplify(s) if exact else complex(s))
    return out


def apolar(f, g, tol: float = 1e-10) -> bool:
    """True when the polar of g on f vanishes.

    Decided twice, from the derivative form of the polar and from the
    3j couplings of the spin views; disagreement raises ArithmeticError.
    """
    f, g = _form(f), _form(g)
    p = polar(f, g)
    scale = max(f.norm() * g.norm(), 1e-300)
    if p.is_exact():
        by_polar = p.is_zero()
    else:
        by_polar = p.norm() <= tol * scale
    cs = polar_contractions(f, g)
    if all(is_exact(c) for c in cs):
        by_3j = all(c == 0 for c in cs)
    else:
        by_3j = math.sqrt(sum(abs(complex(c)) ** 2 for c in cs)) <= tol * scale
    if by_polar != by_3j:
        raise ArithmeticError("polar and 3j routes disagree on apolarity")
    return by_polar


def joint_invariant(f, g):
    """sum_r (-1)^r C(n, r) a_r b_(n-r) for two forms of equal degree."""
    f, g = _form(f), _form(g)
    n = f.degree
    if g.degree != n:
        raise ValueError(f"degree mismatch: {n} vs {g.degree}")
    a, b = f.classical(), g.classical()
    s = 0
    for r in range(n + 1):
        t = a[r] * b[n - r] * binomial(n, r)
        s = s + (t if r % 2 == 0 else -t)
    return simplify(s) if is_exact(s) else s


def joint_invariant_phi(f, g):
    """The same invariant as sum_m (-1)^(j-m) phi_f^m phi_g^(-m)."""
    f, g = _form(f), _form(g)
    n = f.degree
    if g.degree != n:
        raise ValueError(f"degree mismatch: {n} vs {g.degree}")
    pf, pg = f.phi(), g.phi()
    s = 0
    for i in range(n + 1):
        t = pf[i] * pg[n - i]
        s = s + (t if (n - i) % 2 == 0 else -t)
    return simplify(s) if is_exact(s) else s


# ---------------------------------------------------------------------------
# annihilators on gradients (polynomials in a_0..a_n, optionally xi, eta)


class WeightError(ValueError):
    """A gradient is not isobaric or has the wrong weight."""

    def __init__(self, message: str, weight=None):
        super().__init__(message)
        self.weight = weight


def coefficient_variables(n: int, spinor: bool = True) -> tuple:
    names = tuple(f"a{k}" for k in range(n + 1))
    return names + ("xi", "eta") if spinor else names


def gradient(f: BinaryForm, spinor: bool = True) -> MultiPoly:
    """The ground form sum C(n,r) a_r xi^(n-r) eta^r as a gradient."""
    n = f.degree
    vs = coefficient_variables(n, True)
    out = MultiPoly(vs)
    for r in range(n + 1):
        out = out + MultiPoly.var(f"a{r}", vs) * MultiPoly.var("xi", vs) ** (n - r) * MultiPoly.var("eta", vs) ** r * binomial(n, r)
    return out


def _has(F: MultiPoly, name: str) -> bool:
    return name in F.variables


def annihilator_omega(F: MultiPoly, n: int, primed: bool = False) -> MultiPoly:
    """Omega = sum (k+1) a_k d/da_(k+1); primed: Omega - eta d/dxi."""
    out = MultiPoly(F.variables)
    for k in range(n):
        out = out + F.diff(f"a{k + 1}").times_var(f"a{k}") * (k + 1)
    if primed and _has(F, "xi"):
        out = out - F.diff("xi").times_var("eta")
    return out


def annihilator_O(F: MultiPoly, n: int, primed: bool = False) -> MultiPoly:
    """O = sum (n-k) a_(k+1) d/da_k; primed: O - xi d/deta."""
    out = MultiPoly(F.variables)
    for k in range(n):
        out = out + F.diff(f"a{k}").times_var(f"a{k + 1}") * (n - k)
    if primed and _has(F, "xi"):
        out = out - F.diff("eta").times_var("xi")
    return out


def weight_operator(F: MultiPoly, n: int, primed: bool = False) -> MultiPoly:
    """(1/2)[O, Omega] F."""
    a = annihilator_O(annihilator_omega(F, n, primed), n, primed)
    b = annihilator_omega(annihilator_O(F, n, primed), n, primed)
    return (a - b) * Fraction(1, 2)


def _monomial_weight(e, variables, n: int) -> Fraction:
    w = Fraction(0)
    for name, k in zip(variables, e):
        if not k:
            continue
        if name == "xi":
            w += Fraction(k, 2)
        elif name == "eta":
            w -= Fraction(k, 2)
        else:
            w += k * (int(name[1:]) - Fraction(n, 2))
    return w


def weight(F: MultiPoly, n: int) -> Fraction:
    """Weight of an isobaric gradient: a_r counts r - n/2, xi +1/2, eta -1/2."""
    ws = {_monomial_weight(e, F.variables, n) for e in F.terms}
    if not ws:
        return Fraction(0)
    if len(ws) > 1:
        raise WeightError(f"gradient is not isobaric (weights {sorted(ws)})")
    return ws.pop()


def hilbert_project(F: MultiPoly, n: int) -> MultiPoly:
    """K = sum_r (-1)^r O'^r Omega'^r F / (r! (r+1)!) for F of weight 0."""
    w = weight(F, n)
    if w != 0:
        raise WeightError(f"hilbert projection needs weight 0, got {w}", w)
    out = MultiPoly(F.variables)
    cur = F
    r = 0
    while not cur.is_zero():
        term = cur
        for _ in range(r):
            term = annihilator_O(term, n, primed=True)
        c = Fraction((-1) ** r, factorial(r) * factorial(r + 1))
        out = out + term * c
        cur = annihilator_omega(cur, n, primed=True)
        r += 1
    return out


def loewdin_project(G: MultiPoly, n: int, m=None) -> MultiPoly:
    """Omega-annihilated component of an isobaric gradient of weight -m.

    Series sum_r (-1)^r O^r Omega^r G / (r! (2m+2)(2m+3)...(2m+r+1)), the
    r = 0 denominator being 1. Gradients of positive weight carry no
    Omega-annihilated part and project to zero.
    """
    if not G.is_zero():
        lhs = weight_operator(G, n)
        w = weight(G, n)
        if lhs != G * w:
            raise WeightError("gradient is not an eigenfunction of (1/2)[O, Omega]", w)
    else:
        return G
    if m is not None and Fraction(m) != -w:
        raise WeightError(f"gradient has excess {-2 * w}, not {2 * Fraction(m)}", w)
    m = -w
    if m < 0:
        return MultiPoly(G.variables)
    out = MultiPoly(G.variables)
    cur = G
    r = 0
    den = Fraction(1)
    while not cur.is_zero():
        term = cur
        for _ in range(r):
            term = annihilator_O(term, n)
        out = out + term * (Fraction((-1) ** r) / (factorial(r) * den))
        cur = annihilator_omega(cur, n)
        r += 1
        den *= 2 * m + r + 1
    return out


# ---------------------------------------------------------------------------
# substitutions


def _det(M) -> complex:
    return M[0][0] * M[1][1] - M[0][1] * M[1][0]


def induced_transform(f, M) -> QuanticCoefficients:
    """Coefficients of f after (xi, eta) -> M (xi', eta').

    a'_r = (r!/n!) (l . grad)^(n-r) f evaluated at m, with l and m the
    columns of M.
    """
    q = f if isinstance(f, QuanticCoefficients) else QuanticCoefficients.from_form(_form(f))
    F = q.form()
    n = q.n
    M = [[M[0][0], M[0][1]], [M[1][0], M[1][1]]]
    d = _det(M)
    if (is_exact(d) and d == 0) or (not is_exact(d) and abs(complex(d)) < 1e-300):
        raise ValueError("singular substitution matrix")
    l = (M[0][0], M[1][0])
    mcol = (M[0][1], M[1][1])
    out = []
    for r in range(n + 1):
        k = n - r
        s = 0
        for i in range(k + 1):
            c = binomial(k, i) * l[0] ** (k - i) * l[1] ** i
            if _zero(c, 0.0):
                continue
            s = s + c * F.derivative(k - i, i)(mcol[0], mcol[1])
        s = s * Fraction(factorial(r), factorial(n))
        out.append(simplify(s) if is_exact(s) else s)
    return QuanticCoefficients(tuple(out))


def equal_root_system(phi, e: int) -> list[BinaryForm]:
    """Coefficients of alpha^k beta^(e-1-k) in (beta d/dxi - alpha d/deta)^(e-1) phi.

    The e forms share a root exactly when phi has a root of multiplicity e
    or more.
    """
    f = _form(phi)
    if not 1 <= e <= f.degree:
        raise ValueError(f"e must lie in 1..{f.degree}")
    out = []
    for k in range(e):
        g = f.derivative(e - 1 - k, k) * binomial(e - 1, k)
        out.append(g if k % 2 == 0 else -g)
    return out


# ---------------------------------------------------------------------------
# Upsilon


def clebsch_upsilon(omega: TernaryPoly) -> TernaryPoly:
    """sum_s (-1)^s [prod_{k<s} (n+k)/(n-k)] r^(2s)/(2s)! Laplacian^s(Omega^2).

    Agrees with Omega^2 on the null cone and factors into 2n linear forms
    (b_i . r), one for each projective root of the restriction of Omega.
    """
    if omega.is_exact():
        harmonic = omega.laplacian().is_zero()
    else:
        harmonic = omega.laplacian().norm() <= 1e-9 * max(omega.norm(), 1e-300)
    if not harmonic:
        raise NotHarmonicError("Upsilon needs a harmonic input", omega.laplacian().norm())
    n = omega.degree
    sq = omega * omega
    out = sq
    r2 = TernaryPoly.r2()
    lap = sq
    coef = Fraction(1)
    for s in range(1, n + 1):
        lap = lap.laplacian()
        if lap.is_zero():
            break
        coef = -coef * Fraction(n + s - 1, n - s + 1)
        out = out + (r2**s * lap) * (coef / factorial(2 * s))
    return out


# ---------------------------------------------------------------------------
# quartic invariants


@dataclass(frozen=True)
class QuarticResolvent:
    I: object
    J: object
    roots: tuple
    repeated: bool


def quartic_invariants(B) -> tuple:
    """I = 4(a0 a4 - 4 a1 a3 + 3 a2^2), J = -8(a0 a2 a4 + 2 a1 a2 a3 - a2^3 - a0 a3^2 - a1^2 a4)."""
    B = _form(B)
    if B.degree != 4:
        raise ValueError("quartic invariants need a degree-4 form")
    a0, a1, a2, a3, a4 = B.classical()
    I = 4 * (a0 * a4 - 4 * a1 * a3 + 3 * a2 * a2)
    J = -8 * (a0 * a2 * a4 + 2 * a1 * a2 * a3 - a2 * a2 * a2 - a0 * a3 * a3 - a1 * a1 * a4)
    if is_exact(I):
        return simplify(I), simplify(J)
    return complex(I), complex(J)


def quartic_resolvent(B, tol: float = 1e-10) -> QuarticResolvent:
    """I, J and the roots of 4 lambda^3 - I lambda + J = 0.

    I^3 = 27 J^2 flags a repeated root, which is then returned exactly
    (lambda0 = 3J/(2I) twice and -2 lambda0 once).
    """
    I, J = quartic_invariants(B)
    disc = I**3 - 27 * J * J
    if is_exact(disc):
        repeated = disc == 0
    else:
        repeated = abs(disc) <= tol * max(abs(I) ** 3, 27 * abs(J) ** 2, 1e-300)
    if repeated:
        if (is_exact(I) and I == 0) or (not is_exact(I) and abs(I) <= tol):
            roots = (0, 0, 0)
        else:
            lam = Fraction(3, 2) * J / I if is_exact(I) else 1.5 * J / I
            lam = simplify(lam) if is_exact(lam) else lam
            roots = (lam, lam, -2 * lam)
    else:
        roots = tuple(np.roots([4, 0, -complex(I), complex(J)]))
    return QuarticResolvent(I, J, roots, repeated)


# ---------------------------------------------------------------------------
# parametrization of the ternary form by pairs of spinors


def mixed_polarization(B, lam, mu):
    """(n!/(2n)!) (lambda . grad)^n B at mu, for B of degree 2n."""
    B = _form(B)
    d = B.degree
    if d % 2:
        raise ValueError("mixed polarization needs an even degree")
    n = d // 2
    s = 0
    for i in range(n + 1):
        c = binomial(n, i) * lam[0] ** (n - i) * lam[1] ** i
        s = s + c * B.derivative(n - i, i)(mu[0], mu[1])
    return s * factorial(n) / factorial(d)


def schlesinger_point(lam, mu) -> np.ndarray:
    """Cartesian point with spherical components (l1 m1, (l1 m2 + l2 m1)/sqrt2, l2 m2)."""
    s = (
        lam[0] * mu[0],
        (lam[0] * mu[1] + lam[1] * mu[0]) / math.sqrt(2.0),
        lam[1] * mu[1],
    )
    return np.array(spherical_to_cartesian(tuple(complex(c) for c in s)), dtype=complex)


def schlesinger_check(B, T: TernaryPoly, samples: int = 20, seed: int = 0, tol: float = 1e-10) -> dict:
    """Compare T(r(lambda, mu)) with the n-fold mixed polarization of B.

    The ratio at the first sample fixes the one global constant; the
    report gives the worst relative deviation from it.
    """
    B = _form(B)
    if T.laplacian().norm() > 1e-9 * max(T.norm(), 1e-300):
        raise NotHarmonicError("T must be harmonic", T.laplacian().norm())
    if B.degree != 2 * T.degree:
        raise ValueError("B must have twice the degree of T")
    rng = np.random.default_rng(seed)
    Tn = T.numeric()
    Bn = B.numeric()
    const = None
    worst = 0.0
    for _ in range(samples):
        lam = rng.normal(size=2) + 1j * rng.normal(size=2)
        mu = rng.normal(size=2) + 1j * rng.normal(size=2)
        lhs = Tn(*schlesinger_point(lam, mu))
        rhs = mixed_polarization(Bn, lam, mu)
        if const is None:
            const = lhs / rhs if abs(rhs) > 0 else complex("nan")
            scale = max(abs(lhs), abs(rhs), 1e-300)
            continue
        size = (np.linalg.norm(lam) * np.linalg.norm(mu)) ** T.degree * max(Bn.norm(), 1e-300)
        worst = max(worst, abs(lhs - const * rhs) / size)
    return {
        "constant": complex(const),
        "max_deviation": worst,
        "samples": samples,
        "passed": bool(worst < tol),
    }
