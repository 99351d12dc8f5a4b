"""Maxwell poles of a real harmonic.

Pipeline: restrict the harmonic to the null cone, find the 2L projective
roots of the resulting binary form, pair every root t with -1/conj(t),
turn each pair into a real unit vector, then fix the constant C and the
remainder G in

    Phi = C * prod_i (r . p_i) + r^2 G.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .harmonic import (
    HarmonicNormalForm,
    NotHarmonicError,
    harmonic_projection,
    normal_form_to_poly,
    restrict_to_conic,
)
from .numcore import Surd, is_exact, simplify, sqrt_surd
from .poly import BinaryForm, TernaryPoly
from .spinor import INF, Pole, TwoSpinor, cartan_map, chordal_distance, is_infinite, pole_from_root

__all__ = [
    "ProjectiveRootSet",
    "RootPair",
    "PoleDecomposition",
    "Rank4Traces",
    "SolverError",
    "NotRealHarmonicError",
    "DegenerateSampleError",
    "find_projective_roots",
    "pair_conjugate_roots",
    "maxwell_poles",
    "pole_product",
    "rank4_trace_residual",
    "verify_decomposition",
    "tetrahedron_quartic",
    "tetrahedron_poles",
    "tetrahedron_report",
]

EPS = np.finfo(float).eps


class SolverError(RuntimeError):
    """Root finding did not converge."""

    def __init__(self, message: str, residual: float = float("nan")):
        super().__init__(message)
        self.residual = residual


class NotRealHarmonicError(ValueError):
    """The root set is not closed under t -> -1/conj(t), or the data are complex."""

    def __init__(self, message: str, offenders=()):
        super().__init__(message)
        self.offenders = list(offenders)


class DegenerateSampleError(RuntimeError):
    """No usable cone point was found for fixing C."""


# ---------------------------------------------------------------------------
# root finding


@dataclass(frozen=True)
class ProjectiveRootSet:
    """Roots (value, multiplicity) of a binary form; value may be INF."""

    degree: int
    roots: tuple
    residual: float = 0.0

    def values(self) -> list:
        out = []
        for t, k in self.roots:
            out.extend([t] * k)
        return out

    def total_multiplicity(self) -> int:
        return sum(k for _, k in self.roots)


def _rel_residual(c: np.ndarray, z: complex) -> float:
    """|p(z)| / sum |c_k| |z|^(n-k), evaluated in the stable direction."""
    n = len(c) - 1
    if abs(z) <= 1:
        num = np.polyval(c, z)
        den = np.polyval(np.abs(c), abs(z))
    else:
        w = 1 / z
        num = np.polyval(c[::-1], w)
        den = np.polyval(np.abs(c[::-1]), abs(w))
    return abs(num) / den if den else 0.0 if n == 0 else abs(num)


def _newton_ratio(c: np.ndarray, dc: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z)/p'(z), switching to the reversed polynomial outside the unit disc."""
    n = len(c) - 1
    out = np.empty_like(z)
    inside = np.abs(z) <= 1
    zi = z[inside]
    p = np.polyval(c, zi)
    dp = np.polyval(dc, zi)
    out[inside] = p / np.where(dp == 0, EPS, dp)
    zo = z[~inside]
    if zo.size:
        w = 1 / zo
        rc = c[::-1]
        q = np.polyval(rc, w)
        dq = np.polyval(np.polyder(rc), w)
        den = n * q - w * dq
        out[~inside] = zo * q / np.where(den == 0, EPS, den)
    return out


def _aberth(c: np.ndarray, maxiter: int = 500) -> np.ndarray:
    """All roots of the polynomial with coefficients c (highest power first)."""
    n = len(c) - 1
    if n == 0:
        return np.zeros(0, dtype=complex)
    c = c / c[0]
    if n == 1:
        return np.array([-c[1]])
    dc = np.polyder(c)
    # initial guesses on a circle of radius |c_n|^(1/n), rotated off the axes
    rad = abs(c[-1]) ** (1.0 / n)
    rad = rad if rad > 0 else 1.0
    z = rad * np.exp(1j * (2 * np.pi * np.arange(n) / n + 0.4))
    tol = 4 * EPS * n
    for _ in range(maxiter):
        ratio = _newton_ratio(c, dc, z)
        diff = z[:, None] - z[None, :]
        np.fill_diagonal(diff, 1.0)
        inv = 1.0 / diff
        np.fill_diagonal(inv, 0.0)
        s = inv.sum(axis=1)
        w = ratio / (1.0 - ratio * s)
        z = z - w
        if all(_rel_residual(c, zz) <= tol for zz in z):
            break
    return z


def _refine_cluster(c: np.ndarray, zs: list, k: int) -> complex:
    """Centre of a k-fold cluster, polished by Newton on the (k-1)th derivative."""
    z = complex(np.mean(zs))
    d = c.copy()
    for _ in range(k - 1):
        d = np.polyder(d)
    dd = np.polyder(d)
    if len(dd) == 0:
        return z
    spread = max(abs(a - z) for a in zs) + EPS * max(1.0, abs(z))
    for _ in range(8):
        den = np.polyval(dd, z)
        if den == 0:
            break
        step = np.polyval(d, z) / den
        if abs(step) > spread:
            break
        z -= step
        if abs(step) <= EPS * max(1.0, abs(z)):
            break
    return z


def _cluster_radius_bound(c: np.ndarray, zs: list) -> float:
    """Spread expected when a k-fold root is perturbed at rounding level.

    A k-fold root of p scatters by about (eps S / |p^(k)/k!|)^(1/k), with S
    the absolute-value polynomial at the centre. Evaluated in the reversed
    variable outside the unit disc so the bound stays relative.
    """
    k = len(zs)
    m = complex(np.mean(zs))
    pts = list(zs)
    if abs(m) > 1:
        c = c[::-1]
        pts = [1 / z for z in zs]
        m = complex(np.mean(pts))
    d = c.copy()
    for _ in range(k):
        d = np.polyder(d)
    lead = abs(np.polyval(d, m)) / math.factorial(k)
    S = np.polyval(np.abs(c), abs(m))
    if lead == 0:
        return math.inf
    bound = (EPS * len(c) * S / lead) ** (1.0 / k)
    spread = max(abs(z - m) for z in pts)
    return spread / bound


def _merge_near_clusters(c: np.ndarray, groups: list[list[complex]], limit: float = 50.0) -> list[list[complex]]:
    """Join clusters whose union scatters no more than a multiple root would."""
    groups = [list(g) for g in groups]
    merged = True
    while merged:
        merged = False
        best = None
        for a in range(len(groups)):
            for b in range(a):
                ma, mb = complex(np.mean(groups[a])), complex(np.mean(groups[b]))
                if chordal_distance(ma, mb) > 1e-2:
                    continue
                ratio = _cluster_radius_bound(c, groups[a] + groups[b])
                if ratio <= limit and (best is None or ratio < best[0]):
                    best = (ratio, a, b)
        if best is not None:
            _, a, b = best
            groups[b] = groups[b] + groups[a]
            del groups[a]
            merged = True
    return groups


def find_projective_roots(
    B: BinaryForm,
    zero_tol: float | None = None,
    cluster_radius: float = 1e-6,
    residual_tol: float = 1e-12,
    maxiter: int = 500,
) -> ProjectiveRootSet:
    """Roots t = xi/eta of B, with monomial factors xi^a eta^b deflated first."""
    d = B.degree
    if B.is_zero():
        raise ValueError("the zero form has no root set")
    coeffs = np.array([complex(c) for c in B.coeffs])
    if zero_tol is None:
        zero_tol = 0.0 if B.is_exact() else 1e-14
    scale = np.max(np.abs(coeffs))
    if B.is_exact():
        nz = [not (c == 0) for c in B.coeffs]
    else:
        nz = list(np.abs(coeffs) > zero_tol * scale)
    lead = nz.index(True)  # eta^lead divides B: root at infinity
    trail = nz[::-1].index(True)  # xi^trail divides B: root at zero
    core = coeffs[lead : d + 1 - trail]
    found = [complex(t) for t in _aberth(core, maxiter=maxiter)]
    pts = [INF] * lead + [0j] * trail + found
    exact_flags = [True] * (lead + trail) + [False] * len(found)
    # cluster by chordal distance (union-find)
    parent = list(range(len(pts)))

    def root(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(pts)):
        for j in range(i):
            if chordal_distance(pts[i], pts[j]) < cluster_radius:
                parent[root(i)] = root(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(pts)):
        groups.setdefault(root(i), []).append(i)
    exact_groups = [[pts[i] for i in idx] for idx in groups.values() if any(exact_flags[i] for i in idx)]
    loose = [[pts[i] for i in idx] for idx in groups.values() if not any(exact_flags[i] for i in idx)]
    if len(loose) > 1:
        loose = _merge_near_clusters(core, loose)
    out = []
    worst = 0.0
    for zs in exact_groups + loose:
        k = len(zs)
        ex = [t for t in zs if is_infinite(t) or t == 0]
        if zs in exact_groups:
            t = ex[0]
        elif k == 1:
            t = zs[0]
        else:
            t = _refine_cluster(core, zs, k)
        if not is_infinite(t) and t != 0:
            worst = max(worst, _rel_residual(core, t))
        out.append((t, k))
    if worst > residual_tol:
        raise SolverError(f"root residual {worst:.3e} exceeds {residual_tol:.1e}", worst)
    out.sort(key=lambda tk: (is_infinite(tk[0]), 0 if is_infinite(tk[0]) else abs(tk[0]), 0 if is_infinite(tk[0]) else np.angle(tk[0])))
    return ProjectiveRootSet(d, tuple(out), worst)


# ---------------------------------------------------------------------------
# pairing


@dataclass(frozen=True)
class RootPair:
    root: complex
    partner: complex
    multiplicity: int
    distance: float = 0.0


def antipode(t):
    """-1/conj(t), with 0 and INF exchanged."""
    if is_infinite(t):
        return 0j
    if t == 0:
        return INF
    return -1.0 / np.conj(complex(t))


def pair_conjugate_roots(rs: ProjectiveRootSet, tol: float = 1e-8) -> list[RootPair]:
    roots = list(rs.roots)
    total = sum(k for _, k in roots)
    if total % 2:
        raise NotRealHarmonicError("odd number of roots cannot be paired", [t for t, _ in roots])
    rem = [k for _, k in roots]
    pairs = []
    for i, (t, _) in enumerate(roots):
        while rem[i] > 0:
            s = antipode(t)
            best, bestd = None, math.inf
            for j, (u, _) in enumerate(roots):
                if j == i or rem[j] == 0:
                    continue
                dist = chordal_distance(s, u)
                if dist < bestd:
                    best, bestd = j, dist
            if best is None or bestd > tol:
                break
            k = min(rem[i], rem[best])
            rem[i] -= k
            rem[best] -= k
            pairs.append(RootPair(t, roots[best][0], k, bestd))
    if any(rem):
        return _pair_by_assignment(rs, tol)
    return pairs


def _pair_by_assignment(rs: ProjectiveRootSet, tol: float) -> list[RootPair]:
    vals = rs.values()
    n = len(vals)
    cost = np.full((n, n), 10.0)
    for a in range(n):
        s = antipode(vals[a])
        for b in range(n):
            if a != b:
                cost[a, b] = chordal_distance(s, vals[b])
    rows, cols = linear_sum_assignment(cost)
    offenders = [vals[a] for a, b in zip(rows, cols) if cost[a, b] > tol or cols[b] != a]
    if offenders:
        raise NotRealHarmonicError(
            "roots are not closed under t -> -1/conj(t); input is not a real harmonic", offenders
        )
    pairs = []
    for a, b in zip(rows, cols):
        if a < b:
            pairs.append(RootPair(vals[a], vals[b], 1, cost[a, b]))
    return pairs


# ---------------------------------------------------------------------------
# decomposition


@dataclass(frozen=True)
class PoleDecomposition:
    L: int
    C: float
    poles: tuple
    G: TernaryPoly
    diagnostics: dict = field(default_factory=dict, compare=False)

    def product(self) -> TernaryPoly:
        return pole_product(self.poles)

    def reconstruct(self) -> TernaryPoly:
        P = self.product() * self.C
        if self.L >= 2:
            P = P + TernaryPoly.r2() * self.G
        return P

    def pole_count(self) -> int:
        return sum(p.multiplicity for p in self.poles)


def pole_product(poles) -> TernaryPoly:
    out = TernaryPoly.constant(1)
    for p in poles:
        out = out * (p.linear_form() ** p.multiplicity)
    return out


def _real_poly(f: TernaryPoly, tol: float) -> TernaryPoly:
    if f.is_exact():
        if not f.is_real():
            raise NotRealHarmonicError("polynomial has non-real coefficients")
        return f
    scale = max(f.norm(), 1e-300)
    worst = max((abs(complex(c).imag) for c in f.terms.values()), default=0.0)
    if worst > tol * scale:
        raise NotRealHarmonicError(f"polynomial has non-real coefficients (imag {worst:.3e})")
    return TernaryPoly(f.degree, {e: complex(c).real for e, c in f.terms.items()})


def _as_real_harmonic(phi, project: bool, tol: float) -> TernaryPoly:
    if isinstance(phi, HarmonicNormalForm):
        if not phi.is_real(max(tol, 1e-10)):
            raise NotRealHarmonicError(
                f"coefficients violate the reality condition (residual {phi.reality_residual():.3e})"
            )
        f = normal_form_to_poly(phi)
    elif isinstance(phi, TernaryPoly):
        f = phi
    else:
        raise TypeError("expected a HarmonicNormalForm or a TernaryPoly")
    f = _real_poly(f, max(tol, 1e-10))
    lap = f.laplacian()
    harmonic = lap.is_zero() if f.is_exact() else lap.norm() <= tol * max(f.norm(), 1e-300)
    if not harmonic:
        if not project:
            raise NotHarmonicError(
                f"input is not harmonic (Laplacian norm {lap.norm():.3e}); use the projection option", lap.norm()
            )
        f = harmonic_projection(f)
    if f.is_zero():
        raise ValueError("the zero harmonic has no poles")
    return f


def maxwell_poles(
    phi,
    project: bool = False,
    tol: float = 1e-9,
    seed: int = 0,
    pair_tol: float = 1e-8,
    cluster_radius: float = 1e-6,
) -> PoleDecomposition:
    """Decompose a real harmonic as C * prod (r . p_i) + r^2 G."""
    f = _as_real_harmonic(phi, project, tol)
    L = f.degree
    fnum = f.numeric()
    diag: dict = {}
    if L == 0:
        C = complex(f.coefficient(0, 0, 0)).real
        return PoleDecomposition(0, C, (), TernaryPoly(0), {"coefficient_residual": 0.0})
    B = restrict_to_conic(f)
    rs = find_projective_roots(B, cluster_radius=cluster_radius)
    pairs = pair_conjugate_roots(rs, tol=pair_tol)
    poles = []
    for pr in pairs:
        # the representative inside the unit disc gives the better conditioned pole
        t = pr.root if (not is_infinite(pr.root) and abs(pr.root) <= 1) else pr.partner
        poles.append(pole_from_root(t) if not is_infinite(t) else pole_from_root(INF))
        poles[-1] = Pole(poles[-1].direction, pr.multiplicity)
    poles = _merge_poles(poles)
    poles.sort(key=lambda p: tuple(-c for c in p.direction[::-1]))
    P = pole_product(poles)
    rng = np.random.default_rng(seed)
    C = None
    for attempt in range(32):
        psi = TwoSpinor.random(rng)
        b = np.array(cartan_map(psi).cartesian, dtype=complex)
        nb = np.linalg.norm(b)
        den = P(*b)
        if abs(den) > 1e-3 * nb**L:
            val = fnum(*b) / den
            C = val
            diag["cone_samples"] = attempt + 1
            break
    if C is None:
        raise DegenerateSampleError("pole product vanished at every sampled cone point")
    diag["C_imag"] = abs(C.imag) / max(abs(C), 1e-300)
    C = C.real
    rem_all = fnum - P * C
    if L >= 2:
        G, rem = rem_all.divide_by_r2()
        G = G.real_part()
    else:
        G, rem = TernaryPoly(0), rem_all
    fn = max(f.norm(), 1e-300)
    diag["coefficient_residual"] = rem.norm() / fn
    diag["root_residual"] = rs.residual
    diag["pair_distance"] = max((p.distance for p in pairs), default=0.0)
    return PoleDecomposition(L, float(C), tuple(poles), G, diag)


def _merge_poles(poles: list[Pole], tol: float = 1e-6) -> list[Pole]:
    out: list[Pole] = []
    for p in poles:
        for i, q in enumerate(out):
            if np.linalg.norm(p.as_array() - q.as_array()) < tol:
                out[i] = Pole(q.direction, q.multiplicity + p.multiplicity)
                break
        else:
            out.append(p)
    return out


def verify_decomposition(phi, d: PoleDecomposition, n_points: int = 100, seed: int = 0, tol: float = 1e-8) -> dict:
    """Residuals of a decomposition against its source harmonic."""
    f = normal_form_to_poly(phi) if isinstance(phi, HarmonicNormalForm) else phi
    fnum = f.numeric()
    fn = max(fnum.norm(), 1e-300)
    rec = d.reconstruct().numeric()
    coeff = (fnum - rec).norm() / fn
    rng = np.random.default_rng(seed)
    P = d.product().numeric()
    worst = 0.0
    for _ in range(n_points):
        psi = TwoSpinor.random(rng)
        b = np.array(cartan_map(psi).cartesian, dtype=complex)
        nb = np.linalg.norm(b)
        worst = max(worst, abs(fnum(*b) - d.C * P(*b)) / (fn * nb**d.L))
    norm_dev = max((abs(np.linalg.norm(p.as_array()) - 1.0) for p in d.poles), default=0.0)
    count_ok = d.pole_count() == f.degree
    report = {
        "degree": f.degree,
        "pole_count": d.pole_count(),
        "pole_count_ok": count_ok,
        "coefficient_residual": coeff,
        "cone_residual": worst,
        "max_pole_norm_deviation": norm_dev,
        "tolerance": tol,
    }
    report["passed"] = bool(count_ok and coeff < tol and worst < tol and norm_dev < 1e-12)
    if d.L == 4:
        tr = rank4_trace_residual(d.poles)
        G_tr = tr.trace_terms.numeric() * (-d.C)
        q, _ = G_tr.divide_by_r2()
        report["rank4_G_mismatch"] = (q - d.G.numeric()).norm() / max(d.G.numeric().norm(), 1e-300) if not d.G.is_zero() else q.norm()
    return report


# ---------------------------------------------------------------------------
# rank-4 trace bookkeeping


@dataclass(frozen=True)
class Rank4Traces:
    sigma6: TernaryPoly
    sigma3: object
    trace_terms: TernaryPoly


def _dot(u, v):
    out = 0
    for a, b in zip(u, v):
        out = out + a * b
    return simplify(out) if is_exact(out) else out


def rank4_trace_residual(poles) -> Rank4Traces:
    """Pair traces of the symmetrized product p_1 p_2 p_3 p_4.

    sigma6 = sum over the 6 pairs (p_i.p_j)(r.p_k)(r.p_l), sigma3 = sum over
    the 3 pairings (p_i.p_j)(p_k.p_l), and the trace terms
    r^2 sigma6/7 - r^4 sigma3/35 are what the harmonic projection removes
    from prod (r.p_i).
    """
    vecs = []
    for p in poles:
        if isinstance(p, Pole):
            vecs.extend([p.direction] * p.multiplicity)
        else:
            vecs.append(tuple(p))
    if len(vecs) != 4:
        raise ValueError(f"rank-4 traces need four poles, got {len(vecs)}")
    lin = [TernaryPoly.linear(*v) for v in vecs]
    s6 = TernaryPoly(2)
    idx = range(4)
    for i in idx:
        for j in idx:
            if i < j:
                k, l = [m for m in idx if m not in (i, j)]
                s6 = s6 + (lin[k] * lin[l]) * _dot(vecs[i], vecs[j])
    s3 = 0
    for (i, j), (k, l) in (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2))):
        s3 = s3 + _dot(vecs[i], vecs[j]) * _dot(vecs[k], vecs[l])
    s3 = simplify(s3) if is_exact(s3) else s3
    r2 = TernaryPoly.r2()
    n = 3
    tt = (r2 * s6) * Fraction(1, n + 4) - (r2 * r2) * (s3 * Fraction(1, (n + 4) * (n + 2)) if is_exact(s3) else s3 / ((n + 4) * (n + 2)))
    return Rank4Traces(s6, s3, tt)


# ---------------------------------------------------------------------------
# the regular-tetrahedron quartic


def tetrahedron_quartic() -> TernaryPoly:
    """-3x^4-3y^4-8z^4-6x^2y^2+24y^2z^2+24x^2z^2-60 sqrt2 x^2yz+20 sqrt2 y^3z (exact)."""
    s2 = sqrt_surd(2)
    return TernaryPoly(
        4,
        {
            (4, 0, 0): -3,
            (0, 4, 0): -3,
            (0, 0, 4): -8,
            (2, 2, 0): -6,
            (0, 2, 2): 24,
            (2, 0, 2): 24,
            (2, 1, 1): -60 * s2,
            (0, 3, 1): 20 * s2,
        },
    )


def tetrahedron_poles(canonical: bool = False) -> list[Pole]:
    """(0,0,1), (0,2sqrt2,-1)/3, -(sqrt6,sqrt2,1)/3, (sqrt6,-sqrt2,-1)/3, exactly."""
    s2, s6 = sqrt_surd(2), sqrt_surd(6)
    t = Fraction(1, 3)
    dirs = [
        (0, 0, 1),
        (0, 2 * s2 * t, -t),
        (-s6 * t, -s2 * t, -t),
        (s6 * t, -s2 * t, -t),
    ]
    return [Pole(d, 1, canonical=canonical) for d in dirs]


# quoted remainder for this example, in its own bookkeeping
QUOTED_TETRAHEDRON_G = "G_2 = (1/3) r^2"


def tetrahedron_report(seed: int = 0) -> dict:
    """Exact and numeric checks of the regular-tetrahedron decomposition."""
    H = tetrahedron_quartic()
    poles = tetrahedron_poles()
    P = pole_product(poles)
    r2 = TernaryPoly.r2()
    residual = H - P * 135 + (r2 * r2) * 3
    G_exact, rem = (H - P * 135).divide_by_r2()
    tr = rank4_trace_residual(poles)
    d = maxwell_poles(H, seed=seed)
    return {
        "exact_identity_holds": residual.is_zero(),
        "G_subtraction": str(G_exact),
        "G_subtraction_is_minus_3_r2": G_exact == r2 * (-3) and rem.is_zero(),
        "G_quoted": QUOTED_TETRAHEDRON_G,
        "note": (
            "The quoted remainder G_2 = r^2/3 does not follow from the stated data; "
            "exact subtraction gives H - 135 prod(r.p_i) = -3 r^4, i.e. G = -3 r^2 "
            "in the convention Phi = C prod + r^2 G, and C * (trace terms) / r^2 = 3 r^2 = -G."
        ),
        "sigma6": str(tr.sigma6),
        "sigma3": str(tr.sigma3),
        "trace_terms": str(tr.trace_terms),
        "C_pipeline": d.C,
        "poles_pipeline": [p.direction for p in d.poles],
    }
