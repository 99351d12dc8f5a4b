"""Command-line front end.

Verbs: poles, project, gauss, restrict, reconstruct, transvect, apolar,
upsilon, jw, verify. Inputs and outputs are UTF-8 JSON files:

    {"type": "monomial", "degree": n, "terms": [{"p", "q", "r", "re", "im"}, ...]}
    {"type": "phi", "L": L, "coeffs": [{"M", "re", "im"}, ...], "real": true}
    {"type": "binary", "degree": d, "coeffs": [{"re", "im"}, ...]}   (b_0..b_d)
    {"type": "decomposition", "L", "C", "poles": [{"x", "y", "z", "multiplicity"}],
     "G": <monomial block>, "diagnostics": {...}}

Numbers are JSON numbers or exact "p/q" strings. Exit codes: 0 success,
1 malformed input, 2 validation failure, 3 solver failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from .harmonic import (
    HarmonicNormalForm,
    NotHarmonicError,
    gauss_decompose,
    harmonic_projection,
    normal_form_to_poly,
    reconstruct_from_conic,
    restrict_to_conic,
)
from .invariants import apolar, clebsch_upsilon, polar, transvectant
from .jweinberg import ck_pi, null_sandwich_check
from .numcore import Surd, half, is_exact
from .poles import (
    DegenerateSampleError,
    NotRealHarmonicError,
    PoleDecomposition,
    SolverError,
    maxwell_poles,
    verify_decomposition,
)
from .poly import BinaryForm, TernaryPoly
from .spinor import Pole, TwoSpinor

__all__ = ["main", "build_parser", "InputError", "dumps", "load_harmonic", "load_binary"]

DEFAULT_MAX_DEGREE = 64


class InputError(ValueError):
    """Malformed input file; the message names the offending location."""


class ValidationError(ValueError):
    """Well-formed input that violates a precondition."""


def max_degree() -> int:
    raw = os.environ.get("HARMONIA_MAX_DEGREE", str(DEFAULT_MAX_DEGREE))
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"HARMONIA_MAX_DEGREE must be an integer, got {raw!r}") from None


# ---------------------------------------------------------------------------
# number parsing and writing


def _parse_real(v, where: str):
    if isinstance(v, bool):
        raise InputError(f"{where}: expected a number, got a boolean")
    if isinstance(v, int):
        return v
    if isinstance(v, float):
        if not math.isfinite(v):
            raise InputError(f"{where}: non-finite number")
        return v
    if isinstance(v, str):
        try:
            q = Fraction(v.strip())
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: cannot parse {v!r} as a number") from None
        return q.numerator if q.denominator == 1 else q
    raise InputError(f"{where}: expected a number, got {type(v).__name__}")


def _parse_complex(entry: dict, where: str):
    re = _parse_real(entry.get("re", 0), f"{where}.re")
    im = _parse_real(entry.get("im", 0), f"{where}.im")
    if im == 0:
        return re
    if isinstance(re, float) or isinstance(im, float):
        return complex(float(re), float(im))
    return Surd.gaussian(re, im)


def _exact_string(q) -> object:
    if isinstance(q, int):
        return q
    q = Fraction(q)
    return q.numerator if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def number_json(c) -> dict:
    """{"re", "im"}: exact rationals as integers or "p/q", everything else as floats."""
    if isinstance(c, (int, Fraction)):
        return {"re": _exact_string(c), "im": 0}
    if isinstance(c, Surd) and c.is_gaussian():
        re, im = c.gaussian_parts()
        return {"re": _exact_string(re), "im": _exact_string(im)}
    z = complex(c)
    return {"re": z.real, "im": z.imag}


def real_json(c):
    if isinstance(c, (int, Fraction)):
        return _exact_string(c)
    if isinstance(c, Surd) and c.is_rational():
        return _exact_string(c.to_fraction())
    z = complex(c)
    return z.real


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    s = format(x, ".17g")
    if s == "-0":
        s = "0"
    return s


def dumps(obj, indent: int = 2, level: int = 0) -> str:
    """JSON text with floats written to 17 significant digits."""
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, Fraction):
        return json.dumps(_exact_string(obj))
    if isinstance(obj, complex):
        return dumps({"re": obj.real, "im": obj.imag}, indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if hasattr(obj, "item"):  # numpy scalars
        return dumps(obj.item(), indent, level)
    return json.dumps(str(obj))


# ---------------------------------------------------------------------------
# file formats


def _require(d: dict, key: str, where: str):
    if not isinstance(d, dict):
        raise InputError(f"{where}: expected an object")
    if key not in d:
        raise InputError(f"{where}: missing field {key!r}")
    return d[key]


def _int_field(d: dict, key: str, where: str) -> int:
    v = _require(d, key, where)
    if isinstance(v, bool) or not isinstance(v, int):
        raise InputError(f"{where}.{key}: expected an integer")
    return v


def _check_degree(n: int, where: str):
    if n < 0:
        raise InputError(f"{where}: negative degree")
    cap = max_degree()
    if n > cap:
        raise ValidationError(f"{where}: degree {n} exceeds HARMONIA_MAX_DEGREE={cap}")


def parse_monomial_block(d: dict, where: str = "$") -> TernaryPoly:
    n = _int_field(d, "degree", where)
    _check_degree(n, f"{where}.degree")
    terms = _require(d, "terms", where)
    if not isinstance(terms, list):
        raise InputError(f"{where}.terms: expected a list")
    out: dict = {}
    for i, t in enumerate(terms):
        w = f"{where}.terms[{i}]"
        e = tuple(_int_field(t, k, w) for k in ("p", "q", "r"))
        if min(e) < 0 or sum(e) != n:
            raise InputError(f"{w}: exponents {e} do not sum to degree {n}")
        out[e] = out.get(e, 0) + _parse_complex(t, w)
    return TernaryPoly(n, out)


def parse_harmonic(d, where: str = "$"):
    """TernaryPoly or HarmonicNormalForm from a harmonic file object."""
    kind = _require(d, "type", where)
    if kind == "monomial":
        f = parse_monomial_block(d, where)
        if d.get("real") and not f.is_real(1e-12):
            raise ValidationError(f"{where}: flagged real but has non-real coefficients")
        return f
    if kind == "phi":
        L = _int_field(d, "L", where)
        _check_degree(L, f"{where}.L")
        coeffs = _require(d, "coeffs", where)
        if not isinstance(coeffs, list):
            raise InputError(f"{where}.coeffs: expected a list")
        vals: dict = {}
        for i, c in enumerate(coeffs):
            w = f"{where}.coeffs[{i}]"
            M = _int_field(c, "M", w)
            if abs(M) > L:
                raise InputError(f"{w}: |M| = {abs(M)} exceeds L = {L}")
            vals[M] = _parse_complex(c, w)
        nf = HarmonicNormalForm.from_dict(L, vals)
        if d.get("real") and not nf.is_real(1e-10):
            raise ValidationError(
                f"{where}: flagged real but violates the reality condition "
                f"(residual {nf.reality_residual():.3e})"
            )
        return nf
    raise InputError(f"{where}.type: expected 'monomial' or 'phi', got {kind!r}")


def parse_binary(d, where: str = "$") -> BinaryForm:
    kind = _require(d, "type", where)
    if kind != "binary":
        raise InputError(f"{where}.type: expected 'binary', got {kind!r}")
    coeffs = _require(d, "coeffs", where)
    if not isinstance(coeffs, list) or not coeffs:
        raise InputError(f"{where}.coeffs: expected a non-empty list")
    if "degree" in d and _int_field(d, "degree", where) != len(coeffs) - 1:
        raise InputError(f"{where}.degree: does not match {len(coeffs)} coefficients")
    _check_degree(len(coeffs) - 1, f"{where}.coeffs")
    vals = []
    for i, c in enumerate(coeffs):
        w = f"{where}.coeffs[{i}]"
        vals.append(_parse_complex(c, w) if isinstance(c, dict) else _parse_real(c, w))
    return BinaryForm(vals)


def parse_decomposition(d, where: str = "$") -> PoleDecomposition:
    kind = _require(d, "type", where)
    if kind != "decomposition":
        raise InputError(f"{where}.type: expected 'decomposition', got {kind!r}")
    L = _int_field(d, "L", where)
    C = float(_parse_real(_require(d, "C", where), f"{where}.C"))
    poles = []
    for i, p in enumerate(_require(d, "poles", where)):
        w = f"{where}.poles[{i}]"
        v = tuple(float(_parse_real(_require(p, k, w), f"{w}.{k}")) for k in ("x", "y", "z"))
        try:
            poles.append(Pole(v, _int_field(p, "multiplicity", w), canonical=False))
        except ValueError as exc:
            raise ValidationError(f"{w}: {exc}") from None
    G = parse_monomial_block(_require(d, "G", where), f"{where}.G")
    return PoleDecomposition(L, C, tuple(poles), G, dict(d.get("diagnostics", {})))


def _read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_harmonic(path: str):
    return parse_harmonic(_read_json(path))


def load_binary(path: str) -> BinaryForm:
    return parse_binary(_read_json(path))


def monomial_json(f: TernaryPoly) -> dict:
    terms = []
    for e, c in sorted(f.terms.items(), reverse=True):
        t = {"p": e[0], "q": e[1], "r": e[2]}
        t.update(number_json(c))
        terms.append(t)
    return {"type": "monomial", "degree": f.degree, "terms": terms}


def phi_json(nf: HarmonicNormalForm) -> dict:
    coeffs = []
    for M in range(-nf.L, nf.L + 1):
        c = nf.component(M)
        if c != 0:
            coeffs.append({"M": M, **number_json(c)})
    return {"type": "phi", "L": nf.L, "real": bool(nf.is_real(1e-10)), "coeffs": coeffs}


def binary_json(B: BinaryForm) -> dict:
    return {"type": "binary", "degree": B.degree, "coeffs": [number_json(c) for c in B.coeffs]}


def decomposition_json(d: PoleDecomposition) -> dict:
    return {
        "type": "decomposition",
        "L": d.L,
        "C": d.C,
        "poles": [
            {"x": p.direction[0], "y": p.direction[1], "z": p.direction[2], "multiplicity": p.multiplicity}
            for p in d.poles
        ],
        "G": monomial_json(d.G.numeric() if not d.G.is_exact() else d.G),
        "diagnostics": {k: float(v) if not isinstance(v, int) else v for k, v in d.diagnostics.items()},
    }


def _as_poly(h) -> TernaryPoly:
    return normal_form_to_poly(h) if isinstance(h, HarmonicNormalForm) else h


# ---------------------------------------------------------------------------
# commands; each returns a JSON-ready object


def cmd_poles(args) -> dict:
    h = load_harmonic(args.input)
    d = maxwell_poles(h, project=args.project, tol=max(args.tol, 1e-9), seed=args.seed)
    return decomposition_json(d)


def cmd_project(args) -> dict:
    f = _as_poly(load_harmonic(args.input))
    return monomial_json(harmonic_projection(f))


def cmd_gauss(args) -> dict:
    f = _as_poly(load_harmonic(args.input))
    g = gauss_decompose(f)
    return {
        "type": "gauss",
        "degree": g.degree,
        "components": [{"s": s, "harmonic": monomial_json(Y)} for s, Y in enumerate(g.components)],
    }


def cmd_restrict(args) -> dict:
    f = _as_poly(load_harmonic(args.input))
    B = restrict_to_conic(f)
    out = binary_json(B)
    if B.is_zero():
        out["note"] = "restriction vanishes: the input is a multiple of r^2"
    return out


def cmd_reconstruct(args) -> dict:
    B = load_binary(args.input)
    nf = reconstruct_from_conic(B)
    out = phi_json(nf)
    out["monomial"] = monomial_json(normal_form_to_poly(nf))
    return out


def _second_binary(args) -> BinaryForm:
    if not args.other:
        raise InputError("this verb needs a second form via --with")
    return load_binary(args.other)


def cmd_transvect(args) -> dict:
    f = load_binary(args.input)
    g = _second_binary(args)
    try:
        return binary_json(transvectant(f, g, args.order))
    except ValueError as exc:
        raise ValidationError(str(exc)) from None


def cmd_apolar(args) -> dict:
    f = load_binary(args.input)
    g = _second_binary(args)
    return {"apolar": apolar(f, g, tol=args.tol), "polar": binary_json(polar(f, g))}


def cmd_upsilon(args) -> dict:
    f = _as_poly(load_harmonic(args.input))
    return monomial_json(clebsch_upsilon(f))


def cmd_jw(args) -> dict:
    table = ck_pi(args.j)
    out = {
        "j": str(table.j),
        "c": [{"k": k, **number_json(c)} for k, c in sorted(table.c.items())],
    }
    if args.check:
        psi = TwoSpinor.random(np.random.default_rng(args.seed))
        out["sandwich"] = null_sandwich_check(table.j, psi, seed=args.seed)
    return out


def cmd_verify(args) -> dict:
    h = load_harmonic(args.input)
    if not args.decomposition:
        raise InputError("verify needs the decomposition file via --decomposition")
    d = parse_decomposition(_read_json(args.decomposition))
    if d.L != _as_poly(h).degree:
        raise ValidationError(f"decomposition degree {d.L} does not match the source degree")
    report = verify_decomposition(_as_poly(h), d, seed=args.seed, tol=1e-8)
    return {"type": "verification", **report}


COMMANDS = {
    "poles": cmd_poles,
    "project": cmd_project,
    "gauss": cmd_gauss,
    "restrict": cmd_restrict,
    "reconstruct": cmd_reconstruct,
    "transvect": cmd_transvect,
    "apolar": cmd_apolar,
    "upsilon": cmd_upsilon,
    "jw": cmd_jw,
    "verify": cmd_verify,
}


# ---------------------------------------------------------------------------
# text rendering


def render_text(obj, level: int = 0) -> str:
    pad = "  " * level
    lines = []
    if isinstance(obj, dict):
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.append(render_text(v, level + 1))
            else:
                lines.append(f"{pad}{k}: {_text_scalar(v)}")
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, dict) and all(not isinstance(x, (dict, list)) for x in v.values()):
                lines.append(pad + "- " + ", ".join(f"{k}={_text_scalar(x)}" for k, x in v.items()))
            else:
                lines.append(pad + "-")
                lines.append(render_text(v, level + 1))
    else:
        lines.append(pad + _text_scalar(obj))
    return "\n".join(lines)


def _text_scalar(v) -> str:
    if isinstance(v, float):
        return format(v, ".17g")
    if isinstance(v, complex):
        return f"{v.real:.17g}{v.imag:+.17g}i"
    return str(v)


# ---------------------------------------------------------------------------
# entry point


EXIT_OK, EXIT_MALFORMED, EXIT_VALIDATION, EXIT_SOLVER = 0, 1, 2, 3


def _run_one(verb: str, args) -> tuple[int, object]:
    try:
        return EXIT_OK, COMMANDS[verb](args)
    except InputError as exc:
        return EXIT_MALFORMED, {"error": "malformed input", "message": str(exc)}
    except (SolverError, DegenerateSampleError) as exc:
        return EXIT_SOLVER, {"error": "solver failure", "message": str(exc)}
    except (ValidationError, NotHarmonicError, NotRealHarmonicError, ValueError, ArithmeticError) as exc:
        return EXIT_VALIDATION, {"error": "validation failure", "message": str(exc)}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-i", "--input", help="input JSON file ('-' for stdin)")
    common.add_argument("-o", "--output", help="output file (default stdout)")
    common.add_argument("--tol", type=float, default=1e-10, help="numerical tolerance")
    common.add_argument("--seed", type=int, default=0, help="seed for random sampling")
    common.add_argument("--format", choices=("json", "text"), default="json")
    parser = argparse.ArgumentParser(prog="harmonia", description="Maxwell poles and binary invariant tools")
    sub = parser.add_subparsers(dest="verb", required=True)
    p = sub.add_parser("poles", parents=[common], help="pole decomposition of a real harmonic")
    p.add_argument("--project", action="store_true", help="project onto the harmonic part first")
    p.add_argument("--batch", help="process every *.json file in this directory")
    sub.add_parser("project", parents=[common], help="harmonic projection")
    sub.add_parser("gauss", parents=[common], help="Gauss decomposition into harmonics")
    sub.add_parser("restrict", parents=[common], help="restriction to the null cone")
    sub.add_parser("reconstruct", parents=[common], help="harmonic from its cone restriction")
    p = sub.add_parser("transvect", parents=[common], help="transvectant of two binary forms")
    p.add_argument("--with", dest="other", help="second binary form")
    p.add_argument("--order", type=int, required=True)
    p = sub.add_parser("apolar", parents=[common], help="apolarity test of two binary forms")
    p.add_argument("--with", dest="other", help="second binary form")
    sub.add_parser("upsilon", parents=[common], help="the Clebsch form of a harmonic")
    p = sub.add_parser("jw", parents=[common], help="c_k(pi) table for spin j")
    p.add_argument("--j", required=True, help="spin, e.g. 2 or 3/2")
    p.add_argument("--check", action="store_true", help="also run the null-sandwich identities")
    p = sub.add_parser("verify", parents=[common], help="verify a decomposition against its source")
    p.add_argument("--decomposition", help="decomposition JSON file")
    return parser


def _emit(obj, args) -> None:
    text = dumps(obj) if args.format == "json" else render_text(obj)
    if args.output:
        Path(args.output).write_text(text + "\n", encoding="utf-8")
    else:
        sys.stdout.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    verb = args.verb
    if verb != "jw" and not (args.input or getattr(args, "batch", None)):
        parser.error("--input is required")
    if verb == "jw":
        try:
            args.j = half(args.j)
        except (ValueError, ZeroDivisionError):
            print(f"harmonia: --j: cannot parse {args.j!r} as a spin", file=sys.stderr)
            return EXIT_MALFORMED
    if getattr(args, "batch", None):
        files = sorted(Path(args.batch).glob("*.json"))

        def one(path):
            ns = argparse.Namespace(**vars(args))
            ns.input = str(path)
            return path.name, _run_one(verb, ns)

        with ThreadPoolExecutor() as pool:
            results = list(pool.map(one, files))
        code = max((c for _, (c, _) in results), default=EXIT_OK)
        _emit([{"file": name, "exit": c, "result": r} for name, (c, r) in results], args)
        return code
    code, result = _run_one(verb, args)
    if code:
        print(f"harmonia {verb}: {result['error']}: {result['message']}", file=sys.stderr)
        return code
    _emit(result, args)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
