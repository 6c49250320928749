"""Bit-exact JSON documents for polynomials, certificates and reports.

Every document is an envelope {"kind", "version": 1, "payload"}.  Scalars
are strings "p/q" in lowest terms with positive denominator (a bare "p" is
accepted on input); eps-polynomials are [[exponent, "p/q"], ...] in
ascending exponent order with no zero coefficients; eps-scalars are
{"num": ..., "den": ...} in the canonical reduced form the EpsScalar
constructor maintains.  Polynomial terms are emitted in graded-lex order,
so serialization is deterministic and diffable, and parse(serialize(x))
reproduces x exactly.

Malformed input raises FormatError, which the command-line layer maps to
exit code 2.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Dict, List, Tuple

from .decomp import BorderDecomposition, WaringDecomposition
from .epsilon import EpsPoly, EpsScalar
from .poly import HomoPoly, LinearForm

DOCUMENT_VERSION = 1
KINDS = ("polynomial", "border", "waring", "report")


class FormatError(ValueError):
    """A document does not follow the serialization format."""


def rational_to_str(x: Fraction) -> str:
    if not isinstance(x, Fraction):
        raise FormatError(f"expected a rational, got {type(x).__name__}")
    return f"{x.numerator}/{x.denominator}"


def rational_from_str(s) -> Fraction:
    if not isinstance(s, str):
        raise FormatError(f"expected a rational string, got {type(s).__name__}")
    try:
        if "/" in s:
            p, q = s.split("/", 1)
            return Fraction(int(p), int(q))
        return Fraction(int(s))
    except (ValueError, ZeroDivisionError) as exc:
        raise FormatError(f"bad rational {s!r}") from exc


def eps_poly_to_json(p: EpsPoly) -> List[List]:
    return [[e, rational_to_str(c)] for e, c in p.pairs()]


def eps_poly_from_json(obj) -> EpsPoly:
    if not isinstance(obj, list):
        raise FormatError("eps-polynomial must be a list of [exponent, coefficient]")
    acc: Dict[int, Fraction] = {}
    for entry in obj:
        if not isinstance(entry, list) or len(entry) != 2:
            raise FormatError(f"bad eps-polynomial entry {entry!r}")
        e, c = entry
        if not isinstance(e, int) or e < 0:
            raise FormatError(f"bad eps exponent {e!r}")
        if e in acc:
            raise FormatError(f"duplicate eps exponent {e}")
        acc[e] = rational_from_str(c)
    return EpsPoly(acc)


def eps_scalar_to_json(s: EpsScalar) -> Dict:
    return {"num": eps_poly_to_json(s.num), "den": eps_poly_to_json(s.den)}


def eps_scalar_from_json(obj) -> EpsScalar:
    if not isinstance(obj, dict) or set(obj) != {"num", "den"}:
        raise FormatError("eps-scalar must be {num, den}")
    den = eps_poly_from_json(obj["den"])
    if den.is_zero:
        raise FormatError("eps-scalar has zero denominator")
    return EpsScalar(eps_poly_from_json(obj["num"]), den)


def poly_to_json(f: HomoPoly) -> Dict:
    terms = []
    for m in f.monomials():
        c = f.coeff(m)
        if isinstance(c, EpsScalar):
            raise FormatError("polynomial documents carry rational coefficients only")
        terms.append({"exps": list(m), "coef": rational_to_str(c)})
    return {"nvars": f.nvars, "degree": f.degree, "terms": terms}


def _shape_of(obj) -> Tuple[int, int]:
    if not isinstance(obj, dict):
        raise FormatError("payload must be an object")
    nvars = obj.get("nvars")
    degree = obj.get("degree")
    if not isinstance(nvars, int) or not isinstance(degree, int):
        raise FormatError("nvars and degree must be integers")
    return nvars, degree


def poly_from_json(obj) -> HomoPoly:
    nvars, degree = _shape_of(obj)
    terms = obj.get("terms")
    if not isinstance(terms, list):
        raise FormatError("terms must be a list")
    acc: Dict[Tuple[int, ...], Fraction] = {}
    for t in terms:
        if not isinstance(t, dict) or set(t) != {"exps", "coef"}:
            raise FormatError(f"bad term {t!r}")
        exps = t["exps"]
        if not isinstance(exps, list) or not all(isinstance(e, int) for e in exps):
            raise FormatError(f"bad exponent list {exps!r}")
        key = tuple(exps)
        if key in acc:
            raise FormatError(f"duplicate monomial {key}")
        acc[key] = rational_from_str(t["coef"])
    try:
        return HomoPoly(nvars, degree, acc)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def waring_to_json(W: WaringDecomposition) -> Dict:
    return {
        "nvars": W.nvars,
        "degree": W.degree,
        "summands": [
            {
                "weight": rational_to_str(w),
                "form": {"coefs": [rational_to_str(c) for c in form.coefs]},
            }
            for w, form in W.summands
        ],
    }


def border_to_json(B: BorderDecomposition) -> Dict:
    return {
        "nvars": B.nvars,
        "degree": B.degree,
        "summands": [
            {
                "weight": eps_scalar_to_json(w),
                "form": {"coefs": [eps_scalar_to_json(c) for c in form.coefs]},
            }
            for w, form in B.summands
        ],
    }


def _summands_from_json(obj, scalar_from):
    nvars, degree = _shape_of(obj)
    raw = obj.get("summands")
    if not isinstance(raw, list):
        raise FormatError("summands must be a list")
    out = []
    for s in raw:
        if not isinstance(s, dict) or set(s) != {"weight", "form"}:
            raise FormatError(f"bad summand {s!r}")
        form = s["form"]
        if not isinstance(form, dict) or set(form) != {"coefs"} or not isinstance(
            form["coefs"], list
        ):
            raise FormatError(f"bad form {form!r}")
        w = scalar_from(s["weight"])
        coefs = tuple(scalar_from(c) for c in form["coefs"])
        try:
            out.append((w, LinearForm(coefs)))
        except ValueError as exc:
            raise FormatError(str(exc)) from exc
    return nvars, degree, tuple(out)


def waring_from_json(obj) -> WaringDecomposition:
    nvars, degree, summands = _summands_from_json(obj, rational_from_str)
    try:
        return WaringDecomposition(nvars, degree, summands)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def border_from_json(obj) -> BorderDecomposition:
    nvars, degree, summands = _summands_from_json(obj, eps_scalar_from_json)
    try:
        return BorderDecomposition(nvars, degree, summands)
    except (ValueError, TypeError) as exc:
        raise FormatError(str(exc)) from exc


def report_to_json(report, flags: Dict) -> Dict:
    """Report payload; flags is the full configuration the run used."""
    return {
        "achieved_rank": report.achieved_rank,
        "paper_bound": report.paper_bound,
        "verified": report.verified,
        "trace": [
            {
                "case": t.case,
                "rank": t.rank,
                "degree": t.degree,
                "branch_i": t.branch_i,
                "branch_k": t.branch_k,
            }
            for t in report.trace
        ],
        "derivative_counts": [list(c) for c in report.derivative_counts],
        "flags": dict(flags),
    }


def report_from_json(obj) -> Dict:
    if not isinstance(obj, dict):
        raise FormatError("report payload must be an object")
    for key in ("achieved_rank", "paper_bound", "verified", "trace", "flags"):
        if key not in obj:
            raise FormatError(f"report payload missing {key!r}")
    return obj


_TO_JSON = {
    "polynomial": poly_to_json,
    "border": border_to_json,
    "waring": waring_to_json,
    "report": lambda payload: payload,  # already a JSON-shaped dict
}

_FROM_JSON = {
    "polynomial": poly_from_json,
    "border": border_from_json,
    "waring": waring_from_json,
    "report": report_from_json,
}


def dumps_document(kind: str, value) -> str:
    if kind not in KINDS:
        raise FormatError(f"unknown document kind {kind!r}")
    doc = {"kind": kind, "version": DOCUMENT_VERSION, "payload": _TO_JSON[kind](value)}
    return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def parse_document(text: str, expect: str | None = None):
    """(kind, value) from a document string; FormatError on any defect."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise FormatError("document must be a JSON object")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise FormatError(f"unknown document kind {kind!r}")
    if doc.get("version") != DOCUMENT_VERSION:
        raise FormatError(f"unsupported document version {doc.get('version')!r}")
    if expect is not None and kind != expect:
        raise FormatError(f"expected a {expect} document, got {kind}")
    if "payload" not in doc:
        raise FormatError("document missing payload")
    return kind, _FROM_JSON[kind](doc["payload"])


def write_document(path, kind: str, value) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_document(kind, value))


def read_document(path, expect: str | None = None):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return parse_document(text, expect)


__all__ = [
    "FormatError",
    "DOCUMENT_VERSION",
    "KINDS",
    "border_from_json",
    "border_to_json",
    "dumps_document",
    "eps_poly_from_json",
    "eps_poly_to_json",
    "eps_scalar_from_json",
    "eps_scalar_to_json",
    "parse_document",
    "poly_from_json",
    "poly_to_json",
    "rational_from_str",
    "rational_to_str",
    "read_document",
    "report_from_json",
    "report_to_json",
    "waring_from_json",
    "waring_to_json",
    "write_document",
]
