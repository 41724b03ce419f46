"""JSON forms of algebras, elements, expressions, jets and transitions.

Floats are written with 17 significant digits so that parsing the output
returns bit-identical values; integers stay integers.
"""

from __future__ import annotations

import json
import math
from numbers import Number
from typing import Any

from .alpha_jet import AlphaJet
from .bundle_charts import AutomorphismFamily, ChartTransition, CheckReport, ProbeReport
from .errors import ParseError
from .map_jet import MapJet
from .smooth_expr import SmoothMap, expr_from_json, expr_to_json
from .weil_algebra import AlgebraElement, AlgebraMorphism, AlgebraSpec


def dumps(obj: Any, indent: int | None = None) -> str:
    """Deterministic JSON text with 17-significant-digit floats."""
    return "".join(_encode(obj, indent, 0))


def _encode(obj, indent, level):
    if obj is None or isinstance(obj, bool):
        yield json.dumps(obj)
    elif isinstance(obj, int):
        yield str(int(obj))
    elif isinstance(obj, float):
        if not math.isfinite(obj):
            raise ValueError(f"cannot serialize non-finite float {obj}")
        text = format(obj, ".17g")
        if not any(ch in text for ch in ".e"):
            text += ".0"
        yield text
    elif isinstance(obj, str):
        yield json.dumps(obj)
    elif isinstance(obj, Number):
        yield from _encode(float(obj), indent, level)
    elif isinstance(obj, dict):
        items = list(obj.items())
        if not items:
            yield "{}"
            return
        yield "{"
        for i, (key, value) in enumerate(items):
            if i:
                yield ","
            yield _newline(indent, level + 1)
            yield json.dumps(str(key))
            yield ": "
            yield from _encode(value, indent, level + 1)
        yield _newline(indent, level)
        yield "}"
    elif isinstance(obj, (list, tuple)):
        if not obj:
            yield "[]"
            return
        if all(v is None or isinstance(v, (Number, str, bool)) for v in obj):
            indent = None
        yield "["
        for i, value in enumerate(obj):
            if i:
                yield ", " if indent is None else ","
            if indent is not None:
                yield _newline(indent, level + 1)
            yield from _encode(value, indent, level + 1)
        if indent is not None:
            yield _newline(indent, level)
        yield "]"
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def _newline(indent, level):
    return "" if indent is None else "\n" + " " * (indent * level)


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed JSON: {exc.msg}", location=f"line {exc.lineno} column {exc.colno}") from None


# ---------------------------------------------------------------------------


def _need(obj, key, kind):
    if not isinstance(obj, dict):
        raise ParseError(f"{kind} must be a JSON object, got {type(obj).__name__}")
    if key not in obj:
        raise ParseError(f"{kind} is missing field {key!r}", location=key)
    return obj[key]


def _number(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ParseError(f"expected a number at {where}, got {v!r}", location=where)
    return v


def _vector(v, where):
    if not isinstance(v, list):
        raise ParseError(f"expected a list of numbers at {where}", location=where)
    return tuple(_number(c, f"{where}[{i}]") for i, c in enumerate(v))


def _int(v, where):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ParseError(f"expected an integer at {where}, got {v!r}", location=where)
    return v


def spec_to_json(spec: AlgebraSpec) -> dict:
    return {"n": spec.n, "k": spec.k, "relations": [list(r) for r in spec.relations]}


def spec_from_json(obj) -> AlgebraSpec:
    n = _int(_need(obj, "n", "AlgebraSpec"), "n")
    k = _int(_need(obj, "k", "AlgebraSpec"), "k")
    rels = obj.get("relations", [])
    if not isinstance(rels, list) or not all(isinstance(r, list) for r in rels):
        raise ParseError("relations must be a list of exponent lists", location="relations")
    try:
        return AlgebraSpec(n, k, tuple(tuple(_int(e, "relations") for e in r) for r in rels))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(str(exc), location="AlgebraSpec") from None


def element_to_json(a: AlgebraElement, with_spec: bool = True) -> dict:
    out = {"spec": spec_to_json(a.spec)} if with_spec else {}
    out["terms"] = [{"exp": list(e), "coef": c} for e, c in a.terms]
    return out


def element_from_json(obj, spec: AlgebraSpec | None = None) -> AlgebraElement:
    """Parse an element; `spec` supplies (and must match) the algebra when given."""
    if isinstance(obj, dict) and "spec" in obj:
        own = spec_from_json(obj["spec"])
        if spec is not None and own != spec:
            raise ParseError(f"element algebra {own} differs from the expected {spec}", location="spec")
        spec = own
    if spec is None:
        raise ParseError("element has no 'spec' and none is implied by context", location="spec")
    terms = _need(obj, "terms", "AlgebraElement")
    if not isinstance(terms, list):
        raise ParseError("terms must be a list", location="terms")
    coeffs: dict = {}
    for i, t in enumerate(terms):
        exp = tuple(_int(e, f"terms[{i}].exp") for e in _need(t, "exp", "term"))
        coef = _number(_need(t, "coef", "term"), f"terms[{i}].coef")
        if len(exp) != spec.n:
            raise ParseError(f"terms[{i}].exp has {len(exp)} entries, expected {spec.n}", location=f"terms[{i}]")
        if spec.in_ideal(exp):
            raise ParseError(f"terms[{i}].exp {list(exp)} is zero in the algebra", location=f"terms[{i}]")
        if exp in coeffs:
            raise ParseError(f"duplicate monomial {list(exp)}", location=f"terms[{i}]")
        coeffs[exp] = coef
    return spec.element(coeffs)


def morphism_to_json(kappa: AlgebraMorphism) -> dict:
    return {
        "source": spec_to_json(kappa.source),
        "target": spec_to_json(kappa.target),
        "images": [element_to_json(img, with_spec=False) for img in kappa.images],
    }


def morphism_from_json(obj) -> AlgebraMorphism:
    src = spec_from_json(_need(obj, "source", "AlgebraMorphism"))
    tgt = spec_from_json(_need(obj, "target", "AlgebraMorphism"))
    images = tuple(element_from_json(i, tgt) for i in _need(obj, "images", "AlgebraMorphism"))
    return AlgebraMorphism(src, tgt, images)


def smooth_map_to_json(phi: SmoothMap) -> dict:
    return {"arity": phi.arity, "components": [expr_to_json(c) for c in phi.components]}


def smooth_map_from_json(obj) -> SmoothMap:
    arity = _int(_need(obj, "arity", "SmoothMap"), "arity")
    comps = _need(obj, "components", "SmoothMap")
    if not isinstance(comps, list):
        raise ParseError("components must be a list", location="components")
    return SmoothMap(arity, tuple(expr_from_json(c) for c in comps))


def map_jet_to_json(j: MapJet) -> dict:
    return {"x": list(j.x), "k": j.k, "components": [element_to_json(c) for c in j.components]}


def map_jet_from_json(obj) -> MapJet:
    x = _vector(_need(obj, "x", "MapJet"), "x")
    k = _int(_need(obj, "k", "MapJet"), "k")
    spec = AlgebraSpec(len(x), k) if x else None
    comps = _need(obj, "components", "MapJet")
    if not isinstance(comps, list):
        raise ParseError("components must be a list", location="components")
    return MapJet(x, k, tuple(element_from_json(c, spec) for c in comps))


def alpha_jet_to_json(u: AlphaJet) -> dict:
    return {
        "algebra": spec_to_json(u.algebra),
        "x": list(u.x),
        "p": list(u.p),
        "images": [element_to_json(i) for i in u.images],
    }


def alpha_jet_from_json(obj) -> AlphaJet:
    spec = spec_from_json(_need(obj, "algebra", "AlphaJet"))
    x = _vector(_need(obj, "x", "AlphaJet"), "x")
    p = _vector(_need(obj, "p", "AlphaJet"), "p")
    images = _need(obj, "images", "AlphaJet")
    if not isinstance(images, list):
        raise ParseError("images must be a list", location="images")
    return AlphaJet(spec, x, p, tuple(element_from_json(i, spec) for i in images))


def family_to_json(f: AutomorphismFamily) -> dict:
    return {
        "algebra": spec_to_json(f.algebra),
        "base_arity": f.base_arity,
        "images": [[{"exp": list(e), "coef": expr_to_json(c)} for e, c in img] for img in f.images],
    }


def family_from_json(obj) -> AutomorphismFamily:
    spec = spec_from_json(_need(obj, "algebra", "family"))
    arity = _int(_need(obj, "base_arity", "family"), "base_arity")
    images = []
    for i, img in enumerate(_need(obj, "images", "family")):
        if not isinstance(img, list):
            raise ParseError(f"family images[{i}] must be a list of terms", location=f"images[{i}]")
        images.append(tuple((tuple(_need(t, "exp", "term")), expr_from_json(_need(t, "coef", "term"))) for t in img))
    return AutomorphismFamily(spec, arity, tuple(images))


def transition_to_json(t: ChartTransition) -> dict:
    return {
        "base_map": smooth_map_to_json(t.base_map),
        "fiber_map": smooth_map_to_json(t.fiber_map),
        "family": family_to_json(t.family),
    }


def transition_from_json(obj) -> ChartTransition:
    return ChartTransition(
        smooth_map_from_json(_need(obj, "base_map", "ChartTransition")),
        smooth_map_from_json(_need(obj, "fiber_map", "ChartTransition")),
        family_from_json(_need(obj, "family", "ChartTransition")),
    )


def report_to_json(r: CheckReport, samples=None) -> dict:
    out = {
        "pass": r.passed,
        "max_abs_deviation": r.max_abs_deviation if math.isfinite(r.max_abs_deviation) else None,
        "cases": r.cases,
        "failing_sample": None,
    }
    if r.failing_sample is not None:
        out["failing_sample"] = {"index": r.failing_sample}
        if samples is not None:
            out["failing_sample"]["alpha_jet"] = alpha_jet_to_json(samples[r.failing_sample])
    if r.failed_condition is not None:
        out["failed_condition"] = r.failed_condition
    if r.details:
        out["details"] = r.details
    return out


def probe_to_json(r: ProbeReport) -> dict:
    return {
        "consistent": r.consistent,
        "steps": list(r.steps),
        "increments": list(r.increments),
        "ratios": [x if math.isfinite(x) else None for x in r.ratios],
    }
