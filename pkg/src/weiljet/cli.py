"""Command-line interface: JSON in, JSON out.

Exit status is 0 on success, 1 when a requested check fails and 2 on any
input or domain error (reported as ``{"error": {code, message, location}}``).

Arguments that take JSON accept inline text, ``@path`` or a path to an
existing file.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Sequence

from . import serialize as ser
from .alpha_jet import AlphaJet, chi, chi_inverse, evaluate as alpha_eval, pushforward
from .bundle_charts import (
    AutomorphismFamily,
    ChartTransition,
    cocycle_check,
    double_trivialization_check,
    transition_apply,
)
from .errors import ParseError, WeilJetError
from .map_jet import MapJet, jet_compose, jets_equivalent
from .sampling import make_rng, random_alpha_jet
from .smooth_expr import Expr, SmoothMap, expr_from_json, map_constants, taylor, taylor_map
from .suites import chi_roundtrip, run_suites

GENERATOR = "numpy.random.PCG64"


class InputError(WeilJetError):
    code = "usage"

    def __init__(self, message, location=None):
        super().__init__(message)
        self.location = location


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message, location=self.prog)


# ---------------------------------------------------------------------------
# input helpers


def _read(text: str, where: str):
    if text.startswith("@"):
        path = text[1:]
    elif not text.lstrip().startswith(("{", "[")) and os.path.isfile(text):
        path = text
    else:
        path = None
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {path}: {exc.strerror}", location=where) from None
    try:
        return ser.loads(text)
    except ParseError as exc:
        raise ParseError(str(exc), location=f"{where}: {exc.location}") from None


def _parse(loader, text: str, where: str):
    obj = _read(text, where)
    try:
        return loader(obj)
    except WeilJetError as exc:
        if getattr(exc, "location", None) is None:
            exc.location = where
        raise
    except (ValueError, TypeError, KeyError) as exc:
        raise ParseError(f"invalid {where}: {exc}", location=where) from None


def _expr(text: str, where: str = "--expr") -> Expr:
    if text.lstrip().startswith("{"):
        return _parse(expr_from_json, text, where)
    try:
        return expr_from_json(text)
    except ParseError as exc:
        raise ParseError(str(exc), location=f"{where}: column {exc.location}") from None


def _point(text: str, where: str = "--point") -> tuple:
    obj = _read(text, where)
    if not isinstance(obj, list) or not obj:
        raise ParseError("point must be a non-empty JSON list of numbers", location=where)
    return ser._vector(obj, where)


def _jets(text: str, where: str) -> list[AlphaJet]:
    obj = _read(text, where)
    if not isinstance(obj, list):
        raise ParseError("expected a JSON list of alpha-jets", location=where)
    out = []
    for i, item in enumerate(obj):
        try:
            out.append(ser.alpha_jet_from_json(item))
        except WeilJetError as exc:
            raise ParseError(f"{where}[{i}]: {exc}", location=f"{where}[{i}]") from None
    return out


# float mode: every real datum becomes a float before computing


def _f(v):
    return float(v)


def _float_point(p):
    return tuple(_f(v) for v in p)


def _float_alpha(u: AlphaJet) -> AlphaJet:
    return AlphaJet(u.algebra, _float_point(u.x), _float_point(u.p), tuple(i.scale(1.0) for i in u.images))


def _float_map_jet(j: MapJet) -> MapJet:
    return MapJet(_float_point(j.x), j.k, tuple(c.scale(1.0) for c in j.components))


def _float_map(phi: SmoothMap) -> SmoothMap:
    return SmoothMap(phi.arity, tuple(map_constants(c, _f) for c in phi.components))


def _float_transition(t: ChartTransition) -> ChartTransition:
    fam = t.family
    images = tuple(tuple((e, map_constants(c, _f)) for e, c in img) for img in fam.images)
    return ChartTransition(
        _float_map(t.base_map), _float_map(t.fiber_map), AutomorphismFamily(fam.algebra, fam.base_arity, images)
    )


class _Inputs:
    def __init__(self, mode: str):
        self.float = mode == "float"

    def point(self, text, where="--point"):
        p = _point(text, where)
        return _float_point(p) if self.float else p

    def expr(self, text, where="--expr"):
        e = _expr(text, where)
        return map_constants(e, _f) if self.float else e

    def smooth_map(self, text, where):
        phi = _parse(ser.smooth_map_from_json, text, where)
        return _float_map(phi) if self.float else phi

    def map_jet(self, text, where="--jet"):
        j = _parse(ser.map_jet_from_json, text, where)
        return _float_map_jet(j) if self.float else j

    def alpha_jet(self, text, where="--jet"):
        u = _parse(ser.alpha_jet_from_json, text, where)
        return _float_alpha(u) if self.float else u

    def alpha_jets(self, text, where="--jets"):
        us = _jets(text, where)
        return [_float_alpha(u) for u in us] if self.float else us

    def transition(self, text, where):
        t = _parse(ser.transition_from_json, text, where)
        return _float_transition(t) if self.float else t


# ---------------------------------------------------------------------------
# commands


def cmd_taylor(args, inp: _Inputs):
    expr = inp.expr(args.expr)
    point = inp.point(args.point)
    return {"element": ser.element_to_json(taylor(expr, point, args.k))}, 0


def cmd_jet_compose(args, inp):
    outer = inp.map_jet(args.outer, "--outer")
    inner = inp.map_jet(args.inner, "--inner")
    return ser.map_jet_to_json(jet_compose(outer, inner)), 0


def cmd_jet_equiv(args, inp):
    phi = inp.smooth_map(args.phi, "--phi")
    psi = inp.smooth_map(args.psi, "--psi")
    point = inp.point(args.point)
    return {"equivalent": jets_equivalent(phi, psi, point, args.k), "k": args.k, "x": list(point)}, 0


def cmd_alphajet_eval(args, inp):
    u = inp.alpha_jet(args.jet)
    return {"element": ser.element_to_json(alpha_eval(u, inp.expr(args.expr)))}, 0


def cmd_alphajet_push(args, inp):
    u = inp.alpha_jet(args.jet)
    return ser.alpha_jet_to_json(pushforward(inp.smooth_map(args.map, "--map"), u)), 0


def cmd_chi(args, inp):
    if args.action == "roundtrip":
        res = chi_roundtrip(make_rng(args.seed), cases=args.cases)
        out = {"pass": res.passed, "cases": args.cases, "seed": args.seed, "generator": GENERATOR}
        if not res.passed:
            out["failures"] = res.failures[:5]
        return out, 0 if res.passed else 1
    if args.jet is not None:
        j = inp.map_jet(args.jet)
    elif args.map is not None and args.point is not None and args.k is not None:
        j = taylor_map(inp.smooth_map(args.map, "--map"), inp.point(args.point), args.k)
    else:
        raise InputError("chi needs --jet, or --map with --point and --k", location="chi")
    return ser.alpha_jet_to_json(chi(j)), 0


def cmd_chi_inv(args, inp):
    return ser.map_jet_to_json(chi_inverse(inp.alpha_jet(args.jet))), 0


def _samples(args, inp, t: ChartTransition) -> list[AlphaJet]:
    if args.jets is not None:
        return inp.alpha_jets(args.jets)
    rng = make_rng(args.seed)
    us = [random_alpha_jet(rng, t.algebra, t.m, t.d) for _ in range(args.samples)]
    return [_float_alpha(u) for u in us] if inp.float else us


def cmd_bundle_transition(args, inp):
    t = inp.transition(args.transition, "--transition")
    return ser.alpha_jet_to_json(transition_apply(t, inp.alpha_jet(args.jet))), 0


def cmd_bundle_cocycle(args, inp):
    t21 = inp.transition(args.t21, "--t21")
    t32 = inp.transition(args.t32, "--t32")
    t31 = inp.transition(args.t31, "--t31")
    samples = _samples(args, inp, t21)
    rep = cocycle_check(t21, t32, t31, samples, args.tol)
    return ser.report_to_json(rep, samples), 0 if rep.passed else 1


def cmd_bundle_doublecheck(args, inp):
    t = inp.transition(args.transition, "--transition")
    samples = _samples(args, inp, t)
    rep = double_trivialization_check(t, samples, tol=args.tol)
    return ser.report_to_json(rep, samples), 0 if rep.passed else 1


def cmd_suite(args, inp):
    results = run_suites(args.seed, args.mode)
    passed = all(r.passed for r in results)
    out = {
        "seed": args.seed,
        "generator": GENERATOR,
        "mode": args.mode,
        "pass": passed,
        "suites": [r.to_json() for r in results],
    }
    return out, 0 if passed else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact",
                        help="exact keeps integer data exact; float converts all inputs to floats")
    common.add_argument("--output", "-o", help="write the JSON result here instead of stdout")

    parser = _Parser(prog="weiljet", description="Weil algebras, jets and alpha-jets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("taylor", parents=[common], help="Taylor polynomial of an expression")
    p.add_argument("--expr", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_taylor)

    jet = sub.add_parser("jet", help="k-jets of maps").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = jet.add_parser("compose", parents=[common])
    p.add_argument("--outer", required=True, help="MapJet of psi at phi(x)")
    p.add_argument("--inner", required=True, help="MapJet of phi at x")
    p.set_defaults(func=cmd_jet_compose)
    p = jet.add_parser("equiv", parents=[common])
    p.add_argument("--phi", required=True)
    p.add_argument("--psi", required=True)
    p.add_argument("--point", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_jet_equiv)

    aj = sub.add_parser("alphajet", help="alpha-jets").add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = aj.add_parser("eval", parents=[common])
    p.add_argument("--jet", required=True)
    p.add_argument("--expr", required=True)
    p.set_defaults(func=cmd_alphajet_eval)
    p = aj.add_parser("push", parents=[common])
    p.add_argument("--jet", required=True)
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_alphajet_push)

    p = sub.add_parser("chi", parents=[common], help="k-jet -> alpha-jet, or a seeded round-trip check")
    p.add_argument("action", nargs="?", choices=("roundtrip",))
    p.add_argument("--jet")
    p.add_argument("--map")
    p.add_argument("--point")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=100)
    p.set_defaults(func=cmd_chi)

    p = sub.add_parser("chi-inv", parents=[common], help="alpha-jet -> k-jet")
    p.add_argument("--jet", required=True)
    p.set_defaults(func=cmd_chi_inv)

    bundle = sub.add_parser("bundle", help="chart transitions of AP").add_subparsers(
        dest="action", required=True, parser_class=_Parser
    )
    p = bundle.add_parser("transition", parents=[common])
    p.add_argument("--transition", required=True)
    p.add_argument("--jet", required=True)
    p.set_defaults(func=cmd_bundle_transition)
    for name, func in (("cocycle", cmd_bundle_cocycle), ("doublecheck", cmd_bundle_doublecheck)):
        p = bundle.add_parser(name, parents=[common])
        if name == "cocycle":
            p.add_argument("--t21", required=True)
            p.add_argument("--t32", required=True)
            p.add_argument("--t31", required=True)
        else:
            p.add_argument("--transition", required=True)
        p.add_argument("--jets", help="JSON list of alpha-jets; sampled from --seed when omitted")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--samples", type=int, default=20)
        p.add_argument("--tol", type=float, default=1e-6 if name == "cocycle" else 1e-9)
        p.set_defaults(func=func)

    p = sub.add_parser("suite", parents=[common], help="run every property suite")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_suite)
    return parser


def _error_payload(exc: Exception) -> dict:
    code = getattr(exc, "code", "error")
    return {"error": {"code": code, "message": str(exc), "location": getattr(exc, "location", None)}}


def run(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    output = None
    try:
        args = build_parser().parse_args(argv)
        output = getattr(args, "output", None)
        payload, status = args.func(args, _Inputs(args.mode))
    except WeilJetError as exc:
        payload, status = _error_payload(exc), 2
    except (ArithmeticError, ValueError) as exc:
        payload, status = {"error": {"code": "numeric_error", "message": str(exc), "location": None}}, 2
    text = ser.dumps(payload, indent=2) + "\n"
    if output and status != 2:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return status


def main() -> None:
    sys.exit(run())
