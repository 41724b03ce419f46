"""Random instances for the property suites.

All randomness comes from ``numpy.random.Generator(PCG64(seed))``; every
sampler takes that generator explicitly so a single integer seed fixes a
whole run.
"""

from __future__ import annotations

import numpy as np

from .alpha_jet import AlphaJet
from .bundle_charts import AutomorphismFamily, ChartTransition
from .map_jet import MapJet
from .smooth_expr import (
    Add,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    SmoothMap,
    Sub,
    Var,
    cos,
    exp,
    log,
    map_constants,
    sin,
    sqrt,
)
from .weil_algebra import AlgebraElement, AlgebraSpec, jet_spec, monomials_of_degree


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def _int(rng, lo, hi) -> int:
    return int(rng.integers(lo, hi + 1))


def _nonzero(rng, lo, hi) -> int:
    while True:
        v = _int(rng, lo, hi)
        if v:
            return v


def random_spec(rng, n_max=3, k_max=4, relations=True, k_min=0) -> AlgebraSpec:
    n = _int(rng, 1, n_max)
    k = _int(rng, k_min, k_max)
    rels = []
    if relations and k >= 2 and rng.random() < 0.5:
        for _ in range(_int(rng, 1, 2)):
            deg = _int(rng, 2, k)
            choices = monomials_of_degree(n, deg)
            rels.append(choices[_int(rng, 0, len(choices) - 1)])
    return AlgebraSpec(n, k, tuple(rels))


def random_element(rng, spec: AlgebraSpec, lo=-3, hi=3, density=0.6, constant=True) -> AlgebraElement:
    coeffs = {}
    for b in spec.basis:
        if not constant and sum(b) == 0:
            continue
        if rng.random() < density:
            coeffs[b] = _int(rng, lo, hi)
    return spec.element(coeffs)


def random_ideal_element(rng, spec: AlgebraSpec, **kw) -> AlgebraElement:
    return random_element(rng, spec, constant=False, **kw)


def random_point(rng, dim, lo=-3, hi=3) -> tuple[int, ...]:
    return tuple(_int(rng, lo, hi) for _ in range(dim))


def random_poly_expr(rng, arity, max_deg=3, max_terms=4, lo=-3, hi=3) -> Expr:
    """Integer-coefficient polynomial in y1..y_arity as an expression tree."""
    expr: Expr = Const(_int(rng, lo, hi))
    for _ in range(_int(rng, 1, max_terms)):
        term: Expr = Const(_nonzero(rng, lo, hi))
        for i in range(arity):
            e = _int(rng, 0, max_deg)
            if e:
                term = Mul(term, Pow(Var(i + 1), e))
        expr = Add(expr, term)
    return expr


def random_poly_map(rng, arity, out_dim, **kw) -> SmoothMap:
    return SmoothMap(arity, tuple(random_poly_expr(rng, arity, **kw) for _ in range(out_dim)))


def _small(rng) -> float:
    return float(rng.choice([-1.0, -0.5, 0.5, 1.0, 1.5]))


def random_smooth_expr(rng, arity, depth=2) -> Expr:
    """A non-polynomial expression that is smooth and of moderate size on [-1, 1]^arity."""

    def leaf():
        i = _int(rng, 1, arity)
        return Add(Mul(Const(_small(rng)), Var(i)), Const(round(float(rng.uniform(-0.5, 0.5)), 3)))

    def build(level):
        if level == 0:
            return leaf()
        kind = _int(rng, 0, 7)
        a = build(level - 1)
        if kind == 0:
            return exp(Mul(Const(0.5), a))
        if kind == 1:
            return sin(a)
        if kind == 2:
            return cos(a)
        if kind == 3:
            return log(Add(Const(3.0), Pow(a, 2)))
        if kind == 4:
            return sqrt(Add(Const(2.0), Pow(a, 2)))
        if kind == 5:
            return Div(Const(1.0), Add(Const(2.0), Pow(a, 2)))
        if kind == 6:
            return Mul(a, build(level - 1))
        return Sub(a, Neg(build(level - 1)))

    return build(depth)


def random_alpha_jet(rng, spec: AlgebraSpec, m: int, d: int, lo=-3, hi=3) -> AlphaJet:
    return AlphaJet(
        spec,
        random_point(rng, m, lo, hi),
        random_point(rng, d, lo, hi),
        tuple(random_ideal_element(rng, spec) for _ in range(d)),
    )


def random_map_jet(rng, m: int, d: int, k: int) -> MapJet:
    spec = jet_spec(m, k)
    return MapJet(random_point(rng, m), k, tuple(random_element(rng, spec) for _ in range(d)))


def random_jet_type_alpha_jet(rng, m: int, d: int, k: int) -> AlphaJet:
    return random_alpha_jet(rng, jet_spec(m, k), m, d)


# ---------------------------------------------------------------------------
# transitions


def _triangular_linear_map(rng, dim, nonlinear: bool) -> SmoothMap:
    """Upper-triangular map with monotone diagonal entries: a diffeomorphism of R^dim."""
    comps = []
    for i in range(dim):
        a = _nonzero(rng, -2, 2)
        e: Expr = Add(Mul(Const(a), Var(i + 1)), Const(_int(rng, -2, 2)))
        if nonlinear:
            # |c| < |a| keeps the diagonal term strictly monotone
            e = Add(e, Mul(Const(0.4 * abs(a) * (1 if a > 0 else -1)), sin(Var(i + 1))))
        for j in range(i + 1, dim):
            t = _int(rng, -1, 1)
            if t:
                e = Add(e, Mul(Const(t), Var(j + 1)))
        comps.append(e)
    return SmoothMap(dim, tuple(comps))


def random_family(rng, spec: AlgebraSpec, m: int, linear_coefficients=False) -> AutomorphismFamily:
    """Generator i -> s_i(x) x_i + (higher/triangular terms); s_i never vanishes."""
    images = []
    gens = [tuple(int(j == i) for j in range(spec.n)) for i in range(spec.n)]
    for i in range(spec.n):
        b = _int(rng, 1, m)
        if linear_coefficients:
            scale: Expr = Const(_nonzero(rng, -2, 2))
        else:
            scale = Mul(Const(_nonzero(rng, -2, 2)), exp(Mul(Const(_small(rng) * 0.3), Var(b))))
        terms = {gens[i]: scale}
        if not spec.relations:
            for j in range(i + 1, spec.n):
                if rng.random() < 0.5:
                    terms[gens[j]] = Const(_int(rng, -2, 2))
            if spec.k >= 2 and rng.random() < 0.7:
                quad = monomials_of_degree(spec.n, 2)
                q = quad[_int(rng, 0, len(quad) - 1)]
                coef = Const(_nonzero(rng, -2, 2)) if linear_coefficients else cos(Var(b))
                terms[q] = coef
        images.append(tuple(terms.items()))
    return AutomorphismFamily(spec, m, tuple(images))


def random_transition(rng, spec: AlgebraSpec, m: int, d: int, linear=False) -> ChartTransition:
    return ChartTransition(
        _triangular_linear_map(rng, m, nonlinear=False),
        _triangular_linear_map(rng, d, nonlinear=not linear),
        random_family(rng, spec, m, linear_coefficients=linear),
    )


def float_alpha_jet(u: AlphaJet) -> AlphaJet:
    return AlphaJet(
        u.algebra,
        tuple(float(c) for c in u.x),
        tuple(float(c) for c in u.p),
        tuple(i.scale(1.0) for i in u.images),
    )


def float_expr(e: Expr) -> Expr:
    return map_constants(e, float)
