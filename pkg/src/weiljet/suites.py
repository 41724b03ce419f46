"""Seeded property suites covering every module.

Each suite returns a SuiteResult; `run_suites` derives one independent
child seed per suite from a single integer seed (numpy SeedSequence), so
a suite's outcome does not depend on which other suites ran.

`exact=True` compares with ``==`` on integer data (every operation on the
integer path is closed over Python ints). `exact=False` converts the random
data to floats first and compares with absolute tolerance 1e-9.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import sampling as smp
from .alpha_jet import AlphaJet, alpha_jet_deviation, chi, chi_inverse, evaluate as alpha_eval, pushforward
from .bundle_charts import (
    ChartTransition,
    check_diffeomorphisms,
    cocycle_check,
    compose_transitions,
    double_trivialization_check,
    smoothness_probe,
    transition_apply,
)
from .smooth_expr import (
    Add,
    Call,
    Const,
    Div,
    Expr,
    Mul,
    Neg,
    Pow,
    SmoothMap,
    Sub,
    Var,
    evaluate,
    exp,
    taylor,
    taylor_map,
)
from .weil_algebra import (
    TOL,
    AlgebraMorphism,
    AlgebraSpec,
    augmentation,
    binomial_dim,
    brute_force_dim,
    jet_spec,
    max_abs_diff,
    maximal_ideal_part,
    morphism_apply,
    morphism_compose,
)

FD_STEP = 1e-4
FD_REL_TOL = 1e-6
LOCALITY_TOL = 1e-9
COCYCLE_TOL = 1e-6
DOUBLE_TOL = 1e-9
PERTURBATION = 1e-3


@dataclass
class SuiteResult:
    criterion: int
    name: str
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    metrics: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, label: str) -> None:
        self.cases += 1
        if not ok:
            self.failures.append(label)

    def to_json(self, max_failures: int = 5) -> dict:
        return {
            "criterion": self.criterion,
            "name": self.name,
            "pass": self.passed,
            "cases": self.cases,
            "failures": self.failures[:max_failures],
            "failure_count": len(self.failures),
            "metrics": self.metrics,
        }


def _magnitude(*elements) -> float:
    return max((abs(c) for e in elements for _, c in e.terms), default=0.0)


def _same(a, b, exact: bool) -> bool:
    if exact:
        return a == b
    # float data: 1e-9 absolute, scaled up for coefficients beyond unit size
    return max_abs_diff(a, b) <= TOL * max(1.0, _magnitude(a, b))


def _elem(rng, spec, exact, **kw):
    a = smp.random_element(rng, spec, **kw)
    return a if exact else a.scale(1.0)


def _ideal(rng, spec, exact):
    return _elem(rng, spec, exact, constant=False)


def _alpha(rng, spec, m, d, exact) -> AlphaJet:
    u = smp.random_alpha_jet(rng, spec, m, d)
    return u if exact else smp.float_alpha_jet(u)


def _poly(rng, arity, exact, **kw) -> Expr:
    e = smp.random_poly_expr(rng, arity, **kw)
    return e if exact else smp.float_expr(e)


def _poly_map(rng, arity, out_dim, exact, **kw) -> SmoothMap:
    return SmoothMap(arity, tuple(_poly(rng, arity, exact, **kw) for _ in range(out_dim)))


def _chain_specs(rng, length):
    """Full truncation quotients with non-increasing order, the last with optional relations."""
    k = int(rng.integers(0, 5))
    specs = []
    for i in range(length):
        n = int(rng.integers(1, 4))
        if i == length - 1:
            rel = smp.random_spec(rng, n_max=3, k_max=k, relations=True)
            specs.append(rel)
        else:
            specs.append(jet_spec(n, k))
        k = int(rng.integers(0, k + 1))
    return specs


def _morphism(rng, source: AlgebraSpec, target: AlgebraSpec, exact) -> AlgebraMorphism:
    return AlgebraMorphism(source, target, tuple(_ideal(rng, target, exact) for _ in range(source.n)))


# ---------------------------------------------------------------------------
# 1. ring and morphism laws


def ring_laws(rng, cases: int = 100, exact: bool = True) -> SuiteResult:
    res = SuiteResult(1, "ring_and_morphism_laws")

    def triple():
        spec = smp.random_spec(rng)
        return spec, _elem(rng, spec, exact), _elem(rng, spec, exact), _elem(rng, spec, exact)

    for i in range(cases):
        spec, a, b, c = triple()
        res.check(_same((a + b) + c, a + (b + c), exact), f"add_assoc[{i}]")
        res.check(_same(a + b, b + a, exact), f"add_comm[{i}]")
        res.check(_same((a * b) * c, a * (b * c), exact), f"mul_assoc[{i}]")
        res.check(_same(a * b, b * a, exact), f"mul_comm[{i}]")
        res.check(_same(a * (b + c), a * b + a * c, exact), f"distributive[{i}]")
        res.check(_same(spec.one() * a, a, exact) and _same(a + spec.zero(), a, exact), f"unit[{i}]")
        aug_ok = (
            augmentation(spec.one()) == 1
            and abs(augmentation(a * b) - augmentation(a) * augmentation(b)) <= (0 if exact else TOL)
            and abs(augmentation(a + b) - augmentation(a) - augmentation(b)) <= (0 if exact else TOL)
        )
        res.check(aug_ok, f"augmentation_morphism[{i}]")
        mip = maximal_ideal_part(a)
        res.check(augmentation(mip) == 0 and (spec.one() * augmentation(a) + mip) == a, f"decomposition[{i}]")

    for i in range(cases):
        src, tgt = _chain_specs(rng, 2)
        kappa = _morphism(rng, src, tgt, exact)
        a, b = _elem(rng, src, exact), _elem(rng, src, exact)
        ok = (
            _same(morphism_apply(kappa, src.one()), tgt.one(), exact)
            and _same(morphism_apply(kappa, a + b), morphism_apply(kappa, a) + morphism_apply(kappa, b), exact)
            and _same(morphism_apply(kappa, a * b), morphism_apply(kappa, a) * morphism_apply(kappa, b), exact)
        )
        res.check(ok, f"morphism_preserves[{i}]")

    for i in range(cases):
        s1, s2, s3, s4 = _chain_specs(rng, 4)
        k1, k2, k3 = _morphism(rng, s1, s2, exact), _morphism(rng, s2, s3, exact), _morphism(rng, s3, s4, exact)
        left = morphism_compose(morphism_compose(k3, k2), k1)
        right = morphism_compose(k3, morphism_compose(k2, k1))
        a = _elem(rng, s1, exact)
        via = morphism_apply(k3, morphism_apply(k2, morphism_apply(k1, a)))
        ok = all(_same(x, y, exact) for x, y in zip(left.images, right.images)) and _same(
            morphism_apply(left, a), via, exact
        )
        res.check(ok, f"compose_assoc[{i}]")
    return res


# ---------------------------------------------------------------------------
# 2. nilpotency and dimension


def nilpotency_and_dimension(rng, n_max: int = 3, k_max: int = 4) -> SuiteResult:
    res = SuiteResult(2, "nilpotency_and_dimension")
    for n in range(1, n_max + 1):
        for k in range(0, k_max + 1):
            spec = AlgebraSpec(n, k)
            res.check(spec.dim == brute_force_dim(n, k) == binomial_dim(n, k), f"dim(n={n},k={k})")
            for b in spec.basis[1:]:
                res.check((spec.element({b: 1}) ** (k + 1)).is_zero(), f"nilpotent(n={n},k={k},{b})")
    for i in range(20):
        spec = smp.random_spec(rng, k_max=k_max)
        res.check(spec.dim == brute_force_dim(spec.n, spec.k, spec.relations), f"dim_relations[{i}]")
        for b in spec.basis[1:]:
            res.check((spec.element({b: 1}) ** (spec.k + 1)).is_zero(), f"nilpotent_relations[{i}]")
    return res


# ---------------------------------------------------------------------------
# 3. Taylor extraction


def finite_difference_coefficients(f: Expr, point, h: float = FD_STEP) -> dict:
    """Order <= 2 Taylor coefficients of f at point from central differences of evaluate()."""
    p = np.asarray(point, dtype=float)
    d = len(p)

    def at(*shifts):
        q = p.copy()
        for i, s in shifts:
            q[i] += s
        return evaluate(f, tuple(float(v) for v in q))

    out = {}
    unit = lambda *idx: tuple(sum(1 for j in idx if j == i) for i in range(d))  # noqa: E731
    out[unit()] = at()
    for i in range(d):
        out[unit(i)] = (at((i, h)) - at((i, -h))) / (2 * h)
        out[unit(i, i)] = (at((i, h)) - 2 * at() + at((i, -h))) / (h * h) / 2
        for j in range(i + 1, d):
            out[unit(i, j)] = (
                at((i, h), (j, h)) - at((i, h), (j, -h)) - at((i, -h), (j, h)) + at((i, -h), (j, -h))
            ) / (4 * h * h)
    return out


def taylor_correctness(rng, cases: int = 50, exact: bool = True) -> SuiteResult:
    res = SuiteResult(3, "taylor_correctness")
    worst = 0.0
    for i in range(cases):
        d = int(rng.integers(1, 4))
        f = smp.random_smooth_expr(rng, d)
        point = tuple(float(v) for v in rng.uniform(-1, 1, size=d))
        t = taylor(f, point, 2)
        fd = finite_difference_coefficients(f, point)
        err = max(abs(fd[e] - t.coefficient(e)) / max(abs(t.coefficient(e)), 1.0) for e in fd)
        worst = max(worst, err)
        res.check(err <= FD_REL_TOL, f"finite_differences[{i}] rel_err={err:.3e}")
        res.check(taylor(f, point, 0).allclose(jet_spec(d, 0).constant(evaluate(f, point))), f"order_zero[{i}]")
    for i in range(cases):
        d = int(rng.integers(1, 4))
        k = int(rng.integers(0, 5))
        f, g = _poly(rng, d, exact), _poly(rng, d, exact)
        point = smp.random_point(rng, d)
        if not exact:
            point = tuple(float(v) for v in point)
        res.check(_same(taylor(Mul(f, g), point, k), taylor(f, point, k) * taylor(g, point, k), exact),
                  f"multiplicative[{i}]")
    res.metrics["max_fd_relative_error"] = worst
    return res


# ---------------------------------------------------------------------------
# 4. alpha-jet morphism law and target law


def alpha_jet_laws(rng, cases: int = 100, exact: bool = True) -> SuiteResult:
    res = SuiteResult(4, "alpha_jet_morphism_and_target_laws")
    for i in range(cases):
        spec = smp.random_spec(rng)
        m, d = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        u = _alpha(rng, spec, m, d, exact)
        f, g = _poly(rng, d, exact), _poly(rng, d, exact)
        uf, ug = alpha_eval(u, f), alpha_eval(u, g)
        res.check(_same(alpha_eval(u, Mul(f, g)), uf * ug, exact), f"multiplicative[{i}]")
        res.check(_same(alpha_eval(u, Add(f, g)), uf + ug, exact), f"additive[{i}]")
        res.check(_same(alpha_eval(u, Const(1)), spec.one(), exact), f"unital[{i}]")
        tol = 0 if exact else TOL
        res.check(abs(augmentation(uf) - evaluate(f, u.p)) <= tol, f"target_law[{i}]")
    return res


# ---------------------------------------------------------------------------
# 5. functoriality


def functoriality(rng, cases: int = 100, exact: bool = True) -> SuiteResult:
    res = SuiteResult(5, "functoriality")
    for i in range(cases):
        spec = smp.random_spec(rng)
        m = int(rng.integers(1, 4))
        d1, d2, d3 = (int(v) for v in rng.integers(1, 4, size=3))
        u = _alpha(rng, spec, m, d1, exact)
        phi = _poly_map(rng, d1, d2, exact, max_deg=2, max_terms=3)
        psi = _poly_map(rng, d2, d3, exact, max_deg=2, max_terms=3)
        res.check(_alpha_same(pushforward(SmoothMap.identity(d1), u), u, exact), f"identity[{i}]")
        lhs = pushforward(psi.compose(phi), u)
        rhs = pushforward(psi, pushforward(phi, u))
        res.check(_alpha_same(lhs, rhs, exact), f"composition[{i}]")
        g = _poly(rng, d2, exact, max_deg=2, max_terms=3)
        pulled = SmoothMap(d2, (g,)).compose(phi).components[0]
        res.check(_same(alpha_eval(pushforward(phi, u), g), alpha_eval(u, pulled), exact), f"defining_identity[{i}]")
    return res


def _alpha_same(a: AlphaJet, b: AlphaJet, exact: bool) -> bool:
    if exact:
        return a == b
    scale = max(1.0, _magnitude(*a.images, *b.images), *(abs(v) for v in a.p + b.p))
    return alpha_jet_deviation(a, b) <= TOL * scale


# ---------------------------------------------------------------------------
# 6. chi bijection


def to_sympy(expr: Expr, symbols):
    import sympy as sp

    match expr:
        case Const(v):
            return sp.Integer(v) if isinstance(v, int) else sp.Float(v)
        case Var(i):
            return symbols[i - 1]
        case Add(a, b):
            return to_sympy(a, symbols) + to_sympy(b, symbols)
        case Sub(a, b):
            return to_sympy(a, symbols) - to_sympy(b, symbols)
        case Mul(a, b):
            return to_sympy(a, symbols) * to_sympy(b, symbols)
        case Div(a, b):
            return to_sympy(a, symbols) / to_sympy(b, symbols)
        case Neg(a):
            return -to_sympy(a, symbols)
        case Pow(a, n):
            return to_sympy(a, symbols) ** n
        case Call(f, a):
            return getattr(sp, f)(to_sympy(a, symbols))
    raise TypeError(expr)


def expand_truncate_oracle(f: Expr, phi: SmoothMap, x, k: int) -> dict:
    """Taylor coefficients of f∘phi at x up to degree k by symbolic expansion (sympy)."""
    import sympy as sp

    m = phi.arity
    t = sp.symbols(f"t1:{m + 1}")
    shifted = [sp.Integer(xi) + ti for xi, ti in zip(x, t)]
    comps = [to_sympy(c, shifted) for c in phi.components]
    composite = sp.expand(to_sympy(f, comps))
    poly = sp.Poly(composite, *t)
    out = {}
    for monom, coef in poly.terms():
        if sum(monom) <= k and coef != 0:
            out[tuple(monom)] = int(coef) if coef.is_Integer else float(coef)
    return out


def chi_bijection(rng, cases: int = 100, oracle_cases: int = 50, exact: bool = True) -> SuiteResult:
    res = SuiteResult(6, "chi_bijection")
    for i in range(cases):
        m, d, k = int(rng.integers(1, 4)), int(rng.integers(1, 4)), int(rng.integers(0, 5))
        j = smp.random_map_jet(rng, m, d, k)
        res.check(chi_inverse(chi(j)) == j, f"chi_inverse_chi[{i}]")
        u = smp.random_jet_type_alpha_jet(rng, m, d, k)
        res.check(chi(chi_inverse(u)) == u, f"chi_chi_inverse[{i}]")
    for i in range(oracle_cases):
        m, d, k = int(rng.integers(1, 4)), int(rng.integers(1, 4)), int(rng.integers(0, 5))
        phi = smp.random_poly_map(rng, m, d, max_deg=2, max_terms=3)
        f = smp.random_poly_expr(rng, d, max_deg=2, max_terms=3)
        x = smp.random_point(rng, m, -2, 2)
        value = alpha_eval(chi(taylor_map(phi, x, k)), f)
        res.check(value.coefficients == expand_truncate_oracle(f, phi, x, k), f"symbolic_oracle[{i}]")
    return res


def chi_roundtrip(rng, cases: int = 100) -> SuiteResult:
    res = SuiteResult(6, "chi_roundtrip")
    for i in range(cases):
        m, d, k = int(rng.integers(1, 4)), int(rng.integers(1, 4)), int(rng.integers(0, 5))
        j = smp.random_map_jet(rng, m, d, k)
        u = smp.random_jet_type_alpha_jet(rng, m, d, k)
        res.check(chi_inverse(chi(j)) == j and chi(chi_inverse(u)) == u, f"roundtrip[{i}]")
    return res


# ---------------------------------------------------------------------------
# 7. locality


def locality(rng, cases: int = 50) -> SuiteResult:
    res = SuiteResult(7, "locality")
    worst = 0.0
    for i in range(cases):
        spec = smp.random_spec(rng)
        m, d = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        u = smp.random_alpha_jet(rng, spec, m, d, -2, 2)
        f = smp.random_smooth_expr(rng, d)
        k = spec.k
        exps = [0] * d
        for _ in range(k + 1):
            exps[int(rng.integers(0, d))] += 1
        bump: Expr = Add(Const(2.0), exp(Mul(Const(0.5), Var(1))))
        for j, e in enumerate(exps):
            if e:
                bump = Mul(bump, Pow(Sub(Var(j + 1), Const(u.p[j])), e))
        g = Add(f, bump)
        same_k = taylor(f, u.p, k).allclose(taylor(g, u.p, k), LOCALITY_TOL)
        differ = not taylor(f, u.p, k + 1).allclose(taylor(g, u.p, k + 1), LOCALITY_TOL)
        res.check(same_k and differ, f"pair_construction[{i}]")
        dev = _max_dev(alpha_eval(u, f), alpha_eval(u, g))
        worst = max(worst, dev)
        res.check(dev <= LOCALITY_TOL, f"eval_agrees[{i}] dev={dev:.3e}")
    res.metrics["max_abs_deviation"] = worst
    return res


def _max_dev(a, b) -> float:
    return float(max_abs_diff(a, b))


# ---------------------------------------------------------------------------
# 8. bundle checks


def _perturb(t: ChartTransition, which: str) -> ChartTransition:
    if which == "base":
        comps = (Add(t.base_map.components[0], Const(PERTURBATION)),) + t.base_map.components[1:]
        return ChartTransition(SmoothMap(t.m, comps), t.fiber_map, t.family)
    comps = (Add(t.fiber_map.components[0], Const(PERTURBATION)),) + t.fiber_map.components[1:]
    return ChartTransition(t.base_map, SmoothMap(t.d, comps), t.family)


def fiber_dependent_chart(t: ChartTransition) -> Callable[[AlphaJet], AlphaJet]:
    """A candidate chart map on AP whose base output leaks the fibre point (not a valid transition)."""

    def apply(u: AlphaJet) -> AlphaJet:
        v = transition_apply(t, u)
        leaked = (v.x[0] + 0.1 * u.p[0],) + tuple(v.x[1:])
        return AlphaJet(v.algebra, leaked, v.p, v.images)

    return apply


def bundle_checks(rng, triples: int = 20, linear_instances: int = 20, jets_per_case: int = 5) -> SuiteResult:
    res = SuiteResult(8, "bundle_checks")
    worst_cocycle = worst_double = 0.0
    probe_ratios = []
    for i in range(triples):
        spec = smp.random_spec(rng, n_max=2, k_max=3)
        m, d = int(rng.integers(1, 3)), int(rng.integers(1, 3))
        t21 = smp.random_transition(rng, spec, m, d)
        t32 = smp.random_transition(rng, spec, m, d)
        t31 = compose_transitions(t32, t21)
        samples = [smp.random_alpha_jet(rng, spec, m, d, -1, 1) for _ in range(jets_per_case)]
        res.check(
            check_diffeomorphisms(t21, [u.x for u in samples], [u.p for u in samples]),
            f"diffeomorphism[{i}]",
        )
        rep = cocycle_check(t21, t32, t31, samples, COCYCLE_TOL)
        worst_cocycle = max(worst_cocycle, rep.max_abs_deviation)
        res.check(rep.passed, f"cocycle[{i}] dev={rep.max_abs_deviation:.3e}")
        bad = cocycle_check(t21, t32, _perturb(t31, "base" if i % 2 else "fiber"), samples, COCYCLE_TOL)
        res.check(not bad.passed, f"cocycle_perturbed_fails[{i}]")
        probe = smoothness_probe(t21, smp.float_alpha_jet(samples[0]))
        probe_ratios.extend(probe.ratios)
        res.check(probe.consistent, f"smoothness_probe[{i}] ratios={probe.ratios}")
    for i in range(linear_instances):
        spec = smp.random_spec(rng, n_max=2, k_max=3)
        m, d = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        t = smp.random_transition(rng, spec, m, d, linear=True)
        samples = [smp.random_alpha_jet(rng, spec, m, d) for _ in range(jets_per_case)]
        rep = double_trivialization_check(t, samples, tol=DOUBLE_TOL)
        worst_double = max(worst_double, rep.max_abs_deviation)
        res.check(rep.passed and rep.max_abs_deviation < DOUBLE_TOL, f"double_trivialization[{i}]")
        leak = double_trivialization_check(t, samples, apply=fiber_dependent_chart(t), tol=DOUBLE_TOL)
        res.check(not leak.passed and leak.failed_condition == "a", f"fiber_dependent_fails[{i}]")
    res.metrics.update(
        max_cocycle_deviation=worst_cocycle,
        max_double_trivialization_deviation=worst_double,
        probe_ratio_range=[min(probe_ratios), max(probe_ratios)] if probe_ratios else [],
    )
    return res


# ---------------------------------------------------------------------------

SUITES: list[tuple[str, Callable[..., SuiteResult], bool]] = [
    ("ring_and_morphism_laws", ring_laws, True),
    ("nilpotency_and_dimension", nilpotency_and_dimension, False),
    ("taylor_correctness", taylor_correctness, True),
    ("alpha_jet_morphism_and_target_laws", alpha_jet_laws, True),
    ("functoriality", functoriality, True),
    ("chi_bijection", chi_bijection, True),
    ("locality", locality, False),
    ("bundle_checks", bundle_checks, False),
]


def suite_rngs(seed: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(len(SUITES))
    return [np.random.Generator(np.random.PCG64(c)) for c in children]


def run_suites(seed: int, mode: str = "exact") -> list[SuiteResult]:
    exact = mode == "exact"
    out = []
    for (name, fn, takes_mode), rng in zip(SUITES, suite_rngs(seed)):
        out.append(fn(rng, exact=exact) if takes_mode else fn(rng))
    return out

