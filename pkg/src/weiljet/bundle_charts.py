"""Chart transitions of the double bundle AP and sampled consistency checks.

A trivialization of the local algebra bundle over a base chart identifies
every fibre with one standard Weil algebra. Changing base chart changes the
identification by an automorphism that depends smoothly on the base point,
so a chart transition of AP is the triple

    base_map     xi' ∘ xi^-1     (base chart change, R^m -> R^m)
    fiber_map    eta' ∘ eta^-1   (chart change on P, R^d -> R^d)
    family       x -> Xi^x       (automorphisms of the standard fibre)

acting on an alpha-jet u at (x, p) by

    u  ->  ( base_map(x),  Xi^x ∘ (A fiber_map)(u) ).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from numbers import Number
from typing import Callable, Mapping, Sequence

import numpy as np

from .alpha_jet import (
    AlphaJet,
    alpha_jet_deviation,
    evaluate as alpha_eval,
    lab_morphism_apply,
    pushforward,
)
from .errors import ArityError, DomainError, NotAutomorphismError, SpecMismatchError
from .smooth_expr import (
    Add,
    Const,
    Expr,
    Mul,
    SmoothMap,
    Var,
    as_expr,
    evaluate as expr_eval,
    max_var,
    parse_expr,
    substitute as expr_substitute,
    taylor,
    to_infix,
)
from .weil_algebra import (
    AlgebraMorphism,
    AlgebraSpec,
    Monomial,
    augmentation,
    is_automorphism,
    max_abs_diff,
)

ExprPoly = dict  # Monomial -> Expr, truncated in a given AlgebraSpec


@dataclass(frozen=True)
class AutomorphismFamily:
    """Generator images whose coefficients are expressions in the base coordinates.

    images[i] is a tuple of (monomial, coefficient expression) pairs giving
    the image of generator x_{i+1}. Coefficients may only use y1..y_{base_arity};
    a dependence on the fibre point is rejected at construction.
    """

    algebra: AlgebraSpec
    base_arity: int
    images: tuple[tuple[tuple[Monomial, Expr], ...], ...]

    def __post_init__(self):
        spec = self.algebra
        if len(self.images) != spec.n:
            raise ArityError(f"need {spec.n} generator images, got {len(self.images)}")
        normalized = []
        for i, img in enumerate(self.images):
            items = img.items() if isinstance(img, Mapping) else img
            terms = []
            for exp, coef in items:
                exp = tuple(int(e) for e in exp)
                if len(exp) != spec.n:
                    raise ArityError(f"monomial {exp} does not have {spec.n} exponents")
                if sum(exp) == 0:
                    raise ValueError(f"image of x{i + 1} must lie in the maximal ideal (no constant term)")
                if spec.in_ideal(exp):
                    continue
                coef = parse_expr(coef) if isinstance(coef, str) else as_expr(coef)
                if max_var(coef) > self.base_arity:
                    raise ArityError(
                        f"coefficient {to_infix(coef)} depends on y{max_var(coef)}; "
                        f"family coefficients may only use the {self.base_arity} base coordinates"
                    )
                terms.append((exp, coef))
            normalized.append(tuple(terms))
        object.__setattr__(self, "images", tuple(normalized))

    @classmethod
    def identity(cls, spec: AlgebraSpec, base_arity: int) -> "AutomorphismFamily":
        return cls(spec, base_arity, tuple(((g, Const(1)),) for g in _generator_exps(spec)))

    @classmethod
    def scaling(cls, spec: AlgebraSpec, base_arity: int, factors: Sequence) -> "AutomorphismFamily":
        """x_i -> factors[i] * x_i."""
        return cls(
            spec,
            base_arity,
            tuple(((g, f),) for g, f in zip(_generator_exps(spec), factors)),
        )


def _generator_exps(spec: AlgebraSpec) -> list[Monomial]:
    return [tuple(int(j == i) for j in range(spec.n)) for i in range(spec.n)]


def family_at(family: AutomorphismFamily, base_point: Sequence[Number]) -> AlgebraMorphism:
    """Instantiate the family at a base point; raises unless the result is an automorphism."""
    if len(base_point) != family.base_arity:
        raise ArityError(f"family takes {family.base_arity} base coordinates, got {len(base_point)}")
    spec = family.algebra
    images = tuple(
        spec.element({exp: expr_eval(coef, base_point) for exp, coef in img}) for img in family.images
    )
    kappa = AlgebraMorphism(spec, spec, images)
    if not is_automorphism(kappa):
        raise NotAutomorphismError(f"family is not an automorphism at base point {tuple(base_point)}")
    return kappa


def family_action(family: AutomorphismFamily, base_point: Sequence[Number], u: AlphaJet) -> AlphaJet:
    if u.algebra != family.algebra:
        raise SpecMismatchError("alpha-jet fibre is not the family's algebra")
    return lab_morphism_apply(family_at(family, base_point), u.x, u)


def _poly_mul(a: ExprPoly, b: ExprPoly, spec: AlgebraSpec) -> ExprPoly:
    out: ExprPoly = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            e = tuple(x + y for x, y in zip(ea, eb))
            if spec.in_ideal(e):
                continue
            term = Mul(ca, cb)
            out[e] = Add(out[e], term) if e in out else term
    return out


def compose_families(
    outer: AutomorphismFamily, base_map: SmoothMap, inner: AutomorphismFamily
) -> AutomorphismFamily:
    """The family x -> outer(base_map(x)) ∘ inner(x), built symbolically."""
    if outer.algebra != inner.algebra:
        raise SpecMismatchError("families act on different algebras")
    if base_map.arity != inner.base_arity or base_map.out_dim != outer.base_arity:
        raise ArityError("base map does not connect the two families' base charts")
    spec = inner.algebra
    moved = [
        {exp: expr_substitute(coef, base_map.components) for exp, coef in img} for img in outer.images
    ]
    unit = spec.unit_exp
    powers: list[list[ExprPoly]] = [[{unit: Const(1)}] for _ in moved]

    def power(i: int, e: int) -> ExprPoly:
        while len(powers[i]) <= e:
            powers[i].append(_poly_mul(powers[i][-1], moved[i], spec))
        return powers[i][e]

    images = []
    for img in inner.images:
        acc: ExprPoly = {}
        for exp, coef in img:
            term: ExprPoly = {unit: coef}
            for i, e in enumerate(exp):
                if e:
                    term = _poly_mul(term, power(i, e), spec)
            for te, tc in term.items():
                acc[te] = Add(acc[te], tc) if te in acc else tc
        images.append(tuple(sorted(acc.items())))
    return AutomorphismFamily(spec, inner.base_arity, tuple(images))


# ---------------------------------------------------------------------------
# transitions


@dataclass(frozen=True)
class ChartTransition:
    base_map: SmoothMap
    fiber_map: SmoothMap
    family: AutomorphismFamily

    def __post_init__(self):
        if self.base_map.arity != self.base_map.out_dim:
            raise ArityError("base map must send R^m to R^m")
        if self.fiber_map.arity != self.fiber_map.out_dim:
            raise ArityError("fiber map must send R^d to R^d")
        if self.family.base_arity != self.base_map.arity:
            raise ArityError("family base arity differs from the base chart dimension")

    @property
    def algebra(self) -> AlgebraSpec:
        return self.family.algebra

    @property
    def m(self) -> int:
        return self.base_map.arity

    @property
    def d(self) -> int:
        return self.fiber_map.arity

    @classmethod
    def identity(cls, spec: AlgebraSpec, m: int, d: int) -> "ChartTransition":
        return cls(SmoothMap.identity(m), SmoothMap.identity(d), AutomorphismFamily.identity(spec, m))

    def __call__(self, u: AlphaJet) -> AlphaJet:
        return transition_apply(self, u)


def transition_apply(t: ChartTransition, u: AlphaJet) -> AlphaJet:
    if len(u.x) != t.m or u.d != t.d:
        raise ArityError(f"transition acts on (m, d) = ({t.m}, {t.d}), alpha-jet has ({len(u.x)}, {u.d})")
    if u.algebra != t.algebra:
        raise SpecMismatchError("alpha-jet fibre is not the transition's algebra")
    moved = family_action(t.family, u.x, pushforward(t.fiber_map, u))
    return AlphaJet(moved.algebra, t.base_map(u.x), moved.p, moved.images)


def compose_transitions(second: ChartTransition, first: ChartTransition) -> ChartTransition:
    """second ∘ first as a single transition."""
    if first.m != second.m or first.d != second.d or first.algebra != second.algebra:
        raise ArityError("transitions are not composable")
    return ChartTransition(
        second.base_map.compose(first.base_map),
        second.fiber_map.compose(first.fiber_map),
        compose_families(second.family, first.base_map, first.family),
    )


# ---------------------------------------------------------------------------
# numeric inverses


def jacobian(phi: SmoothMap, point: Sequence[float]) -> np.ndarray:
    jac = np.zeros((phi.out_dim, phi.arity))
    for i, comp in enumerate(phi.components):
        t = taylor(comp, point, 1)
        for j, g in enumerate(_generator_exps(t.spec)):
            jac[i, j] = t.coefficient(g)
    return jac


def numeric_inverse(
    phi: SmoothMap,
    value: Sequence[float],
    start: Sequence[float],
    tol: float = 1e-10,
    max_iter: int = 50,
) -> np.ndarray:
    """Solve phi(z) = value by damped Newton iteration from `start`."""
    target = np.asarray(value, dtype=float)
    z = np.asarray(start, dtype=float)

    def residual(pt):
        return np.asarray(phi(tuple(pt)), dtype=float) - target

    r = residual(z)
    for _ in range(max_iter):
        if np.max(np.abs(r), initial=0.0) <= tol:
            return z
        step = np.linalg.solve(jacobian(phi, tuple(z)), r)
        lam = 1.0
        while True:
            trial = z - lam * step
            try:
                rt = residual(trial)
            except DomainError:
                rt = None
            if rt is not None and np.linalg.norm(rt) < np.linalg.norm(r):
                break
            lam *= 0.5
            if lam < 1e-8:
                raise ArithmeticError("damped Newton iteration stalled")
        z, r = trial, rt
    if np.max(np.abs(r), initial=0.0) <= tol:
        return z
    raise ArithmeticError(f"Newton iteration did not converge in {max_iter} steps")


def inverse_round_trip_error(phi: SmoothMap, point: Sequence[float]) -> float:
    """|phi^-1(phi(z)) - z| with the inverse computed numerically from phi(z)."""
    image = phi(tuple(point))
    back = numeric_inverse(phi, image, image)
    return float(np.max(np.abs(back - np.asarray(point, dtype=float)), initial=0.0))


def check_diffeomorphisms(
    t: ChartTransition, base_points: Sequence[Sequence[float]], fiber_points: Sequence[Sequence[float]],
    tol: float = 1e-6,
) -> bool:
    for x in base_points:
        if inverse_round_trip_error(t.base_map, x) > tol:
            return False
    for p in fiber_points:
        if inverse_round_trip_error(t.fiber_map, p) > tol:
            return False
    return True


# ---------------------------------------------------------------------------
# checks


@dataclass
class CheckReport:
    passed: bool
    max_abs_deviation: float
    cases: int
    failing_sample: int | None = None
    failed_condition: str | None = None
    details: dict = field(default_factory=dict)


def cocycle_check(
    t21: ChartTransition,
    t32: ChartTransition,
    t31: ChartTransition,
    samples: Sequence[AlphaJet],
    tol: float = 1e-6,
) -> CheckReport:
    """T32 ∘ T21 = T31 on every sampled alpha-jet."""
    worst, failing = 0.0, None
    for idx, u in enumerate(samples):
        try:
            dev = alpha_jet_deviation(transition_apply(t32, transition_apply(t21, u)), transition_apply(t31, u))
        except (DomainError, NotAutomorphismError):
            dev = float("inf")
        if dev > worst:
            worst = dev
        if dev > tol and failing is None:
            failing = idx
    return CheckReport(failing is None, worst, len(samples), failing, None if failing is None else "cocycle")


def _projection_deviation(u: AlphaJet) -> float:
    """How far u(y_j) is from p_j + images[j], and its constant term from p_j."""
    dev = 0.0
    for j in range(u.d):
        value = alpha_eval(u, Var(j + 1))
        dev = max(dev, abs(augmentation(value) - u.p[j]), max_abs_diff(value, u.coordinate_image(j)))
    return dev


def double_trivialization_check(
    t: ChartTransition,
    samples: Sequence[AlphaJet],
    apply: Callable[[AlphaJet], AlphaJet] | None = None,
    tol: float = 1e-9,
) -> CheckReport:
    """Check that the chart map commutes with source and target projections.

    (a) source(T u) = base_map(source u) and target(T u) = fiber_map(target u);
    (b) in chart coordinates source and target are the stored points, and the
        stored images reproduce u on the coordinate functions.

    `apply` replaces the chart map on AP (default: transition_apply(t, .)),
    which lets arbitrary candidate maps be tested against the projections.
    """
    chart = apply or (lambda u: transition_apply(t, u))
    dev_a = dev_b = 0.0
    failing, condition = None, None
    for idx, u in enumerate(samples):
        v = chart(u)
        bx, fp = t.base_map(u.x), t.fiber_map(u.p)
        a = max(
            max((abs(s - r) for s, r in zip(v.x, bx)), default=0.0),
            max((abs(s - r) for s, r in zip(v.p, fp)), default=0.0),
        )
        if len(v.x) != len(bx) or len(v.p) != len(fp):
            a = float("inf")
        b = max(_projection_deviation(u), _projection_deviation(v))
        dev_a, dev_b = max(dev_a, a), max(dev_b, b)
        if failing is None and (a > tol or b > tol):
            failing, condition = idx, "a" if a > tol else "b"
    return CheckReport(
        failing is None,
        max(dev_a, dev_b),
        len(samples),
        failing,
        condition,
        {"projection_commutation": dev_a, "coordinate_projection": dev_b},
    )


def _flatten(u: AlphaJet) -> np.ndarray:
    parts = [np.asarray(u.x, dtype=float), np.asarray(u.p, dtype=float)]
    parts += [img.to_vector() for img in u.images]
    return np.concatenate(parts)


@dataclass
class ProbeReport:
    consistent: bool
    steps: tuple[float, ...]
    increments: tuple[float, ...]
    ratios: tuple[float, ...]


def smoothness_probe(
    t: ChartTransition,
    u: AlphaJet,
    direction: Sequence[float] | None = None,
    steps: Sequence[float] = (1e-2, 1e-3, 1e-4),
    flat: float = 1e-7,
) -> ProbeReport:
    """Forward difference quotients of T(u) in the base point.

    For a C^2 dependence the quotient D(h) has error O(h), so successive
    changes |D(h_i) - D(h_{i+1})| shrink by the step ratio. Each observed
    ratio must lie within a factor 2 of the step ratio, unless the changes
    are already below `flat` (the output is affine in that direction).
    """
    m = len(u.x)
    e = np.ones(m) / np.sqrt(m) if direction is None else np.asarray(direction, dtype=float)
    x0 = np.asarray(u.x, dtype=float)
    f0 = _flatten(transition_apply(t, u))

    def shifted(h: float) -> np.ndarray:
        moved = AlphaJet(u.algebra, tuple(float(c) for c in x0 + h * e), u.p, u.images)
        return (_flatten(transition_apply(t, moved)) - f0) / h

    quotients = [shifted(h) for h in steps]
    increments = tuple(
        float(np.max(np.abs(quotients[i] - quotients[i + 1]), initial=0.0)) for i in range(len(steps) - 1)
    )
    ratios, ok = [], True
    for i in range(len(increments) - 1):
        expected = steps[i] / steps[i + 1]
        if increments[i] < flat and increments[i + 1] < flat:
            ratios.append(expected)
            continue
        r = increments[i] / increments[i + 1] if increments[i + 1] > 0 else float("inf")
        ratios.append(r)
        ok = ok and expected / 2 <= r <= expected * 2
    return ProbeReport(ok, tuple(steps), increments, tuple(ratios))
