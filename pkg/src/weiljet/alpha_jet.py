"""alpha-jets: unital algebra morphisms C^inf(P) -> A_x in finite form.

In a chart of P with coordinates y1..yd, an alpha-jet u valued in a Weil
algebra A is fixed by its target point p and by the maximal-ideal parts of
the coordinate images, ``images[j] = u(y_j) - p_j``. Any smooth f is then
evaluated as the order-k Taylor polynomial of f at p with the shifted
coordinates replaced by these images; the Taylor remainder is a sum of
products of k + 1 maximal-ideal elements and therefore zero in A.
"""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Sequence

from .errors import AlgebraNotJetTypeError, ArityError, SpecMismatchError
from .map_jet import MapJet
from .smooth_expr import Expr, SmoothMap, max_var, taylor
from .weil_algebra import (
    TOL,
    AlgebraElement,
    AlgebraMorphism,
    AlgebraSpec,
    augmentation,
    maximal_ideal_part,
    max_abs_diff,
    morphism_apply,
    substitute,
)


@dataclass(frozen=True)
class AlphaJet:
    algebra: AlgebraSpec
    x: tuple[Number, ...]
    p: tuple[Number, ...]
    images: tuple[AlgebraElement, ...]

    def __post_init__(self):
        for name in ("x", "p", "images"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if len(self.images) != len(self.p):
            raise ArityError(f"{len(self.p)} target coordinates but {len(self.images)} images")
        if not self.p:
            raise ArityError("the target point needs at least one coordinate")
        for j, img in enumerate(self.images):
            if img.spec != self.algebra:
                raise SpecMismatchError(f"image {j} is not in the fibre algebra")
            if augmentation(img) != 0:
                raise ValueError(f"image {j} has nonzero constant term {augmentation(img)}")

    @property
    def d(self) -> int:
        return len(self.p)

    def coordinate_image(self, j: int) -> AlgebraElement:
        """u(y_{j+1}) = p_j + images[j]."""
        return self.images[j] + self.p[j]

    def allclose(self, other: "AlphaJet", tol: float = TOL) -> bool:
        return alpha_jet_deviation(self, other) <= tol

    def __call__(self, f: Expr) -> AlgebraElement:
        return evaluate(self, f)


def alpha_jet_deviation(a: AlphaJet, b: AlphaJet) -> float:
    """Largest absolute difference over points and image coefficients (inf if shapes differ)."""
    if a.algebra != b.algebra or len(a.x) != len(b.x) or len(a.p) != len(b.p):
        return float("inf")
    dev = [abs(s - t) for s, t in zip(a.x, b.x)]
    dev += [abs(s - t) for s, t in zip(a.p, b.p)]
    dev += [max_abs_diff(s, t) for s, t in zip(a.images, b.images)]
    return float(max(dev, default=0.0))


def source(u: AlphaJet) -> tuple:
    return u.x


def target(u: AlphaJet) -> tuple:
    return u.p


def evaluate(u: AlphaJet, f: Expr) -> AlgebraElement:
    """u(f) in the fibre algebra."""
    if max_var(f) > u.d:
        raise ArityError(f"expression uses y{max_var(f)} but P has dimension {u.d}")
    poly = taylor(f, u.p, u.algebra.k)
    return substitute(poly, u.images, u.algebra)


def pushforward(phi: SmoothMap, u: AlphaJet) -> AlphaJet:
    """(A phi)(u) = u ∘ phi^*, so that (A phi)(u)(g) = u(g ∘ phi)."""
    if phi.arity != u.d:
        raise ArityError(f"map takes {phi.arity} coordinates, alpha-jet target has {u.d}")
    values = [evaluate(u, c) for c in phi.components]
    return AlphaJet(
        u.algebra,
        u.x,
        tuple(augmentation(v) for v in values),
        tuple(maximal_ideal_part(v) for v in values),
    )


def lab_morphism_apply(kappa: AlgebraMorphism, base_image: Sequence[Number], u: AlphaJet) -> AlphaJet:
    """kappa_P(u) = kappa ∘ u, over the base point `base_image`."""
    if u.algebra != kappa.source:
        raise SpecMismatchError("alpha-jet fibre is not the source algebra of the morphism")
    return AlphaJet(
        kappa.target,
        tuple(base_image),
        u.p,
        tuple(morphism_apply(kappa, img) for img in u.images),
    )


def chi(j: MapJet) -> AlphaJet:
    """The alpha-jet g -> j^k(g∘phi)(x) attached to j = j^k phi(x)."""
    return AlphaJet(
        j.spec,
        j.x,
        j.target,
        tuple(maximal_ideal_part(c) for c in j.components),
    )


def chi_inverse(u: AlphaJet) -> MapJet:
    """The unique k-jet j with chi(j) = u; u must be valued in R[x1..xm]/m^(k+1)."""
    spec = u.algebra
    if not spec.is_jet_type():
        raise AlgebraNotJetTypeError(
            f"fibre algebra has extra relations {list(spec.relations)}; only full truncations are jet algebras"
        )
    if spec.n != len(u.x):
        raise AlgebraNotJetTypeError(
            f"fibre algebra has {spec.n} generators but the base point has {len(u.x)} coordinates"
        )
    return MapJet(u.x, spec.k, tuple(u.coordinate_image(j) for j in range(u.d)))
