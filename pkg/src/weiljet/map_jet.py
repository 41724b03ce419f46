"""k-jets of maps R^m -> R^d stored as truncated Taylor polynomials."""

from __future__ import annotations

from dataclasses import dataclass
from numbers import Number
from typing import Sequence

from .errors import ArityError, PointMismatchError, SpecMismatchError
from .smooth_expr import SmoothMap, taylor_map
from .weil_algebra import (
    TOL,
    AlgebraElement,
    AlgebraSpec,
    augmentation,
    jet_spec,
    maximal_ideal_part,
    max_abs_diff,
    substitute,
)


@dataclass(frozen=True)
class MapJet:
    """j^k phi(x): one Taylor polynomial per target coordinate.

    Each component lives in R[x1..xm]/m^(k+1) where m = len(x) and is written
    in the shifted variables x_i = y_i - x[i]. Its constant term is the
    corresponding coordinate of phi(x).
    """

    x: tuple[Number, ...]
    k: int
    components: tuple[AlgebraElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "components", tuple(self.components))
        if not self.x:
            raise ArityError("a jet needs a source point with at least one coordinate")
        spec = self.spec
        for i, c in enumerate(self.components):
            if c.spec != spec:
                raise SpecMismatchError(
                    f"component {i} lives in {c.spec}, expected the jet algebra {spec}"
                )

    @property
    def spec(self) -> AlgebraSpec:
        return jet_spec(len(self.x), self.k)

    @property
    def source_dim(self) -> int:
        return len(self.x)

    @property
    def target_dim(self) -> int:
        return len(self.components)

    @property
    def target(self) -> tuple:
        return tuple(augmentation(c) for c in self.components)

    def allclose(self, other: "MapJet", tol: float = TOL) -> bool:
        if (self.k, self.source_dim, self.target_dim) != (other.k, other.source_dim, other.target_dim):
            return False
        if any(abs(a - b) > tol for a, b in zip(self.x, other.x)):
            return False
        return all(max_abs_diff(a, b) <= tol for a, b in zip(self.components, other.components))

    @classmethod
    def identity(cls, x: Sequence[Number], k: int) -> "MapJet":
        spec = jet_spec(len(x), k)
        return cls(tuple(x), k, tuple(spec.generator(i) + x[i] for i in range(len(x))))

    @classmethod
    def constant(cls, x: Sequence[Number], k: int, value: Sequence[Number]) -> "MapJet":
        spec = jet_spec(len(x), k)
        return cls(tuple(x), k, tuple(spec.constant(v) for v in value))


def jets_equivalent(phi: SmoothMap, psi: SmoothMap, x: Sequence[Number], k: int, tol: float = TOL) -> bool:
    """Whether phi and psi have the same k-jet at x.

    Agreement of all Taylor coefficients up to order k is the same as
    g∘phi - g∘psi vanishing to order k+1 at x for every test function g.
    """
    if phi.arity != psi.arity or phi.out_dim != psi.out_dim:
        raise ArityError("maps have different source or target dimensions")
    return taylor_map(phi, x, k).allclose(taylor_map(psi, x, k), tol)


def jet_compose(outer: MapJet, inner: MapJet, tol: float = TOL) -> MapJet:
    """j^k(psi∘phi)(x) from j^k psi(phi(x)) and j^k phi(x)."""
    if outer.k != inner.k:
        raise SpecMismatchError(f"jet orders differ: {outer.k} vs {inner.k}")
    if outer.source_dim != inner.target_dim:
        raise ArityError(
            f"outer jet has {outer.source_dim} source coordinates, inner jet has {inner.target_dim} targets"
        )
    if any(abs(a - b) > tol for a, b in zip(outer.x, inner.target)):
        raise PointMismatchError(f"outer jet is taken at {outer.x}, but the inner jet lands at {inner.target}")
    shifts = [maximal_ideal_part(c) for c in inner.components]
    target = inner.spec
    comps = tuple(substitute(c, shifts, target) for c in outer.components)
    return MapJet(inner.x, inner.k, comps)
