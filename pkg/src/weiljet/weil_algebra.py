"""Finite-dimensional local algebras R[x1..xn]/I with I a monomial ideal.

The ideal always contains every monomial of total degree > k, so the
quotient is a Weil algebra: the maximal ideal (elements with zero constant
term) is nilpotent of index at most k + 1.

Monomials are exponent tuples. Iteration and serialization follow the
graded lexicographic order: lower total degree first, and within a degree
``x1**2 < x1*x2 < x2**2``, i.e. larger leading exponents come first.

Coefficients are plain Python numbers. Integer inputs stay integers through
ring operations, so integer computations are exact; anything involving a
float is ordinary double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from itertools import combinations_with_replacement
from numbers import Number
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import (
    DomainError,
    InvalidMorphismError,
    SpecMismatchError,
)

Monomial = tuple[int, ...]

TOL = 1e-9


def monomial_key(exp: Monomial) -> tuple:
    return (sum(exp), tuple(-e for e in exp))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomials_of_degree(n: int, d: int) -> list[Monomial]:
    """All exponent tuples of length `n` and total degree `d`, in grlex order."""
    if n == 0:
        return [()] if d == 0 else []
    out = []
    for counts in combinations_with_replacement(range(n), d):
        exp = [0] * n
        for i in counts:
            exp[i] += 1
        out.append(tuple(exp))
    out.sort(key=monomial_key)
    return out


def _minimal_generators(relations: Iterable[Monomial]) -> tuple[Monomial, ...]:
    rels = sorted(set(relations), key=monomial_key)
    kept: list[Monomial] = []
    for r in rels:
        if not any(monomial_divides(g, r) for g in kept):
            kept.append(r)
    return tuple(kept)


@dataclass(frozen=True)
class AlgebraSpec:
    """The quotient R[x1..xn] / (m^(k+1) + (relations)).

    `relations` is normalized to the minimal set of monomial generators of
    the extra ideal, sorted in grlex order.
    """

    n: int
    k: int
    relations: tuple[Monomial, ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"number of generators must be a positive integer, got {self.n!r}")
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError(f"order must be a non-negative integer, got {self.k!r}")
        rels = []
        for r in self.relations:
            r = tuple(int(e) for e in r)
            if len(r) != self.n or any(e < 0 for e in r):
                raise ValueError(f"relation {r} is not an exponent tuple of length {self.n}")
            if sum(r) == 0:
                raise ValueError("the unit monomial cannot be a relation")
            if sum(r) > self.k:
                raise ValueError(f"relation {r} has degree > k={self.k}; it is already zero")
            rels.append(r)
        object.__setattr__(self, "relations", _minimal_generators(rels))

    def in_ideal(self, exp: Monomial) -> bool:
        if sum(exp) > self.k:
            return True
        return any(monomial_divides(r, exp) for r in self.relations)

    @cached_property
    def basis(self) -> tuple[Monomial, ...]:
        out = []
        for d in range(self.k + 1):
            out.extend(m for m in monomials_of_degree(self.n, d) if not self.in_ideal(m))
        return tuple(out)

    @cached_property
    def basis_index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def unit_exp(self) -> Monomial:
        return (0,) * self.n

    def is_jet_type(self) -> bool:
        return not self.relations

    # constructors

    def element(self, coefficients: Mapping[Sequence[int], Number] | None = None) -> "AlgebraElement":
        return _reduce(self, coefficients or {})

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, ())

    def one(self) -> "AlgebraElement":
        return self.constant(1)

    def constant(self, c: Number) -> "AlgebraElement":
        return _reduce(self, {self.unit_exp: c})

    def generator(self, i: int) -> "AlgebraElement":
        """The class of x_{i+1} (0-based index)."""
        if not 0 <= i < self.n:
            raise IndexError(f"generator index {i} out of range for n={self.n}")
        exp = tuple(1 if j == i else 0 for j in range(self.n))
        return _reduce(self, {exp: 1})

    def generators(self) -> list["AlgebraElement"]:
        return [self.generator(i) for i in range(self.n)]


@lru_cache(maxsize=None)
def jet_spec(m: int, k: int) -> AlgebraSpec:
    """R[x1..xm]/m^(k+1), the algebra of k-jets of functions at a point of R^m."""
    return AlgebraSpec(m, k)


def algebra_dim(spec: AlgebraSpec) -> int:
    return spec.dim


def _reduce(spec: AlgebraSpec, coefficients: Mapping) -> "AlgebraElement":
    acc: dict[Monomial, Number] = {}
    for exp, c in coefficients.items():
        exp = tuple(exp)
        if len(exp) != spec.n:
            raise ValueError(f"monomial {exp} does not have {spec.n} exponents")
        if spec.in_ideal(exp):
            continue
        acc[exp] = acc.get(exp, 0) + c
    return AlgebraElement._from_reduced(spec, acc)


@dataclass(frozen=True)
class AlgebraElement:
    """An element of an AlgebraSpec quotient in normal form.

    `terms` holds (monomial, coefficient) pairs in grlex order with no zero
    coefficient and no monomial of the ideal. Build elements through the
    AlgebraSpec constructors or arithmetic rather than directly.
    """

    spec: AlgebraSpec
    terms: tuple[tuple[Monomial, Number], ...]

    @classmethod
    def _from_reduced(cls, spec: AlgebraSpec, acc: Mapping[Monomial, Number]) -> "AlgebraElement":
        items = sorted(((e, c) for e, c in acc.items() if c != 0), key=lambda t: monomial_key(t[0]))
        return cls(spec, tuple(items))

    @cached_property
    def coefficients(self) -> dict[Monomial, Number]:
        return dict(self.terms)

    def coefficient(self, exp: Sequence[int]) -> Number:
        return self.coefficients.get(tuple(exp), 0)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e, _ in self.terms), default=-1)

    def order(self) -> int:
        """Lowest total degree present (the m-adic order); -1 for zero."""
        return min((sum(e) for e, _ in self.terms), default=-1)

    def to_vector(self) -> np.ndarray:
        vec = np.zeros(self.spec.dim)
        index = self.spec.basis_index
        for e, c in self.terms:
            vec[index[e]] = c
        return vec

    def allclose(self, other: "AlgebraElement", tol: float = TOL) -> bool:
        _check_same(self, other)
        return max_abs_diff(self, other) <= tol

    # ring structure

    def _coerce(self, other) -> "AlgebraElement":
        if isinstance(other, AlgebraElement):
            _check_same(self, other)
            return other
        if isinstance(other, Number):
            return self.spec.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for e, c in other.terms:
            acc[e] = acc.get(e, 0) + c
        return AlgebraElement._from_reduced(self.spec, acc)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.spec, tuple((e, -c) for e, c in self.terms))

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def scale(self, c: Number) -> "AlgebraElement":
        return AlgebraElement._from_reduced(self.spec, {e: c * v for e, v in self.terms})

    def __mul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        spec = self.spec
        acc: dict[Monomial, Number] = {}
        for ea, ca in self.terms:
            for eb, cb in other.terms:
                e = tuple(x + y for x, y in zip(ea, eb))
                if spec.in_ideal(e):
                    continue
                acc[e] = acc.get(e, 0) + ca * cb
        return AlgebraElement._from_reduced(spec, acc)

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers are defined")
        if n < 0:
            return self.inverse() ** (-n)
        result = self.spec.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def inverse(self) -> "AlgebraElement":
        """Multiplicative inverse via the terminating geometric series."""
        c = augmentation(self)
        if c == 0:
            raise DomainError("element lies in the maximal ideal and is not invertible")
        rc = _reciprocal(c)
        t = maximal_ideal_part(self) * rc
        # (c + nu)^-1 = c^-1 * sum_j (-t)^j with t = nu/c nilpotent
        coeffs = [rc * (-1) ** j for j in range(self.spec.k + 1)]
        return apply_series(t, coeffs)

    def __truediv__(self, other):
        if isinstance(other, Number):
            if other == 0:
                raise DomainError("division by zero")
            return self.scale(_reciprocal(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, Number):
            return self.inverse().scale(other)
        return NotImplemented

    def __str__(self):
        return format_element(self)


def _reciprocal(c: Number) -> Number:
    if isinstance(c, int) and c in (1, -1):
        return c
    return 1.0 / c


def _check_same(a: AlgebraElement, b: AlgebraElement) -> None:
    if a.spec != b.spec:
        raise SpecMismatchError(f"elements live in different algebras: {a.spec} vs {b.spec}")


def max_abs_diff(a: AlgebraElement, b: AlgebraElement) -> float:
    ca, cb = a.coefficients, b.coefficients
    return max((abs(ca.get(e, 0) - cb.get(e, 0)) for e in set(ca) | set(cb)), default=0.0)


def add(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_same(a, b)
    return a + b


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    _check_same(a, b)
    return a * b


def scale(a: AlgebraElement, c: Number) -> AlgebraElement:
    return a.scale(c)


def augmentation(a: AlgebraElement) -> Number:
    """The constant term: the unique algebra epimorphism onto R."""
    return a.coefficients.get(a.spec.unit_exp, 0)


def maximal_ideal_part(a: AlgebraElement) -> AlgebraElement:
    unit = a.spec.unit_exp
    return AlgebraElement(a.spec, tuple(t for t in a.terms if t[0] != unit))


def apply_series(nu: AlgebraElement, coeffs: Sequence[Number]) -> AlgebraElement:
    """Evaluate sum_j coeffs[j] * nu**j for a nilpotent `nu` (Horner form).

    Terms beyond the nilpotency index vanish, so `coeffs` only needs k + 1
    entries for an algebra of order k.
    """
    if augmentation(nu) != 0:
        raise ValueError("series can only be applied to maximal-ideal elements")
    spec = nu.spec
    result = spec.zero()
    for c in reversed(coeffs[: spec.k + 1]):
        result = result * nu + c
    return result


def format_element(a: AlgebraElement, names: Sequence[str] | None = None) -> str:
    if a.is_zero():
        return "0"
    if names is None:
        names = ["d"] if a.spec.n == 1 else [f"d{i + 1}" for i in range(a.spec.n)]
    parts = []
    for exp, c in a.terms:
        mono = "*".join(
            names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(exp) if e
        )
        if not mono:
            parts.append(f"{c}")
        elif c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"{c}*{mono}")
    return " + ".join(parts).replace("+ -", "- ")


# ---------------------------------------------------------------------------
# morphisms


def substitute(a: AlgebraElement, images: Sequence[AlgebraElement], target: AlgebraSpec) -> AlgebraElement:
    """Replace generator x_i of `a` by images[i], reducing in `target`.

    No validity check: callers guarantee that the relations of a.spec are
    annihilated by the images.
    """
    if len(images) != a.spec.n:
        raise SpecMismatchError(f"need {a.spec.n} generator images, got {len(images)}")
    powers: list[list[AlgebraElement]] = [[target.one()] for _ in images]

    def power(i: int, e: int) -> AlgebraElement:
        cache = powers[i]
        while len(cache) <= e:
            cache.append(cache[-1] * images[i])
        return cache[e]

    acc: dict[Monomial, Number] = {}
    for exp, c in a.terms:
        term = target.one()
        for i, e in enumerate(exp):
            if e:
                term = term * power(i, e)
                if term.is_zero():
                    break
        for te, tc in term.terms:
            acc[te] = acc.get(te, 0) + c * tc
    return AlgebraElement._from_reduced(target, acc)


def _relation_witnesses(source: AlgebraSpec, target: AlgebraSpec) -> list[Monomial]:
    rels = list(source.relations)
    # products of k_s + 1 maximal-ideal elements vanish automatically when k_t <= k_s
    if target.k > source.k:
        rels.extend(monomials_of_degree(source.n, source.k + 1))
    return rels


@dataclass(frozen=True)
class AlgebraMorphism:
    """A unital algebra morphism fixed by the images of the generators.

    Construction validates that every image lies in the target's maximal
    ideal and that every relation of the source is sent to zero.
    """

    source: AlgebraSpec
    target: AlgebraSpec
    images: tuple[AlgebraElement, ...]
    tol: float = field(default=TOL, compare=False)

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.n:
            raise InvalidMorphismError(
                f"need {self.source.n} generator images, got {len(images)}"
            )
        for i, img in enumerate(images):
            if img.spec != self.target:
                raise SpecMismatchError(f"image of x{i + 1} is not in the target algebra")
            if abs(augmentation(img)) > 0:
                raise InvalidMorphismError(
                    f"image of x{i + 1} has constant term {augmentation(img)}; "
                    "generators must map into the maximal ideal"
                )
        for rel in _relation_witnesses(self.source, self.target):
            value = _monomial_image(rel, images, self.target)
            if max((abs(c) for _, c in value.terms), default=0.0) > self.tol:
                raise InvalidMorphismError(
                    f"relation monomial {rel} is not annihilated (image {value})"
                )

    @classmethod
    def identity(cls, spec: AlgebraSpec) -> "AlgebraMorphism":
        return cls(spec, spec, tuple(spec.generators()))

    def __call__(self, a: AlgebraElement) -> AlgebraElement:
        return morphism_apply(self, a)

    def linear_part(self) -> np.ndarray:
        """Matrix L[i, j] = coefficient of x_j in the image of x_i."""
        n = self.source.n
        mat = np.zeros((n, self.target.n))
        for i, img in enumerate(self.images):
            for j in range(self.target.n):
                exp = tuple(1 if t == j else 0 for t in range(self.target.n))
                mat[i, j] = img.coefficient(exp)
        return mat

    def matrix(self) -> np.ndarray:
        """Matrix of the map on the quotient bases; column b is the image of basis monomial b."""
        cols = []
        for b in self.source.basis:
            cols.append(morphism_apply(self, self.source.element({b: 1})).to_vector())
        return np.column_stack(cols) if cols else np.zeros((self.target.dim, 0))


def _monomial_image(exp: Monomial, images: Sequence[AlgebraElement], target: AlgebraSpec) -> AlgebraElement:
    out = target.one()
    for i, e in enumerate(exp):
        if e:
            out = out * images[i] ** e
    return out


def morphism_apply(kappa: AlgebraMorphism, a: AlgebraElement) -> AlgebraElement:
    if a.spec != kappa.source:
        raise SpecMismatchError("element is not in the source algebra of the morphism")
    return substitute(a, kappa.images, kappa.target)


def morphism_compose(outer: AlgebraMorphism, inner: AlgebraMorphism) -> AlgebraMorphism:
    """outer ∘ inner."""
    if inner.target != outer.source:
        raise SpecMismatchError("morphisms are not composable")
    images = tuple(morphism_apply(outer, img) for img in inner.images)
    return AlgebraMorphism(inner.source, outer.target, images)


def is_automorphism(kappa: AlgebraMorphism, tol: float = TOL) -> bool:
    if kappa.source != kappa.target:
        raise SpecMismatchError("an automorphism needs equal source and target algebras")
    spec = kappa.source
    # generators killed by degree-1 relations do not contribute to the linear part
    alive = [i for i in range(spec.n) if not spec.in_ideal(tuple(int(j == i) for j in range(spec.n)))]
    if alive:
        lin = kappa.linear_part()[np.ix_(alive, alive)]
        if np.linalg.matrix_rank(lin, tol=tol) < len(alive):
            return False
    return int(np.linalg.matrix_rank(kappa.matrix(), tol=tol)) == spec.dim


def brute_force_dim(n: int, k: int, relations: Iterable[Monomial] = ()) -> int:
    """Independent count of the quotient basis by exhaustive exponent enumeration."""
    rels = [tuple(r) for r in relations]
    count = 0
    for exp in np.ndindex(*([k + 1] * n)):
        if sum(exp) > k:
            continue
        if any(all(r[i] <= exp[i] for i in range(n)) for r in rels):
            continue
        count += 1
    return count


def binomial_dim(n: int, k: int) -> int:
    return math.comb(n + k, k)
