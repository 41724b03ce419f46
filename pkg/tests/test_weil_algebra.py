import itertools
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from weiljet.errors import InvalidMorphismError, SpecMismatchError
from weiljet.weil_algebra import (
    AlgebraMorphism,
    AlgebraSpec,
    add,
    algebra_dim,
    augmentation,
    brute_force_dim,
    is_automorphism,
    jet_spec,
    maximal_ideal_part,
    monomials_of_degree,
    morphism_apply,
    morphism_compose,
    mul,
    scale,
)

D1 = jet_spec(1, 1)  # dual numbers
D2 = jet_spec(1, 2)


def el(spec, **terms):
    """Element from keyword terms like c=2, x1=3 (exponent of the single variable)."""
    coeffs = {}
    for name, c in terms.items():
        e = 0 if name == "c" else int(name[1:])
        coeffs[(e,)] = c
    return spec.element(coeffs)


# --- dimension -------------------------------------------------------------


def test_dim_of_reals():
    assert algebra_dim(AlgebraSpec(1, 0)) == 1


def test_dim_two_variables_order_two():
    spec = AlgebraSpec(2, 2)
    assert algebra_dim(spec) == 6
    assert brute_force_dim(2, 2) == 6
    assert spec.basis == ((0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2))


def test_dim_with_relation():
    spec = AlgebraSpec(1, 2, ((2,),))
    assert algebra_dim(spec) == 2
    assert spec.basis == ((0,), (1,))


@pytest.mark.parametrize("n,k", list(itertools.product(range(1, 4), range(0, 5))))
def test_dim_matches_binomial(n, k):
    assert algebra_dim(AlgebraSpec(n, k)) == comb(n + k, k) == brute_force_dim(n, k)


def test_relations_stored_minimally():
    spec = AlgebraSpec(2, 3, ((1, 1), (2, 1), (1, 1)))
    assert spec.relations == ((1, 1),)
    assert spec.in_ideal((1, 2))
    assert not spec.in_ideal((2, 0))


def test_invalid_specs():
    with pytest.raises(ValueError):
        AlgebraSpec(0, 2)
    with pytest.raises(ValueError):
        AlgebraSpec(1, -1)
    with pytest.raises(ValueError):
        AlgebraSpec(1, 2, ((0,),))


# --- arithmetic ------------------------------------------------------------


def test_dual_number_product():
    assert mul(el(D1, c=2, x1=3), el(D1, c=4, x1=5)) == el(D1, c=8, x1=22)


def test_delta_squared_vanishes():
    d = D1.generator(0)
    assert (d * d).is_zero()


def test_unit_law_and_zero_pruning():
    a = el(D2, c=1, x1=-2, x2=7)
    assert D2.one() * a == a
    assert (a - a).terms == ()
    assert add(a, scale(a, -1)) == D2.zero()


def test_spec_mismatch():
    with pytest.raises(SpecMismatchError):
        D1.one() + D2.one()


def test_augmentation_and_maximal_part():
    a = el(D1, c=2, x1=3)
    assert augmentation(a) == 2
    assert augmentation(D1.one()) == 1
    assert maximal_ideal_part(a) == el(D1, x1=3)
    assert maximal_ideal_part(D1.one()).is_zero()
    assert augmentation(mul(el(D1, c=2, x1=1), el(D1, c=3, x1=1))) == 6
    spec = AlgebraSpec(2, 2)
    b = spec.element({(0, 0): 5, (1, 0): 1, (1, 1): 1})
    assert maximal_ideal_part(b) == spec.element({(1, 0): 1, (1, 1): 1})


def test_inverse_of_unit():
    a = el(D2, c=2, x1=1)
    inv = a.inverse()
    assert inv == el(D2, c=0.5, x1=-0.25, x2=0.125)
    assert (a * inv).allclose(D2.one())


def test_exact_integer_coefficients_stay_int():
    a = el(D2, c=3, x1=-1) * el(D2, c=2, x1=4)
    assert all(isinstance(c, int) for _, c in a.terms)


# --- morphisms -------------------------------------------------------------


def test_truncating_morphism():
    k3 = jet_spec(1, 2)  # R[x]/m^3
    kappa = AlgebraMorphism(k3, D1, (D1.generator(0),))
    assert morphism_apply(kappa, el(k3, c=1, x1=1, x2=1)) == el(D1, c=1, x1=1)


def test_morphism_square_of_doubling():
    kappa = AlgebraMorphism(D2, D2, (D2.generator(0).scale(2),))
    assert kappa(el(D2, x2=1)) == el(D2, x2=4)


def test_identity_morphism():
    a = el(D2, c=4, x1=2, x2=-1)
    ident = AlgebraMorphism.identity(D2)
    assert ident(a) == a
    assert is_automorphism(ident)


def test_compose_example():
    d = D2.generator(0)
    first = AlgebraMorphism(D2, D2, (d + d * d,))
    second = AlgebraMorphism(D2, D2, (d.scale(2),))
    comp = morphism_compose(second, first)
    assert comp.images == (el(D2, x1=2, x2=4),)
    ident = AlgebraMorphism.identity(D2)
    assert morphism_compose(ident, first) == first
    assert morphism_compose(first, ident) == first


def test_automorphism_examples():
    d = D2.generator(0)
    assert is_automorphism(AlgebraMorphism(D2, D2, (d.scale(2) + d * d,)))
    assert not is_automorphism(AlgebraMorphism(D2, D2, (d * d,)))


def test_morphism_must_respect_relations():
    src = AlgebraSpec(1, 2, ((2,),))
    with pytest.raises(InvalidMorphismError):
        # x^2 = 0 in the source but delta^2 != 0 in the target
        AlgebraMorphism(src, D2, (D2.generator(0),))
    AlgebraMorphism(src, D2, (el(D2, x2=1),))


def test_morphism_image_must_lie_in_maximal_ideal():
    with pytest.raises(InvalidMorphismError):
        AlgebraMorphism(D1, D1, (el(D1, c=1, x1=1),))


# --- property tests --------------------------------------------------------


@st.composite
def specs(draw):
    n = draw(st.integers(1, 3))
    k = draw(st.integers(0, 4))
    rels = []
    if k >= 2 and draw(st.booleans()):
        deg = draw(st.integers(2, k))
        rels.append(draw(st.sampled_from(monomials_of_degree(n, deg))))
    return AlgebraSpec(n, k, tuple(rels))


def elements(spec, constant=True):
    basis = [b for b in spec.basis if constant or sum(b)]
    return st.lists(st.integers(-5, 5), min_size=len(basis), max_size=len(basis)).map(
        lambda cs: spec.element(dict(zip(basis, cs)))
    )


@st.composite
def spec_and_elements(draw, count=3):
    spec = draw(specs())
    return (spec, *[draw(elements(spec)) for _ in range(count)])


@settings(max_examples=100, deadline=None)
@given(spec_and_elements())
def test_ring_laws(data):
    _, a, b, c = data
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert (a + b) + c == a + (b + c)


@settings(max_examples=100, deadline=None)
@given(spec_and_elements(count=2))
def test_augmentation_is_ring_morphism(data):
    spec, a, b = data
    assert augmentation(spec.one()) == 1
    assert augmentation(a * b) == augmentation(a) * augmentation(b)
    assert augmentation(a + b) == augmentation(a) + augmentation(b)
    m = maximal_ideal_part(a)
    assert augmentation(m) == 0
    assert spec.constant(augmentation(a)) + m == a


@settings(max_examples=50, deadline=None)
@given(specs())
def test_nilpotency(spec):
    for b in spec.basis[1:]:
        assert (spec.element({b: 1}) ** (spec.k + 1)).is_zero()


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_morphism_preserves_structure(data):
    k = data.draw(st.integers(0, 4))
    source = jet_spec(data.draw(st.integers(1, 3)), k)
    target = jet_spec(data.draw(st.integers(1, 3)), k)
    images = tuple(data.draw(elements(target, constant=False)) for _ in range(source.n))
    kappa = AlgebraMorphism(source, target, images)
    a, b = data.draw(elements(source)), data.draw(elements(source))
    assert kappa(source.one()) == target.one()
    assert kappa(a + b) == kappa(a) + kappa(b)
    assert kappa(a * b) == kappa(a) * kappa(b)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_compose_associative(data):
    spec = jet_spec(data.draw(st.integers(1, 2)), data.draw(st.integers(1, 3)))
    ks = [
        AlgebraMorphism(spec, spec, tuple(data.draw(elements(spec, constant=False)) for _ in range(spec.n)))
        for _ in range(3)
    ]
    left = morphism_compose(ks[2], morphism_compose(ks[1], ks[0]))
    right = morphism_compose(morphism_compose(ks[2], ks[1]), ks[0])
    assert left == right
    a = data.draw(elements(spec))
    assert left(a) == ks[2](ks[1](ks[0](a)))
