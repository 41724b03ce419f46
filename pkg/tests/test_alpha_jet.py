import pytest
from hypothesis import given, settings, strategies as st

from strategies import alpha_jets, elements, jet_type_alpha_jets, points, poly_maps, polys
from weiljet.alpha_jet import (
    AlphaJet,
    chi,
    chi_inverse,
    evaluate,
    lab_morphism_apply,
    pushforward,
    source,
    target,
)
from weiljet.errors import AlgebraNotJetTypeError, ArityError, SpecMismatchError
from weiljet.map_jet import MapJet, jet_compose
from weiljet.smooth_expr import Const, SmoothMap, evaluate as eval_expr, parse_expr, taylor_map
from weiljet.weil_algebra import AlgebraMorphism, AlgebraSpec, augmentation, jet_spec

D1 = jet_spec(1, 1)
D2 = jet_spec(1, 2)
delta1 = D1.generator(0)


def dual_jet(p=3):
    return AlphaJet(D1, (0,), (p,), (delta1,))


def test_source_target_projections():
    u = AlphaJet(D2, (1, 2), (3,), (D2.generator(0),))
    assert source(u) == (1, 2)
    assert target(u) == (3,)


def test_target_law_example():
    assert augmentation(evaluate(dual_jet(), parse_expr("y1^2"))) == 9


def test_eval_square_on_dual_numbers():
    assert evaluate(dual_jet(), parse_expr("y1^2")) == D1.element({(0,): 9, (1,): 6})


def test_eval_constant():
    assert dual_jet()(Const(2.5)) == D1.constant(2.5)


def test_eval_exp_second_order():
    u = AlphaJet(D2, (0,), (0,), (D2.generator(0),))
    assert u(parse_expr("exp(y1)")) == D2.element({(0,): 1.0, (1,): 1.0, (2,): 0.5})


def test_eval_arity_mismatch():
    with pytest.raises(ArityError):
        evaluate(dual_jet(), parse_expr("y2"))


def test_images_must_lie_in_maximal_ideal():
    with pytest.raises(ValueError):
        AlphaJet(D1, (0,), (1,), (D1.one(),))


def test_pushforward_examples():
    u = dual_jet()
    assert pushforward(SmoothMap.identity(1), u) == u
    sq = SmoothMap.parse(1, ["y1^2"])
    assert pushforward(sq, u) == AlphaJet(D1, (0,), (9,), (delta1.scale(6),))
    shift = SmoothMap.parse(1, ["y1 + 1"])
    assert pushforward(sq.compose(shift), u) == pushforward(sq, pushforward(shift, u))
    assert pushforward(sq.compose(shift), u) == AlphaJet(D1, (0,), (16,), (delta1.scale(8),))


def test_lab_morphism_examples():
    u = AlphaJet(D2, (0,), (1,), (D2.generator(0) + D2.generator(0) ** 2,))
    assert lab_morphism_apply(AlgebraMorphism.identity(D2), u.x, u) == u
    trunc = AlgebraMorphism(D2, D1, (delta1,))
    assert lab_morphism_apply(trunc, (5,), u) == AlphaJet(D1, (5,), (1,), (delta1,))
    double = AlgebraMorphism(D1, D1, (delta1.scale(2),))
    v = AlphaJet(D1, (0,), (1,), (delta1.scale(3),))
    assert lab_morphism_apply(double, (0,), v).images == (delta1.scale(6),)
    with pytest.raises(SpecMismatchError):
        lab_morphism_apply(double, (0,), u)


def test_chi_of_square_jet():
    j = taylor_map(SmoothMap.parse(1, ["y1^2"]), [1], 2)
    u = chi(j)
    assert u.algebra == D2
    assert (u.x, u.p) == ((1,), (1,))
    assert u.images == (D2.element({(1,): 2, (2,): 1}),)
    assert chi_inverse(u) == j


def test_chi_trivial_cases():
    assert all(img.is_zero() for img in chi(MapJet.constant([1, 2], 3, [4, 5, 6])).images)
    spec = jet_spec(2, 3)
    assert chi(MapJet.identity([1, 2], 3)).images == tuple(spec.generators())
    u0 = AlphaJet(spec, (1, 2), (7,), (spec.zero(),))
    assert chi_inverse(u0) == MapJet.constant([1, 2], 3, [7])
    ug = AlphaJet(spec, (1, 2), (1, 2), tuple(spec.generators()))
    assert chi_inverse(ug) == MapJet.identity([1, 2], 3)


def test_chi_inverse_rejects_non_jet_algebras():
    spec = AlgebraSpec(1, 2, ((2,),))
    with pytest.raises(AlgebraNotJetTypeError):
        chi_inverse(AlphaJet(spec, (0,), (0,), (spec.generator(0),)))
    with pytest.raises(AlgebraNotJetTypeError):
        chi_inverse(AlphaJet(D2, (0, 0), (0,), (D2.generator(0),)))


# --- properties ------------------------------------------------------------


@st.composite
def jet_and_two_polys(draw):
    u = draw(alpha_jets())
    return u, draw(polys(u.d)), draw(polys(u.d))


@settings(max_examples=100, deadline=None)
@given(jet_and_two_polys())
def test_morphism_law(data):
    u, f, g = data
    assert u(f * g) == u(f) * u(g)
    assert u(f + g) == u(f) + u(g)
    assert u(Const(1)) == u.algebra.one()


@settings(max_examples=100, deadline=None)
@given(jet_and_two_polys())
def test_target_law(data):
    u, f, _ = data
    assert augmentation(u(f)) == eval_expr(f, u.p)


@st.composite
def jet_and_maps(draw):
    u = draw(alpha_jets())
    e = draw(st.integers(1, 3))
    return u, draw(poly_maps(u.d, e)), draw(poly_maps(e, draw(st.integers(1, 3)))), draw(polys(e))


@settings(max_examples=100, deadline=None)
@given(jet_and_maps())
def test_functoriality(data):
    u, phi, psi, g = data
    assert pushforward(SmoothMap.identity(u.d), u) == u
    assert pushforward(psi.compose(phi), u) == pushforward(psi, pushforward(phi, u))
    assert pushforward(phi, u)(g) == u(SmoothMap(phi.out_dim, (g,)).compose(phi).components[0])


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_lab_morphism_naturality(data):
    u = data.draw(jet_type_alpha_jets())
    target_spec = jet_spec(data.draw(st.integers(1, 2)), u.algebra.k)
    kappa = AlgebraMorphism(
        u.algebra,
        target_spec,
        tuple(data.draw(elements(target_spec, constant=False, coef=st.integers(-2, 2))) for _ in range(u.algebra.n)),
    )
    phi = data.draw(poly_maps(u.d, data.draw(st.integers(1, 2))))
    lhs = lab_morphism_apply(kappa, u.x, pushforward(phi, u))
    rhs = pushforward(phi, lab_morphism_apply(kappa, u.x, u))
    assert lhs == rhs


@settings(max_examples=100, deadline=None)
@given(jet_type_alpha_jets())
def test_chi_round_trip(u):
    j = chi_inverse(u)
    assert chi(j) == u
    assert chi_inverse(chi(j)) == j


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_chi_naturality(data):
    u = data.draw(jet_type_alpha_jets())
    phi = data.draw(poly_maps(u.d, data.draw(st.integers(1, 3))))
    as_jet = chi_inverse(u)
    composed = jet_compose(taylor_map(phi, u.p, u.algebra.k), as_jet)
    assert chi(composed) == pushforward(phi, u)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_chi_evaluates_taylor_of_composite(data):
    m, d = data.draw(st.integers(1, 3)), data.draw(st.integers(1, 3))
    k = data.draw(st.integers(0, 4))
    phi = data.draw(poly_maps(m, d))
    f = data.draw(polys(d))
    x = data.draw(points(m))
    u = chi(taylor_map(phi, x, k))
    assert u(f) == taylor_map(SmoothMap(d, (f,)).compose(phi), x, k).components[0]
