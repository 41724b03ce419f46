import pytest
import sympy
from hypothesis import given, settings, strategies as st

from strategies import points, poly_maps
from weiljet.errors import ArityError, PointMismatchError, SpecMismatchError
from weiljet.map_jet import MapJet, jet_compose, jets_equivalent
from weiljet.smooth_expr import SmoothMap, taylor_map
from weiljet.weil_algebra import jet_spec


def test_equivalence_depends_on_order():
    phi = SmoothMap.parse(1, ["y1"])
    psi = SmoothMap.parse(1, ["y1 + y1^3"])
    assert jets_equivalent(phi, psi, [0], 2)
    assert not jets_equivalent(phi, psi, [0], 3)
    assert jets_equivalent(psi, psi, [0.4], 5)


def test_equivalence_arity_mismatch():
    with pytest.raises(ArityError):
        jets_equivalent(SmoothMap.identity(1), SmoothMap.identity(2), [0], 1)


def test_compose_affine_then_square():
    # jet of (1+t)^2 at 0, checked against sympy expand-and-truncate
    t = sympy.Symbol("t")
    poly = sympy.Poly(sympy.expand((1 + t) ** 2), t)
    want = {(e,): int(c) for (e,), c in poly.terms() if e <= 2}
    inner = taylor_map(SmoothMap.parse(1, ["1 + y1"]), [0], 2)
    outer = taylor_map(SmoothMap.parse(1, ["y1^2"]), inner.target, 2)
    got = jet_compose(outer, inner)
    assert got.components[0].coefficients == want == {(0,): 1, (1,): 2, (2,): 1}


def test_compose_with_identity_and_constants():
    j = taylor_map(SmoothMap.parse(2, ["y1*y2 + y2^2", "3 - y1"]), [1, 2], 3)
    assert jet_compose(MapJet.identity(j.target, 3), j) == j
    assert jet_compose(j, MapJet.identity(j.x, 3)) == j
    c1 = MapJet.constant([0], 2, [4, 5])
    c2 = MapJet.constant([4, 5], 2, [7])
    assert jet_compose(c2, c1) == MapJet.constant([0], 2, [7])


def test_compose_mismatches():
    j = MapJet.identity([1], 2)
    with pytest.raises(SpecMismatchError):
        jet_compose(MapJet.identity([1], 3), j)
    with pytest.raises(ArityError):
        jet_compose(MapJet.identity([1, 1], 2), j)
    with pytest.raises(PointMismatchError):
        jet_compose(MapJet.identity([2], 2), j)


def test_mapjet_rejects_wrong_algebra():
    with pytest.raises(SpecMismatchError):
        MapJet((0, 0), 2, (jet_spec(1, 2).one(),))


@st.composite
def composable(draw):
    m, d, e = (draw(st.integers(1, 3)) for _ in range(3))
    k = draw(st.integers(0, 4))
    return draw(poly_maps(m, d)), draw(poly_maps(d, e)), draw(points(m)), k


@settings(max_examples=100, deadline=None)
@given(composable())
def test_compose_is_jet_of_composite(data):
    phi, psi, x, k = data
    inner = taylor_map(phi, x, k)
    outer = taylor_map(psi, inner.target, k)
    assert jet_compose(outer, inner) == taylor_map(psi.compose(phi), x, k)


@settings(max_examples=30, deadline=None)
@given(st.data())
def test_compose_associative(data):
    k = data.draw(st.integers(0, 3))
    dims = [data.draw(st.integers(1, 2)) for _ in range(4)]
    maps = [data.draw(poly_maps(dims[i], dims[i + 1], max_deg=1)) for i in range(3)]
    x = data.draw(points(dims[0]))
    j1 = taylor_map(maps[0], x, k)
    j2 = taylor_map(maps[1], j1.target, k)
    j3 = taylor_map(maps[2], j2.target, k)
    assert jet_compose(j3, jet_compose(j2, j1)) == jet_compose(jet_compose(j3, j2), j1)


@settings(max_examples=50, deadline=None)
@given(st.data())
def test_equivalence_relation(data):
    k = data.draw(st.integers(0, 3))
    x = data.draw(points(1))
    base = data.draw(poly_maps(1, 1))
    # adding (y1 - x)^(k+1) times anything keeps the k-jet
    bump = SmoothMap.parse(1, [f"{base.components[0]} + ({data.draw(st.integers(-2, 2))})*(y1 - ({x[0]}))^{k + 1}"])
    other = data.draw(poly_maps(1, 1))
    maps = [base, bump, other]
    for a in maps:
        assert jets_equivalent(a, a, x, k)
        for b in maps:
            assert jets_equivalent(a, b, x, k) == jets_equivalent(b, a, x, k)
            for c in maps:
                if jets_equivalent(a, b, x, k) and jets_equivalent(b, c, x, k):
                    assert jets_equivalent(a, c, x, k)
    assert jets_equivalent(base, bump, x, k)
