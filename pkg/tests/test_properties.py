"""Property-based checks of the exact algebra layer."""

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from kappastar.diffop import DiffOp
from kappastar.poly import Poly, VarTable
from kappastar.randgen import random_poly
from kappastar.series import ThetaSeries


@st.composite
def poly_with_table(draw, max_d=3, max_degree=4, count=1):
    d = draw(st.integers(min_value=1, max_value=max_d))
    table = VarTable.spacetime(d)
    seed = draw(st.integers(min_value=0, max_value=10**6))
    rng = random.Random(seed)
    polys = [random_poly(table, rng, degree=max_degree) for _ in range(count)]
    return (table, *polys)


@settings(max_examples=40, deadline=None)
@given(poly_with_table(count=3))
def test_ring_axioms(data):
    table, a, b, c = data
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a * Poly.one(table) == a


@settings(max_examples=40, deadline=None)
@given(poly_with_table(count=2), st.integers(min_value=0, max_value=3))
def test_partial_is_a_derivation(data, var):
    table, a, b = data
    i = var % len(table)
    assert (a * b).partial(i) == a.partial(i) * b + a * b.partial(i)


@settings(max_examples=40, deadline=None)
@given(poly_with_table(count=1), st.integers(min_value=0, max_value=3),
       st.integers(min_value=0, max_value=3))
def test_mixed_partials_commute(data, v1, v2):
    table, a = data
    i, j = v1 % len(table), v2 % len(table)
    assert a.partial(i).partial(j) == a.partial(j).partial(i)


@settings(max_examples=30, deadline=None)
@given(poly_with_table(max_d=2, count=2))
def test_substitute_is_a_ring_homomorphism(data):
    table, a, b = data
    target = VarTable.complex_plane(table.d)
    rng = random.Random(7)
    mapping = {name: random_poly(target, rng, degree=2) for name in table.names}
    lhs = (a * b).substitute(mapping)
    rhs = a.substitute(mapping) * b.substitute(mapping)
    assert lhs == rhs


@settings(max_examples=30, deadline=None)
@given(poly_with_table(max_d=2, count=2), st.integers(min_value=0, max_value=3))
def test_capped_series_product_is_truncated_exact_product(data, cap):
    table, a, b = data
    exact = ThetaSeries(table, {0: a, 1: b}) * ThetaSeries(table, {0: b, 2: a})
    capped = (ThetaSeries(table, {0: a, 1: b}, cap=cap)
              * ThetaSeries(table, {0: b, 2: a}, cap=cap))
    assert capped == exact.truncate(cap)


def _random_diffop(table, rng, order=2, degree=2):
    terms = {}
    for _ in range(rng.randint(1, 3)):
        word = [0] * len(table)
        for _ in range(rng.randint(0, order)):
            word[rng.randrange(len(table))] += 1
        terms[(tuple(word), 0)] = random_poly(table, rng, degree=degree)
    return DiffOp(table, terms)


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_diffop_compose_associativity(seed):
    rng = random.Random(seed)
    table = VarTable.spacetime(rng.randint(1, 2))
    a, b, c = (_random_diffop(table, rng) for _ in range(3))
    assert a.compose(b).compose(c) == a.compose(b.compose(c))


@settings(max_examples=25, deadline=None)
@given(st.integers(min_value=0, max_value=10**6))
def test_diffop_apply_respects_composition(seed):
    rng = random.Random(seed)
    table = VarTable.spacetime(rng.randint(1, 2))
    a, b = (_random_diffop(table, rng) for _ in range(2))
    f = random_poly(table, rng, degree=4)
    assert a.compose(b).apply(f) == a.apply(b.apply(f))
