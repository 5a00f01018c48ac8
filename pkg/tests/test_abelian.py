import numpy as np
import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from cohomoforge.abelian import (AbelianHom, FiniteAbelianGroup, determinant, direct_sum, kernel_image, matmul,
                                 preimage, quotient_by, smith_normal_form, subgroup, subquotient)
from cohomoforge.errors import NotWellDefined, ValidationError


def test_snf_frozen_example():
    r = smith_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    assert r.diagonal == [2, 6, 12]


def test_snf_rectangular_and_zero():
    assert smith_normal_form([[0, 0], [0, 0]]).diagonal == [0, 0]
    assert smith_normal_form([[4, 6]]).diagonal == [2]
    assert smith_normal_form([[6], [4]]).diagonal == [2]


def test_invariant_factor_form():
    assert FiniteAbelianGroup.from_orders([4, 6]).factors == (2, 12)
    assert FiniteAbelianGroup.from_orders([2, 3]).factors == (6,)
    assert FiniteAbelianGroup([2, 2]).factors == (2, 2)
    with pytest.raises(ValidationError):
        FiniteAbelianGroup([4, 6])


def test_hom_well_definedness():
    with pytest.raises(NotWellDefined):
        AbelianHom(FiniteAbelianGroup([2]), FiniteAbelianGroup([3]), [[1]])
    AbelianHom(FiniteAbelianGroup([2]), FiniteAbelianGroup([4]), [[2]])


def test_kernel_image_of_reduction():
    h = AbelianHom(FiniteAbelianGroup([4]), FiniteAbelianGroup([2]), [[1]])
    (k, kemb), (im, iemb) = kernel_image(h)
    assert k.factors == (2,) and im.factors == (2,)
    assert k.order * im.order == 4
    for x in k.elements():
        assert h(kemb(x)) == (0,)


def test_quotient_and_section():
    a = FiniteAbelianGroup([2, 4])
    q, proj, section = quotient_by(a, [(0, 2)])
    assert q.factors == (2, 2)
    for c in q.elements():
        assert proj(section(c)) == tuple(c)
    kernel = {x for x in a.elements() if proj(x) == q.zero()}
    assert kernel == {(0, 0), (0, 2)}


def test_direct_sum_and_subgroup():
    assert direct_sum(FiniteAbelianGroup([2]), FiniteAbelianGroup([3]))[0].factors == (6,)
    assert direct_sum(FiniteAbelianGroup([2, 2]), FiniteAbelianGroup([]))[0].factors == (2, 2)
    assert subgroup(FiniteAbelianGroup([4, 4]), [(2, 0), (0, 2)]).group.factors == (2, 2)


def test_preimage():
    h = AbelianHom(FiniteAbelianGroup([2, 4]), FiniteAbelianGroup([4]), [[2, 2]])
    for y in [(0,), (2,)]:
        x = preimage(h, y)
        assert h(x) == y
    assert preimage(h, (1,)) is None


def test_subquotient_against_enumeration():
    # ker(x -> 2x on Z/4 + Z/8) / <(2, 4)>
    a = FiniteAbelianGroup([4, 8])
    mat = np.array([[2, 0], [0, 2]])
    sq = subquotient(a.moduli, kernel=(mat, a.moduli), boundaries=[[2, 4]])
    kernel = [x for x in a.elements() if (2 * x[0]) % 4 == 0 and (2 * x[1]) % 8 == 0]
    assert sq.group.order == len(kernel) // 2
    assert sq.group.factors == (2,)


_entries = st.integers(min_value=-10**6, max_value=10**6)


@st.composite
def int_matrices(draw, max_dim=20):
    rows = draw(st.integers(1, max_dim))
    cols = draw(st.integers(1, max_dim))
    return draw(st.lists(st.lists(_entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows))


@settings(max_examples=25, deadline=None)
@given(int_matrices())
def test_snf_round_trip(m):
    r = smith_normal_form(m)
    assert matmul(matmul(r.U, m), r.V) == r.D
    assert abs(determinant(r.U)) == 1 and abs(determinant(r.V)) == 1
    d = [x for x in r.diagonal]
    assert all(x >= 0 for x in d)
    for x, y in zip(d, d[1:]):
        assert (y == 0) or (x != 0 and y % x == 0)
    for i, row in enumerate(r.D):
        for j, x in enumerate(row):
            if i != j:
                assert x == 0


@settings(max_examples=30, deadline=None)
@given(int_matrices(max_dim=5).filter(lambda m: len(m) == len(m[0])))
def test_snf_matches_sympy(m):
    ours = [x for x in smith_normal_form(m).diagonal]
    mat = sympy.Matrix(m)
    theirs = sympy_snf(mat, domain=sympy.ZZ)
    theirs = [abs(int(theirs[i, i])) for i in range(min(mat.shape))]
    assert sorted(ours) == sorted(theirs)


_orders = st.lists(st.integers(2, 12), min_size=0, max_size=3)


@settings(max_examples=40, deadline=None)
@given(_orders, _orders)
def test_direct_sum_order_multiplicative(xs, ys):
    a, b = FiniteAbelianGroup.from_orders(xs), FiniteAbelianGroup.from_orders(ys)
    s = direct_sum(a, b)[0]
    assert s.order == a.order * b.order
    for x, y in zip(s.factors, s.factors[1:]):
        assert y % x == 0


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=2), st.data())
def test_quotient_kernel_recovers_span(orders, data):
    a = FiniteAbelianGroup.from_orders(orders)
    elems = list(a.elements())
    gens = data.draw(st.lists(st.sampled_from(elems), max_size=2))
    q, proj, _ = quotient_by(a, gens)
    span = {a.zero()}
    frontier = [a.zero()]
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = a.add(x, g)
            if y not in span:
                span.add(y)
                frontier.append(y)
    kernel = {x for x in elems if proj(x) == q.zero()}
    assert kernel == span


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=2), st.lists(st.integers(2, 6), min_size=1, max_size=2),
       st.data())
def test_kernel_image_order_equation(xs, ys, data):
    a, b = FiniteAbelianGroup.from_orders(xs), FiniteAbelianGroup.from_orders(ys)
    # a random well-defined hom: each generator goes to an element of compatible order
    cols = []
    for d in a.factors:
        ok = [y for y in b.elements() if b.element_order(y) and d % b.element_order(y) == 0]
        cols.append(data.draw(st.sampled_from(ok)))
    mat = np.array(cols, dtype=np.int64).reshape(a.rank, b.rank).T
    h = AbelianHom(a, b, mat)
    (k, kemb), (im, iemb) = kernel_image(h)
    assert k.order * im.order == a.order
    for x in k.elements():
        assert h(kemb(x)) == b.zero()
    images = {iemb(x) for x in im.elements()}
    assert len(images) == im.order
    assert images == {h(x) for x in a.elements()}
