import itertools

import pytest
from hypothesis import given, settings, strategies as st

from cohomoforge.catalog import abelian_groups_of_order, catalog, cyclic
from cohomoforge.config import use_limits
from cohomoforge.errors import (MissingInverse, NoIdentityAtZero, NotAssociative, NotClosed, NotNormal,
                                OrderCapExceeded)
from cohomoforge.groups import (center, conjugate_subgroup, cycles_to_perm, direct_product, enumerate_subgroups,
                                from_permutations, is_nilpotent, is_normal, is_solvable, lower_central_series,
                                normalizer, quotient_group, validate_group)

SMALL = catalog("small")


def test_validation_errors():
    with pytest.raises(NotClosed):
        validate_group([[0, 1], [1, 2]])
    with pytest.raises(NoIdentityAtZero):
        validate_group([[1, 0], [0, 1]])
    with pytest.raises(MissingInverse):
        validate_group([[0, 1], [1, 1]])
    # a Latin square with identity 0 that is not associative
    loop = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    with pytest.raises(NotAssociative):
        validate_group(loop)


def test_minimal_table():
    g = validate_group([[0, 1], [1, 0]])
    assert g.order == 2 and g.is_abelian()


def test_permutation_closure():
    g, perms = from_permutations(3, [cycles_to_perm(3, (0, 1)), cycles_to_perm(3, (0, 1, 2))])
    assert g.order == 6 and not g.is_abelian()
    assert tuple(perms[0]) == (0, 1, 2)
    with use_limits(order_cap=10):
        with pytest.raises(OrderCapExceeded):
            from_permutations(4, [cycles_to_perm(4, (0, 1)), cycles_to_perm(4, (0, 1, 2, 3))])


@pytest.mark.parametrize("name, count", [("C1", 1), ("C4", 3), ("S3", 6), ("C2^2", 5), ("D8", 10), ("Q8", 6),
                                         ("A4", 10), ("C2^3", 16)])
def test_subgroup_counts(name, count):
    assert len(enumerate_subgroups(SMALL[name])) == count


def test_catalog_orders_and_abelian_counts():
    assert len(SMALL) == 42
    assert all(g.order <= 16 for g in SMALL.values())
    # number of abelian groups of order n: 1, 1, 2, 5 for n = 7, 6, 4, 16
    assert [len(abelian_groups_of_order(n)) for n in (7, 6, 4, 16)] == [1, 1, 2, 5]
    # groups of order 8 and 16 in the catalog: 5 and 14 isomorphism classes
    assert sum(g.order == 8 for g in SMALL.values()) == 5
    assert sum(g.order == 16 for g in SMALL.values()) == 14


def test_center_and_nilpotency():
    assert center(SMALL["S3"]).order == 1
    assert center(SMALL["D8"]).order == 2
    assert center(SMALL["Q8"]).order == 2
    assert lower_central_series(SMALL["D8"]).nilpotency_class == 2
    assert lower_central_series(SMALL["C2^2"]).nilpotency_class == 1
    assert lower_central_series(SMALL["S3"]).nilpotency_class is None
    assert not is_nilpotent(SMALL["A4"]) and is_solvable(SMALL["A4"])
    assert is_solvable(catalog("extended")["S4"])


def test_quotient_group():
    g = SMALL["D8"]
    q, proj = quotient_group(g, center(g))
    assert q.order == 4 and q.is_abelian()
    assert proj.is_homomorphism()
    assert proj.kernel().elements == center(g).elements
    s3 = SMALL["S3"]
    non_normal = [s for s in enumerate_subgroups(s3) if s.order == 2][0]
    with pytest.raises(NotNormal):
        quotient_group(s3, non_normal)


def test_normalizer():
    s3 = SMALL["S3"]
    two = [s for s in enumerate_subgroups(s3) if s.order == 2][0]
    assert normalizer(s3, two).elements == two.elements
    three = [s for s in enumerate_subgroups(s3) if s.order == 3][0]
    assert normalizer(s3, three).order == 6


def test_direct_product():
    g = direct_product(cyclic(2), cyclic(3))
    assert g.order == 6 and g.is_abelian()
    assert max(g.element_orders) == 6


_names = st.sampled_from(sorted(SMALL))


@settings(max_examples=30, deadline=None)
@given(_names)
def test_inverse_of_product(name):
    g = SMALL[name]
    for a, b in itertools.product(range(g.order), repeat=2):
        assert g.inv(g.mul(a, b)) == g.mul(g.inv(b), g.inv(a))


@settings(max_examples=20, deadline=None)
@given(_names)
def test_lower_central_series_descends_and_is_normal(name):
    g = SMALL[name]
    series = lower_central_series(g)
    for a, b in zip(series.terms, series.terms[1:]):
        assert b <= a
    for t in series.terms:
        assert is_normal(g, t)


@settings(max_examples=20, deadline=None)
@given(_names)
def test_p_groups_have_center(name):
    g = SMALL[name]
    n = g.order
    primes = [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]
    if len(primes) == 1:
        assert lower_central_series(g).nilpotent
        assert center(g).order > 1


@settings(max_examples=15, deadline=None)
@given(_names)
def test_subgroups_closed_under_conjugation(name):
    g = SMALL[name]
    subs = {s.elements for s in enumerate_subgroups(g)}
    for s in enumerate_subgroups(g):
        for x in g.generators:
            assert conjugate_subgroup(g, s, x).elements in subs


@settings(max_examples=15, deadline=None)
@given(_names, st.data())
def test_quotient_projection_kernel(name, data):
    g = SMALL[name]
    normals = [s for s in enumerate_subgroups(g) if is_normal(g, s)]
    n = data.draw(st.sampled_from(normals))
    q, proj = quotient_group(g, n)
    assert q.order * n.order == g.order
    assert proj.is_homomorphism()
    assert set(proj.map) == set(range(q.order))
    assert proj.kernel().elements == n.elements
