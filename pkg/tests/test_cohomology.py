import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomoforge import bruteforce as bf
from cohomoforge.batteries import catalog_modules, ses_catalog, small_oracle_modules
from cohomoforge.catalog import catalog
from cohomoforge.cohomology import (Cochain, ShortExactSequence, apply_differential, check_complex,
                                    check_inf_res_exact, check_long_exact, coboundary, cohomology_group,
                                    conj_action_fixed, connecting_hom, connecting_map, differential, h1_der,
                                    h1_maps, is_cocycle, remark_inner_check, section_independence)
from cohomoforge.config import use_limits
from cohomoforge.errors import DegreeCapExceeded, SizeBudgetExceeded, ValidationError
from cohomoforge.gmodule import module_from_generators, trivial_module
from cohomoforge.groups import center, enumerate_subgroups, is_normal

SMALL = catalog("small")


def factors(h):
    return list(h.group.factors)


def negation(name, m):
    g = SMALL[name]
    gens = {x: [[m - 1]] for x in g.generators}
    return module_from_generators(g, [m], gens)


# frozen values: classical computations, each also checked against brute force below
FROZEN = [
    ("C2", [2], 1, [2]), ("C2", [2], 2, [2]),
    ("C4", [8], 1, [4]), ("C4", [8], 2, [4]),
    ("C3", [9], 2, [3]), ("C5", [3], 1, []),
    ("C2^2", [2], 1, [2, 2]), ("C2^2", [2], 2, [2, 2, 2]),
    ("S3", [2], 1, [2]), ("S3", [2], 2, [2]), ("S3", [3], 1, []),
    ("Q8", [2], 1, [2, 2]), ("Q8", [2], 2, [2, 2]),
    ("D8", [2], 2, [2, 2, 2]),
]


@pytest.mark.parametrize("name, coeffs, n, expected", FROZEN)
def test_trivial_coefficients(name, coeffs, n, expected):
    assert factors(cohomology_group(trivial_module(SMALL[name], coeffs), n)) == expected


def test_negation_on_z4():
    m = negation("C2", 4)
    assert factors(cohomology_group(m, 0)) == [2]
    assert factors(cohomology_group(m, 1)) == [2]
    assert factors(cohomology_group(m, 2)) == [2]


def test_c3_on_z7_vanishes():
    m = module_from_generators(SMALL["C3"], [7], {1: [[2]]})
    for n in range(3):
        assert factors(cohomology_group(m, n)) == []
    assert factors(h1_der(m)) == []


def test_negation_on_z5_has_no_invariants():
    assert factors(cohomology_group(negation("C2", 5), 0)) == []


@pytest.mark.parametrize("name, coeffs, n, expected", [f for f in FROZEN if SMALL[f[0]].order <= 4])
def test_frozen_against_bruteforce(name, coeffs, n, expected):
    assert bf.invariant_factors(trivial_module(SMALL[name], coeffs), n) == expected


def test_bruteforce_negation():
    m = negation("C2", 4)
    assert bf.invariant_factors(m, 1) == [2]
    assert bf.invariant_factors(m, 2) == [2]


def test_inhomogeneous_sign_convention():
    # d f(g, h) = g.f(h) - f(gh) + f(g) on 1-cochains
    m = negation("C2", 4)
    f = Cochain(m, 1, [[1], [3]])
    df = apply_differential(m, 1, f.values[None])[0]
    t = m.group.table
    for g in range(2):
        for h in range(2):
            want = (m.act(g, f(h))[0] - f(int(t[g, h]))[0] + f(g)[0]) % 4
            assert df[g * 2 + h, 0] == want


def test_coboundary_is_inner_derivation():
    m = negation("C2", 4)
    d = coboundary(m, (1,))
    assert d(0) == (0,) and d(1) == (2,)
    assert is_cocycle(d)


def test_representatives_are_cocycles():
    for name in ("S3", "Q8", "C2^2"):
        h = cohomology_group(trivial_module(SMALL[name], [2]), 2)
        for rep in h.representatives:
            assert is_cocycle(rep)
            assert not h.is_coboundary(rep)


def test_degree_gates():
    m = trivial_module(SMALL["C2"], [2])
    with pytest.raises(DegreeCapExceeded):
        cohomology_group(m, 3)
    with pytest.raises(DegreeCapExceeded):
        cohomology_group(m, 4)
    with use_limits(degree_cap=3):
        assert factors(cohomology_group(m, 3)) == [2]
    big = trivial_module(SMALL["C2^3"], [2, 2, 2, 2])
    with pytest.raises(SizeBudgetExceeded):
        cohomology_group(big, 3)
    with use_limits(size_budget=100):
        with pytest.raises(SizeBudgetExceeded):
            differential(m, 3)


def test_h1_two_routes_on_frozen():
    for name, coeffs, n, expected in FROZEN:
        if n == 1:
            assert factors(h1_der(trivial_module(SMALL[name], coeffs))) == expected


def test_inflation_restriction_c4():
    m = negation("C4", 4)
    sub = [s for s in enumerate_subgroups(SMALL["C4"]) if s.order == 2][0]
    report = check_inf_res_exact(m, sub)
    assert report.exact
    maps = h1_maps(m, sub)
    comp = maps.restriction.compose(maps.inflation)
    assert comp.is_zero()


def test_fixed_points_contain_restriction_image():
    g = SMALL["D8"]
    m = trivial_module(g, [2])
    for sub in enumerate_subgroups(g):
        if not is_normal(g, sub):
            continue
        maps = h1_maps(m, sub)
        fixed = conj_action_fixed(m, sub)
        for x in maps.h1.group.elements():
            assert fixed.contains(maps.restriction(x))


def nonsplit(action):
    c2 = SMALL["C2"]
    mats = {"trivial": ([[1]], [[1]], [[1]]), "negation": ([[1]], [[3]], [[1]])}[action]
    a = module_from_generators(c2, [2], {1: mats[0]})
    b = module_from_generators(c2, [4], {1: mats[1]})
    c = module_from_generators(c2, [2], {1: mats[2]})
    return ShortExactSequence(a, b, c, [[2]], [[1]])


def test_connecting_map_nonsplit():
    # trivial action: delta_0 = 0 since Z/4 -> Z/2 is onto on invariants; delta_1 is the Bockstein
    seq = nonsplit("trivial")
    assert connecting_map(seq).is_zero()
    hc, ha = cohomology_group(seq.right, 1), cohomology_group(seq.left, 2)
    assert not connecting_hom(seq, 1, hc, ha).is_zero()
    # negation: B^G = {0, 2} dies in C, so delta_0 is nonzero
    assert not connecting_map(nonsplit("negation")).is_zero()


def test_connecting_map_split_is_zero():
    c2 = SMALL["C2"]
    a, c = trivial_module(c2, [2]), trivial_module(c2, [2])
    b = trivial_module(c2, [2, 2])
    seq = ShortExactSequence(a, b, c, [[1], [0]], [[0, 1]])
    assert connecting_map(seq).is_zero()


def test_bad_sequence_rejected():
    c2 = SMALL["C2"]
    a, b, c = trivial_module(c2, [2]), trivial_module(c2, [4]), trivial_module(c2, [2])
    with pytest.raises(ValidationError):
        ShortExactSequence(a, b, c, [[2]], [[2]])


def test_long_exact_sequences():
    for name, seq in ses_catalog():
        report = check_long_exact(seq, 1)
        assert report.exact, name
        ok, data = section_independence(seq, trials=5, seed=1)
        assert ok, (name, data)


def test_remark_inner_on_d8():
    g = SMALL["D8"]
    m = module_from_generators(g, [2, 2], {x: np.eye(2, dtype=int) for x in g.generators})
    assert remark_inner_check(m)[0]


# ---------------------------------------------------------------------------
# properties

MODULES = [m for _, m in catalog_modules(max_group_order=8, per_pair=2)]
ORACLE = [m for _, m in small_oracle_modules(4, 9)]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(MODULES))), st.sampled_from([0, 1, 2]))
def test_d_squared_zero(i, n):
    m = MODULES[i]
    if n == 2 and m.group.order ** 3 * m.coeffs.rank > 2000:
        return
    assert check_complex(m, n)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(MODULES))))
def test_h1_two_paths(i):
    m = MODULES[i]
    if m.coeffs.order > 16:
        return
    a, b = h1_der(m), cohomology_group(m, 1)
    assert factors(a) == factors(b)
    # representatives of one path are cocycles of the other, and classes match up to coboundaries
    for rep in a.cohomology.representatives:
        assert b.is_cocycle(rep)
    for rep in b.representatives:
        assert a.cohomology.is_cocycle(rep)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(range(len(ORACLE))), st.sampled_from([1, 2]))
def test_oracle_sample(i, n):
    m = ORACLE[i]
    assert factors(cohomology_group(m, n)) == bf.invariant_factors(m, n)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(range(len(MODULES))))
def test_order_of_h1_is_der_over_ider(i):
    m = MODULES[i]
    if m.coeffs.order > 16:
        return
    res = h1_der(m)
    assert res.group.order * res.ider.order == res.der.order
    # |IDer| = |A| / |A^G|
    assert res.ider.order * cohomology_group(m, 0).order == m.coeffs.order


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(range(len(MODULES))))
def test_res_inf_is_zero_on_central_subgroups(i):
    m = MODULES[i]
    if m.coeffs.order > 16:
        return
    z = center(m.group)
    maps = h1_maps(m, z)
    assert maps.restriction.compose(maps.inflation).is_zero()
    assert check_inf_res_exact(m, z).exact


@settings(max_examples=20, deadline=None)
@given(st.integers(2, 6), st.integers(2, 12), st.sampled_from([1, 2]))
def test_cyclic_trivial_formula(order, k, n):
    g = catalog("small")[f"C{order}"]
    h = cohomology_group(trivial_module(g, [k]), n)
    d = math.gcd(order, k)
    assert factors(h) == ([d] if d > 1 else [])
