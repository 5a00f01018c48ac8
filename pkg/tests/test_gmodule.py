import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomoforge.batteries import catalog_modules
from cohomoforge.catalog import catalog
from cohomoforge.cohomology import cohomology_group
from cohomoforge.errors import NotAutomorphism, NotHomomorphic, NotIdentityAtE, NotSubmodule
from cohomoforge.gmodule import (GModule, QuotientBy, Restrict, SubOn, action_ring_centralizer, composition_series,
                                 derive_module, invariants, is_irreducible, module_from_generators, spin_submodule,
                                 submodule, submodule_lattice, trivial_module)
from cohomoforge.groups import enumerate_subgroups

SMALL = catalog("small")
ROT = [[0, 2], [1, 0]]   # rotation by 90 degrees over F_3


def rotation_module():
    return module_from_generators(SMALL["C4"], [3, 3], {1: ROT})


def test_validation_errors():
    c2 = SMALL["C2"]
    with pytest.raises(NotIdentityAtE):
        GModule(c2, [3], [[[2]], [[2]]])
    with pytest.raises(NotAutomorphism):
        GModule(c2, [4], [[[1]], [[2]]])
    with pytest.raises(NotHomomorphic):
        GModule(SMALL["C3"], [7], [[[1]], [[3]], [[2]]])
    with pytest.raises(NotHomomorphic):
        module_from_generators(SMALL["C3"], [7], {1: [[3]]})


def test_c3_on_z7_parses():
    m = module_from_generators(SMALL["C3"], [7], {1: [[2]]})
    assert [int(x[0, 0]) for x in m.rho] == [1, 2, 4]
    assert invariants(m).order == 1


def test_invariants_of_negation():
    m = module_from_generators(SMALL["C2"], [4], {1: [[3]]})
    inv = invariants(m)
    assert sorted(inv.elements()) == [(0,), (2,)]


def test_irreducibility_and_composition():
    rot = rotation_module()
    assert is_irreducible(rot)
    assert composition_series(rot).length == 1
    triv = trivial_module(SMALL["C2"], [2, 2])
    assert not is_irreducible(triv)
    assert composition_series(triv).factor_orders() == [2, 2]
    assert composition_series(trivial_module(SMALL["C2"], [8])).length == 3


def test_submodule_lattice_counts():
    # F_2^2 with trivial action: 0, three lines, whole
    assert len(submodule_lattice(trivial_module(SMALL["C2"], [2, 2]))) == 5
    # Z/8: 4 subgroups
    assert len(submodule_lattice(trivial_module(SMALL["C1"], [8]))) == 4
    assert len(submodule_lattice(rotation_module())) == 2


def test_action_ring_examples():
    rep = action_ring_centralizer(rotation_module())
    assert rep.centralizer_order == 9 and rep.centralizer_is_field
    rep = action_ring_centralizer(trivial_module(SMALL["C3"], [5]))
    assert rep.centralizer_order == 5 and rep.centralizer_is_field
    rep = action_ring_centralizer(trivial_module(SMALL["C2"], [2, 2]))
    assert rep.centralizer_order == 16 and not rep.centralizer_is_field


def test_derived_modules():
    m = module_from_generators(SMALL["C4"], [4], {1: [[3]]})
    sub = [s for s in enumerate_subgroups(SMALL["C4"]) if s.order == 2][0]
    res, link = derive_module(m, Restrict(sub))
    assert res.group.order == 2 and res.is_trivial_action()
    twos = submodule(m, [(2,)])
    q, link = derive_module(m, QuotientBy(twos))
    assert q.coeffs.factors == (2,) and q.is_trivial_action()
    s, link = derive_module(m, SubOn(twos))
    assert s.coeffs.factors == (2,)
    rot = rotation_module()
    with pytest.raises(NotSubmodule):
        derive_module(rot, SubOn(submodule(rot, [(1, 0)])))


MODULES = catalog_modules(max_group_order=8, per_pair=2)


def module_at(i):
    return MODULES[i][1] if isinstance(MODULES[i], tuple) else MODULES[i]


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(MODULES))))
def test_invariants_equal_degree_zero(i):
    m = module_at(i)
    h0 = cohomology_group(m, 0)
    inv = invariants(m)
    assert h0.group.order == inv.order
    assert sorted(h0.group.factors) == sorted(inv.presentation.factors)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(range(len(MODULES))), st.data())
def test_spin_is_minimal(i, data):
    m = module_at(i)
    if m.coeffs.order > 64:
        return
    x = data.draw(st.sampled_from(list(m.coeffs.elements())))
    s = spin_submodule(m, [x])
    assert s.contains(x)
    for g in range(m.group.order):
        for y in s.generators:
            assert s.contains(m.act(g, y))
    # every invariant subgroup containing x contains the spin
    for t in submodule_lattice(m):
        if t.contains(x):
            assert s <= t


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(range(len(MODULES))), st.randoms(use_true_random=False))
def test_composition_length_and_schur(i, rnd):
    m = module_at(i)
    if m.coeffs.order > 81:
        return
    series = composition_series(m)
    assert np.prod(series.factor_orders(), dtype=np.int64) == m.coeffs.order
    for a, b in zip(series.chain, series.chain[1:]):
        assert a <= b
        q, link = derive_module(m, QuotientBy(a))
        factor, _ = derive_module(q, SubOn(submodule(q, [link.projection(x) for x in b.generators])))
        assert is_irreducible(factor)
    # Jordan-Hoelder: a random maximal chain through the lattice has the same length
    lattice = submodule_lattice(m)
    current, length = lattice[0], 0
    while not current.is_whole():
        above = [t for t in lattice if current <= t and t.order > current.order]
        covers = [t for t in above if not any(u.order < t.order and current <= u and u <= t and u.order > current.order
                                              for u in above)]
        current = rnd.choice(covers)
        length += 1
    assert length == series.length
    if series.length == 1:
        assert action_ring_centralizer(m).centralizer_is_field
