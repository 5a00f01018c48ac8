import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cohomoforge.batteries import catalog_modules, composition_modules, maschke_modules
from cohomoforge.catalog import catalog
from cohomoforge.errors import HypothesisFailed
from cohomoforge.gmodule import is_irreducible, module_from_generators, submodule, trivial_module
from cohomoforge.groups import center
from cohomoforge.theorems import (certify_decomposition, explicit_coboundary_check, find_carter_subgroups,
                                  frattini_triples, maschke_complement, maschke_decompose, maschke_report,
                                  schur_check, verify_composition_factors, verify_faithful_reduction,
                                  verify_frattini, verify_inf_res, verify_nilpotent_vanishing)

SMALL = catalog("small")


def rotation_module():
    return module_from_generators(SMALL["C4"], [3, 3], {1: [[0, 2], [1, 0]]})


def test_vanishing_on_c3_z7():
    m = module_from_generators(SMALL["C3"], [7], {1: [[2]]})
    rep = verify_nilpotent_vanishing(m)
    assert rep.hypotheses_hold and rep.conclusion_holds is True
    assert rep.data["h1"] == []


def test_vanishing_hypothesis_failures_are_reported():
    s3 = module_from_generators(SMALL["S3"], [3], {x: [[2]] if SMALL["S3"].element_order(x) == 2 else [[1]]
                                                    for x in SMALL["S3"].generators})
    rep = verify_nilpotent_vanishing(s3)
    assert not rep.hypotheses_hold and rep.conclusion_holds is None and rep.passed
    rep = verify_nilpotent_vanishing(trivial_module(SMALL["C2"], [2]))
    assert not rep.hypotheses_hold and rep.conclusion_holds is None


def test_composition_factors_diagonal():
    m = module_from_generators(SMALL["C3"], [7, 7], {1: [[2, 0], [0, 2]]})
    rep = verify_composition_factors(m)
    assert rep.conclusion_holds is True
    # 0, eight lines, whole
    assert rep.data["lattice_size"] == 10


def test_schur_rotation():
    rep = schur_check(rotation_module())
    assert rep.conclusion_holds is True
    assert rep.data["centralizer_order"] == 9
    ok, data = explicit_coboundary_check(rotation_module())
    assert ok and data["derivations"] == 9


def test_schur_reducible_skipped():
    rep = schur_check(trivial_module(SMALL["C2"], [2, 2]))
    assert rep.conclusion_holds is None


@pytest.mark.parametrize("name, count", [("C1", 1), ("S3", 5), ("A4", 6), ("D8", 6), ("C2^2", 5)])
def test_frattini_triple_counts(name, count):
    assert len(frattini_triples(SMALL[name])) == count


def test_carter_subgroups_of_s3():
    assert [c.elements for c in find_carter_subgroups(SMALL["S3"])] == [(0, 1), (0, 3), (0, 4)]


def test_frattini_flags_nonabelian_quotient():
    g = SMALL["S3"]
    triple = frattini_triples(g)[-1]
    rep = verify_frattini(g, triple.normal, triple.carter)
    assert rep.conclusion_holds is True
    assert rep.data["product_order"] == 6
    assert rep.data["hypothesis_abelian_quotient"] is False


def test_maschke_examples():
    rep = maschke_report(module_from_generators(SMALL["C2"], [3, 3], {1: [[2, 0], [0, 2]]}))
    assert rep.conclusion_holds is True and rep.data["summand_orders"] == [3, 3]
    rot = maschke_decompose(rotation_module())
    assert rot.certified and len(rot.summands) == 1
    rep = maschke_report(trivial_module(SMALL["C2"], [2]))
    assert rep.conclusion_holds is None
    with pytest.raises(HypothesisFailed):
        maschke_decompose(trivial_module(SMALL["C2"], [2]))


def test_maschke_complement_is_invariant():
    m = module_from_generators(SMALL["C3"], [7, 7], {1: [[2, 0], [0, 4]]})
    w = submodule(m, [(1, 0)])
    comp = maschke_complement(m, w)
    assert comp.order == 7
    assert (comp + w).order == 49
    for x in comp.generators:
        assert comp.contains(m.act(1, x))


def test_inf_res_and_faithful_reduction():
    # Q8 on F_3^2 through Q8/Z = C2^2: the center acts trivially
    mods = dict(composition_modules())
    m = mods["Q8 on F3^2 via C2^2"]
    z = center(m.group)
    assert verify_inf_res(m, z).conclusion_holds is True
    rep = verify_faithful_reduction(m, z)
    assert rep.hypotheses_hold
    assert rep.conclusion_holds is True


MASCHKE = [m for _, m in maschke_modules()]


@settings(max_examples=14, deadline=None)
@given(st.sampled_from(range(len(MASCHKE))))
def test_maschke_certificates(i):
    m = MASCHKE[i]
    dec = maschke_decompose(m)
    assert dec.certified
    assert np.prod([s.order for s in dec.summands]) == m.coeffs.order
    acc = None
    for s in dec.summands:
        if acc is not None:
            assert (acc.order * s.order) == (acc + s).order
        acc = s if acc is None else acc + s
        for g in m.group.generators:
            for x in s.generators:
                assert s.contains(m.act(g, x))
    assert certify_decomposition(m, dec.summands)["certified"]


MODULES = [m for _, m in catalog_modules(max_group_order=8, per_pair=2)]


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(range(len(MODULES))))
def test_theorem_reports_never_fail(i):
    m = MODULES[i]
    if m.coeffs.order > 49:
        return
    assert verify_nilpotent_vanishing(m).passed
    if m.coeffs.order <= 27:
        assert verify_composition_factors(m).passed
    if is_irreducible(m):
        assert schur_check(m).passed


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(sorted(SMALL)))
def test_frattini_conclusion_on_catalog(name):
    g = SMALL[name]
    for t in frattini_triples(g):
        assert verify_frattini(g, t.normal, t.carter).conclusion_holds
