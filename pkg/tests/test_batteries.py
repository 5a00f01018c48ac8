import collections
import itertools

import numpy as np
import pytest

from cohomoforge import batteries as bt
from cohomoforge.abelian import FiniteAbelianGroup
from cohomoforge.catalog import abelian_groups_up_to, catalog
from cohomoforge.gmodule import invariants

SMALL = catalog("small")


def automorphisms_by_images(factors):
    """Aut(A) by trying every image tuple of the standard generators."""
    a = FiniteAbelianGroup(factors)
    elems = list(a.elements())
    mods = np.array(a.moduli)
    out = []
    for images in itertools.product(elems, repeat=a.rank):
        mat = np.array(images, dtype=np.int64).reshape(a.rank, a.rank).T
        # well defined: d_j * image_j = 0
        if any(np.any((a.moduli[j] * mat[:, j]) % mods) for j in range(a.rank)):
            continue
        seen = {tuple(int(v) for v in (mat @ np.array(x)) % mods) for x in elems}
        if len(seen) == len(elems):
            out.append(mat)
    return out


@pytest.mark.parametrize("factors, order", [((2, 2), 6), ((2, 4), 8), ((3, 3), 48), ((9,), 6), ((7,), 6),
                                            ((2, 2, 2), 168), ((8,), 4)])
def test_automorphism_pool_sizes(factors, order):
    assert len(bt.automorphism_pool(factors)) == order
    assert len(automorphisms_by_images(factors)) == order


def count_homs(group, auts, mods):
    """Homomorphisms G -> Aut(A) for G cyclic or C2 x C2, counted from element orders."""
    eye = np.eye(auts[0].shape[0], dtype=np.int64)

    def power(m, e):
        out = eye
        for _ in range(e):
            out = (out @ m) % mods[:, None]
        return out

    if group.name == "C1":
        return 1
    if group.name.startswith("C") and group.name[1:].isdigit():
        n = group.order
        return sum(np.array_equal(power(m, n), eye) for m in auts)
    # C2 x C2: commuting pairs of elements squaring to 1
    invol = [m for m in auts if np.array_equal(power(m, 2), eye)]
    return sum(np.array_equal((x @ y) % mods[:, None], (y @ x) % mods[:, None]) for x in invol for y in invol)


def test_oracle_module_count_is_all_homomorphisms():
    mods = bt.small_oracle_modules(4, 9)
    assert len(mods) == 575
    counts = collections.Counter((m.group.name, m.coeffs.factors) for _, m in mods)
    for name in ("C1", "C2", "C3", "C4", "C2^2"):
        for a in abelian_groups_up_to(9):
            if a.order == 1:
                continue
            auts = automorphisms_by_images(a.factors)
            want = count_homs(SMALL[name], auts, np.array(a.moduli))
            assert counts[(name, a.factors)] == want, (name, a.factors)


def test_action_family_qualifying():
    fam = list(bt.action_family(SMALL["C3"], [7]))
    assert len(fam) == 2
    assert all(invariants(m).order == 1 for m in fam)
    assert len(list(bt.action_family(SMALL["C3"], [7], qualifying_only=False))) == 3


def test_forced_fixed_points():
    assert bt.forced_fixed_points(SMALL["C4"], FiniteAbelianGroup([2, 2]))
    assert not bt.forced_fixed_points(SMALL["C4"], FiniteAbelianGroup([3]))
    assert not bt.forced_fixed_points(SMALL["C6"], FiniteAbelianGroup([2]))
    # the pruning is sound: p-groups acting on p-groups always fix something
    for name in ("C2", "C4", "C2^2", "D8", "Q8", "C3"):
        g = SMALL[name]
        for a in abelian_groups_up_to(9):
            if bt.forced_fixed_points(g, a):
                for m in bt.action_family(g, a, qualifying_only=False, max_actions=10):
                    assert invariants(m).order > 1


def test_catalog_sizes():
    assert len(bt.catalog_modules()) == 270
    assert len(bt.maschke_modules()) == 14
    assert len(bt.composition_modules()) == 12
    assert len(bt.ses_catalog()) == 12
    assert len(bt.inf_res_pairs()) == 1038


def test_vanishing_battery_subset():
    groups = {k: SMALL[k] for k in ("C3", "C5", "C2^2", "Q8")}
    mods = [FiniteAbelianGroup(f) for f in ([2, 2], [3], [7], [5, 5])]
    res = bt.vanishing_battery(groups=groups, modules=mods)
    assert res.passed and res.failures == []
    assert res.instances > 0
