"""Built-in catalogs: every group of order <= 16, a few larger solvable
groups, direct products up to order 48, and the abelian groups of small order.

All constructions are deterministic, so the catalog is regenerated
identically on every run.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np
import sympy

from .abelian import FiniteAbelianGroup
from .groups import (FiniteGroup, cycles_to_perm, direct_product, from_elements, from_permutations,
                     generated_subgroup, is_nilpotent, quotient_group)


def cyclic(n):
    return FiniteGroup([[(a + b) % n for b in range(n)] for a in range(n)], name=f"C{n}")


def semidirect(base, auto, n, name=None):
    """base x| C_n where the generator of C_n acts by the automorphism ``auto``.

    ``auto`` is a permutation of the element indices of ``base``; elements
    are pairs (x, i) multiplied as (x, i)(y, j) = (x * auto^i(y), i + j).
    """
    auto = np.asarray(auto)
    powers = [np.arange(base.order)]
    for _ in range(n - 1):
        powers.append(auto[powers[-1]])
    if not np.array_equal(auto[powers[-1]], np.arange(base.order)):
        raise ValueError("automorphism order does not divide n")
    t = base.table

    def mul(a, b):
        (x, i), (y, j) = a, b
        return (int(t[x, powers[i][y]]), (i + j) % n)

    gens = [(g, 0) for g in base.generators] + [(0, 1)]
    return from_elements(gens, mul, (0, 0), name=name)[0]


def cyclic_semidirect(m, n, r, name=None):
    """C_m x| C_n with the generator of C_n acting by x -> r x."""
    return semidirect(cyclic(m), [(r * x) % m for x in range(m)], n, name=name or f"C{m}:C{n}")


def dihedral(n):
    """Dihedral group of order 2n."""
    return cyclic_semidirect(n, 2, n - 1, name=f"D{2 * n}")


def dicyclic(n):
    """Dicyclic group of order 4n: <x, y | x^2n, y^2 = x^n, y x y^-1 = x^-1>."""
    m = 2 * n

    def mul(a, b):
        (p, s), (q, t) = a, b
        if s == 0:
            return ((p + q) % m, t)
        if t == 0:
            return ((p - q) % m, 1)
        return ((p - q + n) % m, 0)

    name = "Q8" if n == 2 else f"Dic{n}" if n != 4 else "Q16"
    return from_elements([(1, 0), (0, 1)], mul, (0, 0), name=name)[0]


def symmetric(n):
    if n == 1:
        return from_permutations(1, [], name="S1")[0]
    return from_permutations(n, [cycles_to_perm(n, (0, 1)), cycles_to_perm(n, tuple(range(n)))],
                             name=f"S{n}")[0]


def alternating(n):
    gens = [cycles_to_perm(n, (0, 1, i)) for i in range(2, n)]
    return from_permutations(n, gens, name=f"A{n}")[0]


def _matrix_group(gens, p, name):
    def mul(a, b):
        (a0, a1, a2, a3), (b0, b1, b2, b3) = a, b
        return ((a0 * b0 + a1 * b2) % p, (a0 * b1 + a1 * b3) % p,
                (a2 * b0 + a3 * b2) % p, (a2 * b1 + a3 * b3) % p)
    return from_elements(gens, mul, (1, 0, 0, 1), name=name)[0]


def sl23():
    return _matrix_group([(1, 1, 0, 1), (1, 0, 1, 1)], 3, "SL(2,3)")


def gl23():
    return _matrix_group([(1, 1, 0, 1), (1, 0, 1, 1), (2, 0, 0, 1)], 3, "GL(2,3)")


def product(*groups):
    g = groups[0]
    for h in groups[1:]:
        g = direct_product(g, h)
    g.name = "x".join(x.name for x in groups)
    return g


def elementary(p, k):
    g = product(*([cyclic(p)] * k)) if k > 1 else cyclic(p)
    g.name = f"C{p}^{k}" if k > 1 else f"C{p}"
    return g


def _c4c2_twist():
    """(C4 x C2) x| C2 with c a c^-1 = a b (SmallGroup(16,3))."""
    base = direct_product(cyclic(4), cyclic(2))   # index a*2 + b
    auto = [a * 2 + (b + a) % 2 for a in range(4) for b in range(2)]
    return semidirect(base, auto, 2, name="(C4xC2):C2")


def _pauli():
    """Central product C4 o D8, i.e. (C4 x D8) / <(2, z)>."""
    d8 = dihedral(4)
    cp = direct_product(cyclic(4), d8)
    z = next(g for g in range(1, d8.order) if d8.element_order(g) == 2
             and all(d8.mul(g, h) == d8.mul(h, g) for h in range(d8.order)))
    n = generated_subgroup(cp, [2 * d8.order + z])
    q, _ = quotient_group(cp, n)
    q.name = "C4oD8"
    return q


@lru_cache(maxsize=None)
def small_groups():
    """All 42 groups of order at most 16, keyed by name."""
    gs = [
        cyclic(1), cyclic(2), cyclic(3),
        cyclic(4), elementary(2, 2),
        cyclic(5),
        cyclic(6), symmetric(3),
        cyclic(7),
        cyclic(8), product(cyclic(4), cyclic(2)), elementary(2, 3), dihedral(4), dicyclic(2),
        cyclic(9), elementary(3, 2),
        cyclic(10), dihedral(5),
        cyclic(11),
        cyclic(12), product(cyclic(2), cyclic(6)), alternating(4), dihedral(6), dicyclic(3),
        cyclic(13),
        cyclic(14), dihedral(7),
        cyclic(15),
        cyclic(16), product(cyclic(4), cyclic(4)), _c4c2_twist(), cyclic_semidirect(4, 4, 3),
        product(cyclic(8), cyclic(2)), cyclic_semidirect(8, 2, 5, name="M16"), dihedral(8),
        cyclic_semidirect(8, 2, 3, name="SD16"), dicyclic(4),
        product(cyclic(4), cyclic(2), cyclic(2)), product(cyclic(2), dihedral(4)),
        product(cyclic(2), dicyclic(2)), _pauli(), elementary(2, 4),
    ]
    gs[7].name = "S3"
    return {g.name: g for g in gs}


@lru_cache(maxsize=None)
def extra_groups():
    """Named solvable groups beyond order 16 used by the Frattini battery."""
    gs = [symmetric(4), sl23(), gl23(), product(alternating(4), cyclic(2)),
          product(symmetric(3), symmetric(3)), product(alternating(4), cyclic(3)),
          product(symmetric(3), cyclic(3)), product(alternating(4), cyclic(4)),
          product(symmetric(4), cyclic(2))]
    return {g.name: g for g in gs}


@lru_cache(maxsize=None)
def direct_products(max_order=48):
    """G x H for catalog groups 1 < |G| <= |H|, |G||H| <= max_order.

    Only factors of prime order or order 4 on the left keep the list at desk
    scale; every product of order <= 16 is already an entry of small_groups.
    """
    small = [g for g in small_groups().values() if g.order > 1]
    left = [g for g in small if g.order in (2, 3, 4)]
    out = {}
    for a in left:
        for b in small:
            n = a.order * b.order
            if 16 < n <= max_order and a.order <= b.order:
                g = product(a, b)
                out.setdefault(g.name, g)
    return out


def catalog(kind="small"):
    """Named group catalog: 'small' (order <= 16), 'extended' adds larger groups."""
    cat = dict(small_groups())
    if kind in ("extended", "full"):
        cat.update(extra_groups())
        cat.update(direct_products())
    return cat


def nilpotent_small_groups(max_order=16):
    return {name: g for name, g in small_groups().items() if g.order <= max_order and is_nilpotent(g)}


def abelian_groups_of_order(n):
    """All invariant-factor lists of abelian groups of order n."""
    if n == 1:
        return [FiniteAbelianGroup(())]
    fac = sympy.factorint(n)
    per_prime = []
    for p, e in sorted(fac.items()):
        per_prime.append([[p**a for a in part] for part in _partitions(e)])
    out = []
    for combo in itertools.product(*per_prime):
        width = max(len(c) for c in combo)
        factors = [1] * width
        for c in combo:
            c = sorted(c)
            for i, v in enumerate(c):
                factors[width - len(c) + i] *= v
        out.append(FiniteAbelianGroup(factors))
    out.sort(key=lambda a: (len(a.factors), a.factors))
    return out


def _partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        yield []
        return
    for k in range(min(n, largest), 0, -1):
        for rest in _partitions(n - k, k):
            yield [k] + rest


def abelian_groups_up_to(max_order):
    return [a for n in range(1, max_order + 1) for a in abelian_groups_of_order(n)]
