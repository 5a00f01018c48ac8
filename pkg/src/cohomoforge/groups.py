"""Finite groups given by Cayley tables.

Elements are the integers 0..n-1 with 0 the identity; ``table[g, h]`` is
the index of g*h.  Conjugation is s^g = g^-1 s g throughout.
"""

from __future__ import annotations

import dataclasses
from collections import deque
from functools import cached_property

import numpy as np

from .config import get_limits
from .errors import (MissingInverse, NoIdentityAtZero, NotAssociative, NotClosed, NotNormal,
                     NotSubgroup, OrderCapExceeded, ValidationError)


class FiniteGroup:
    def __init__(self, table, name=None):
        t = np.array(table, dtype=np.int64)
        t.setflags(write=False)
        self.table = t
        self.order = t.shape[0]
        self.name = name

    def __repr__(self):
        return f"FiniteGroup({self.name or ''}, order={self.order})"

    def mul(self, g, h):
        return int(self.table[g, h])

    @cached_property
    def inverses(self):
        inv = np.argmin(self.table, axis=1)  # the unique h with g*h == 0
        inv.setflags(write=False)
        return inv

    def inv(self, g):
        return int(self.inverses[g])

    def conj(self, s, g):
        """s^g = g^-1 s g."""
        return int(self.table[self.table[self.inverses[g], s], g])

    def commutator(self, a, b):
        """[a, b] = a^-1 b^-1 a b."""
        t = self.table
        return int(t[t[self.inverses[a], self.inverses[b]], t[a, b]])

    def power(self, g, n):
        x = 0
        for _ in range(n % self.element_order(g)):
            x = int(self.table[x, g])
        return x

    @cached_property
    def element_orders(self):
        orders = []
        for g in range(self.order):
            x, k = g, 1
            while x != 0:
                x = int(self.table[x, g])
                k += 1
            orders.append(k)
        return tuple(orders)

    def element_order(self, g):
        return self.element_orders[g]

    @cached_property
    def generators(self):
        """A small generating set, chosen greedily in index order."""
        gens = []
        current = {0}
        for g in range(1, self.order):
            if g not in current:
                gens.append(g)
                current = set(generated_elements(self, gens))
                if len(current) == self.order:
                    break
        return tuple(gens)

    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    @cached_property
    def whole(self):
        return Subgroup(self, tuple(range(self.order)))

    @cached_property
    def trivial(self):
        return Subgroup(self, (0,))

    def subgroup(self, elements):
        return make_subgroup(self, elements)


@dataclasses.dataclass(frozen=True)
class Subgroup:
    parent: FiniteGroup = dataclasses.field(compare=False, hash=False, repr=False)
    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, g):
        return g in self.elementset

    @cached_property
    def elementset(self):
        return frozenset(self.elements)

    def __le__(self, other):
        return self.elementset <= other.elementset

    def __lt__(self, other):
        return self.elementset < other.elementset

    def is_trivial(self):
        return self.elements == (0,)

    def as_group(self, name=None):
        """The subgroup as a FiniteGroup, plus the list new index -> parent index."""
        idx = {g: i for i, g in enumerate(self.elements)}
        t = self.parent.table
        table = [[idx[int(t[a, b])] for b in self.elements] for a in self.elements]
        return FiniteGroup(table, name=name), list(self.elements)


@dataclasses.dataclass(frozen=True)
class GroupHom:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple

    def __call__(self, g):
        return self.map[g]

    def kernel(self):
        return Subgroup(self.source, tuple(g for g in range(self.source.order) if self.map[g] == 0))

    def is_homomorphism(self):
        m = np.array(self.map)
        return bool(m[0] == 0 and np.array_equal(m[self.source.table], self.target.table[m[:, None], m[None, :]]))


# ---------------------------------------------------------------------------
# construction


def validate_group(table, name=None):
    """Check the group axioms on a Cayley table and return the FiniteGroup."""
    t = np.asarray(table)
    if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
        raise NotClosed(f"table must be a non-empty square array, got shape {t.shape}")
    n = t.shape[0]
    if not np.issubdtype(t.dtype, np.integer):
        raise NotClosed("table entries must be integers")
    bad = np.argwhere((t < 0) | (t >= n))
    if bad.size:
        a, b = (int(v) for v in bad[0])
        raise NotClosed(f"product {a}*{b} = {int(t[a, b])} is outside 0..{n - 1}", a=a, b=b)
    idx = np.arange(n)
    if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
        g = int(np.flatnonzero((t[0] != idx) | (t[:, 0] != idx))[0])
        raise NoIdentityAtZero(f"element 0 is not a two-sided identity (fails at {g})", g=g)
    for g in range(n):
        right = np.flatnonzero(t[g] == 0)
        left = np.flatnonzero(t[:, g] == 0)
        if right.size == 0 or left.size == 0 or not set(right.tolist()) & set(left.tolist()):
            raise MissingInverse(f"element {g} has no two-sided inverse", g=g)
    _check_associative(t)
    return FiniteGroup(t, name=name)


def _check_associative(t):
    n = t.shape[0]
    if n <= 128:
        lhs = t[t[:, :, None], np.arange(n)[None, None, :]]       # (ab)c
        rhs = t[np.arange(n)[:, None, None], t[None, :, :]]       # a(bc)
        bad = np.argwhere(lhs != rhs)
    else:
        # Light's test over a generating set of the magma
        gens = _magma_generators(t)
        bad = np.zeros((0, 3), dtype=np.int64)
        for s in gens:
            lhs = t[t[:, s][:, None], np.arange(n)[None, :]]
            rhs = t[np.arange(n)[:, None], t[s][None, :]]
            hit = np.argwhere(lhs != rhs)
            if hit.size:
                a, c = hit[0]
                bad = np.array([[a, s, c]])
                break
    if bad.size:
        a, b, c = (int(v) for v in bad[0])
        raise NotAssociative(f"({a}*{b})*{c} != {a}*({b}*{c})", a=a, b=b, c=c)


def _magma_generators(t):
    n = t.shape[0]
    gens, seen = [], {0}
    for g in range(n):
        if g in seen:
            continue
        gens.append(g)
        frontier = list(seen | {g})
        seen = set(frontier)
        queue = deque(frontier)
        while queue:
            x = queue.popleft()
            for s in gens:
                for y in (int(t[x, s]), int(t[s, x])):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
    return gens


def from_elements(generators, mul, identity, cap=None, name=None):
    """Cayley table of the group generated by ``generators`` under ``mul``.

    Elements are discovered breadth-first by word length (words extended on
    the right, generators in the given order), so index 0 is the identity
    and the ordering is shortlex in the generators.  Returns the group and
    the list of element labels.
    """
    cap = get_limits().order_cap if cap is None else cap
    labels = [identity]
    index = {identity: 0}
    queue = deque([identity])
    while queue:
        x = queue.popleft()
        for s in generators:
            y = mul(x, s)
            if y not in index:
                index[y] = len(labels)
                labels.append(y)
                if len(labels) > cap:
                    raise OrderCapExceeded(f"closure exceeds the order cap {cap}")
                queue.append(y)
    table = [[index[mul(a, b)] for b in labels] for a in labels]
    return FiniteGroup(table, name=name), labels


def compose_perms(a, b):
    """a*b acts as 'b then a': (a*b)(i) = a(b(i))."""
    return tuple(a[i] for i in b)


def from_permutations(degree, generators, cap=None, name=None):
    """Group generated by permutations of {0..degree-1} and its labeling."""
    gens = []
    for g in generators:
        g = tuple(int(x) for x in g)
        if sorted(g) != list(range(degree)):
            raise ValidationError(f"{g} is not a permutation of 0..{degree - 1}")
        gens.append(g)
    return from_elements(gens, compose_perms, tuple(range(degree)), cap=cap, name=name)


def cycles_to_perm(degree, *cycles):
    perm = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return tuple(perm)


def direct_product(g, h, name=None):
    """G x H with (a, b) at index a*|H| + b."""
    n, m = g.order, h.order
    a = np.repeat(np.arange(n), m)
    b = np.tile(np.arange(m), n)
    table = g.table[a[:, None], a[None, :]] * m + h.table[b[:, None], b[None, :]]
    return FiniteGroup(table, name=name)


# ---------------------------------------------------------------------------
# subgroups


def generated_elements(group, gens):
    t = group.table
    seen = {0}
    queue = deque([0])
    gens = [int(s) for s in gens]
    while queue:
        x = queue.popleft()
        for s in gens:
            y = int(t[x, s])
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return sorted(seen)


def generated_subgroup(group, gens):
    return Subgroup(group, tuple(generated_elements(group, gens)))


def make_subgroup(group, elements):
    els = tuple(sorted({int(g) for g in elements}))
    if 0 not in els:
        raise NotSubgroup("subgroup must contain the identity")
    s = set(els)
    t = group.table
    for a in els:
        if group.inv(a) not in s:
            raise NotSubgroup(f"not closed under inverses at {a}", g=a)
        for b in els:
            if int(t[a, b]) not in s:
                raise NotSubgroup(f"not closed: {a}*{b}", a=a, b=b)
    return Subgroup(group, els)


def center(group):
    t = group.table
    return Subgroup(group, tuple(int(z) for z in range(group.order) if np.array_equal(t[z], t[:, z])))


def commutator_subgroup(group, a, b):
    """[A, B], generated by all commutators [x, y] with x in A, y in B."""
    comms = {group.commutator(x, y) for x in a.elements for y in b.elements}
    return generated_subgroup(group, sorted(comms))


@dataclasses.dataclass(frozen=True)
class CentralSeries:
    terms: tuple
    nilpotency_class: int | None   # None when the group is not nilpotent

    @property
    def nilpotent(self):
        return self.nilpotency_class is not None


def lower_central_series(group):
    """gamma_1 = G, gamma_{i+1} = [G, gamma_i] until it stabilizes."""
    terms = [group.whole]
    while True:
        nxt = commutator_subgroup(group, group.whole, terms[-1])
        if nxt.elements == terms[-1].elements:
            break
        terms.append(nxt)
    if terms[-1].is_trivial():
        return CentralSeries(tuple(terms), len(terms) - 1)
    return CentralSeries(tuple(terms), None)


def is_nilpotent(group):
    return lower_central_series(group).nilpotent


def derived_series(group):
    terms = [group.whole]
    while True:
        nxt = commutator_subgroup(group, terms[-1], terms[-1])
        if nxt.elements == terms[-1].elements:
            return tuple(terms)
        terms.append(nxt)


def is_solvable(group):
    return derived_series(group)[-1].is_trivial()


def subgroup_is_nilpotent(sub):
    return is_nilpotent(sub.as_group()[0])


def subgroup_is_solvable(sub):
    return is_solvable(sub.as_group()[0])


def conjugate_subgroup(group, sub, g):
    return Subgroup(group, tuple(sorted({group.conj(s, g) for s in sub.elements})))


def normality_witness(group, sub):
    """(s, g) with s^g outside sub, or None if sub is normal."""
    s_set = sub.elementset
    for g in group.generators:
        for s in sub.elements:
            if group.conj(s, g) not in s_set:
                return s, g
    return None


def is_normal(group, sub):
    return normality_witness(group, sub) is None


def normalizer(group, sub):
    """N_G(S) = {g : S^g = S}."""
    s_set = sub.elementset
    return Subgroup(group, tuple(g for g in range(group.order)
                                 if all(group.conj(s, g) in s_set for s in sub.elements)))


def quotient_group(group, normal):
    """G/N with cosets ordered by least member, and the projection."""
    w = normality_witness(group, normal)
    if w is not None:
        s, g = w
        raise NotNormal(f"{s}^{g} = {group.conj(s, g)} is not in the subgroup", s=s, g=g)
    t = group.table
    coset_of = [-1] * group.order
    reps = []
    for g in range(group.order):
        if coset_of[g] < 0:
            for n in normal.elements:
                coset_of[int(t[g, n])] = len(reps)
            reps.append(g)
    table = [[coset_of[int(t[a, b])] for b in reps] for a in reps]
    q = FiniteGroup(table, name=f"{group.name}/N" if group.name else None)
    return q, GroupHom(group, q, tuple(coset_of))


def enumerate_subgroups(group, cap=None):
    """All subgroups by cyclic extension, sorted by order then elements."""
    cap = get_limits().subgroup_order_cap if cap is None else cap
    if group.order > cap:
        raise OrderCapExceeded(f"group order {group.order} exceeds subgroup enumeration cap {cap}")
    n = group.order
    trivial = frozenset({0})
    gens_of = {trivial: ()}
    layer = [trivial]
    while layer:
        new = []
        for s in layer:
            for g in range(n):
                if g in s:
                    continue
                gens = gens_of[s] + (g,)
                h = frozenset(generated_elements(group, gens))
                if h not in gens_of:
                    gens_of[h] = gens
                    new.append(h)
        layer = new
    found = gens_of
    subs = [Subgroup(group, tuple(sorted(s))) for s in found]
    subs.sort(key=lambda s: (s.order, s.elements))
    return subs
