"""G-modules: finite groups acting by automorphisms on finite abelian groups.

The action is stored as a stack ``rho`` of integer matrices, one per group
element, acting on coordinate column vectors: g.a = rho[g] @ a (mod the
invariant factors).
"""

from __future__ import annotations

import dataclasses
from functools import cached_property

import numpy as np

from .abelian import AbelianHom, FiniteAbelianGroup, as_rows, identity_hom, subquotient
from .config import get_limits
from .errors import (CapExceeded, LatticeCapExceeded, NotAutomorphism, NotHomomorphic,
                     NotIdentityAtE, NotNormal, NotSubmodule, ValidationError)
from .groups import is_normal, normality_witness, quotient_group


class GModule:
    """A finite group acting on a finite abelian group."""

    def __init__(self, group, coeffs, action, check=True):
        if not isinstance(coeffs, FiniteAbelianGroup):
            coeffs = FiniteAbelianGroup(coeffs)
        r = coeffs.rank
        mats = np.asarray([a.matrix if isinstance(a, AbelianHom) else a for a in action],
                          dtype=np.int64).reshape(len(action), r, r)
        if mats.shape[0] != group.order:
            raise ValidationError(f"{mats.shape[0]} action matrices for a group of order {group.order}")
        if r:
            mats = mats % coeffs.mod_array[None, :, None]
        mats.setflags(write=False)
        self.group = group
        self.coeffs = coeffs
        self.rho = mats
        if check:
            _validate(self)

    @cached_property
    def action(self):
        return [AbelianHom(self.coeffs, self.coeffs, m, check=False) for m in self.rho]

    @property
    def moduli(self):
        return self.coeffs.mod_array

    def act(self, g, a):
        if not self.coeffs.rank:
            return ()
        return tuple(int(v) for v in (self.rho[g] @ np.asarray(a, dtype=np.int64)) % self.moduli)

    def act_rows(self, g, xs):
        xs = as_rows(xs, self.coeffs.rank)
        return (xs @ self.rho[g].T) % self.moduli

    def is_trivial_action(self):
        return all(np.array_equal(m, np.eye(self.coeffs.rank, dtype=np.int64)) for m in self.rho)

    def __repr__(self):
        return f"GModule({self.group.name or self.group.order} on {list(self.coeffs.factors)})"


def _validate(m):
    a, r = m.coeffs, m.coeffs.rank
    eye = np.eye(r, dtype=np.int64)
    if not np.array_equal(m.rho[0], eye):
        raise NotIdentityAtE("the identity does not act as the identity")
    homs = [AbelianHom(a, a, mat) for mat in m.rho]  # raises NotWellDefined for bad columns
    if r == 0:
        return
    prod = np.einsum("gij,hjk->ghik", m.rho, m.rho) % m.moduli[None, None, :, None]
    want = m.rho[m.group.table]
    bad = np.argwhere(np.any(prod != want, axis=(2, 3)))
    # a homomorphism with rho(e) = 1 is invertible everywhere, so injectivity
    # only needs checking when the homomorphism law fails
    if bad.size:
        for g, hom in enumerate(homs):
            if not hom.is_injective():
                raise NotAutomorphism(f"element {g} does not act by an automorphism", g=g)
        g, h = (int(v) for v in bad[0])
        raise NotHomomorphic(f"rho({g}) rho({h}) != rho({g}*{h})", g=g, h=h)


def validate_module(group, coeffs, action):
    """Build a GModule after checking identity, automorphism and homomorphism axioms."""
    return GModule(group, coeffs, action, check=True)


def trivial_module(group, coeffs):
    if not isinstance(coeffs, FiniteAbelianGroup):
        coeffs = FiniteAbelianGroup(coeffs)
    eye = np.eye(coeffs.rank, dtype=np.int64)
    return GModule(group, coeffs, [eye] * group.order, check=False)


def module_from_generators(group, coeffs, images, check=True):
    """Extend generator images {g: matrix} to an action of the whole group.

    Raises NotHomomorphic when the images do not respect the group relations.
    """
    if not isinstance(coeffs, FiniteAbelianGroup):
        coeffs = FiniteAbelianGroup(coeffs)
    r = coeffs.rank
    mods = coeffs.mod_array[:, None] if r else 1
    imgs = {int(g): np.asarray(mat, dtype=np.int64).reshape(r, r) % mods for g, mat in images.items()}
    rho = {0: np.eye(r, dtype=np.int64)}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, ms in imgs.items():
                y = group.mul(x, s)
                val = (rho[x] @ ms) % mods
                if y not in rho:
                    rho[y] = val
                    nxt.append(y)
                elif check and not np.array_equal(rho[y], val):
                    raise NotHomomorphic("generator images do not satisfy the group relations", g=x, h=s)
        frontier = nxt
    if len(rho) != group.order:
        raise ValidationError("the given elements do not generate the group")
    return GModule(group, coeffs, [rho[g] for g in range(group.order)], check=check)


def pullback(module, hom):
    """The module over hom.source acting through hom: G -> module.group."""
    return GModule(hom.source, module.coeffs, [module.rho[int(hom.map[g])] for g in range(hom.source.order)],
                   check=False)


# ---------------------------------------------------------------------------
# submodules


class Submodule:
    """A G-invariant subgroup, carried as generators plus a presentation."""

    def __init__(self, parent, generators, check=True):
        self.parent = parent
        a = parent.coeffs
        gens = as_rows(list(generators), a.rank)
        sq = subquotient(a.moduli, span=gens)
        self._sq = sq
        self.generators = list(sq.generators)
        self.presentation = sq.group
        if check:
            for g in parent.group.generators:
                for x in self.generators:
                    y = parent.act(g, x)
                    if not sq.contains(y):
                        raise NotSubmodule("subgroup is not invariant", g=g, element=x)

    @property
    def order(self):
        return self.presentation.order

    @cached_property
    def embedding(self):
        return self._sq.embedding()

    def contains(self, x):
        return self._sq.contains(x)

    def coordinates(self, x):
        return self._sq.coordinates(x)

    def elements(self):
        return self._sq.elements()

    def is_zero(self):
        return self.order == 1

    def is_whole(self):
        return self.order == self.parent.coeffs.order

    def __le__(self, other):
        return all(other.contains(x) for x in self.generators)

    def __eq__(self, other):
        return isinstance(other, Submodule) and self.order == other.order and self <= other

    def __hash__(self):
        return hash(self.key)

    @cached_property
    def key(self):
        """Canonical identifier: the sorted element tuple."""
        return tuple(sorted(self.elements()))

    def __add__(self, other):
        return Submodule(self.parent, self.generators + other.generators, check=False)

    def __repr__(self):
        return f"Submodule({list(self.presentation.factors)} in {self.parent})"


def submodule(module, generators):
    """The subgroup generated by ``generators``, checked to be invariant."""
    return Submodule(module, generators, check=True)


def zero_submodule(module):
    return Submodule(module, [], check=False)


def whole_submodule(module):
    a = module.coeffs
    return Submodule(module, [a.unit_vector(i) for i in range(a.rank)], check=False)


def invariants(module):
    """A^G = {a : g.a = a for all g}, as a Submodule."""
    a = module.coeffs
    r = a.rank
    gens = module.group.generators
    if r == 0 or not gens:
        return whole_submodule(module)
    eye = np.eye(r, dtype=np.int64)
    mat = np.vstack([module.rho[g] - eye for g in gens])
    ker = subquotient(a.moduli, kernel=(mat, a.moduli * len(gens)))
    return Submodule(module, ker.generators, check=False)


def spin_submodule(module, seeds):
    """Smallest G-invariant subgroup containing the seeds."""
    a = module.coeffs
    gens = [tuple(int(v) for v in s) for s in seeds]
    sq = subquotient(a.moduli, span=as_rows(gens, a.rank))
    while True:
        basis = as_rows(sq.generators, a.rank)
        new = []
        for g in module.group.generators:
            for y in module.act_rows(g, basis):
                if not sq.contains(y):
                    new.append(y)
        if not new:
            return Submodule(module, sq.generators, check=False)
        sq = subquotient(a.moduli, span=np.vstack([basis] + new))


# ---------------------------------------------------------------------------
# irreducibility and composition series


def _nonzero_elements(sub):
    for x in sub.elements():
        if any(x):
            yield x


def _check_element_cap(n):
    if n > get_limits().element_cap:
        raise CapExceeded(f"enumeration of {n} elements exceeds the element cap")


def is_irreducible(module):
    """Nonzero, and every nonzero element spins to the whole module."""
    a = module.coeffs
    if a.order == 1:
        return False
    _check_element_cap(a.order)
    whole = whole_submodule(module)
    return all(spin_submodule(module, [x]).order == a.order for x in _nonzero_elements(whole))


def minimal_submodule(module):
    """An irreducible submodule, found by descending through spins.

    Starts from the spin of the least nonzero element; whenever some nonzero
    element spins to something smaller, descend into it.  The result is
    certified irreducible by the final full scan.
    """
    a = module.coeffs
    if a.order == 1:
        return None
    _check_element_cap(a.order)
    first = next(_nonzero_elements(whole_submodule(module)))
    w = spin_submodule(module, [first])
    while True:
        for x in _nonzero_elements(w):
            s = spin_submodule(module, [x])
            if s.order < w.order:
                w = s
                break
        else:
            return w


@dataclasses.dataclass
class CompositionSeries:
    chain: list

    @property
    def length(self):
        return len(self.chain) - 1

    def factor_orders(self):
        return [b.order // a.order for a, b in zip(self.chain, self.chain[1:])]


def composition_series(module):
    """A maximal chain 0 = M_0 < ... < M_r = A with irreducible factors."""
    current = zero_submodule(module)
    chain = [current]
    while current.order < module.coeffs.order:
        q, link = derive_module(module, QuotientBy(current))
        w = minimal_submodule(q)
        lifts = [link.section(x) for x in w.generators]
        current = Submodule(module, current.generators + lifts, check=False)
        chain.append(current)
    return CompositionSeries(chain)


def submodule_lattice(module, cap=None):
    """All submodules, ordered by (order, elements)."""
    cap = cap if cap is not None else get_limits().lattice_cap
    a = module.coeffs
    _check_element_cap(a.order)
    elems = list(a.elements())
    zero = zero_submodule(module)
    found = {zero.key: zero}
    layer = [zero]
    cyclic = {}
    while layer:
        new = []
        for s in layer:
            for x in elems:
                if s.contains(x):
                    continue
                if x not in cyclic:
                    cyclic[x] = spin_submodule(module, [x])
                t = s + cyclic[x]
                if t.key not in found:
                    found[t.key] = t
                    new.append(t)
                    if len(found) > cap:
                        raise LatticeCapExceeded(f"submodule lattice exceeds {cap} members")
        layer = new
    return sorted(found.values(), key=lambda s: (s.order, s.key))


# ---------------------------------------------------------------------------
# derived modules


@dataclasses.dataclass(frozen=True)
class Restrict:
    subgroup: object


@dataclasses.dataclass(frozen=True)
class Inflate:
    subgroup: object


@dataclasses.dataclass(frozen=True)
class QuotientBy:
    submodule: object


@dataclasses.dataclass(frozen=True)
class SubOn:
    submodule: object


@dataclasses.dataclass
class ModuleLink:
    """How a derived module sits relative to its parent.

    element_map:  new group index -> parent group index (Restrict).
    projection:   GroupHom G -> G/H (Inflate) or AbelianHom A -> A/N (QuotientBy).
    embedding:    AbelianHom from the new coefficients into A (Inflate, SubOn).
    section:      coordinates in A/N -> representative in A (QuotientBy).
    """
    element_map: list = None
    projection: object = None
    embedding: object = None
    section: object = None


def _sub_module(module, sub):
    """The action restricted to a submodule, in its own presentation."""
    p = sub.presentation
    gens = as_rows(sub.generators, module.coeffs.rank)
    mats = []
    for g in range(module.group.order):
        imgs = module.act_rows(g, gens)
        mats.append(np.array([sub.coordinates(y) for y in imgs], dtype=np.int64).reshape(p.rank, p.rank).T)
    return GModule(module.group, p, mats, check=False)


def derive_module(module, kind):
    """Restriction, inflation, quotient or submodule; returns (GModule, ModuleLink)."""
    if isinstance(kind, Restrict):
        h, elems = kind.subgroup.as_group()
        return GModule(h, module.coeffs, module.rho[elems], check=False), ModuleLink(element_map=elems)
    if isinstance(kind, SubOn):
        sub = kind.submodule
        for g in module.group.generators:
            for x in sub.generators:
                if not sub.contains(module.act(g, x)):
                    raise NotSubmodule("subgroup is not invariant", g=g, element=x)
        new = _sub_module(module, sub)
        _validate(new)
        return new, ModuleLink(embedding=sub.embedding)
    if isinstance(kind, QuotientBy):
        sub = kind.submodule
        a = module.coeffs
        sq = subquotient(a.moduli, boundaries=as_rows(sub.generators, a.rank))
        qg = sq.group
        cols = [sq.coordinates(a.unit_vector(i)) for i in range(a.rank)]
        proj = AbelianHom(a, qg, np.array(cols, dtype=np.int64).reshape(a.rank, qg.rank).T, check=False)
        lifts = as_rows([sq.lift(qg.unit_vector(i)) for i in range(qg.rank)], a.rank)
        mats = []
        for g in range(module.group.order):
            imgs = module.act_rows(g, lifts)
            mats.append(proj.apply_rows(imgs).T)
        new = GModule(module.group, qg, mats, check=False)
        _validate(new)
        return new, ModuleLink(projection=proj, section=sq.lift)
    if isinstance(kind, Inflate):
        h = kind.subgroup
        g = module.group
        if not is_normal(g, h):
            s, x = normality_witness(g, h)
            raise NotNormal("inflation needs a normal subgroup", s=s, g=x)
        restricted, _ = derive_module(module, Restrict(h))
        fixed = invariants(restricted)
        fixed = Submodule(module, fixed.generators, check=False)
        on_fixed = _sub_module(module, fixed)
        q, proj = quotient_group(g, h)
        reps = [0] * q.order
        for x in range(g.order - 1, -1, -1):
            reps[int(proj.map[x])] = x
        mats = [on_fixed.rho[reps[c]] for c in range(q.order)]
        for x in range(g.order):
            if not np.array_equal(on_fixed.rho[x], mats[int(proj.map[x])]):
                raise ValidationError("action on A^H is not constant on cosets", g=x)
        new = GModule(q, fixed.presentation, mats, check=False)
        _validate(new)
        return new, ModuleLink(projection=proj, embedding=fixed.embedding)
    raise TypeError(f"unknown derivation {kind!r}")


# ---------------------------------------------------------------------------
# action ring and centralizer


@dataclasses.dataclass
class ActionRingReport:
    """R = Z-span of rho(G) inside End(A) and its centralizer C_End(A)(R).

    ``ring_elements`` and ``centralizer`` list every element when the order is
    within the element cap, otherwise only additive generators.
    """
    ring_generators: list
    ring_order: int
    ring_elements: list
    centralizer: list
    centralizer_order: int
    centralizer_is_commutative: bool
    centralizer_is_field: bool
    witness: dict = dataclasses.field(default_factory=dict)


def _end_ambient(a):
    # End(A) as a subgroup of the matrices with entry (i, j) taken mod m_i
    r = a.rank
    return tuple(a.moduli[i] for i in range(r) for _ in range(r))


def _end_constraints(a):
    """Rows forcing column j of an endomorphism to be killed by d_j."""
    r = a.rank
    rows = []
    tmods = []
    for i in range(r):
        for j in range(r):
            row = np.zeros(r * r, dtype=np.int64)
            row[i * r + j] = a.moduli[j]
            rows.append(row)
            tmods.append(a.moduli[i])
    return rows, tmods


def _mat(vec, r):
    return np.asarray(vec, dtype=np.int64).reshape(r, r)


def _hom(a, vec):
    return AbelianHom(a, a, _mat(vec, a.rank), check=False)


def action_ring_centralizer(module):
    a = module.coeffs
    lim = get_limits()
    if a.order > lim.endomorphism_cap:
        raise CapExceeded(f"|A| = {a.order} exceeds the endomorphism cap {lim.endomorphism_cap}")
    r = a.rank
    amb = _end_ambient(a)
    if r == 0:
        z = identity_hom(a)
        return ActionRingReport([z], 1, [z], [z], 1, True, False, {"reason": "zero module"})
    ring = subquotient(amb, span=np.array([m.reshape(-1) for m in module.rho], dtype=np.int64))
    rows, tmods = _end_constraints(a)
    # commutation: rho(g) E - E rho(g) = 0 for each group generator
    for g in module.group.generators:
        m = module.rho[g]
        for i in range(r):
            for j in range(r):
                row = np.zeros(r * r, dtype=np.int64)
                for k in range(r):
                    row[k * r + j] += m[i, k]
                    row[i * r + k] -= m[k, j]
                rows.append(row)
                tmods.append(a.moduli[i])
    cent = subquotient(amb, kernel=(np.array(rows, dtype=np.int64), tuple(tmods)))
    cgens = [np.array(x, dtype=np.int64) for x in cent.generators]
    commutative = True
    witness = {}
    for x in range(len(cgens)):
        for y in range(x + 1, len(cgens)):
            p1 = (_mat(cgens[x], r) @ _mat(cgens[y], r)) % a.mod_array[:, None]
            p2 = (_mat(cgens[y], r) @ _mat(cgens[x], r)) % a.mod_array[:, None]
            if not np.array_equal(p1, p2):
                commutative = False
                witness.setdefault("noncommuting", (x, y))
    # a finite division ring acting faithfully on A has order at most |A|
    is_field = commutative and cent.order <= a.order
    if is_field:
        for vec in cent.elements():
            if any(vec) and not _hom(a, vec).is_injective():
                is_field = False
                witness["zero_divisor"] = _mat(vec, r).tolist()
                break
    elif cent.order > a.order:
        witness["reason"] = "centralizer larger than the module"
        for vec in cent.elements():
            if any(vec) and not _hom(a, vec).is_injective():
                witness["zero_divisor"] = _mat(vec, r).tolist()
                break
    cap = lim.element_cap
    ring_elems = [_hom(a, v) for v in ring.elements()] if ring.order <= cap else None
    cent_list = ([_hom(a, v) for v in cent.elements()] if cent.order <= cap
                 else [_hom(a, v) for v in cgens])
    return ActionRingReport(
        ring_generators=[_hom(a, v) for v in ring.generators],
        ring_order=ring.order,
        ring_elements=ring_elems,
        centralizer=cent_list,
        centralizer_order=cent.order,
        centralizer_is_commutative=commutative,
        centralizer_is_field=is_field,
        witness=witness,
    )


__all__ = [
    "GModule", "validate_module", "trivial_module", "module_from_generators", "pullback",
    "Submodule", "submodule", "zero_submodule", "whole_submodule", "invariants", "spin_submodule",
    "is_irreducible", "minimal_submodule", "CompositionSeries", "composition_series", "submodule_lattice",
    "Restrict", "Inflate", "QuotientBy", "SubOn", "ModuleLink", "derive_module",
    "ActionRingReport", "action_ring_centralizer"
]
