"""Executable checks of the structural results on finite instances.

Every verifier returns a TheoremReport.  Hypotheses are evaluated and
reported; a failed hypothesis never raises, and the conclusion is only
asserted (``conclusion_holds`` not None) when every hypothesis holds.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from . import _chainring as cr
from .abelian import AbelianHom, elementary_prime, preimage
from .cohomology import (Cochain, check_inf_res_exact, coboundary, conj_action_fixed, h1_der, h1_maps)
from .config import get_limits
from .errors import HypothesisFailed, ValidationError
from .gmodule import (QuotientBy, SubOn, Submodule, action_ring_centralizer, composition_series,
                      derive_module, invariants, is_irreducible, minimal_submodule, submodule_lattice,
                      whole_submodule, zero_submodule)
from .groups import (center, enumerate_subgroups, is_normal, lower_central_series, normalizer,
                     quotient_group, subgroup_is_nilpotent, subgroup_is_solvable)


@dataclasses.dataclass
class TheoremReport:
    theorem: str
    hypotheses: list = dataclasses.field(default_factory=list)   # (name, holds, witness)
    conclusion_holds: object = None
    data: dict = dataclasses.field(default_factory=dict)

    def add(self, name, holds, witness=None):
        self.hypotheses.append((name, bool(holds), witness or {}))
        return holds

    @property
    def hypotheses_hold(self):
        return all(h for _, h, _ in self.hypotheses)

    @property
    def passed(self):
        """No check failed: the conclusion holds or was not asserted."""
        return self.conclusion_holds is not False

    def as_dict(self):
        return {
            "theorem": self.theorem,
            "hypotheses": [{"name": n, "holds": h, "witness": w} for n, h, w in self.hypotheses],
            "conclusion_holds": self.conclusion_holds,
            "data": self.data,
        }


def _nilpotency(report, group):
    series = lower_central_series(group)
    report.data["nilpotency_class"] = series.nilpotency_class
    return report.add("G nilpotent", series.nilpotent,
                      None if series.nilpotent else {"stable_term_order": series.terms[-1].order})


def _no_invariants(report, module):
    fixed = invariants(module)
    report.data["invariants_order"] = fixed.order
    return report.add("A^G = 0", fixed.order == 1,
                      None if fixed.order == 1 else {"fixed_vector": list(fixed.generators[0])})


# ---------------------------------------------------------------------------
# H^1 vanishing


def verify_nilpotent_vanishing(module):
    """G nilpotent and A^G = 0 imply H^1(G, A) = 0."""
    rep = TheoremReport("nilpotent_vanishing")
    ok = _nilpotency(rep, module.group)
    ok = _no_invariants(rep, module) and ok
    h1 = h1_der(module)
    rep.data["h1"] = list(h1.group.factors)
    rep.data["group_abelian"] = module.group.is_abelian()
    if ok:
        rep.conclusion_holds = h1.group.order == 1
        if module.coeffs.order > 1 and module.coeffs.order <= get_limits().element_cap:
            rep.data["irreducible"] = is_irreducible(module)
    return rep


def verify_composition_factors(module):
    """(U/V)^G = 0 for every pair of submodules V < U."""
    rep = TheoremReport("composition_factors")
    ok = _nilpotency(rep, module.group)
    ok = _no_invariants(rep, module) and ok
    if not ok:
        return rep
    lattice = submodule_lattice(module)
    rep.data["lattice_size"] = len(lattice)
    pairs = 0
    for v in lattice:
        quot, link = derive_module(module, QuotientBy(v))
        for u in lattice:
            if u.order <= v.order or not v <= u:
                continue
            pairs += 1
            image = Submodule(quot, [link.projection(x) for x in u.generators], check=False)
            section, _ = derive_module(quot, SubOn(image))
            fixed = invariants(section)
            if fixed.order != 1:
                rep.conclusion_holds = False
                rep.data["witness"] = {"V": [list(x) for x in v.generators], "U": [list(x) for x in u.generators]}
                rep.data["pairs_checked"] = pairs
                return rep
    rep.data["pairs_checked"] = pairs
    rep.conclusion_holds = True
    return rep


# ---------------------------------------------------------------------------
# Schur and the explicit coboundary


def _inverse_apply(mat_hom, y):
    x = preimage(mat_hom, y)
    if x is None:
        raise ValidationError("map is not surjective", element=y)
    return x


def explicit_coboundary_check(module, derivations=None):
    """For abelian G on irreducible A with A^G = 0: a = (rho(y) - Id)^-1 f(y) gives f = d_0 a.

    Checks every derivation (or the given ones) against every y acting
    nontrivially.  Returns (holds, data).
    """
    a = module.coeffs
    g = module.group
    eye = np.eye(a.rank, dtype=np.int64)
    h1 = h1_der(module)
    if derivations is None:
        der = h1.der
        if der.order <= get_limits().element_cap:
            derivations = [np.asarray(v, dtype=np.int64) for v in der.elements()]
        else:
            derivations = [np.asarray(v, dtype=np.int64) for v in der.generators]
    ys = [y for y in range(1, g.order) if not np.array_equal(module.rho[y], eye)]
    checked = 0
    for y in ys:
        op = AbelianHom(a, a, module.rho[y] - eye, check=False)
        if not op.is_injective():
            return False, {"y": y, "reason": "rho(y) - Id not invertible"}
        for vec in derivations:
            f = Cochain.from_flat(module, 1, vec)
            x = _inverse_apply(op, f(y))
            if not np.array_equal(coboundary(module, x).values, f.values):
                return False, {"y": y, "derivation": vec.tolist()}
            checked += 1
    return True, {"derivations": len(derivations), "elements_y": len(ys), "checks": checked}


def schur_check(module):
    """Irreducible A: the centralizer of the action ring is a (commutative) field."""
    rep = TheoremReport("schur")
    irreducible = module.coeffs.order > 1 and composition_series(module).length == 1
    rep.add("A irreducible", irreducible)
    if not irreducible:
        return rep
    ring = action_ring_centralizer(module)
    rep.data.update(centralizer_order=ring.centralizer_order, ring_order=ring.ring_order,
                    centralizer_is_commutative=ring.centralizer_is_commutative)
    rep.conclusion_holds = bool(ring.centralizer_is_field and ring.centralizer_is_commutative)
    if module.group.is_abelian() and invariants(module).order == 1 and not module.is_trivial_action():
        holds, data = explicit_coboundary_check(module)
        rep.data["explicit_coboundary"] = data
        rep.data["explicit_coboundary_holds"] = holds
        rep.conclusion_holds = rep.conclusion_holds and holds
    return rep


# ---------------------------------------------------------------------------
# Carter subgroups and the Frattini argument


def find_carter_subgroups(group, subgroups=None):
    """Nilpotent self-normalizing subgroups."""
    subs = subgroups if subgroups is not None else enumerate_subgroups(group)
    found = []
    for c in subs:
        if normalizer(group, c).elements == c.elements and subgroup_is_nilpotent(c):
            found.append(c)
    return found


def _product_set(group, a, b):
    t = group.table
    return {int(t[x, y]) for x in a.elements for y in b.elements}


def verify_frattini(group, h, c):
    """G = H N_G(C) for C a Carter subgroup of the normal subgroup H."""
    rep = TheoremReport("frattini")
    normal = is_normal(group, h)
    rep.add("H normal in G", normal)
    inside = c <= h
    hg, elems = h.as_group()
    pos = {e: i for i, e in enumerate(elems)}
    carter = False
    if inside:
        c_in_h = hg.subgroup([pos[x] for x in c.elements])
        carter = (normalizer(hg, c_in_h).elements == c_in_h.elements) and subgroup_is_nilpotent(c_in_h)
    rep.add("C Carter in H", carter, None if inside else {"reason": "C not contained in H"})
    n = normalizer(group, c)
    n_normal = is_normal(group, n)
    abelian_quotient = n_normal and quotient_group(group, n)[0].is_abelian()
    rep.data["hypothesis_abelian_quotient"] = bool(abelian_quotient)
    rep.data["normalizer_normal"] = bool(n_normal)
    rep.data["normalizer_order"] = n.order
    prod = _product_set(group, h, n)
    holds = len(prod) == group.order
    rep.data["product_order"] = len(prod)
    # first proof step: C fixes no coset gN other than N under conjugation
    fixed = []
    seen = set()
    for g in range(group.order):
        coset = frozenset(int(group.table[g, x]) for x in n.elements)
        if coset in seen:
            continue
        seen.add(coset)
        if 0 in coset:
            continue
        if all(_conj_coset(group, x, g, n) == coset for x in c.elements):
            fixed.append(g)
    rep.data["fixed_nontrivial_cosets"] = len(fixed)
    if normal and carter:
        rep.conclusion_holds = holds and not fixed
    else:
        rep.data["conclusion_unasserted"] = holds
    return rep


def _conj_coset(group, x, g, n):
    """x (gN) x^-1 = (x g x^-1) N, well defined since x normalizes C and lies in N."""
    t = group.table
    y = int(t[t[x, g], group.inv(x)])
    return frozenset(int(t[y, m]) for m in n.elements)


@dataclasses.dataclass
class FrattiniTriple:
    group: object
    normal: object
    carter: object


def frattini_triples(group, solvable_only=True):
    """All (H, C): H normal (solvable), C Carter in H, C read inside G."""
    subs = enumerate_subgroups(group)
    out = []
    for h in subs:
        if not is_normal(group, h):
            continue
        if solvable_only and not subgroup_is_solvable(h):
            continue
        inside = [s for s in subs if s <= h]
        hg, elems = h.as_group()
        pos = {e: i for i, e in enumerate(elems)}
        local = [hg.subgroup([pos[x] for x in s.elements]) for s in inside]
        for s, loc in zip(inside, local):
            if normalizer(hg, loc).elements == loc.elements and subgroup_is_nilpotent(loc):
                out.append(FrattiniTriple(group, h, s))
    return out


# ---------------------------------------------------------------------------
# Maschke


def _maschke_hypotheses(module, rep):
    g = module.group
    p = elementary_prime(module.coeffs)
    rep.add("G abelian", g.is_abelian())
    if module.coeffs.order == 1:
        rep.add("A p-elementary", True)
        rep.add("p does not divide |G|", True)
    else:
        rep.add("A p-elementary", p is not None, {"factors": list(module.coeffs.factors)})
        rep.add("p does not divide |G|", p is not None and g.order % p != 0)
    rep.add("A^G = 0", invariants(module).order == 1)
    return p


def _require(module, name="maschke"):
    rep = TheoremReport(name)
    p = _maschke_hypotheses(module, rep)
    for hname, holds, _ in rep.hypotheses:
        if not holds:
            raise HypothesisFailed(hname)
    return p


def _projector(p, r, gens):
    """Projector onto span(gens) along the unit vectors of the non-pivot columns."""
    basis = cr.howell(np.asarray(gens, dtype=np.int64).reshape(-1, r), p, 1) if len(gens) else \
        np.zeros((0, r), dtype=np.int64)
    cols = []
    for j in range(r):
        e = np.zeros(r, dtype=np.int64)
        e[j] = 1
        _, rem = cr.reduce(basis, e, p, 1)
        cols.append((e - rem) % p)
    return np.array(cols, dtype=np.int64).T


def maschke_complement(module, w):
    """A G-invariant complement of the submodule w, by averaging a projector."""
    p = _require(module)
    a = module.coeffs
    if w.order == 1:
        return whole_submodule(module)
    if w.order == a.order:
        return zero_submodule(module)
    r = a.rank
    pi = _projector(p, r, w.generators)
    g = module.group
    total = np.zeros((r, r), dtype=np.int64)
    for x in range(g.order):
        total = (total + module.rho[x] @ pi @ module.rho[g.inv(x)]) % p
    avg = (total * pow(g.order, -1, p)) % p
    ker = cr.kernel(avg, p, 1)
    comp = Submodule(module, [tuple(int(v) for v in row) for row in ker], check=True)
    if comp.order * w.order != a.order or (comp + w).order != a.order:
        raise ValidationError("averaged projector did not produce a complement")
    return comp


@dataclasses.dataclass
class MaschkeDecomposition:
    summands: list
    certified: bool
    certificate: dict = dataclasses.field(default_factory=dict)


def maschke_decompose(module):
    """A as a direct sum of irreducible submodules."""
    _require(module)
    summands = _split(module, module, None)
    cert = certify_decomposition(module, summands)
    return MaschkeDecomposition(summands, cert["certified"], cert)


def _split(module, current, embed):
    """Summands of ``current`` (a module on a submodule of ``module``), read in ``module``."""
    if current.coeffs.order == 1:
        return []
    w = minimal_submodule(current)
    comp = maschke_complement(current, w)
    lift = (lambda xs: xs) if embed is None else (lambda xs: [embed(x) for x in xs])
    first = Submodule(module, lift(w.generators), check=False)
    if comp.order == 1:
        return [first]
    sub, link = derive_module(current, SubOn(comp))
    inner = link.embedding if embed is None else _compose(embed, link.embedding)
    return [first] + _split(module, sub, inner)


def _compose(outer, inner):
    return lambda x: outer(inner(x))


def certify_decomposition(module, summands):
    """Direct sum, invariance and irreducibility of each summand."""
    a = module.coeffs
    cert = {"summand_orders": [s.order for s in summands]}
    partial = zero_submodule(module)
    direct = True
    invariant = True
    irreducible = True
    for s in summands:
        for g in module.group.generators:
            if any(not s.contains(module.act(g, x)) for x in s.generators):
                invariant = False
        nxt = partial + s
        if nxt.order != partial.order * s.order:
            direct = False
        partial = nxt
        sub, _ = derive_module(module, SubOn(s))
        if not is_irreducible(sub):
            irreducible = False
    spans = partial.order == a.order
    cert.update(direct=direct, invariant=invariant, irreducible=irreducible, spans=spans)
    cert["certified"] = direct and invariant and irreducible and spans
    return cert


def maschke_report(module):
    rep = TheoremReport("maschke")
    _maschke_hypotheses(module, rep)
    if not rep.hypotheses_hold:
        return rep
    dec = maschke_decompose(module)
    rep.data.update(dec.certificate)
    rep.conclusion_holds = dec.certified
    return rep


# ---------------------------------------------------------------------------
# inflation-restriction and faithful reduction


def verify_inf_res(module, sub):
    rep = TheoremReport("inflation_restriction")
    rep.add("H normal", is_normal(module.group, sub))
    if not rep.hypotheses_hold:
        return rep
    report = check_inf_res_exact(module, sub)
    rep.data["nodes"] = report.as_dict()
    rep.conclusion_holds = report.exact
    return rep


def verify_faithful_reduction(module, sub):
    """H central and acting trivially, A^G = 0: inflation is an isomorphism and
    H^1(H, A)^{G/H} = 0."""
    rep = TheoremReport("faithful_reduction")
    g = module.group
    eye = np.eye(module.coeffs.rank, dtype=np.int64)
    rep.add("H central", sub <= center(g))
    rep.add("H acts trivially", all(np.array_equal(module.rho[h], eye) for h in sub.elements))
    _no_invariants(rep, module)
    if not rep.hypotheses_hold:
        return rep
    maps = h1_maps(module, sub)
    fixed = conj_action_fixed(module, sub, maps.sub_h1, maps.sub_module, maps.sub_elements)
    iso = maps.inflation.is_injective() and maps.inflation.is_surjective()
    rep.data.update(h1_quotient=list(maps.quotient_h1.group.factors), h1=list(maps.h1.group.factors),
                    fixed_order=fixed.order)
    rep.conclusion_holds = bool(iso and fixed.order == 1)
    return rep
