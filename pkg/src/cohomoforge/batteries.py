"""Generated families of G-modules and the exhaustive verification batteries.

The action family for a pair (G, A): homomorphisms G -> Aut(A) built by
backtracking over images of the generators of G.  Candidate images come
from Aut(A) (enumerated when End(A) is small, otherwise from block-diagonal
pieces and coordinate permutations), keep only elements whose order divides
the order of the generator, and are tried in order of increasing number of
fixed vectors.  Per pair the search stops after ``max_actions`` qualifying
actions or ``max_visits`` complete homomorphisms.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
import time
from functools import lru_cache

import numpy as np
import sympy

from .abelian import FiniteAbelianGroup
from .catalog import abelian_groups_up_to, cyclic, nilpotent_small_groups, small_groups
from .cohomology import ShortExactSequence, h1_der
from .errors import NotHomomorphic
from .gmodule import GModule, module_from_generators, pullback, trivial_module
from .groups import center, enumerate_subgroups, is_normal, quotient_group

END_ENUM_LIMIT = 200_000


# ---------------------------------------------------------------------------
# automorphism pools


def _elements_array(a):
    return np.array(list(a.elements()), dtype=np.int64).reshape(-1, a.rank)


def _encode(arr, a):
    """Integer code of each element row (mixed radix)."""
    code = np.zeros(arr.shape[:-1], dtype=np.int64)
    for i, m in enumerate(a.moduli):
        code = code * m + arr[..., i]
    return code


def _column_candidates(a):
    elems = _elements_array(a)
    out = []
    for d in a.moduli:
        ok = np.all((d * elems) % a.mod_array == 0, axis=1)
        out.append(elems[ok])
    return out


def _injective_mask(mats, a, elems):
    imgs = np.einsum("eij,xj->exi", mats, elems) % a.mod_array
    nonzero = imgs[:, 1:, :]   # elems[0] is the zero element
    return ~np.any(np.all(nonzero == 0, axis=2), axis=1)


@lru_cache(maxsize=None)
def automorphism_pool(factors):
    """Automorphisms of the abelian group with the given invariant factors, as an array."""
    a = FiniteAbelianGroup(factors)
    r = a.rank
    if r == 0:
        return np.zeros((1, 0, 0), dtype=np.int64)
    cands = _column_candidates(a)
    total = math.prod(len(c) for c in cands)
    elems = _elements_array(a)
    if total <= END_ENUM_LIMIT:
        idx = np.array(list(itertools.product(*(range(len(c)) for c in cands))), dtype=np.int64)
        chunks = []
        for start in range(0, len(idx), 20000):
            block = idx[start:start + 20000]
            mats = np.stack([cands[j][block[:, j]] for j in range(r)], axis=2)  # columns
            chunks.append(mats[_injective_mask(mats, a, elems)])
        pool = np.concatenate(chunks)
    else:
        pool = _structured_pool(a)
    return pool


def _structured_pool(a):
    """Block-diagonal automorphisms over coordinate splittings, plus permutations."""
    r = a.rank
    mats = []
    for k in range(1, r):
        left = automorphism_pool(a.factors[:k]) if _end_size(a.factors[:k]) <= END_ENUM_LIMIT else None
        right = automorphism_pool(a.factors[k:]) if _end_size(a.factors[k:]) <= END_ENUM_LIMIT else None
        if left is None or right is None:
            continue
        for x in left:
            for y in right[:64]:
                m = np.zeros((r, r), dtype=np.int64)
                m[:k, :k] = x
                m[k:, k:] = y
                mats.append(m)
    for perm in itertools.permutations(range(r)):
        if all(a.moduli[i] == a.moduli[p] for i, p in enumerate(perm)):
            m = np.zeros((r, r), dtype=np.int64)
            m[list(perm), list(range(r))] = 1
            mats.append(m)
    uniq = {m.tobytes(): m for m in mats}
    return np.array([uniq[k] for k in sorted(uniq)], dtype=np.int64)


def _end_size(factors):
    a = FiniteAbelianGroup(factors)
    return math.prod(len(c) for c in _column_candidates(a)) if a.rank else 1


def _orders(pool, a, bound):
    """Multiplicative order of each pool element (0 when above ``bound``)."""
    r = a.rank
    mods = a.mod_array[None, :, None]
    eye = np.eye(r, dtype=np.int64)
    cur = pool.copy()
    orders = np.zeros(len(pool), dtype=np.int64)
    for k in range(1, bound + 1):
        done = (orders == 0) & np.all(cur == eye, axis=(1, 2))
        orders[done] = k
        if np.all(orders > 0):
            break
        cur = np.einsum("eij,ejk->eik", cur, pool) % mods
    return orders


def _fixed_counts(pool, a, elems):
    imgs = np.einsum("eij,xj->exi", pool, elems) % a.mod_array
    return np.sum(np.all(imgs == elems[None], axis=2), axis=1)


# ---------------------------------------------------------------------------
# the action family


def _partial_closure(group, images, mods):
    """rho on the subgroup generated by the assigned generators, or None on conflict."""
    r = next(iter(images.values())).shape[0]
    rho = {0: np.eye(r, dtype=np.int64)}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for s, m in images.items():
                y = group.mul(x, s)
                val = (rho[x] @ m) % mods
                if y not in rho:
                    rho[y] = val
                    nxt.append(y)
                elif not np.array_equal(rho[y], val):
                    return None
        frontier = nxt
    return rho


def fixed_free(mats, a, elems):
    """Whether the only common fixed vector of the matrices is 0."""
    mask = np.ones(len(elems), dtype=bool)
    for m in mats:
        mask &= np.all((elems @ m.T) % a.mod_array == elems, axis=1)
    return int(mask.sum()) == 1


def action_family(group, a, max_actions=25, max_visits=150, qualifying_only=True):
    """Yield GModules from the generated family (see the module docstring).

    With ``qualifying_only`` only actions with A^G = 0 are yielded; visits
    count every complete homomorphism found.
    """
    if not isinstance(a, FiniteAbelianGroup):
        a = FiniteAbelianGroup(a)
    if a.rank == 0:
        yield trivial_module(group, a)
        return
    pool = automorphism_pool(a.factors)
    elems = _elements_array(a)
    exp = max(group.element_orders)
    orders = _orders(pool, a, max(exp, 1))
    fixed = _fixed_counts(pool, a, elems)
    mods = a.mod_array[:, None]
    gens = list(group.generators)
    cand = []
    for s in gens:
        o = group.element_order(s)
        ok = np.flatnonzero((orders > 0) & (o % np.maximum(orders, 1) == 0))
        ok = sorted(ok, key=lambda i: (int(fixed[i]), pool[i].tobytes()))
        cand.append(ok)
    found = 0
    visits = 0

    def search(level, images):
        nonlocal found, visits
        if found >= max_actions or visits >= max_visits:
            return
        if level == len(gens):
            visits += 1
            mats = list(images.values())
            qualifies = fixed_free(mats, a, elems)
            if qualifying_only and not qualifies:
                return
            try:
                m = module_from_generators(group, a, images, check=True)
            except NotHomomorphic:
                return
            found += 1
            yield m
            return
        for i in cand[level]:
            images[gens[level]] = pool[i]
            if _partial_closure(group, images, mods) is not None:
                yield from search(level + 1, images)
            del images[gens[level]]
            if found >= max_actions or visits >= max_visits:
                return

    if not gens:
        yield trivial_module(group, a)
        return
    yield from search(0, {})


def forced_fixed_points(group, a):
    """True when G is a p-group and p divides |A|: then A^G != 0 for every action."""
    n = group.order
    if n == 1:
        return True
    primes = sympy.primefactors(n)
    return len(primes) == 1 and a.order % primes[0] == 0


# ---------------------------------------------------------------------------
# batteries


@dataclasses.dataclass
class BatteryResult:
    name: str
    instances: int = 0
    failures: list = dataclasses.field(default_factory=list)
    details: dict = dataclasses.field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self):
        return not self.failures


def vanishing_battery(max_group_order=16, max_module_order=49, max_actions=25, max_visits=150,
                      groups=None, modules=None):
    """H^1(G, A) = 0 for nilpotent G, A^G = 0, over the generated family."""
    t0 = time.perf_counter()
    res = BatteryResult("vanishing")
    groups = groups or nilpotent_small_groups(max_group_order)
    mods = modules or abelian_groups_up_to(max_module_order)
    pairs = 0
    skipped = 0
    for gname, g in groups.items():
        for a in mods:
            if a.order == 1:
                continue
            if forced_fixed_points(g, a):
                skipped += 1
                continue
            pairs += 1
            for m in action_family(g, a, max_actions, max_visits):
                res.instances += 1
                h1 = h1_der(m)
                if h1.group.order != 1:
                    res.failures.append({"group": gname, "coeffs": list(a.factors),
                                         "action": m.rho[list(g.generators)].tolist(),
                                         "h1": list(h1.group.factors)})
    res.details.update(pairs=pairs, pairs_with_forced_fixed_points=skipped, groups=len(groups), modules=len(mods))
    res.seconds = time.perf_counter() - t0
    return res


# ---------------------------------------------------------------------------
# named module catalogs


def _sign_images(group, sign_of_gen, a_scalar):
    return {s: a_scalar if sign_of_gen[i] else np.eye(a_scalar.shape[0], dtype=np.int64)
            for i, s in enumerate(group.generators)}


def catalog_modules(max_group_order=8, per_pair=2):
    """A deterministic list of (name, GModule): trivial, sign-like and family actions."""
    out = []
    coeff_list = [[2], [3], [4], [2, 2], [5], [6], [7], [3, 3], [2, 4]]
    for gname, g in small_groups().items():
        if g.order > max_group_order:
            continue
        for factors in coeff_list:
            a = FiniteAbelianGroup(factors)
            if g.order ** 2 * a.rank > 256 and a.order > 9:
                continue
            out.append((f"{gname}|{factors}|trivial", trivial_module(g, a)))
            for i, m in enumerate(action_family(g, a, max_actions=per_pair, max_visits=40,
                                                qualifying_only=False)):
                if m.is_trivial_action():
                    continue
                out.append((f"{gname}|{factors}|family{i}", m))
    return out


def small_oracle_modules(max_group_order=4, max_module_order=9):
    """Every family action (all visits) for |G| <= 4 and |A| <= 9."""
    out = []
    for gname, g in small_groups().items():
        if g.order > max_group_order:
            continue
        for a in abelian_groups_up_to(max_module_order):
            if a.order == 1:
                continue
            for i, m in enumerate(action_family(g, a, max_actions=10**6, max_visits=10**6,
                                                qualifying_only=False)):
                out.append((f"{gname}|{list(a.factors)}|{i}", m))
    return out


def scalar_module(group, p, images):
    """Action on Z/p by scalars: images maps generator index to a unit."""
    return module_from_generators(group, [p], {s: [[images[i]]] for i, s in enumerate(group.generators)})


def maschke_modules():
    """Qualifying T-modules: T abelian, p not dividing |T|, A p-elementary, A^T = 0."""
    c = cyclic
    g = small_groups()
    mods = [
        ("C3 on F2^2", module_from_generators(c(3), [2, 2], {1: [[0, 1], [1, 1]]})),
        ("C3 on F2^4", module_from_generators(c(3), [2] * 4, {1: _blockdiag([[0, 1], [1, 1]], [[0, 1], [1, 1]])})),
        ("C5 on F2^4", module_from_generators(c(5), [2] * 4, {1: _companion([1, 1, 1, 1], 2)})),
        ("C7 on F2^3", module_from_generators(c(7), [2] * 3, {1: _companion([1, 1, 0], 2)})),
        ("C3xC3 on F2^4", module_from_generators(
            g["C3^2"], [2] * 4, {s: m for s, m in zip(g["C3^2"].generators,
                                                     [_blockdiag([[0, 1], [1, 1]], np.eye(2, dtype=int)),
                                                      _blockdiag(np.eye(2, dtype=int), [[0, 1], [1, 1]])])})),
        ("C2 on F3^2", module_from_generators(c(2), [3, 3], {1: [[2, 0], [0, 2]]})),
        ("C4 on F3^2", module_from_generators(c(4), [3, 3], {1: [[0, 2], [1, 0]]})),
        ("C4 on F3^3", module_from_generators(c(4), [3] * 3, {1: _blockdiag([[0, 2], [1, 0]], [[2]])})),
        ("C2xC2 on F3^2", module_from_generators(
            g["C2^2"], [3, 3], {s: m for s, m in zip(g["C2^2"].generators, [[[2, 0], [0, 1]], [[1, 0], [0, 2]]])})),
        ("C8 on F3^2", module_from_generators(c(8), [3, 3], {1: _companion([2, 1], 3)})),
        ("C2 on F5^3", module_from_generators(c(2), [5] * 3, {1: np.eye(3, dtype=int) * 4})),
        ("C4 on F5^2", module_from_generators(c(4), [5, 5], {1: [[2, 0], [0, 3]]})),
        ("C3 on F5^2", module_from_generators(c(3), [5, 5], {1: [[0, 4], [1, 4]]})),
        ("C6 on F5^3", module_from_generators(c(6), [5] * 3, {1: _blockdiag([[0, 4], [1, 4]], [[4]])})),
    ]
    return mods


def _blockdiag(*blocks):
    blocks = [np.asarray(b, dtype=np.int64) for b in blocks]
    n = sum(b.shape[0] for b in blocks)
    m = np.zeros((n, n), dtype=np.int64)
    i = 0
    for b in blocks:
        k = b.shape[0]
        m[i:i + k, i:i + k] = b
        i += k
    return m


def _companion(coeffs, p):
    """Companion matrix of x^n + c_{n-1} x^{n-1} + ... + c_0 (coeffs = [c_0..c_{n-1}])."""
    n = len(coeffs)
    m = np.zeros((n, n), dtype=np.int64)
    m[1:, :-1] = np.eye(n - 1, dtype=np.int64)
    m[:, -1] = [(-c) % p for c in coeffs]
    return m


def composition_modules():
    """Nilpotent G with A^G = 0 and nontrivial submodule lattices."""
    c = cyclic
    g = small_groups()
    out = [
        ("C3 on F7^2 by 2", module_from_generators(c(3), [7, 7], {1: [[2, 0], [0, 2]]})),
        ("C3 on F7^2 by 2,4", module_from_generators(c(3), [7, 7], {1: [[2, 0], [0, 4]]})),
        ("C2 on F3^3 by -1", module_from_generators(c(2), [3] * 3, {1: np.eye(3, dtype=int) * 2})),
        ("C2 on Z/9 by -1", module_from_generators(c(2), [9], {1: [[8]]})),
        ("C2 on Z3xZ9 by -1", module_from_generators(c(2), [3, 9], {1: [[2, 0], [0, 8]]})),
        ("C4 on F3^4 rotation twice", module_from_generators(c(4), [3] * 4, {1: _blockdiag([[0, 2], [1, 0]], [[0, 2], [1, 0]])})),
        ("C3 on F2^4", module_from_generators(c(3), [2] * 4, {1: _blockdiag([[0, 1], [1, 1]], [[0, 1], [1, 1]])})),
        ("C5 on F11^2", module_from_generators(c(5), [11, 11], {1: [[3, 0], [0, 9]]})),
        ("Q8 on F3^2 via C2^2", _q8_signs()),
        ("D8 on F3^2 signs", module_from_generators(g["D8"], [3, 3], {s: m for s, m in zip(
            g["D8"].generators, _d8_sign_images(g["D8"]))})),
        ("C2xC2 on F5^2", module_from_generators(g["C2^2"], [5, 5], {s: m for s, m in zip(
            g["C2^2"].generators, [[[4, 0], [0, 4]], [[1, 0], [0, 4]]])})),
        ("C6 on Z/7^2", module_from_generators(c(6), [7, 7], {1: [[3, 0], [0, 5]]})),
    ]
    return out


def _q8_signs():
    """Q8 acting on F3^2 through Q8/Z(Q8) = C2 x C2, each generator negating one coordinate."""
    q8 = small_groups()["Q8"]
    q, proj = quotient_group(q8, center(q8))
    images = {s: m for s, m in zip(q.generators, [[[2, 0], [0, 1]], [[1, 0], [0, 2]]])}
    base = module_from_generators(q, [3, 3], images)
    return pullback(base, proj)


def _d8_sign_images(d8):
    mats = [[[2, 0], [0, 1]], [[1, 0], [0, 2]]]
    return mats[:len(d8.generators)]


# ---------------------------------------------------------------------------
# short exact sequences and inflation-restriction pairs


def ses_catalog():
    """Short exact sequences of G-modules, split and non-split."""
    out = []
    c2, c4, c3 = cyclic(2), cyclic(4), cyclic(3)
    g = small_groups()
    t = trivial_module
    # Z/2 -> Z/4 -> Z/2, trivial action (non-split as groups)
    out.append(("C2: Z2>Z4>>Z2 trivial", ShortExactSequence(t(c2, [2]), t(c2, [4]), t(c2, [2]), [[2]], [[1]])))
    neg4 = module_from_generators(c2, [4], {1: [[3]]})
    out.append(("C2: Z2>Z4>>Z2 negation", ShortExactSequence(t(c2, [2]), neg4, t(c2, [2]), [[2]], [[1]])))
    out.append(("C4: Z2>Z4>>Z2 trivial", ShortExactSequence(t(c4, [2]), t(c4, [4]), t(c4, [2]), [[2]], [[1]])))
    out.append(("C2: Z3>Z9>>Z3 trivial", ShortExactSequence(t(c2, [3]), t(c2, [9]), t(c2, [3]), [[3]], [[1]])))
    neg9 = module_from_generators(c2, [9], {1: [[8]]})
    neg3 = module_from_generators(c2, [3], {1: [[2]]})
    out.append(("C2: Z3>Z9>>Z3 negation", ShortExactSequence(neg3, neg9, neg3, [[3]], [[1]])))
    # split sequences A > A + C >> C
    for name, left, right in [("C2 trivial Z2+Z2", t(c2, [2]), t(c2, [2])),
                              ("C3 on Z7 + trivial Z7", module_from_generators(c3, [7], {1: [[2]]}), t(c3, [7])),
                              ("C2 on Z3 sign + trivial Z3", neg3, t(c2, [3]))]:
        out.append((f"split {name}", _split_ses(left, right)))
    # permutation module of C2 over F2: trivial line inside F2[C2]
    perm = module_from_generators(c2, [2, 2], {1: [[0, 1], [1, 0]]})
    out.append(("C2: F2 > F2[C2] >> F2", ShortExactSequence(t(c2, [2]), perm, t(c2, [2]), [[1], [1]], [[1, 1]])))
    perm3 = module_from_generators(c3, [3, 3, 3], {1: [[0, 0, 1], [1, 0, 0], [0, 1, 0]]})
    out.append(("C3: F3 > F3[C3] >> aug quotient", _ses_from_sub(perm3, [(1, 1, 1)])))
    d8 = g["D8"]
    perm4 = _regular_like(d8)
    out.append(("D8: F2 > F2^4 perm >> quotient", _ses_from_sub(perm4, [(1, 1, 1, 1)])))
    out.append(("C2^2: Z2>Z4>>Z2 trivial", ShortExactSequence(t(g["C2^2"], [2]), t(g["C2^2"], [4]),
                                                               t(g["C2^2"], [2]), [[2]], [[1]])))
    return out


def _split_ses(left, right):
    """left > left + right >> right; the summand factors must form a divisibility chain."""
    g = left.group
    a, c = left.coeffs, right.coeffs
    factors = a.factors + c.factors
    r = len(factors)
    mats = []
    for x in range(g.order):
        m = np.zeros((r, r), dtype=np.int64)
        m[:a.rank, :a.rank] = left.rho[x]
        m[a.rank:, a.rank:] = right.rho[x]
        mats.append(m)
    mid = GModule(g, FiniteAbelianGroup(factors), mats)
    inj = np.zeros((r, a.rank), dtype=np.int64)
    inj[:a.rank, :a.rank] = np.eye(a.rank, dtype=np.int64)
    surj = np.zeros((c.rank, r), dtype=np.int64)
    surj[:, a.rank:] = np.eye(c.rank, dtype=np.int64)
    return ShortExactSequence(left, mid, right, inj, surj)


def _ses_from_sub(module, gens):
    from .gmodule import QuotientBy, SubOn, submodule, derive_module
    sub = submodule(module, gens)
    left, llink = derive_module(module, SubOn(sub))
    right, rlink = derive_module(module, QuotientBy(sub))
    return ShortExactSequence(left, module, right, llink.embedding.matrix, rlink.projection.matrix)


def _regular_like(group):
    """Permutation module over F2 of the action on the cosets of a subgroup of index 4."""
    h = next(s for s in enumerate_subgroups(group) if s.order * 4 == group.order)
    cosets = []
    seen = set()
    for x in range(group.order):
        cs = frozenset(group.mul(x, y) for y in h.elements)
        if cs not in seen:
            seen.add(cs)
            cosets.append(cs)
    mats = []
    for x in range(group.order):
        m = np.zeros((4, 4), dtype=np.int64)
        for j, cs in enumerate(cosets):
            img = frozenset(group.mul(x, y) for y in cs)
            m[cosets.index(img), j] = 1
        mats.append(m)
    return GModule(group, [2, 2, 2, 2], mats)


def inf_res_pairs(max_group_order=8, limit=None):
    """(name, module, normal subgroup) pairs from the catalog modules."""
    out = []
    for name, m in catalog_modules(max_group_order=max_group_order, per_pair=1):
        g = m.group
        for h in enumerate_subgroups(g):
            if is_normal(g, h):
                out.append((f"{name}|H{h.order}:{h.elements}", m, h))
    return out[:limit] if limit else out
