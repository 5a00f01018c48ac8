"""Inhomogeneous group cochains, their differential, and the cohomology groups.

A cochain of degree n stores one coefficient value per tuple in G^n, the
tuples indexed lexicographically (g_1 is the most significant digit).  The
differential is

    d_n f(g_1..g_{n+1}) = g_1.f(g_2..g_{n+1})
                          + sum_{s=1}^{n} (-1)^s f(g_1..g_s g_{s+1}..g_{n+1})
                          + (-1)^{n+1} f(g_1..g_n)

and is applied to batches of cochains at once; its matrix is the image of
the standard basis.  Cochains are not normalized.
"""

from __future__ import annotations

import dataclasses
import random as _random
from functools import cached_property, lru_cache

import numpy as np

from .abelian import AbelianHom, CyclicSum, FiniteAbelianGroup, as_rows, preimage, subquotient
from .config import HARD_DEGREE_CAP, get_limits
from .errors import DegreeCapExceeded, NotNormal, SizeBudgetExceeded, ValidationError
from .gmodule import GModule, Inflate, Restrict, derive_module, invariants
from .groups import is_normal, normality_witness


# ---------------------------------------------------------------------------
# cochains


class Cochain:
    """f in C^n(G, A); ``values`` has shape (|G|^n, rank A)."""

    def __init__(self, module, degree, values):
        n = module.group.order
        r = module.coeffs.rank
        vals = np.asarray(values, dtype=np.int64).reshape(n**degree, r)
        self.module = module
        self.degree = degree
        self.values = vals % module.moduli if r else vals

    @classmethod
    def from_function(cls, module, degree, fn):
        n = module.group.order
        vals = [fn(*tup) for tup in np.ndindex(*([n] * degree))]
        return cls(module, degree, as_rows(vals, module.coeffs.rank))

    @classmethod
    def from_flat(cls, module, degree, vec):
        return cls(module, degree, np.asarray(vec, dtype=np.int64))

    def __call__(self, *gs):
        n = self.module.group.order
        idx = 0
        for g in gs:
            idx = idx * n + int(g)
        return tuple(int(v) for v in self.values[idx])

    @property
    def flat(self):
        return self.values.reshape(-1)

    def __add__(self, other):
        return Cochain(self.module, self.degree, self.values + other.values)

    def __sub__(self, other):
        return Cochain(self.module, self.degree, self.values - other.values)

    def __eq__(self, other):
        return (isinstance(other, Cochain) and self.degree == other.degree
                and np.array_equal(self.values, other.values))

    def is_zero(self):
        return not self.values.any()

    def __repr__(self):
        return f"Cochain(degree={self.degree}, values={self.values.tolist()})"


def cochain_group(module, n):
    """C^n(G, A) as a direct sum of cyclic groups, coordinates (tuple, coord)."""
    count = module.group.order**n
    return CyclicSum(module.coeffs.moduli * count)


@lru_cache(maxsize=64)
def _digits(order, length):
    """Digit array (order^length, length) of the lexicographic tuples."""
    idx = np.arange(order**length, dtype=np.int64)
    out = np.empty((idx.size, length), dtype=np.int64)
    for pos in range(length - 1, -1, -1):
        out[:, pos] = idx % order
        idx = idx // order
    return out


@lru_cache(maxsize=64)
def _face_indices(table_bytes, order, n):
    """Source indices of the middle faces s = 1..n and of the last face."""
    table = np.frombuffer(table_bytes, dtype=np.int64).reshape(order, order)
    dig = _digits(order, n + 1)
    faces = []
    for s in range(1, n + 1):
        merged = np.concatenate([dig[:, :s - 1], table[dig[:, s - 1], dig[:, s]][:, None], dig[:, s + 1:]], axis=1)
        idx = np.zeros(dig.shape[0], dtype=np.int64)
        for pos in range(n):
            idx = idx * order + merged[:, pos]
        faces.append(idx)
    last = np.arange(order ** (n + 1), dtype=np.int64) // order
    return faces, last


def apply_differential(module, n, batch):
    """d_n on a batch of cochains of shape (B, |G|^n, r); no cap checks."""
    g = module.group
    order, r = g.order, module.coeffs.rank
    batch = np.asarray(batch, dtype=np.int64)
    if r == 0:
        return np.zeros((batch.shape[0] if batch.ndim else 0, order ** (n + 1), 0), dtype=np.int64)
    batch = batch.reshape(-1, order**n, r)
    mods = module.moduli
    # g_1 . f(g_2, ..., g_{n+1})
    out = np.einsum("gij,bmj->bgmi", module.rho, batch).reshape(batch.shape[0], order ** (n + 1), r)
    faces, last = _face_indices(g.table.tobytes(), order, n)
    for s, idx in enumerate(faces, start=1):
        out += (-1) ** s * batch[:, idx, :]
    out += (-1) ** (n + 1) * batch[:, last, :]
    return out % mods


def _check_degree(module, n, enforce_cap=True):
    if n < 0:
        raise ValidationError("degree must be nonnegative")
    if n > HARD_DEGREE_CAP:
        raise DegreeCapExceeded(f"degree {n} exceeds the hard cap {HARD_DEGREE_CAP}", degree=n)
    size = differential_size(module, n)
    budget = get_limits().size_budget
    if size > budget:
        raise SizeBudgetExceeded(f"differential d_{n} has {size} entries, budget {budget}", size=size)
    cap = get_limits().degree_cap
    if enforce_cap and n > cap:
        raise DegreeCapExceeded(f"degree {n} exceeds the configured cap {cap}", degree=n)


def differential_size(module, n):
    """Entries of the matrix of d_n."""
    order, r = module.group.order, module.coeffs.rank
    return (order**n * r) * (order ** (n + 1) * r)


def _differential_matrix(module, n):
    cache = module.__dict__.setdefault("_dcache", {})
    if n not in cache:
        order, r = module.group.order, module.coeffs.rank
        dim = order**n * r
        basis = np.eye(dim, dtype=np.int64).reshape(dim, order**n, r)
        out = apply_differential(module, n, basis)
        mat = out.reshape(dim, -1).T.copy()
        mat.setflags(write=False)
        cache[n] = mat
    return cache[n]


def differential(module, n):
    """d_n : C^n -> C^{n+1} as an AbelianHom."""
    _check_degree(module, n)
    return AbelianHom(cochain_group(module, n), cochain_group(module, n + 1),
                      _differential_matrix(module, n), check=False)


def coboundary(module, a):
    """d_0 a, the inner derivation g -> g.a - a."""
    return Cochain(module, 1, apply_differential(module, 0, as_rows([a], module.coeffs.rank))[0])


def is_cocycle(cochain):
    return not apply_differential(cochain.module, cochain.degree, cochain.values[None]).any()


def check_complex(module, n):
    """Whether d_{n+1} o d_n = 0, verified on the whole basis of C^n."""
    order, r = module.group.order, module.coeffs.rank
    dim = order**n * r
    if n + 1 > HARD_DEGREE_CAP + 1:
        raise DegreeCapExceeded("degree beyond the hard cap")
    basis = np.eye(dim, dtype=np.int64).reshape(dim, order**n, r)
    once = apply_differential(module, n, basis)
    twice = apply_differential(module, n + 1, once)
    return not twice.any()


# ---------------------------------------------------------------------------
# cohomology groups


@dataclasses.dataclass
class CohomologyGroup:
    """H^n with one representative cocycle per invariant factor."""
    degree: int
    group: FiniteAbelianGroup
    representatives: list
    module: GModule = dataclasses.field(repr=False, default=None)
    _sq: object = dataclasses.field(repr=False, default=None)

    @property
    def order(self):
        return self.group.order

    def is_zero(self):
        return self.group.order == 1

    def class_of(self, cochain):
        """Coordinates of the class of a cocycle."""
        vec = cochain.flat if isinstance(cochain, Cochain) else np.asarray(cochain, dtype=np.int64)
        return self._sq.coordinates(vec)

    def is_cocycle(self, cochain):
        vec = cochain.flat if isinstance(cochain, Cochain) else np.asarray(cochain, dtype=np.int64)
        return self._sq.contains(vec)

    def is_coboundary(self, cochain):
        vec = cochain.flat if isinstance(cochain, Cochain) else np.asarray(cochain, dtype=np.int64)
        return self._sq.is_boundary(vec)

    @property
    def cycles_order(self):
        return self._sq.cycles_order

    @property
    def boundaries_order(self):
        return self._sq.boundaries_order


def _cohomology(module, n, enforce_cap=True):
    _check_degree(module, n, enforce_cap)
    amb = cochain_group(module, n)
    dn = _differential_matrix(module, n)
    target = cochain_group(module, n + 1).moduli
    bounds = _differential_matrix(module, n - 1).T if n > 0 else None
    sq = subquotient(amb.moduli, kernel=(dn, target), boundaries=bounds)
    reps = [Cochain.from_flat(module, n, g) for g in sq.generators]
    return CohomologyGroup(n, sq.group, reps, module, sq)


def cohomology_group(module, n):
    """H^n(G, A) = ker d_n / im d_{n-1}."""
    return _cohomology(module, n, enforce_cap=True)


class H1Result:
    """H^1 = Der / IDer computed from the derivation equations.

    ``der`` and ``ider`` are the Subquotient presentations of Der(G, A) and
    IDer(G, A) inside C^1, built on first use.
    """

    def __init__(self, cohomology, conditions, inner_rows):
        self.cohomology = cohomology
        self._conditions = conditions
        self._inner = inner_rows

    @property
    def group(self):
        return self.cohomology.group

    @cached_property
    def der(self):
        return subquotient(self.cohomology.module.coeffs.moduli * self.cohomology.module.group.order,
                           kernel=self._conditions)

    @cached_property
    def ider(self):
        return subquotient(self.cohomology.module.coeffs.moduli * self.cohomology.module.group.order,
                           span=self._inner)


def _der_conditions(module):
    """Rows of f -> f(xy) - x.f(y) - f(x) for all pairs, plus f(e) = 0."""
    g = module.group
    order, r = g.order, module.coeffs.rank
    dim = order * r
    x = np.repeat(np.arange(order), order)
    y = np.tile(np.arange(order), order)
    xy = g.table[x, y]
    rows = np.zeros((order * order, r, dim), dtype=np.int64)
    pairs = np.arange(order * order)
    for i in range(r):
        rows[pairs, i, xy * r + i] += 1
        rows[pairs, i, x * r + i] -= 1
        for j in range(r):
            rows[pairs, i, y * r + j] -= module.rho[x, i, j]
    rows = rows.reshape(-1, dim)
    ident = np.zeros((r, dim), dtype=np.int64)
    ident[np.arange(r), np.arange(r)] = 1
    return np.vstack([rows, ident]), module.coeffs.moduli * (order * order + 1)


def h1_der(module):
    """H^1 as derivations modulo inner derivations (independent of d_1)."""
    order, r = module.group.order, module.coeffs.rank
    amb = module.coeffs.moduli * order
    if r == 0:
        empty = subquotient(())
        res = H1Result(CohomologyGroup(1, empty.group, [], module, empty), None, None)
        res.der = res.ider = empty
        return res
    cond, tmods = _der_conditions(module)
    eye = np.eye(r, dtype=np.int64)
    inner = np.stack([(module.rho[g] - eye) for g in range(order)])  # (order, r, r)
    inner_rows = inner.transpose(2, 0, 1).reshape(r, order * r)       # row j: a = e_j
    sq = subquotient(amb, kernel=(cond, tmods), boundaries=inner_rows)
    reps = [Cochain.from_flat(module, 1, g) for g in sq.generators]
    return H1Result(CohomologyGroup(1, sq.group, reps, module, sq), (cond, tmods), inner_rows)


def derivation_group(module):
    return h1_der(module).der


# ---------------------------------------------------------------------------
# maps between H^1 groups


def _hom_from_images(source_group, target_group, coords):
    mat = np.array(coords, dtype=np.int64).reshape(source_group.rank, target_group.rank).T
    return AbelianHom(source_group, target_group, mat)


def _require_normal(group, sub):
    if not is_normal(group, sub):
        s, g = normality_witness(group, sub)
        raise NotNormal("subgroup is not normal", s=s, g=g)


@dataclasses.dataclass
class H1Maps:
    inflation: AbelianHom
    restriction: AbelianHom
    quotient_h1: H1Result
    h1: H1Result
    sub_h1: H1Result
    quotient_module: GModule
    sub_module: GModule
    sub_elements: list


def inflate_cochain(quot_cochain, projection, embedding, module):
    """(inf f)(g) = f(gH) read inside A."""
    vals = quot_cochain.values[np.asarray(projection.map)]
    lifted = embedding.apply_rows(vals) if embedding.source.rank else np.zeros((len(vals), module.coeffs.rank))
    return Cochain(module, 1, lifted)


def restrict_cochain(cochain, sub_module, elements):
    return Cochain(sub_module, 1, cochain.values[np.asarray(elements)])


def h1_maps(module, sub):
    """Inflation H^1(G/H, A^H) -> H^1(G, A) and restriction H^1(G, A) -> H^1(H, A)."""
    g = module.group
    _require_normal(g, sub)
    quot, link = derive_module(module, Inflate(sub))
    restricted, rlink = derive_module(module, Restrict(sub))
    hq, hg, hh = h1_der(quot), h1_der(module), h1_der(restricted)
    # inflation, checked to send coboundaries to coboundaries
    images = []
    for rep in hq.cohomology.representatives:
        images.append(hg.cohomology.class_of(inflate_cochain(rep, link.projection, link.embedding, module)))
    for a in quot.coeffs.elements() if quot.coeffs.order <= 64 else _unit_vectors(quot.coeffs):
        inner = coboundary(quot, a)
        if not hg.cohomology.is_coboundary(inflate_cochain(inner, link.projection, link.embedding, module)):
            raise ValidationError("inflation does not preserve coboundaries", element=a)
    inf = _hom_from_images(hq.group, hg.group, images)
    images = []
    for rep in hg.cohomology.representatives:
        images.append(hh.cohomology.class_of(restrict_cochain(rep, restricted, rlink.element_map)))
    for a in _unit_vectors(module.coeffs):
        inner = coboundary(module, a)
        if not hh.cohomology.is_coboundary(restrict_cochain(inner, restricted, rlink.element_map)):
            raise ValidationError("restriction does not preserve coboundaries", element=a)
    res = _hom_from_images(hg.group, hh.group, images)
    return H1Maps(inf, res, hq, hg, hh, quot, restricted, rlink.element_map)


def _unit_vectors(a):
    return [a.unit_vector(i) for i in range(a.rank)]


def _conjugation_matrix(module, h1h, sub_module, elements, x):
    """Action of x on H^1(H, A) in the coordinates of h1h."""
    g = module.group
    pos = {e: i for i, e in enumerate(elements)}
    perm = np.array([pos[g.conj(e, x)] for e in elements], dtype=np.int64)
    cols = []
    for rep in h1h.cohomology.representatives:
        vals = module.act_rows(x, rep.values[perm])
        cols.append(h1h.cohomology.class_of(Cochain(sub_module, 1, vals)))
    return np.array(cols, dtype=np.int64).reshape(h1h.group.rank, h1h.group.rank).T


@dataclasses.dataclass
class FixedPoints:
    """H^1(H, A)^{G/H} inside H^1(H, A)."""
    ambient: FiniteAbelianGroup
    group: FiniteAbelianGroup
    generators: list
    action: dict
    _sq: object = dataclasses.field(repr=False, default=None)

    def contains(self, coords):
        return self._sq.contains(coords)

    @property
    def order(self):
        return self.group.order


def conj_action_fixed(module, sub, h1h=None, restricted=None, elements=None):
    """The subgroup of H^1(H, A) fixed by the conjugation action of G."""
    g = module.group
    _require_normal(g, sub)
    if h1h is None:
        restricted, rlink = derive_module(module, Restrict(sub))
        elements = rlink.element_map
        h1h = h1_der(restricted)
    amb = h1h.group
    action = {x: _conjugation_matrix(module, h1h, restricted, elements, x) for x in g.generators}
    if amb.rank == 0:
        sq = subquotient(())
        return FixedPoints(amb, sq.group, [], action, sq)
    eye = np.eye(amb.rank, dtype=np.int64)
    rows = [action[x] - eye for x in g.generators]
    if rows:
        sq = subquotient(amb.moduli, kernel=(np.vstack(rows), amb.moduli * len(rows)))
    else:
        sq = subquotient(amb.moduli)
    return FixedPoints(amb, sq.group, list(sq.generators), action, sq)


def conjugate_derivation(module, f, x):
    """(x.f)(h) = x.f(x^-1 h x) for a 1-cochain f on the whole group."""
    g = module.group
    perm = np.array([g.conj(h, x) for h in range(g.order)], dtype=np.int64)
    return Cochain(module, 1, module.act_rows(x, f.values[perm]))


def remark_inner_check(module, exhaustive=True):
    """(x.f) - f is inner for every derivation f and every x in G.

    Returns (holds, witness); walks every derivation when ``exhaustive`` and
    the derivation group is within the element cap, else its generators.
    """
    res = h1_der(module)
    der = res.der
    if exhaustive and der.order <= get_limits().element_cap:
        ders = [np.asarray(v, dtype=np.int64) for v in der.elements()]
    else:
        ders = [np.asarray(v, dtype=np.int64) for v in der.generators]
    for vec in ders:
        f = Cochain.from_flat(module, 1, vec)
        for x in range(module.group.order):
            diff = conjugate_derivation(module, f, x) - f
            if not res.ider.contains(diff.flat):
                return False, {"derivation": vec.tolist(), "x": x}
    return True, {"derivations_checked": len(ders)}


# ---------------------------------------------------------------------------
# exactness reports


@dataclasses.dataclass
class ExactnessNode:
    label: str
    ker_order: int
    im_order: int
    exact: object   # True, False, or None when not checked
    witness: dict = dataclasses.field(default_factory=dict)


@dataclasses.dataclass
class ExactnessReport:
    nodes: list

    @property
    def exact(self):
        return all(n.exact is not False for n in self.nodes)

    def as_dict(self):
        return [dataclasses.asdict(n) for n in self.nodes]


def exactness_at(label, incoming, outgoing):
    """Compare im(incoming) with ker(outgoing) inside their common group.

    ``incoming`` may be None (the zero map from 0); ``outgoing`` may be None
    (the zero map to 0).
    """
    if incoming is None:
        im_order, im_gens = 1, []
    else:
        im = incoming.image()
        im_order, im_gens = im.order, list(im.generators)
    if outgoing is None:
        ker_order = (incoming.target.order if incoming is not None else 1)
        ker = None
    else:
        ker = outgoing.kernel()
        ker_order = ker.order
    witness = {}
    exact = ker_order == im_order
    for x in im_gens:
        if ker is not None and not ker.contains(x):
            exact = False
            witness["image_not_in_kernel"] = list(x)
            break
    if ker_order != im_order:
        witness["orders"] = [ker_order, im_order]
    return ExactnessNode(label, ker_order, im_order, exact, witness)


def check_inf_res_exact(module, sub):
    """0 -> H^1(G/H, A^H) -> H^1(G, A) -> H^1(H, A), and im(res) in the fixed points."""
    maps = h1_maps(module, sub)
    fixed = conj_action_fixed(module, sub, maps.sub_h1, maps.sub_module, maps.sub_elements)
    nodes = [
        exactness_at("H1(G/H,A^H)", None, maps.inflation),
        exactness_at("H1(G,A)", maps.inflation, maps.restriction),
    ]
    im = maps.restriction.image()
    bad = [list(x) for x in im.generators if not fixed.contains(x)]
    nodes.append(ExactnessNode("im(res) <= H1(H,A)^(G/H)", fixed.order, im.order, not bad,
                               {"outside": bad[0]} if bad else {}))
    return ExactnessReport(nodes)


# ---------------------------------------------------------------------------
# short exact sequences


class ShortExactSequence:
    """0 -> A --inj--> B --surj--> C -> 0 of G-modules."""

    def __init__(self, left, middle, right, inj, surj, check=True):
        self.left, self.middle, self.right = left, middle, right
        self.inj = inj if isinstance(inj, AbelianHom) else AbelianHom(left.coeffs, middle.coeffs, inj)
        self.surj = surj if isinstance(surj, AbelianHom) else AbelianHom(middle.coeffs, right.coeffs, surj)
        if check:
            self.validate()

    def validate(self):
        inj, surj = self.inj, self.surj
        if not (self.left.group is self.middle.group is self.right.group):
            if not (self.left.group.order == self.middle.group.order == self.right.group.order and
                    np.array_equal(self.left.group.table, self.middle.group.table) and
                    np.array_equal(self.middle.group.table, self.right.group.table)):
                raise ValidationError("modules are over different groups")
        if not inj.is_injective():
            raise ValidationError("left map is not injective")
        if not surj.is_surjective():
            raise ValidationError("right map is not surjective")
        node = exactness_at("B", inj, surj)
        if not node.exact:
            raise ValidationError("image of the left map differs from the kernel of the right map", **node.witness)
        for g in range(self.middle.group.order):
            if not np.array_equal((self.middle.rho[g] @ inj.matrix) % self.middle.moduli[:, None] if inj.target.rank
                                  else inj.matrix, (inj.matrix @ self.left.rho[g]) % self.middle.moduli[:, None]
                                  if inj.target.rank else inj.matrix):
                raise ValidationError("left map is not equivariant", g=g)
            if surj.target.rank and not np.array_equal(
                    (self.right.rho[g] @ surj.matrix) % self.right.moduli[:, None],
                    (surj.matrix @ self.middle.rho[g]) % self.right.moduli[:, None]):
                raise ValidationError("right map is not equivariant", g=g)

    @property
    def group(self):
        return self.middle.group


class _Section:
    """Set-theoretic section of surj: least preimage, optionally randomized."""

    def __init__(self, surj, rng=None):
        self.surj = surj
        self.ker = list(surj.kernel().elements())
        self.rng = rng
        self.cache = {}

    def __call__(self, c):
        c = tuple(int(v) for v in c)
        if c in self.cache:
            return self.cache[c]
        x0 = preimage(self.surj, c)
        if x0 is None:
            raise ValidationError("element has no preimage", element=c)
        b = self.surj.source
        coset = [b.add(x0, k) for k in self.ker]
        x = self.rng.choice(coset) if self.rng is not None else min(coset)
        self.cache[c] = x
        return x


class _Pullback:
    """Inverse of an injective hom on its image."""

    def __init__(self, inj):
        self.inj = inj
        self.cache = {}

    def __call__(self, y):
        y = tuple(int(v) for v in y)
        if y not in self.cache:
            x = preimage(self.inj, y)
            if x is None:
                raise ValidationError("value outside the image of the injection", element=y)
            self.cache[y] = x
        return self.cache[y]


def _lift_values(values, section, rank):
    return as_rows([section(v) for v in values], rank)


def _connecting_cochain(seq, cochain, section, pullback):
    """Snake construction at cochain level: lift, differentiate, pull back."""
    b = seq.middle
    n = cochain.degree
    lifted = _lift_values(cochain.values, section, b.coeffs.rank)
    db = apply_differential(b, n, lifted[None])[0]
    pulled = _lift_values(db, pullback, seq.left.coeffs.rank)
    return Cochain(seq.left, n + 1, pulled)


def connecting_map(seq, section="least", seed=None, h1_left=None):
    """delta: C^G = H^0(G, C) -> H^1(G, A).

    ``section`` is "least" (least preimage) or "random" (a uniformly chosen
    preimage per value, drawn with ``seed``).  The induced map on classes
    does not depend on this choice.
    """
    rng = _random.Random(seed) if section == "random" else None
    sec = _Section(seq.surj, rng)
    pull = _Pullback(seq.inj)
    fixed = invariants(seq.right)
    h1 = h1_left or h1_der(seq.left)
    cols = []
    for c in fixed.generators:
        delta = _connecting_cochain(seq, Cochain(seq.right, 0, [c]), sec, pull)
        if not h1.cohomology.is_cocycle(delta):
            raise ValidationError("connecting cochain is not a derivation")
        cols.append(h1.cohomology.class_of(delta))
    return _hom_from_images(fixed.presentation, h1.group, cols)


def _hn(module, n):
    if n == 1:
        return h1_der(module).cohomology
    return _cohomology(module, n, enforce_cap=False)


def induced_map(source, target, phi, hs, ht):
    """phi_*: H^n(source) -> H^n(target) for an equivariant coefficient map."""
    cols = []
    for rep in hs.representatives:
        vals = phi.apply_rows(rep.values) if phi.source.rank else np.zeros((rep.values.shape[0], phi.target.rank))
        cols.append(ht.class_of(Cochain(target, hs.degree, vals)))
    return _hom_from_images(hs.group, ht.group, cols)


def connecting_hom(seq, n, hc, ha, section="least", seed=None):
    """delta_n: H^n(G, C) -> H^{n+1}(G, A)."""
    rng = _random.Random(seed) if section == "random" else None
    sec = _Section(seq.surj, rng)
    pull = _Pullback(seq.inj)
    cols = []
    for rep in hc.representatives:
        delta = _connecting_cochain(seq, rep, sec, pull)
        if not ha.is_cocycle(delta):
            raise ValidationError("connecting cochain is not a cocycle", degree=n + 1)
        cols.append(ha.class_of(delta))
    return _hom_from_images(hc.group, ha.group, cols)


def check_long_exact(seq, max_degree=1):
    """Exactness of 0 -> H^0(A) -> H^0(B) -> H^0(C) -> H^1(A) -> ... -> H^max(C).

    The node at H^max(C) needs delta into H^{max+1}(A); it is reported as
    unchecked (exact = None) when that degree is beyond the hard cap or
    the size budget.
    """
    if max_degree > get_limits().degree_cap:
        raise DegreeCapExceeded(f"degree {max_degree} exceeds the configured cap", degree=max_degree)
    mods = [seq.left, seq.middle, seq.right]
    names = ["A", "B", "C"]
    hs = {}
    for n in range(max_degree + 1):
        for name, m in zip(names, mods):
            hs[name, n] = _hn(m, n)
    # the sequence of maps, in order
    chain = []   # (label of source node, hom out of it)
    for n in range(max_degree + 1):
        chain.append((f"H{n}(G,A)", induced_map(seq.left, seq.middle, seq.inj, hs["A", n], hs["B", n])))
        chain.append((f"H{n}(G,B)", induced_map(seq.middle, seq.right, seq.surj, hs["B", n], hs["C", n])))
        if n < max_degree:
            chain.append((f"H{n}(G,C)", connecting_hom(seq, n, hs["C", n], hs["A", n + 1])))
    last = None
    try:
        _check_degree(seq.left, max_degree + 1, enforce_cap=False)
        ha_next = _hn(seq.left, max_degree + 1)
        last = connecting_hom(seq, max_degree, hs["C", max_degree], ha_next)
    except (DegreeCapExceeded, SizeBudgetExceeded):
        last = None
    nodes = []
    prev = None
    for label, hom in chain:
        nodes.append(exactness_at(label, prev, hom))
        prev = hom
    label = f"H{max_degree}(G,C)"
    if last is not None:
        nodes.append(exactness_at(label, prev, last))
    else:
        nodes.append(ExactnessNode(label, -1, prev.image().order, None, {"reason": "next degree beyond cap"}))
    return ExactnessReport(nodes)


def section_independence(seq, trials=5, seed=0):
    """Compare the connecting map under the least section and random sections."""
    base = connecting_map(seq)
    h1 = h1_der(seq.left)
    for t in range(trials):
        other = connecting_map(seq, section="random", seed=seed + t, h1_left=h1)
        if not np.array_equal(base.matrix, other.matrix):
            return False, {"trial": t, "least": base.matrix.tolist(), "random": other.matrix.tolist()}
    return True, {"trials": trials}
