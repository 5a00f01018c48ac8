"""Finite abelian groups, their homomorphisms, and subquotients.

Elements are plain tuples of coordinates reduced modulo the cyclic orders.
Homomorphisms are integer matrices acting on coordinate column vectors.

Two engines live here.  ``smith_normal_form`` is the textbook unimodular
reduction over Z with unbounded Python integers.  ``subquotient`` presents
ker/im style quotients of a direct sum of cyclic groups by splitting into
primary parts and working in (Z/p^k)^N, see ``_chainring``.
"""

from __future__ import annotations

import dataclasses
import itertools
import math
from functools import cached_property

import numpy as np
import sympy

from . import _chainring as cr
from .errors import NotWellDefined, ValidationError


# ---------------------------------------------------------------------------
# Smith normal form over Z


@dataclasses.dataclass(frozen=True)
class SNFResult:
    U: list
    D: list
    V: list

    @property
    def diagonal(self):
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))]


def _identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a, b):
    """Integer matrix product on lists of lists."""
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][t] * b[t][j] for t in range(inner)) for j in range(cols)] for i in range(len(a))]


def smith_normal_form(m):
    """Return U, D, V with U*M*V = D, D diagonal, d_i | d_{i+1}, U and V unimodular."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    a = [[int(x) for x in row] for row in m]
    u = _identity(rows)
    v = _identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):  # row_dst += c * row_src
        a[dst] = [x + c * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in a:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(rows, cols):
        nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nonzero:
            break
        _, i, j = min(nonzero)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // a[t][t]
                    add_row(i, t, -q)
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // a[t][t]
                    add_col(j, t, -q)
                    if a[t][j]:
                        done = False
            if done:
                # pivot must divide the rest of the block
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % a[t][t]), None)
                if bad is None:
                    break
                add_row(t, bad[0], 1)
                continue
            nonzero = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols)
                       if a[i][j] and (i == t or j == t)]
            _, i, j = min(nonzero)
            swap_rows(t, i)
            swap_cols(t, j)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return SNFResult(u, a, v)


def determinant(m):
    return int(sympy.Matrix(m).det()) if m else 1


# ---------------------------------------------------------------------------
# groups


def as_rows(xs, width):
    """Integer array of shape (count, width); tolerates width 0 and empty input."""
    arr = np.asarray(xs, dtype=np.int64)
    if arr.size == 0:
        count = arr.shape[0] if arr.ndim >= 2 else 0
        return np.zeros((count, width), dtype=np.int64)
    return arr.reshape(-1, width)


def _factor(n):
    return sympy.factorint(n)


@dataclasses.dataclass(frozen=True, eq=True)
class CyclicSum:
    """Z/m_1 + ... + Z/m_N in a fixed coordinate order (no divisibility required)."""

    moduli: tuple

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        if any(m < 2 for m in moduli):
            raise ValidationError(f"cyclic orders must be >= 2, got {moduli}")
        object.__setattr__(self, "moduli", moduli)

    @property
    def rank(self):
        return len(self.moduli)

    @property
    def order(self):
        return math.prod(self.moduli)

    @cached_property
    def exponent(self):
        return math.lcm(*self.moduli) if self.moduli else 1

    @cached_property
    def mod_array(self):
        return np.array(self.moduli, dtype=np.int64)

    def zero(self):
        return (0,) * self.rank

    def element(self, coords):
        coords = tuple(int(c) for c in coords)
        if len(coords) != self.rank:
            raise ValidationError(f"element of rank {len(coords)} for group of rank {self.rank}")
        return tuple(c % m for c, m in zip(coords, self.moduli))

    def reduce(self, arr):
        """Reduce an array whose last axis indexes coordinates."""
        return np.asarray(arr, dtype=np.int64) % self.mod_array

    def add(self, x, y):
        return tuple((a + b) % m for a, b, m in zip(x, y, self.moduli))

    def neg(self, x):
        return tuple((-a) % m for a, m in zip(x, self.moduli))

    def scale(self, c, x):
        return tuple((c * a) % m for a, m in zip(x, self.moduli))

    def elements(self):
        """All elements in coordinate (lexicographic) order."""
        return itertools.product(*(range(m) for m in self.moduli))

    def element_order(self, x):
        return math.lcm(*(m // math.gcd(m, a) for a, m in zip(x, self.moduli))) if x else 1

    def unit_vector(self, i):
        return tuple(int(j == i) for j in range(self.rank))

    def __str__(self):
        return " x ".join(f"Z/{m}" for m in self.moduli) or "0"


class FiniteAbelianGroup(CyclicSum):
    """Invariant-factor form d_1 | d_2 | ... | d_k, each d_i >= 2."""

    def __init__(self, factors=()):
        super().__init__(tuple(factors))

    def __post_init__(self):
        super().__post_init__()
        for a, b in zip(self.moduli, self.moduli[1:]):
            if b % a:
                raise ValidationError(f"invariant factors {self.moduli} break the divisibility chain")

    @property
    def factors(self):
        return self.moduli

    @classmethod
    def from_orders(cls, orders):
        """Invariant-factor form of Z/o_1 + ... (orders of 1 are dropped)."""
        orders = [int(o) for o in orders if int(o) != 1]
        if any(o < 1 for o in orders):
            raise ValidationError("cyclic orders must be positive")
        return subquotient(orders).group

    def __repr__(self):
        return f"FiniteAbelianGroup({list(self.factors)})"


TRIVIAL = FiniteAbelianGroup(())


# ---------------------------------------------------------------------------
# homomorphisms


class AbelianHom:
    """Homomorphism source -> target as a (target.rank x source.rank) integer matrix."""

    def __init__(self, source, target, matrix, check=True):
        self.source = source
        self.target = target
        m = np.asarray(matrix, dtype=np.int64).reshape(target.rank, source.rank)
        self.matrix = (m % target.mod_array[:, None]) if target.rank else m
        if check:
            _check_well_defined(source, target, self.matrix)

    def __call__(self, x):
        x = np.asarray(x, dtype=np.int64)
        return tuple(int(v) for v in (self.matrix @ x) % self.target.mod_array) if self.target.rank else ()

    def apply_rows(self, xs):
        """Apply to a batch of elements given as rows."""
        xs = as_rows(xs, self.source.rank)
        return (xs @ self.matrix.T) % self.target.mod_array

    def compose(self, inner):
        """self o inner."""
        return AbelianHom(inner.source, self.target, self.matrix @ inner.matrix, check=False)

    def __eq__(self, other):
        return (isinstance(other, AbelianHom) and self.source == other.source
                and self.target == other.target and np.array_equal(self.matrix, other.matrix))

    def __hash__(self):
        return hash((self.source, self.target, self.matrix.tobytes()))

    def is_zero(self):
        return not self.matrix.any()

    def kernel(self):
        return subquotient(self.source.moduli, kernel=(self.matrix, self.target.moduli))

    def image(self):
        return subquotient(self.target.moduli, span=self.matrix.T)

    def is_injective(self):
        return self.kernel().order == 1

    def is_surjective(self):
        return self.image().order == self.target.order

    def __repr__(self):
        return f"AbelianHom({self.source} -> {self.target}, {self.matrix.tolist()})"


def _check_well_defined(source, target, matrix):
    for j, d in enumerate(source.moduli):
        col = (d * matrix[:, j]) % target.mod_array
        if col.any():
            raise NotWellDefined(f"generator {j} of order {d} is not sent to an element of order dividing {d}",
                                 generator=j)


def validate_hom(source, target, matrix):
    m = np.asarray(matrix, dtype=np.int64)
    if m.shape != (target.rank, source.rank) and m.size != target.rank * source.rank:
        raise ValidationError(f"matrix shape {m.shape} does not match ranks ({target.rank}, {source.rank})")
    return AbelianHom(source, target, m)


def identity_hom(a):
    return AbelianHom(a, a, np.eye(a.rank, dtype=np.int64), check=False)


def zero_hom(source, target):
    return AbelianHom(source, target, np.zeros((target.rank, source.rank), dtype=np.int64), check=False)


# ---------------------------------------------------------------------------
# subquotients


@dataclasses.dataclass
class _PrimePart:
    p: int
    k: int
    kbasis: np.ndarray   # Howell basis of the cycles (mod p^k)
    exps: list           # exponent of each retained generator
    keep: list           # indices into the local SNF output
    v_mat: np.ndarray


class Subquotient:
    """K / I for subgroups I <= K of a direct sum of cyclic groups.

    ``group`` is the invariant-factor presentation, ``generators`` are
    ambient representatives (one per invariant factor) and ``coordinates``
    maps any element of K to its coordinates in ``group``.
    """

    def __init__(self, ambient, group, generators, parts, cycle_log_orders, boundary_log_orders, kbases=()):
        self.ambient = ambient
        self._kbases = list(kbases)  # (p, k, Howell basis of the cycles) for every prime
        self.group = group
        self.generators = generators
        self._parts = parts
        self._cycles = cycle_log_orders
        self._bounds = boundary_log_orders

    @property
    def order(self):
        return self.group.order

    @property
    def cycles_order(self):
        return math.prod(p**e for p, e in self._cycles.items())

    @property
    def boundaries_order(self):
        return math.prod(p**e for p, e in self._bounds.items())

    def contains(self, x):
        """Whether the ambient element x lies in K."""
        x = np.asarray(x, dtype=np.int64)
        return all(cr.contains(kb, x % p**k, p, k) for p, k, kb in self._kbases)

    def coordinates(self, x):
        x = np.asarray(x, dtype=np.int64)
        residues = [[] for _ in self.group.factors]
        moduli = [[] for _ in self.group.factors]
        for part in self._parts:
            q = part.p**part.k
            b, rem = cr.reduce(part.kbasis, x % q, part.p, part.k)
            if rem.any():
                raise ValidationError("element does not lie in the cycle subgroup", element=tuple(int(v) for v in x))
            new = (b @ part.v_mat) % q
            offset = len(self.group.factors) - len(part.keep)
            for slot, (idx, e) in enumerate(zip(part.keep, part.exps)):
                residues[offset + slot].append(int(new[idx]) % part.p**e)
                moduli[offset + slot].append(part.p**e)
        coords = []
        for res, mods in zip(residues, moduli):
            coords.append(int(sympy.ntheory.modular.crt(mods, res)[0]) if mods else 0)
        return tuple(coords)

    def is_boundary(self, x):
        return self.contains(x) and not any(self.coordinates(x))

    def lift(self, coords):
        """Ambient representative of the class with the given coordinates."""
        total = np.zeros(self.ambient.rank, dtype=np.int64)
        for c, g in zip(coords, self.generators):
            total = total + int(c) * np.asarray(g, dtype=np.int64)
        return tuple(int(v) for v in total % self.ambient.mod_array) if self.ambient.rank else ()

    def elements(self):
        """Ambient representatives of every class, ordered by coordinates."""
        for coords in self.group.elements():
            yield self.lift(coords)

    def embedding(self):
        """group -> ambient, valid when the boundaries are trivial."""
        if self.boundaries_order != 1:
            raise ValidationError("embedding requires a trivial boundary subgroup")
        return AbelianHom(self.group, self.ambient,
                          as_rows(self.generators, self.ambient.rank).T)

    def __repr__(self):
        return f"Subquotient({self.group.factors} in {self.ambient})"


def _crt_lift(vec, p, ambient):
    """Lift a p-primary vector to the ambient group (zero away from p)."""
    out = []
    for x, m in zip(vec, ambient.moduli):
        pa = p ** (cr.valuation(m, p) if m % p == 0 else 0)
        if pa == 1:
            out.append(0)
            continue
        rest = m // pa
        out.append(int(sympy.ntheory.modular.crt([pa, rest], [int(x) % pa, 0])[0]))
    return out


def subquotient(moduli, kernel=None, span=None, boundaries=None):
    """Present K/I inside the ambient group Z/m_1 + ... + Z/m_N.

    kernel:     (matrix, target_moduli); K is the kernel of the map it defines.
    span:       rows generating K (used when ``kernel`` is None).
    boundaries: rows generating I, which must lie in K.
    With neither ``kernel`` nor ``span``, K is the whole ambient group.
    """
    ambient = moduli if isinstance(moduli, CyclicSum) else CyclicSum(tuple(moduli))
    n = ambient.rank
    if n == 0:
        return Subquotient(ambient, TRIVIAL, (), [], {}, {})
    if boundaries is None:
        boundaries = np.zeros((0, n), dtype=np.int64)
    boundaries = as_rows(boundaries, n)
    primes = set()
    for m in ambient.moduli:
        primes.update(_factor(m))
    parts = []
    kbases = []
    p_cyclic = {}
    cyc_log, bnd_log = {}, {}
    for p in sorted(primes):
        avals = [cr.valuation(m, p) if m % p == 0 else 0 for m in ambient.moduli]
        k = max(avals)
        bvals = []
        if kernel is not None:
            mat, tmod = kernel
            mat = np.asarray(mat, dtype=np.int64).reshape(len(tmod), n)
            bvals = [cr.valuation(t, p) if t % p == 0 else 0 for t in tmod]
            k = max([k] + bvals)
        q = p**k
        rel = np.zeros((n, n), dtype=np.int64)
        for j, a in enumerate(avals):
            rel[j, j] = p**a % q
        rel = rel[np.any(rel != 0, axis=1)] if n else rel
        if kernel is not None:
            scaled = []
            for i, b in enumerate(bvals):
                scaled.append((mat[i] * p ** (k - b)) % q)
            scaled = as_rows(scaled, n)
            kgens = cr.kernel(scaled, p, k)
        elif span is not None:
            sp = as_rows(span, n) % q
            kgens = np.vstack([sp, boundaries % q, rel])
        else:
            kgens = np.eye(n, dtype=np.int64)
        kbasis = cr.howell(kgens, p, k) if n else np.zeros((0, 0), dtype=np.int64)
        ibasis = cr.howell(np.vstack([boundaries % q, rel]), p, k) if n else np.zeros((0, 0), dtype=np.int64)
        for row in ibasis:
            if not cr.contains(kbasis, row, p, k):
                raise ValidationError("boundary generators do not lie in the cycle subgroup")
        kbases.append((p, k, kbasis))
        klog = cr.span_log_order(kbasis, p, k)
        ilog = cr.span_log_order(ibasis, p, k)
        cyc_log[p] = klog - sum(k - a for a in avals)  # relative to the p-part of the ambient
        bnd_log[p] = ilog - sum(k - a for a in avals)
        s = kbasis.shape[0]
        if klog == ilog:
            continue
        stacked = np.vstack([kbasis, ibasis])
        left = cr.kernel(stacked.T, p, k)
        relations = left[:, :s] if left.size else np.zeros((0, s), dtype=np.int64)
        exps, v_mat, vinv = cr.local_snf(relations, s, p, k)
        keep = [i for i, e in enumerate(exps) if e > 0]
        keep.sort(key=lambda i: exps[i])
        gens = [(vinv[i] @ kbasis) % q for i in keep]
        assert sum(exps[i] for i in keep) == klog - ilog, "subquotient order mismatch"
        parts.append(_PrimePart(p, k, kbasis, [exps[i] for i in keep], keep, v_mat))
        p_cyclic[p] = [(exps[i], g) for i, g in zip(keep, gens)]
    width = max((len(v) for v in p_cyclic.values()), default=0)
    factors = [1] * width
    gens = [np.zeros(n, dtype=np.int64) for _ in range(width)]
    for p, items in p_cyclic.items():
        offset = width - len(items)
        for slot, (e, g) in enumerate(items):
            factors[offset + slot] *= p**e
            gens[offset + slot] = gens[offset + slot] + np.array(_crt_lift(g, p, ambient), dtype=np.int64)
    group = FiniteAbelianGroup(factors)
    generators = tuple(tuple(int(v) for v in (g % ambient.mod_array)) for g in gens) if n else tuple(() for _ in gens)
    return Subquotient(ambient, group, generators, parts, cyc_log, bnd_log, kbases)


# ---------------------------------------------------------------------------
# operations on groups


def kernel_image(h):
    """(kernel, image) of h, each as a FiniteAbelianGroup plus embedding hom."""
    ker = h.kernel()
    im = h.image()
    return (ker.group, ker.embedding()), (im.group, im.embedding())


def subgroup(a, generators):
    """The subgroup of ``a`` generated by the given elements, as a Subquotient."""
    return subquotient(a.moduli, span=as_rows(list(generators), a.rank))


def quotient_by(a, generators):
    """A / <generators> with its projection and a least-coordinate section."""
    sq = subquotient(a.moduli, boundaries=as_rows(list(generators), a.rank))
    cols = [sq.coordinates(a.unit_vector(i)) for i in range(a.rank)]
    proj = AbelianHom(a, sq.group, np.array(cols, dtype=np.int64).reshape(a.rank, sq.group.rank).T)
    return sq.group, proj, _least_section(a, proj)


def _least_section(a, proj):
    def section(c):
        c = tuple(c)
        for x in a.elements():
            if proj(x) == c:
                return x
        raise ValidationError("no preimage", element=c)
    return section


def direct_sum(a, b):
    """A + B in invariant-factor form with injections and projections."""
    amb = CyclicSum(a.moduli + b.moduli) if a.rank + b.rank else None
    if amb is None:
        return TRIVIAL, (zero_hom(a, TRIVIAL), zero_hom(b, TRIVIAL)), (zero_hom(TRIVIAL, a), zero_hom(TRIVIAL, b))
    sq = subquotient(amb.moduli)
    s = sq.group
    inj_a = AbelianHom(a, s, np.array([sq.coordinates(a.unit_vector(i) + b.zero()) for i in range(a.rank)],
                                      dtype=np.int64).reshape(a.rank, s.rank).T)
    inj_b = AbelianHom(b, s, np.array([sq.coordinates(a.zero() + b.unit_vector(i)) for i in range(b.rank)],
                                      dtype=np.int64).reshape(b.rank, s.rank).T)
    gens = np.array(sq.generators, dtype=np.int64).reshape(s.rank, amb.rank)
    proj_a = AbelianHom(s, a, gens[:, :a.rank].T)
    proj_b = AbelianHom(s, b, gens[:, a.rank:].T)
    return s, (inj_a, inj_b), (proj_a, proj_b)


def _unit_combination(values, e):
    """Integers c with sum c_i v_i = 1 (mod e), or None if gcd(values, e) != 1."""
    g, coeffs = e, [0] * len(values)
    # running extended gcd: g = sum coeffs_i v_i + (multiple of e)
    for i, v in enumerate(values):
        v = int(v) % e
        if v == 0:
            continue
        d, s, t = _ext_gcd(g, v)
        coeffs = [c * s for c in coeffs]
        coeffs[i] += t
        g = d
    return [c % e for c in coeffs] if g == 1 else None


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    d, s, t = _ext_gcd(b, a % b)
    return d, t, s - (a // b) * t


def preimage(hom, y):
    """Some x with hom(x) = y, or None when y is not in the image.

    Solves through the kernel of (x, t) -> hom(x) - t y on source + Z/e,
    e the order of y: y is hit exactly when the t-coordinates of that
    kernel generate Z/e.
    """
    a, b = hom.source, hom.target
    y = tuple(int(v) for v in y)
    e = b.element_order(y)
    if e == 1:
        return a.zero()
    if a.rank == 0:
        return None
    mat = np.hstack([hom.matrix, -np.asarray(y, dtype=np.int64).reshape(-1, 1)])
    ker = subquotient(a.moduli + (e,), kernel=(mat, b.moduli))
    gens = [np.asarray(g, dtype=np.int64) for g in ker.generators]
    coeffs = _unit_combination([g[-1] for g in gens], e)
    if coeffs is None:
        return None
    x = sum((c * g for c, g in zip(coeffs, gens)), np.zeros(a.rank + 1, dtype=np.int64))
    return tuple(int(v) for v in x[:-1] % a.mod_array)


def elementary_prime(a):
    """p if every nonzero element of ``a`` has order p, else None."""
    if a.rank == 0:
        return None
    ps = set(a.moduli)
    if len(ps) == 1:
        (p,) = ps
        if sympy.isprime(p):
            return p
    return None
