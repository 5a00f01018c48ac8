"""Brute-force cohomology by enumeration, an oracle independent of the subquotient engine.

Cocycles are enumerated by vectorized backtracking over the values of a
cochain, one basis tuple at a time, pruning with every cocycle equation as
soon as all of its arguments are assigned.  Coboundaries come from
enumerating all of C^{n-1}.  The invariant factors of Z/B are read off the
counts |{z in Z : p^i z in B}|.
"""

import itertools
import math

import numpy as np
import sympy

from .errors import EnumerationCapExceeded

ROW_CAP = 4_000_000


def _encode(vals, moduli):
    """Integer code of each row of values (shape (..., slots, r))."""
    flat = vals.reshape(vals.shape[0], -1)
    mods = np.tile(moduli, flat.shape[1] // max(len(moduli), 1))
    code = np.zeros(flat.shape[0], dtype=object if math.prod(int(m) for m in mods) >= 2**62 else np.int64)
    for j, m in enumerate(mods):
        code = code * int(m) + flat[:, j]
    return code


def _all_values(moduli, slots):
    """Every assignment of coefficient values to ``slots`` tuples: shape (|A|^slots, slots, r)."""
    r = len(moduli)
    elems = np.array(list(itertools.product(*(range(int(m)) for m in moduli))), dtype=np.int64).reshape(-1, r)
    idx = np.array(list(itertools.product(range(len(elems)), repeat=slots)), dtype=np.int64).reshape(-1, slots)
    return elems[idx]


def _coboundary(module, n, vals):
    """Apply the inhomogeneous differential to a batch of (n-1)-cochains.

    vals has shape (batch, |G|^(n-1), r); returns shape (batch, |G|^n, r).
    """
    g = module.group
    order, t = g.order, g.table
    mods = module.coeffs.mod_array
    out = []
    for args in itertools.product(range(order), repeat=n):
        acc = np.zeros((vals.shape[0], len(mods)), dtype=np.int64)
        # g_1 . f(g_2, ..., g_n)
        acc += vals[:, _index(args[1:], order)] @ module.rho[args[0]].T
        for s in range(1, n):
            merged = args[:s - 1] + (int(t[args[s - 1], args[s]]),) + args[s + 1:]
            acc += (-1) ** s * vals[:, _index(merged, order)]
        acc += (-1) ** n * vals[:, _index(args[:-1], order)]
        out.append(acc % mods)
    return np.stack(out, axis=1)


def _index(args, order):
    i = 0
    for a in args:
        i = i * order + a
    return i


def _equations(module, n):
    """Cocycle equations of degree n as lists of (slot, element acting or None, sign)."""
    g = module.group
    order, t = g.order, g.table
    eqs = []
    for args in itertools.product(range(order), repeat=n + 1):
        terms = [(_index(args[1:], order), args[0], 1)]
        for s in range(1, n + 1):
            merged = args[:s - 1] + (int(t[args[s - 1], args[s]]),) + args[s + 1:]
            terms.append((_index(merged, order), None, (-1) ** s))
        terms.append((_index(args[:-1], order), None, (-1) ** (n + 1)))
        eqs.append(terms)
    return eqs


def cocycles(module, n):
    """All n-cocycles as an array of shape (count, |G|^n, r)."""
    order = module.group.order
    mods = module.coeffs.mod_array
    r = len(mods)
    slots = order ** n
    elems = np.array(list(itertools.product(*(range(int(m)) for m in mods))), dtype=np.int64).reshape(-1, r)
    eqs = _equations(module, n)
    order_slots = _slot_order(eqs, slots)
    pos = {s: k for k, s in enumerate(order_slots)}
    by_last = [[] for _ in range(slots)]
    for eq in eqs:
        by_last[max(pos[s] for s, _, _ in eq)].append([(pos[s], a, sg) for s, a, sg in eq])
    partial = np.zeros((1, 0, r), dtype=np.int64)
    for k in range(slots):
        count = len(partial) * len(elems)
        if count > ROW_CAP:
            raise EnumerationCapExceeded(f"{count} partial cochains", rows=count)
        ext = np.concatenate([np.repeat(partial, len(elems), axis=0),
                              np.tile(elems, (len(partial), 1))[:, None, :]], axis=1)
        keep = np.ones(len(ext), dtype=bool)
        for eq in by_last[k]:
            acc = np.zeros((len(ext), r), dtype=np.int64)
            for slot, actor, sign in eq:
                v = ext[:, slot]
                if actor is not None:
                    v = v @ module.rho[actor].T
                acc += sign * v
            keep &= np.all(acc % mods == 0, axis=1)
        partial = ext[keep]
    inverse = [pos[s] for s in range(slots)]
    return partial[:, inverse]


def _slot_order(eqs, slots):
    """Greedy order of the slots: next is the one completing the most equations."""
    supports = [frozenset(s for s, _, _ in eq) for eq in eqs]
    done, order = set(), []
    while len(order) < slots:
        best, best_score = None, -1
        for s in range(slots):
            if s in done:
                continue
            trial = done | {s}
            score = sum(1 for sup in supports if s in sup and sup <= trial)
            if score > best_score:
                best, best_score = s, score
        done.add(best)
        order.append(best)
    return order


def coboundaries(module, n):
    """The set of n-coboundaries as an array of codes (and its size)."""
    mods = module.coeffs.mod_array
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    order = module.group.order
    prev = _all_values(mods, order ** (n - 1))
    if len(prev) > ROW_CAP:
        raise EnumerationCapExceeded(f"{len(prev)} cochains of degree {n - 1}", rows=len(prev))
    return np.unique(_encode(_coboundary(module, n, prev), mods))


def invariant_factors(module, n):
    """Invariant factors of H^n(G, A) by enumeration."""
    mods = module.coeffs.mod_array
    if not len(mods):
        return []
    z = cocycles(module, n)
    b = coboundaries(module, n)
    order_h = len(z) // len(b)
    if order_h * len(b) != len(z):
        raise AssertionError("coboundaries do not divide the cocycles")
    factors = {}
    for p in sympy.primefactors(order_h):
        counts = [1]
        i = 1
        while counts[-1] < p ** sympy.multiplicity(p, order_h):
            zi = (p ** i * z) % mods
            hits = int(np.isin(_encode(zi, mods), b).sum())
            counts.append(hits // len(b))
            i += 1
        # number of cyclic p-factors of order >= p^i is log_p(counts[i] / counts[i-1])
        ge = [round(math.log(counts[i] // counts[i - 1], p)) for i in range(1, len(counts))]
        exps = []
        for i, k in enumerate(ge, start=1):
            nxt = ge[i] if i < len(ge) else 0
            exps += [i] * (k - nxt)
        factors[p] = sorted(exps, reverse=True)
    width = max((len(v) for v in factors.values()), default=0)
    out = [1] * width
    for p, exps in factors.items():
        for j, e in enumerate(exps):
            out[width - 1 - j] *= p ** e
    return out
