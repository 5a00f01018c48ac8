"""Exact linear algebra over the chain rings Z/p^k.

Every finite abelian group we handle splits into its primary parts, and on
the p-part all lattices in play contain p^k Z^N, so they are faithfully
represented by submodules of (Z/p^k)^N.  Over Z/p^k the usual echelon
machinery works once pivots are chosen by minimal p-adic valuation and the
annihilator multiple p^(k-v) * pivot is fed back into the pool; the result
has the Howell property (the rows with zeros in the first j columns span
every element of the module with zeros there), which is what makes kernels,
membership tests and order counts exact.

Entries are kept reduced in [0, p^k) in int64 arrays; p^k < 2**24 keeps
products and short dot products well inside int64.
"""

import numpy as np

MAX_MODULUS = 2**24


def _check_modulus(q):
    if q >= MAX_MODULUS:
        raise OverflowError(f"modulus {q} too large for int64 chain-ring arithmetic")


def valuation(x, p):
    """p-adic valuation of a nonzero integer."""
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _valuations(vals, p, k):
    v = np.zeros(vals.shape, dtype=np.int64)
    cur = vals.copy()
    for _ in range(k):
        div = cur % p == 0
        if not div.any():
            break
        v += div
        cur = np.where(div, cur // p, cur)
    return v


def howell(rows, p, k):
    """Echelon basis with the Howell property of the row span of ``rows``.

    Returns a (t, n) array; row i has its pivot at a strictly larger column
    than row i-1 and its pivot entry is exactly p^v.
    """
    q = p**k
    _check_modulus(q)
    rows = np.asarray(rows, dtype=np.int64)
    n = rows.shape[1]
    work = rows % q
    work = work[np.any(work != 0, axis=1)]
    out = []
    for j in range(n):
        if work.shape[0] == 0:
            break
        col = work[:, j]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        vals = _valuations(col[nz], p, k)
        best = int(np.argmin(vals))
        idx = int(nz[best])
        v = int(vals[best])
        pv = p**v
        unit = int(col[idx]) // pv
        piv = (work[idx] * pow(unit, -1, q)) % q
        work = np.delete(work, idx, axis=0)
        if work.shape[0]:
            f = work[:, j] // pv
            work = (work - np.outer(f, piv)) % q
        if v > 0:
            sat = (piv * (p ** (k - v))) % q
            work = np.vstack([work, sat[None, :]])
        work = work[np.any(work != 0, axis=1)]
        out.append(piv)
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def pivots(basis, p):
    """(column, valuation) of each row of a Howell basis."""
    result = []
    for row in basis:
        j = int(np.flatnonzero(row)[0])
        result.append((j, valuation(int(row[j]), p)))
    return result


def span_log_order(basis, p, k):
    """log_p of the order of the module spanned by a Howell basis."""
    return sum(k - v for _, v in pivots(basis, p))


def reduce(basis, x, p, k):
    """Reduce ``x`` by a Howell basis.

    Returns (coefficients, remainder); the remainder is zero exactly when x
    lies in the span, and then coefficients @ basis == x (mod p^k).
    """
    q = p**k
    x = np.asarray(x, dtype=np.int64) % q
    coeffs = np.zeros(basis.shape[0], dtype=np.int64)
    for i, row in enumerate(basis):
        j = int(np.flatnonzero(row)[0])
        pv = int(row[j])
        c = int(x[j])
        if c == 0:
            continue
        if c % pv:
            break
        c //= pv
        coeffs[i] = c
        x = (x - c * row) % q
    return coeffs, x


def contains(basis, x, p, k):
    return not reduce(basis, x, p, k)[1].any()


def kernel(matrix, p, k):
    """Generators of {x : matrix @ x == 0 (mod p^k)} as rows."""
    q = p**k
    matrix = np.asarray(matrix, dtype=np.int64) % q
    n = matrix.shape[1]
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    rows = howell(matrix, p, k) if matrix.shape[0] else np.zeros((0, n), dtype=np.int64)
    t = rows.shape[0]
    if t == 0:
        return np.eye(n, dtype=np.int64)
    aug = np.hstack([rows.T, np.eye(n, dtype=np.int64)])
    h = howell(aug, p, k)
    keep = [r for r in h if not r[:t].any()]
    if not keep:
        return np.zeros((0, n), dtype=np.int64)
    return np.array([r[t:] for r in keep], dtype=np.int64)


def local_snf(rel, s, p, k):
    """Smith form over Z/p^k of a relation matrix on ``s`` generators.

    Returns (exponents, V, Vinv): the quotient (Z/p^k)^s / rowspan(rel) is
    the direct sum of cyclic groups of order p^exponents[i] generated by the
    rows of Vinv (in old-generator coordinates); old coordinates b become
    new coordinates b @ V.
    """
    q = p**k
    a = np.asarray(rel, dtype=np.int64).reshape(-1, s) % q
    v_mat = np.eye(s, dtype=np.int64)
    vinv = np.eye(s, dtype=np.int64)
    exps = []
    t = 0
    r = a.shape[0]
    while t < min(r, s):
        sub = a[t:, t:]
        nz = np.argwhere(sub != 0)
        if nz.size == 0:
            break
        vals = _valuations(sub[nz[:, 0], nz[:, 1]], p, k)
        best = int(np.argmin(vals))
        i, j = int(nz[best, 0]) + t, int(nz[best, 1]) + t
        v = int(vals[best])
        pv = p**v
        if i != t:
            a[[t, i]] = a[[i, t]]
        if j != t:
            a[:, [t, j]] = a[:, [j, t]]
            v_mat[:, [t, j]] = v_mat[:, [j, t]]
            vinv[[t, j]] = vinv[[j, t]]
        unit = int(a[t, t]) // pv
        a[t] = (a[t] * pow(unit, -1, q)) % q
        f = a[t + 1:, t] // pv
        a[t + 1:] = (a[t + 1:] - np.outer(f, a[t])) % q
        g = a[t, t + 1:] // pv
        if g.any():
            a[:, t + 1:] = (a[:, t + 1:] - np.outer(a[:, t], g)) % q
            v_mat[:, t + 1:] = (v_mat[:, t + 1:] - np.outer(v_mat[:, t], g)) % q
            vinv[t] = (vinv[t] + g @ vinv[t + 1:]) % q
        exps.append(v)
        t += 1
    exps.extend([k] * (s - t))
    return exps, v_mat, vinv
