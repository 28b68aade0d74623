"""Linear algebra over F_p with numpy int64 arrays.

Matrices act on column vectors; subspaces are stored as RREF row matrices.
Primes here are small (p < 2^20), so int64 products never overflow.
"""

from __future__ import annotations

from itertools import combinations, product
from math import prod

import numpy as np

__all__ = [
    "rref_mod_p",
    "rank_mod_p",
    "spin_mod_p",
    "is_stable",
    "gaussian_binomial",
    "count_subspaces",
    "pivot_sets",
    "subspace_batch",
    "stable_mask",
]


def rref_mod_p(a, p: int) -> tuple[np.ndarray, list[int]]:
    m = np.array(a, dtype=np.int64) % p
    if m.ndim == 1:
        m = m.reshape(1, -1)
    rows, cols = m.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if not len(nz):
            continue
        i = r + nz[0]
        if i != r:
            m[[r, i]] = m[[i, r]]
        m[r] = m[r] * pow(int(m[r, c]), -1, p) % p
        col = m[:, c].copy()
        col[r] = 0
        m = (m - np.outer(col, m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank_mod_p(a, p: int) -> int:
    return len(rref_mod_p(a, p)[1])


def _reduce(v, basis, pivots, p):
    for row, c in zip(basis, pivots):
        if v[c]:
            v = (v - v[c] * row) % p
    return v


def spin_mod_p(gens, seeds, p: int) -> np.ndarray:
    """RREF basis of the smallest subspace containing ``seeds`` and stable under ``gens``."""
    seeds = np.atleast_2d(np.array(seeds, dtype=np.int64)) % p
    n = seeds.shape[1]
    basis: list = []
    pivots: list = []
    queue = []

    def push(v):
        v = _reduce(v % p, basis, pivots, p)
        nz = np.nonzero(v)[0]
        if not len(nz):
            return
        c = int(nz[0])
        v = v * pow(int(v[c]), -1, p) % p
        for i, row in enumerate(basis):
            if row[c]:
                basis[i] = (row - row[c] * v) % p
        basis.append(v)
        pivots.append(c)
        queue.append(v)

    for s in seeds:
        push(s)
    while queue:
        v = queue.pop()
        for g in gens:
            push(g @ v)
    if not basis:
        return np.zeros((0, n), dtype=np.int64)
    return rref_mod_p(np.array(basis), p)[0]


def is_stable(gens, basis, p: int) -> bool:
    basis = np.atleast_2d(np.asarray(basis, dtype=np.int64))
    if basis.shape[0] == 0:
        return True
    red, piv = rref_mod_p(basis, p)
    for g in gens:
        w = red @ g.T % p
        if ((w - w[:, piv] @ red) % p).any():
            return False
    return True


def gaussian_binomial(n: int, k: int, q: int) -> int:
    if k < 0 or k > n:
        return 0
    num = prod(q ** (n - i) - 1 for i in range(k))
    den = prod(q ** (i + 1) - 1 for i in range(k))
    return num // den


def count_subspaces(n: int, q: int) -> int:
    return sum(gaussian_binomial(n, k, q) for k in range(n + 1))


def pivot_sets(n: int):
    """All pivot sets, in order of dimension then lexicographically."""
    for k in range(n + 1):
        yield from combinations(range(n), k)


def _free_positions(n: int, piv) -> list[tuple[int, int]]:
    pset = set(piv)
    return [(i, j) for i, c in enumerate(piv) for j in range(c + 1, n) if j not in pset]


def subspace_batch(n: int, piv, p: int) -> np.ndarray:
    """Every RREF matrix with pivot columns ``piv``: an array of shape (count, k, n)."""
    k = len(piv)
    free = _free_positions(n, piv)
    count = p ** len(free)
    out = np.zeros((count, k, n), dtype=np.int64)
    for i, c in enumerate(piv):
        out[:, i, c] = 1
    if free:
        vals = np.array(list(product(range(p), repeat=len(free))), dtype=np.int64)
        for t, (i, j) in enumerate(free):
            out[:, i, j] = vals[:, t]
    return out


def stable_mask(batch: np.ndarray, piv, gens, p: int) -> np.ndarray:
    """Boolean mask: which subspaces in ``batch`` are stable under every matrix in ``gens``."""
    count = batch.shape[0]
    ok = np.ones(count, dtype=bool)
    if batch.shape[1] == 0:
        return ok
    piv = list(piv)
    for g in gens:
        idx = np.nonzero(ok)[0]
        if not len(idx):
            break
        u = batch[idx]
        w = u @ g.T % p
        res = (w - w[:, :, piv] @ u) % p
        ok[idx] = ~res.any(axis=(1, 2))
    return ok
