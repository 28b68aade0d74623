"""Lattices over Z_(p) in Q^n, kept in a canonical echelon form.

Z_(p) is a DVR, so every finitely generated submodule of Q^n has a unique
basis that is upper triangular with pivots p^k and off-diagonal entries
reduced to fixed representatives modulo the pivot below them.  Equality of
lattices is equality of these matrices.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import frac_str, inverse, parse_frac, valuation

__all__ = ["PLattice", "LatticeError", "hermite_form", "reduce_mod_pk"]


class LatticeError(ValueError):
    pass



def reduce_mod_pk(x: Fraction, p: int, k: int) -> Fraction:
    """Representative of x modulo p^k Z_(p): m / p^s with s = max(0, -v(x)) and 0 <= m < p^(k+s)."""
    x = Fraction(x)
    v = valuation(x, p)
    if v >= k:
        return Fraction(0)
    # every element of the class has valuation v < k, so k + s >= 1 below
    s = max(0, -v)
    y = x * p**s  # in Z_(p)
    mod = p ** (k + s)
    # y = a/b with p not dividing b
    m = y.numerator * pow(y.denominator, -1, mod) % mod
    return Fraction(m, p**s)


def hermite_form(vectors: Iterable[Sequence], p: int, n: int | None = None):
    """Canonical basis of the Z_(p)-span of ``vectors``.

    Returns (rows, pivots): rows are tuples of Fractions, pivots their pivot columns.
    """
    rows = [[Fraction(x) for x in v] for v in vectors]
    rows = [r for r in rows if any(r)]
    if n is None:
        n = len(rows[0]) if rows else 0
    out: list = []
    pivots: list = []
    for c in range(n):
        best, bv = None, None
        for i, r in enumerate(rows):
            if r[c]:
                v = valuation(r[c], p)
                if bv is None or v < bv:
                    best, bv = i, v
        if best is None:
            continue
        piv = rows.pop(best)
        scale = Fraction(p) ** bv / piv[c]  # a unit
        piv = [x * scale for x in piv]
        nxt = []
        for r in rows:
            if r[c]:
                f = r[c] / piv[c]
                r = [a - f * b for a, b in zip(r, piv)]
            if any(r):
                nxt.append(r)
        rows = nxt
        out.append(piv)
        pivots.append(c)
    # reduce above the pivots
    for j, pc in enumerate(pivots):
        k = valuation(out[j][pc], p)
        for i in range(j):
            x = out[i][pc]
            if x:
                rep = reduce_mod_pk(x, p, k)
                if rep != x:
                    q = (x - rep) / out[j][pc]
                    out[i] = [a - q * b for a, b in zip(out[i], out[j])]
    return [tuple(r) for r in out], pivots


class PLattice:
    """A full-rank Z_(p)-lattice in the coordinate space of a module."""

    __slots__ = ("p", "dim", "rows", "pivots", "module", "window", "_inv")

    def __init__(self, p: int, rows, pivots, module=None, window=None):
        self.p = p
        self.rows = tuple(tuple(r) for r in rows)
        self.dim = len(self.rows)
        self.pivots = tuple(pivots)
        self.module = module
        self.window = window
        self._inv = None

    @classmethod
    def from_generators(cls, vectors, p: int, module=None, dim: int | None = None, window=None) -> "PLattice":
        vectors = list(vectors)
        if dim is None:
            dim = module.dim if module is not None else len(vectors[0])
        rows, piv = hermite_form(vectors, p, dim)
        if len(rows) != dim:
            raise LatticeError(f"generators span rank {len(rows)}, not {dim}")
        return cls(p, rows, piv, module, window)

    @classmethod
    def standard(cls, dim: int, p: int, module=None) -> "PLattice":
        rows = [tuple(Fraction(int(i == j)) for j in range(dim)) for i in range(dim)]
        return cls(p, rows, range(dim), module)

    # -- membership ------------------------------------------------------------

    def _inverse_rows(self):
        """Rows of B^-1 as sparse (column, value) lists, B the canonical basis matrix."""
        if self._inv is None:
            inv = inverse(self.rows) if self.dim else []
            self._inv = [[(j, x) for j, x in enumerate(r) if x] for r in inv]
        return self._inv

    def coords(self, v: Sequence) -> list[Fraction]:
        """Rational coefficients of v in the canonical basis."""
        if len(v) != self.dim:
            raise LatticeError("vector has the wrong length")
        c = [Fraction(0)] * self.dim
        for x, inv_row in zip(v, self._inverse_rows()):
            if x:
                for j, y in inv_row:
                    c[j] += x * y
        return c

    def contains(self, v: Sequence) -> bool:
        p = self.p
        return all(x.denominator % p for x in self.coords(v))

    def contains_lattice(self, other: "PLattice") -> bool:
        return all(self.contains(r) for r in other.rows)

    def scale(self, k: int) -> "PLattice":
        """p^k L."""
        f = Fraction(self.p) ** k
        return PLattice.from_generators([[x * f for x in r] for r in self.rows], self.p, self.module, self.dim)

    def add(self, vectors) -> "PLattice":
        return PLattice.from_generators(list(self.rows) + [list(v) for v in vectors], self.p, self.module, self.dim)

    def pivot_exponents(self) -> tuple[int, ...]:
        return tuple(valuation(r[i], self.p) for i, r in enumerate(self.rows))

    # -- identity ----------------------------------------------------------------

    def key(self) -> tuple:
        return tuple((x.numerator, x.denominator) for r in self.rows for x in r)

    def __eq__(self, other):
        if not isinstance(other, PLattice):
            return NotImplemented
        return self.p == other.p and self.rows == other.rows

    def __hash__(self):
        return hash((self.p, self.rows))

    def __repr__(self):
        return f"PLattice(p={self.p}, dim={self.dim}, exps={self.pivot_exponents()})"

    def matrix_strings(self) -> list[list[str]]:
        return [[frac_str(x) for x in r] for r in self.rows]

    def to_json(self) -> dict:
        return {"p": self.p, "dim": self.dim, "basis": self.matrix_strings()}

    @classmethod
    def from_json(cls, data, module=None) -> "PLattice":
        if isinstance(data, str):
            data = json.loads(data)
        vecs = [[parse_frac(x) for x in r] for r in data["basis"]]
        return cls.from_generators(vecs, data["p"], module, data["dim"])
