"""Exact rational linear algebra: dense helpers plus a sparse operator type."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "LinearOperator",
    "rref",
    "rank",
    "nullspace",
    "inverse",
    "solve_rows",
    "valuation",
    "frac_str",
    "parse_frac",
]

ZERO = Fraction(0)
ONE = Fraction(1)


def frac_str(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    return Fraction(s) if not isinstance(s, str) else Fraction(s.strip())


def valuation(x, p: int) -> int | float:
    """p-adic valuation of a rational; +inf for zero."""
    x = Fraction(x)
    if x == 0:
        return float("inf")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over Q.  Returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(matrix: Sequence[Sequence], ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of {x : matrix @ x = 0} as a list of column vectors."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    red, pivots = rref(matrix, ncols) if matrix else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for row, pc in zip(red, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def inverse(a: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(a)
    aug = [[Fraction(x) for x in row] + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    red, pivots = rref(aug, n)
    if pivots != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [row[n:] for row in red]


def solve_rows(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_i basis[i] == v, or None if v is not in the row span.

    ``basis`` must be linearly independent.
    """
    k = len(basis)
    n = len(v)
    # columns are basis vectors, augmented by v
    aug = [[Fraction(basis[i][j]) for i in range(k)] + [Fraction(v[j])] for j in range(n)]
    red, pivots = rref(aug, k + 1)
    if k in pivots:
        return None
    c = [ZERO] * k
    for row, pc in zip(red, pivots):
        c[pc] = row[k]
    return c


class LinearOperator:
    """Sparse exact-rational matrix acting on column vectors.

    Column j holds the image of the j-th basis vector.
    """

    __slots__ = ("dim", "_rows")

    def __init__(self, dim: int, rows: dict | None = None):
        self.dim = dim
        self._rows = {}
        for i, row in (rows or {}).items():
            clean = {j: Fraction(x) for j, x in row.items() if x != 0}
            if clean:
                self._rows[i] = clean

    @classmethod
    def from_entries(cls, dim: int, entries: Iterable[tuple[int, int, object]]) -> "LinearOperator":
        rows: dict = {}
        for i, j, x in entries:
            if not (0 <= i < dim and 0 <= j < dim):
                raise IndexError(f"entry ({i}, {j}) outside a {dim}x{dim} operator")
            r = rows.setdefault(i, {})
            r[j] = r.get(j, ZERO) + Fraction(x)
        return cls(dim, rows)

    @classmethod
    def from_dense(cls, a: Sequence[Sequence]) -> "LinearOperator":
        n = len(a)
        return cls(n, {i: {j: x for j, x in enumerate(row) if x} for i, row in enumerate(a)})

    @classmethod
    def identity(cls, dim: int) -> "LinearOperator":
        return cls(dim, {i: {i: ONE} for i in range(dim)})

    @classmethod
    def zero(cls, dim: int) -> "LinearOperator":
        return cls(dim)

    @property
    def entries(self) -> dict:
        return {(i, j): x for i, row in self._rows.items() for j, x in row.items()}

    def rows(self):
        return self._rows.items()

    def __getitem__(self, ij):
        i, j = ij
        return self._rows.get(i, {}).get(j, ZERO)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[ZERO] * self.dim for _ in range(self.dim)]
        for i, row in self._rows.items():
            for j, x in row.items():
                out[i][j] = x
        return out

    def column(self, j: int) -> list[Fraction]:
        return [self._rows.get(i, {}).get(j, ZERO) for i in range(self.dim)]

    def is_zero(self) -> bool:
        return not self._rows

    def is_diagonal(self) -> bool:
        return all(set(row) <= {i} for i, row in self._rows.items())

    def apply(self, v: Sequence) -> list[Fraction]:
        out = [ZERO] * self.dim
        for i, row in self._rows.items():
            s = ZERO
            for j, x in row.items():
                y = v[j]
                if y:
                    s += x * y
            out[i] = s
        return out

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        if not isinstance(other, LinearOperator):
            return NotImplemented
        self._check(other)
        out = {}
        orows = other._rows
        for i, row in self._rows.items():
            acc: dict = {}
            for k, x in row.items():
                ok = orows.get(k)
                if ok:
                    for j, y in ok.items():
                        acc[j] = acc.get(j, ZERO) + x * y
            out[i] = acc
        return LinearOperator(self.dim, out)

    def __add__(self, other):
        self._check(other)
        out = {i: dict(r) for i, r in self._rows.items()}
        for i, row in other._rows.items():
            r = out.setdefault(i, {})
            for j, x in row.items():
                r[j] = r.get(j, ZERO) + x
        return LinearOperator(self.dim, out)

    def __neg__(self):
        return LinearOperator(self.dim, {i: {j: -x for j, x in r.items()} for i, r in self._rows.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LinearOperator":
        c = Fraction(c)
        return LinearOperator(self.dim, {i: {j: c * x for j, x in r.items()} for i, r in self._rows.items()})

    def transpose(self) -> "LinearOperator":
        out: dict = {}
        for i, row in self._rows.items():
            for j, x in row.items():
                out.setdefault(j, {})[i] = x
        return LinearOperator(self.dim, out)

    def commutator(self, other) -> "LinearOperator":
        return self @ other - other @ self

    def __eq__(self, other):
        if not isinstance(other, LinearOperator):
            return NotImplemented
        return self.dim == other.dim and self._rows == other._rows

    __hash__ = None

    def __repr__(self):
        return f"LinearOperator(dim={self.dim}, nnz={sum(len(r) for r in self._rows.values())})"

    def _check(self, other):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch {self.dim} != {other.dim}")

    def to_json(self) -> list:
        return [[i, j, frac_str(x)] for (i, j), x in sorted(self.entries.items())]

    @classmethod
    def from_json(cls, dim: int, data) -> "LinearOperator":
        return cls.from_entries(dim, ((i, j, parse_frac(x)) for i, j, x in data))
