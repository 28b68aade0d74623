"""Root data for the split simple types A, B, C, D and G2.

Roots are integer tuples in the simple-root basis; weights are integer tuples
in the fundamental-weight basis.  ``cartan_matrix[i][j] = <alpha_j, alpha_i^vee>``
with Bourbaki numbering (B_n: alpha_n short, C_n: alpha_n long, G_2: alpha_1
short).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import prod

__all__ = [
    "CartanType",
    "RootSystem",
    "RootSystemError",
    "build_root_system",
    "pairing",
    "is_dominant",
    "weyl_dim",
    "SUPPORTED_RANKS",
]

# rank caps; widening a range is all it takes to admit more ranks
SUPPORTED_RANKS = {
    "A": range(1, 5),
    "B": range(2, 4),
    "C": range(2, 4),
    "D": range(3, 5),
    "G": range(2, 3),
}


class RootSystemError(ValueError):
    """Inadmissible Cartan type, rank, index or weight."""


@dataclass(frozen=True, order=True)
class CartanType:
    family: str
    rank: int

    def __post_init__(self):
        if self.family not in SUPPORTED_RANKS:
            raise RootSystemError(f"unknown Cartan family {self.family!r}")
        if not isinstance(self.rank, int) or self.rank not in SUPPORTED_RANKS[self.family]:
            r = SUPPORTED_RANKS[self.family]
            raise RootSystemError(
                f"{self.family}{self.rank} is not supported (rank must be in {r.start}..{r.stop - 1})"
            )

    def __str__(self):
        return f"{self.family}{self.rank}"

    @classmethod
    def parse(cls, text: str) -> "CartanType":
        text = text.strip().upper()
        try:
            return cls(text[0], int(text[1:]))
        except (IndexError, ValueError):
            raise RootSystemError(f"cannot parse Cartan type {text!r}") from None


def cartan_matrix(t: CartanType) -> tuple[tuple[int, ...], ...]:
    n = t.rank
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        a[i][i] = 2
    if t.family in "ABC":
        for i in range(n - 1):
            a[i][i + 1] = a[i + 1][i] = -1
        if t.family == "B":
            a[n - 1][n - 2] = -2
        elif t.family == "C":
            a[n - 2][n - 1] = -2
    elif t.family == "D":
        for i in range(n - 2):
            a[i][i + 1] = a[i + 1][i] = -1
        a[n - 3][n - 1] = a[n - 1][n - 3] = -1
    elif t.family == "G":
        a[0][1] = -3
        a[1][0] = -1
    return tuple(tuple(row) for row in a)


def _symmetrizer(a) -> tuple[int, ...]:
    """Half squared lengths d_i of the simple roots, normalised so short roots have d = 1."""
    n = len(a)
    d = [None] * n
    d[0] = Fraction(1)
    todo = [0]
    while todo:
        i = todo.pop()
        for j in range(n):
            if a[i][j] and d[j] is None:
                # d_i a_ij = d_j a_ji
                d[j] = d[i] * a[i][j] / a[j][i]
                todo.append(j)
    m = min(d)
    return tuple(int(x / m) for x in d)


def _sort_key(root):
    return (sum(root), tuple(-c for c in root))


@dataclass(frozen=True)
class RootSystem:
    cartan_type: CartanType
    cartan_matrix: tuple[tuple[int, ...], ...]
    positive_roots: tuple[tuple[int, ...], ...]
    roots: tuple[tuple[int, ...], ...]
    root_lengths: tuple[int, ...] = field(repr=False)  # d_i = (alpha_i, alpha_i) / 2

    @property
    def rank(self) -> int:
        return self.cartan_type.rank

    @cached_property
    def root_index(self) -> dict:
        """Maps a positive root to its position in ``positive_roots``."""
        return {r: k for k, r in enumerate(self.positive_roots)}

    @cached_property
    def root_set(self) -> frozenset:
        return frozenset(self.roots)

    @cached_property
    def rho(self) -> tuple[int, ...]:
        return (1,) * self.rank

    def is_root(self, v) -> bool:
        return tuple(v) in self.root_set

    def height(self, root) -> int:
        return sum(root)

    def simple_root(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.rank))

    def root_to_weight(self, root) -> tuple[int, ...]:
        """omega-coordinates of a root: the i-th entry is <root, alpha_i^vee>."""
        a = self.cartan_matrix
        return tuple(sum(a[i][j] * root[j] for j in range(self.rank)) for i in range(self.rank))

    def weight_to_root_coords(self, w) -> tuple[Fraction, ...]:
        return tuple(
            sum((self._inverse_cartan[i][j] * w[j] for j in range(self.rank)), Fraction(0))
            for i in range(self.rank)
        )

    @cached_property
    def _inverse_cartan(self):
        from .linalg import inverse

        return inverse([[Fraction(x) for x in row] for row in self.cartan_matrix])

    def half_norm(self, root) -> Fraction:
        """(root, root) / 2 in the normalisation where short simple roots have (a, a) = 2."""
        return Fraction(self.inner_roots(root, root), 2)

    def inner_roots(self, x, y) -> int:
        a, d = self.cartan_matrix, self.root_lengths
        return sum(x[i] * y[j] * d[i] * a[i][j] for i in range(self.rank) for j in range(self.rank))

    def inner(self, mu, nu) -> Fraction:
        """Invariant form on weights, both given in omega-coordinates."""
        c = self.weight_to_root_coords(nu)
        return sum((c[j] * mu[j] * self.root_lengths[j] for j in range(self.rank)), Fraction(0))

    def coroot_coords(self, root) -> tuple[int, ...]:
        """root^vee in the simple-coroot basis."""
        dn = self.half_norm(root)
        out = []
        for j, c in enumerate(root):
            x = Fraction(c * self.root_lengths[j]) / dn
            assert x.denominator == 1
            out.append(int(x))
        return tuple(out)

    def coroot_pairing(self, w, root) -> int:
        """<w, root^vee> for a weight w in omega-coordinates."""
        return sum(w[j] * c for j, c in enumerate(self.coroot_coords(root)))

    def reflect_weight(self, w, i: int) -> tuple[int, ...]:
        """Simple reflection s_i on a weight in omega-coordinates."""
        wi = w[i]
        return tuple(w[k] - wi * self.cartan_matrix[k][i] for k in range(self.rank))

    def dominant_conjugate(self, w) -> tuple[int, ...]:
        w = tuple(w)
        while True:
            for i in range(self.rank):
                if w[i] < 0:
                    w = self.reflect_weight(w, i)
                    break
            else:
                return w

    def is_leq(self, mu, lam) -> bool:
        """True iff lam - mu is a non-negative integral combination of simple roots."""
        c = self.weight_to_root_coords(tuple(l - m for l, m in zip(lam, mu)))
        return all(x.denominator == 1 and x >= 0 for x in c)


def _reflect_root(a, root, i):
    coeff = sum(a[i][j] * root[j] for j in range(len(root)))
    r = list(root)
    r[i] -= coeff
    return tuple(r)


def build_root_system(t: CartanType) -> RootSystem:
    """Close the simple roots under the simple reflections."""
    if not isinstance(t, CartanType):
        raise RootSystemError(f"expected CartanType, got {t!r}")
    a = cartan_matrix(t)
    n = t.rank
    simple = [tuple(int(j == i) for j in range(n)) for i in range(n)]
    found = set(simple)
    frontier = list(simple)
    while frontier:
        nxt = []
        for root in frontier:
            for i in range(n):
                r = _reflect_root(a, root, i)
                if r not in found:
                    found.add(r)
                    nxt.append(r)
        frontier = nxt
    pos = sorted((r for r in found if all(c >= 0 for c in r)), key=_sort_key)
    neg = [tuple(-c for c in r) for r in pos]
    assert len(pos) + len(neg) == len(found)
    return RootSystem(t, a, tuple(pos), tuple(pos + neg), _symmetrizer(a))


def _check_index(rs: RootSystem, i: int):
    if not isinstance(i, int) or not 1 <= i <= rs.rank:
        raise RootSystemError(f"coroot index {i} out of range 1..{rs.rank}")


def pairing(rs: RootSystem, w, i: int) -> int:
    """<w, alpha_i^vee> with 1-based i.  In omega-coordinates this is just w_i."""
    _check_index(rs, i)
    if len(w) != rs.rank:
        raise RootSystemError(f"weight {tuple(w)} has wrong length for rank {rs.rank}")
    return int(w[i - 1])


def is_dominant(rs: RootSystem, w) -> bool:
    return all(c >= 0 for c in w)


def weyl_dim(rs: RootSystem, lam) -> int:
    if len(lam) != rs.rank:
        raise RootSystemError(f"weight {tuple(lam)} has wrong length for rank {rs.rank}")
    if not is_dominant(rs, lam):
        raise RootSystemError(f"weight {tuple(lam)} is not dominant")
    shifted = tuple(l + 1 for l in lam)
    num = prod(rs.coroot_pairing(shifted, a) for a in rs.positive_roots)
    den = prod(rs.coroot_pairing(rs.rho, a) for a in rs.positive_roots)
    assert num % den == 0
    return num // den
