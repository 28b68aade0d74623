"""Chevalley basis of a split simple Lie algebra over Z.

Basis order: e_1..e_N (positive roots in the fixed order), f_1..f_N, h_1..h_r.
Signs come from the extraspecial-pair convention: N_{a,b} = +(p+1) on every
extraspecial pair, all other constants forced by the usual identities together
with N_{-a,-b} = -N_{a,b}.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import cached_property

from .linalg import LinearOperator
from .rootsystem import RootSystem

__all__ = ["ChevalleyBasis", "chevalley_basis", "bracket", "adjoint_rep", "killing_form"]


def _neg(r):
    return tuple(-c for c in r)


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _is_pos(r):
    return all(c >= 0 for c in r)


class ChevalleyBasis:
    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.npos = len(rs.positive_roots)
        self.dim = 2 * self.npos + rs.rank
        self._table = self._structure_constants()

    @cached_property
    def labels(self) -> tuple[str, ...]:
        n, r = self.npos, self.rs.rank
        return (tuple(f"e{k + 1}" for k in range(n)) + tuple(f"f{k + 1}" for k in range(n))
                + tuple(f"h{i + 1}" for i in range(r)))

    @cached_property
    def label_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}

    def e(self, k: int) -> int:
        return k

    def f(self, k: int) -> int:
        return self.npos + k

    def h(self, i: int) -> int:
        return 2 * self.npos + i

    def root_vector(self, root) -> int:
        """Basis index of e_root (f_{-root} when root is negative)."""
        root = tuple(root)
        if _is_pos(root):
            return self.rs.root_index[root]
        return self.npos + self.rs.root_index[_neg(root)]

    def root_of(self, index: int):
        """Root carried by a basis element, or None for the Cartan part."""
        if index < self.npos:
            return self.rs.positive_roots[index]
        if index < 2 * self.npos:
            return _neg(self.rs.positive_roots[index - self.npos])
        return None

    def weight_of(self, index: int) -> tuple[int, ...]:
        root = self.root_of(index)
        if root is None:
            return (0,) * self.rs.rank
        return self.rs.root_to_weight(root)

    # -- structure constants -------------------------------------------------

    def _string_p(self, a, b) -> int:
        """Largest p with b - p a a root."""
        p = 0
        x = _sub(b, a)
        while self.rs.is_root(x):
            p += 1
            x = _sub(x, a)
        return p

    def _structure_constants(self) -> dict:
        rs = self.rs
        idx = rs.root_index
        table: dict = {}
        self._table = table
        for xi in rs.positive_roots:
            pairs = []
            for a in rs.positive_roots:
                b = _sub(xi, a)
                if b in idx and idx[a] < idx[b]:
                    pairs.append((a, b))
            if not pairs:
                continue
            # pairs are in order of idx[a]; the first is extraspecial
            alpha, beta = pairs[0]
            table[(alpha, beta)] = self._string_p(alpha, beta) + 1
            n_ab = table[(alpha, beta)]
            norm_xi = rs.inner_roots(xi, xi)
            for gamma, delta in pairs[1:]:
                acc = Fraction(0)
                bg = _sub(beta, gamma)
                if rs.is_root(bg):
                    acc += Fraction(self.N(beta, _neg(gamma)) * self.N(alpha, _neg(delta)), rs.inner_roots(bg, bg))
                ag = _sub(alpha, gamma)
                if rs.is_root(ag):
                    acc += Fraction(self.N(_neg(gamma), alpha) * self.N(beta, _neg(delta)), rs.inner_roots(ag, ag))
                val = acc * norm_xi / n_ab
                assert val.denominator == 1, (gamma, delta, val)
                table[(gamma, delta)] = int(val)
        return table

    def N(self, x, y) -> int:
        """Structure constant N_{x,y} with [e_x, e_y] = N_{x,y} e_{x+y}; zero if x+y is not a root."""
        x, y = tuple(x), tuple(y)
        z = _add(x, y)
        rs = self.rs
        if not rs.is_root(z):
            return 0
        px, py = _is_pos(x), _is_pos(y)
        if px and py:
            idx = rs.root_index
            if idx[x] < idx[y]:
                return self._table[(x, y)]
            return -self._table[(y, x)]
        if not px and not py:
            return -self.N(_neg(x), _neg(y))
        if not px:
            return -self.N(y, x)
        # x positive, y negative
        nz = rs.inner_roots(z, z)
        if _is_pos(z):
            val = -Fraction(nz, rs.inner_roots(x, x)) * self.N(_neg(y), z)
        else:
            val = Fraction(nz, rs.inner_roots(y, y)) * self.N(_neg(z), x)
        assert val.denominator == 1
        return int(val)

    # -- brackets --------------------------------------------------------------

    def bracket_basis(self, i: int, j: int) -> dict:
        """[b_i, b_j] as a sparse coordinate dict."""
        cached = self._bracket_table.get((i, j))
        return dict(cached) if cached is not None else {}

    @cached_property
    def _bracket_table(self) -> dict:
        out = {}
        for i in range(self.dim):
            for j in range(self.dim):
                r = self._compute_bracket(i, j)
                if r:
                    out[(i, j)] = r
        return out

    def _compute_bracket(self, i: int, j: int) -> dict:
        rs = self.rs
        ri, rj = self.root_of(i), self.root_of(j)
        if ri is None and rj is None:
            return {}
        if ri is None:
            c = self.rs.root_to_weight(rj)[i - 2 * self.npos]
            return {j: c} if c else {}
        if rj is None:
            c = self.rs.root_to_weight(ri)[j - 2 * self.npos]
            return {i: -c} if c else {}
        s = _add(ri, rj)
        if not any(s):
            sign = 1 if _is_pos(ri) else -1
            pos = ri if sign == 1 else rj
            return {self.h(k): sign * c for k, c in enumerate(rs.coroot_coords(pos)) if c}
        n = self.N(ri, rj)
        return {self.root_vector(s): n} if n else {}

    def structure_table(self) -> list:
        """All nonzero brackets as (x, y, {label: coeff}) with labels."""
        out = []
        for (i, j), r in sorted(self._bracket_table.items()):
            out.append((self.labels[i], self.labels[j], {self.labels[k]: c for k, c in sorted(r.items())}))
        return out

    def to_json(self) -> str:
        data = {
            "type": str(self.rs.cartan_type),
            "labels": list(self.labels),
            "positive_roots": [list(r) for r in self.rs.positive_roots],
            "table": [[x, y, [[k, c] for k, c in res.items()]] for x, y, res in self.structure_table()],
        }
        return json.dumps(data, sort_keys=True)

    @cached_property
    def ad(self) -> dict:
        """ad b_i as LinearOperator, keyed by basis index."""
        mats = {}
        for i in range(self.dim):
            entries = []
            for j in range(self.dim):
                for k, c in self.bracket_basis(i, j).items():
                    entries.append((k, j, c))
            mats[i] = LinearOperator.from_entries(self.dim, entries)
        return mats

    def __repr__(self):
        return f"ChevalleyBasis({self.rs.cartan_type}, dim={self.dim})"


def chevalley_basis(rs: RootSystem) -> ChevalleyBasis:
    return ChevalleyBasis(rs)


def bracket(cb: ChevalleyBasis, x: dict, y: dict) -> dict:
    """Bracket of two elements given as {basis index: coefficient}."""
    out: dict = {}
    for i, a in x.items():
        if not a:
            continue
        for j, b in y.items():
            if not b:
                continue
            for k, c in cb.bracket_basis(i, j).items():
                out[k] = out.get(k, 0) + a * b * c
    return {k: v for k, v in out.items() if v}


def killing_form(cb: ChevalleyBasis) -> list[list[int]]:
    ad = cb.ad
    n = cb.dim
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            prod = ad[i] @ ad[j]
            t = sum((prod[k, k] for k in range(n)), Fraction(0))
            assert t.denominator == 1
            out[i][j] = out[j][i] = int(t)
    return out


def adjoint_rep(cb: ChevalleyBasis):
    from .highestweight import HighestWeightModule

    weights = [cb.weight_of(i) for i in range(cb.dim)]
    action = {cb.labels[i]: cb.ad[i] for i in range(cb.dim)}
    return HighestWeightModule.from_weight_basis(cb.rs, cb, weights, action)
