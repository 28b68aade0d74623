"""Finite-dimensional modules over Q with weight bases.

Simple modules are cut out of the Verma module M(lam) by the radical of the
Shapovalov form, one weight space at a time.  Everything is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Sequence

from .chevalley import ChevalleyBasis, bracket, chevalley_basis
from .linalg import LinearOperator, inverse, nullspace
from .rootsystem import CartanType, RootSystem, build_root_system, is_dominant, weyl_dim

__all__ = [
    "HighestWeightModule",
    "ModuleError",
    "DepthOverflow",
    "ModuleTooLarge",
    "VermaModule",
    "verma_weight_spaces",
    "shapovalov_gram",
    "simple_module",
    "tensor",
    "sym_power",
    "dual",
    "direct_sum",
    "weight_decomposition",
    "decompose",
    "freudenthal_mult",
    "DIM_CAP",
]

DIM_CAP = 64


class ModuleError(ValueError):
    pass


class DepthOverflow(ModuleError):
    pass


class ModuleTooLarge(ModuleError):
    pass


@dataclass(frozen=True, eq=False)
class HighestWeightModule:
    rs: RootSystem
    cb: ChevalleyBasis
    dim: int
    basis_labels: tuple  # ((weight, multiplicity index), ...)
    action: dict = field(repr=False)  # generator label -> LinearOperator
    highest_weights: tuple | None = None
    name: str = ""

    @classmethod
    def from_weight_basis(cls, rs, cb, weights: Sequence, action: dict, highest_weights=None, name=""):
        seen: dict = {}
        labels = []
        for w in weights:
            w = tuple(int(c) for c in w)
            labels.append((w, seen.get(w, 0)))
            seen[w] = seen.get(w, 0) + 1
        mod = cls(rs, cb, len(labels), tuple(labels), dict(action),
                  tuple(highest_weights) if highest_weights is not None else None, name)
        mod._check_cartan()
        return mod

    @classmethod
    def from_matrices(cls, rs, cb, action: dict, name=""):
        """Accept user-supplied action matrices; the invariants are checked, not trusted."""
        missing = set(cb.labels) - set(action)
        if missing:
            raise ModuleError(f"action is missing generators {sorted(missing)}")
        dims = {op.dim for op in action.values()}
        if len(dims) != 1:
            raise ModuleError("action matrices have inconsistent dimensions")
        n = dims.pop()
        weights = []
        for k in range(n):
            w = []
            for i in range(rs.rank):
                op = action[cb.labels[cb.h(i)]]
                if not op.is_diagonal():
                    raise ModuleError("h does not act diagonally; supply a weight basis")
                x = op[k, k]
                if x.denominator != 1:
                    raise ModuleError("non-integral h eigenvalue")
                w.append(int(x))
            weights.append(tuple(w))
        mod = cls.from_weight_basis(rs, cb, weights, action, name=name)
        bad = mod.homomorphism_failures()
        if bad:
            raise ModuleError(f"action is not a Lie algebra representation, e.g. at {bad[0]}")
        return mod

    @property
    def weights(self) -> list:
        return [w for w, _ in self.basis_labels]

    @property
    def generators(self) -> tuple:
        return self.cb.labels

    def op(self, label) -> LinearOperator:
        return self.action[label]

    def _check_cartan(self):
        for i in range(self.rs.rank):
            h = self.action[self.cb.labels[self.cb.h(i)]]
            if h.dim != self.dim:
                raise ModuleError("operator dimension mismatch")
            for k, (w, _) in enumerate(self.basis_labels):
                row = dict(h._rows.get(k, {}))
                if row.pop(k, 0) != w[i] or row:
                    raise ModuleError(f"h{i + 1} is not diagonal with the labelled weights at basis vector {k}")

    def homomorphism_failures(self) -> list:
        """Pairs (x, y) of generator labels with [rho x, rho y] != rho [x, y]."""
        cb = self.cb
        ops = [self.action[lab] for lab in cb.labels]
        bad = []
        for i in range(cb.dim):
            for j in range(i + 1, cb.dim):
                lhs = ops[i].commutator(ops[j])
                rhs = LinearOperator.zero(self.dim)
                for k, c in bracket(cb, {i: 1}, {j: 1}).items():
                    rhs = rhs + ops[k].scale(c)
                if lhs != rhs:
                    bad.append((cb.labels[i], cb.labels[j]))
        return bad

    def weight_blocks(self) -> dict:
        """weight -> list of basis indices."""
        out: dict = {}
        for k, (w, _) in enumerate(self.basis_labels):
            out.setdefault(w, []).append(k)
        return out

    def to_json(self) -> dict:
        return {
            "type": str(self.rs.cartan_type),
            "name": self.name,
            "dim": self.dim,
            "weights": [list(w) for w in self.weights],
            "highest_weights": None if self.highest_weights is None else [list(w) for w in self.highest_weights],
            "action": {lab: self.action[lab].to_json() for lab in self.cb.labels},
        }

    @classmethod
    def from_json(cls, data) -> "HighestWeightModule":
        if isinstance(data, str):
            data = json.loads(data)
        rs = build_root_system(CartanType.parse(data["type"]))
        cb = chevalley_basis(rs)
        n = data["dim"]
        action = {lab: LinearOperator.from_json(n, data["action"][lab]) for lab in cb.labels}
        hw = data.get("highest_weights")
        return cls.from_weight_basis(rs, cb, data["weights"], action,
                                     None if hw is None else [tuple(w) for w in hw], data.get("name", ""))

    def __repr__(self):
        return f"HighestWeightModule({self.rs.cartan_type}, dim={self.dim}, {self.name or 'unnamed'})"


# -- Verma module ----------------------------------------------------------------


class VermaModule:
    """Action of the Chevalley basis on M(lam) in the PBW basis f_1^a_1 ... f_N^a_N v.

    Monomials are exponent tuples over the positive roots in their fixed order.
    Vectors are dicts monomial -> Fraction.
    """

    def __init__(self, rs: RootSystem, cb: ChevalleyBasis, lam):
        self.rs, self.cb = rs, cb
        self.lam = tuple(lam)
        self.roots = rs.positive_roots
        self.root_weights = [rs.root_to_weight(b) for b in self.roots]
        self._f: dict = {}
        self._e: dict = {}

    def weight(self, mono) -> tuple:
        w = list(self.lam)
        for k, a in enumerate(mono):
            if a:
                rw = self.root_weights[k]
                for i in range(len(w)):
                    w[i] -= a * rw[i]
        return tuple(w)

    def f_act(self, k: int, mono) -> dict:
        key = (k, mono)
        hit = self._f.get(key)
        if hit is not None:
            return hit
        j = next((i for i, a in enumerate(mono) if a), len(mono))
        if k <= j:
            m = list(mono)
            m[k] += 1
            out = {tuple(m): Fraction(1)}
        else:
            # f_k f_j R = f_j (f_k R) + [f_k, f_j] R
            rest = list(mono)
            rest[j] -= 1
            rest = tuple(rest)
            out: dict = {}
            for m, c in self.f_act(k, rest).items():
                for m2, c2 in self.f_act(j, m).items():
                    out[m2] = out.get(m2, 0) + c * c2
            bk, bj = self.roots[k], self.roots[j]
            s = tuple(x + y for x, y in zip(bk, bj))
            n = self.cb.N(tuple(-x for x in bk), tuple(-x for x in bj))
            if n:
                for m, c in self.f_act(self.rs.root_index[s], rest).items():
                    out[m] = out.get(m, 0) + n * c
            out = {m: c for m, c in out.items() if c}
        self._f[key] = out
        return out

    def e_act(self, k: int, mono) -> dict:
        key = (k, mono)
        hit = self._e.get(key)
        if hit is not None:
            return hit
        j = next((i for i, a in enumerate(mono) if a), None)
        if j is None:
            out: dict = {}
        else:
            rest = list(mono)
            rest[j] -= 1
            rest = tuple(rest)
            out = {}
            # e_k f_j R = f_j (e_k R) + [e_k, f_j] R
            for m, c in self.e_act(k, rest).items():
                for m2, c2 in self.f_act(j, m).items():
                    out[m2] = out.get(m2, 0) + c * c2
            bk, bj = self.roots[k], self.roots[j]
            if k == j:
                c = self.rs.coroot_pairing(self.weight(rest), bk)
                if c:
                    out[rest] = out.get(rest, 0) + c
            else:
                d = tuple(x - y for x, y in zip(bk, bj))
                n = self.cb.N(bk, tuple(-x for x in bj))
                if n:
                    if all(x >= 0 for x in d):
                        sub = self.e_act(self.rs.root_index[d], rest)
                    else:
                        sub = self.f_act(self.rs.root_index[tuple(-x for x in d)], rest)
                    for m, c in sub.items():
                        out[m] = out.get(m, 0) + n * c
            out = {m: c for m, c in out.items() if c}
        self._e[key] = out
        return out


def _kostant_partitions(roots, eta) -> list:
    """All exponent tuples a with sum a_k roots[k] == eta."""
    n = len(roots)
    out = []

    def rec(k, rem, acc):
        if k == n:
            if not any(rem):
                out.append(tuple(acc))
            return
        r = roots[k]
        a = 0
        cur = rem
        while all(c >= 0 for c in cur):
            rec(k + 1, cur, acc + [a])
            a += 1
            cur = tuple(x - y for x, y in zip(cur, r))

    rec(0, tuple(eta), [])
    return sorted(out, reverse=True)


def _weight_support(rs: RootSystem, lam) -> list:
    """Weights of V(lam), as (depth, mu, eta) with eta = lam - mu in root coordinates."""
    lam = tuple(lam)
    seen = {lam}
    frontier = [lam]
    out = [lam]
    while frontier:
        nxt = []
        for mu in frontier:
            for i in range(rs.rank):
                nu = tuple(m - c for m, c in zip(mu, rs.root_to_weight(rs.simple_root(i))))
                if nu in seen:
                    continue
                if rs.is_leq(rs.dominant_conjugate(nu), lam):
                    seen.add(nu)
                    nxt.append(nu)
                    out.append(nu)
        frontier = nxt
    res = []
    for mu in out:
        eta = tuple(int(x) for x in rs.weight_to_root_coords(tuple(l - m for l, m in zip(lam, mu))))
        res.append((sum(eta), mu, eta))
    res.sort(key=lambda t: (t[0], tuple(-c for c in t[1])))
    return res


def _full_spaces(rs: RootSystem, lam, cutoff: int) -> dict:
    lam = tuple(lam)
    if not is_dominant(rs, lam):
        raise ModuleError(f"{lam} is not dominant")
    support = _weight_support(rs, lam)
    deepest = support[-1][0]
    if deepest > cutoff:
        raise DepthOverflow(f"V{lam} reaches depth {deepest} > cutoff {cutoff}")
    return {mu: _kostant_partitions(rs.positive_roots, eta) for _, mu, eta in support}


def verma_weight_spaces(rs: RootSystem, lam, cutoff: int = 200, cb: ChevalleyBasis | None = None,
                        full: bool = False) -> dict:
    """PBW monomials for every weight of V(lam), in basis order.

    By default only the monomials whose images form the chosen basis of V(lam)_mu
    are listed; ``full=True`` lists every monomial of M(lam)_mu.  Raises
    DepthOverflow if the lowest weight lies deeper than ``cutoff``.
    """
    spaces = _full_spaces(rs, lam, cutoff)
    if full:
        return spaces
    cb = chevalley_basis(rs) if cb is None else cb
    gram = _gram_spaces(VermaModule(rs, cb, lam), spaces)
    return {mu: [monos[c] for c in _independent_rows(gram[mu])] for mu, monos in spaces.items()}


def _gram_spaces(verma: VermaModule, spaces: dict) -> dict:
    """Shapovalov Gram matrices on every weight space in ``spaces`` (processed top-down)."""
    gram: dict = {}
    index: dict = {}
    for mu, monos in spaces.items():
        index[mu] = {m: i for i, m in enumerate(monos)}
        if not any(monos[0]):
            gram[mu] = [[Fraction(1)]]
            continue
        g = [[Fraction(0)] * len(monos) for _ in monos]
        for a, m in enumerate(monos):
            j = next(i for i, x in enumerate(m) if x)
            inner = list(m)
            inner[j] -= 1
            inner = tuple(inner)
            up = tuple(x + y for x, y in zip(mu, verma.root_weights[j]))
            if up not in gram:
                continue
            row = gram[up][index[up][inner]]
            upidx = index[up]
            for b in range(a, len(monos)):
                # <f_j inner, m'> = <inner, e_j m'>
                s = Fraction(0)
                for u, c in verma.e_act(j, monos[b]).items():
                    s += c * row[upidx[u]]
                g[a][b] = g[b][a] = s
        gram[mu] = g
    return gram


def shapovalov_gram(rs: RootSystem, cb: ChevalleyBasis, lam, mu) -> tuple[list, list]:
    """(monomials, Gram matrix) of the contravariant form on M(lam)_mu."""
    spaces = _full_spaces(rs, lam, 200)
    mu = tuple(mu)
    if mu not in spaces:
        eta = rs.weight_to_root_coords(tuple(l - m for l, m in zip(lam, mu)))
        if not all(x.denominator == 1 and x >= 0 for x in eta):
            return [], []
        monos = _kostant_partitions(rs.positive_roots, tuple(int(x) for x in eta))
        return monos, [[Fraction(0)] * len(monos) for _ in monos]
    verma = VermaModule(rs, cb, lam)
    gram = _gram_spaces(verma, {w: m for w, m in spaces.items()})
    return spaces[mu], gram[mu]


def _independent_rows(rows) -> list:
    """Indices of a greedy maximal independent subset of rows, scanning in order."""
    echelon: list = []  # (pivot col, row)
    chosen = []
    for idx, r in enumerate(rows):
        v = list(r)
        for pc, er in echelon:
            if v[pc]:
                f = v[pc]
                v = [a - f * b for a, b in zip(v, er)]
        pc = next((c for c, x in enumerate(v) if x), None)
        if pc is None:
            continue
        inv = 1 / v[pc]
        echelon.append((pc, [x * inv for x in v]))
        chosen.append(idx)
    return chosen


def simple_module(rs: RootSystem, cb: ChevalleyBasis, lam, dim_cap: int = DIM_CAP) -> HighestWeightModule:
    """V(lam) as the quotient of M(lam) by the radical of the Shapovalov form."""
    lam = tuple(int(c) for c in lam)
    if len(lam) != rs.rank or not is_dominant(rs, lam):
        raise ModuleError(f"{lam} is not a dominant weight for {rs.cartan_type}")
    expected = weyl_dim(rs, lam)
    if expected > dim_cap:
        raise ModuleTooLarge(f"V{lam} has dimension {expected} > cap {dim_cap}")
    spaces = _full_spaces(rs, lam, 200)
    verma = VermaModule(rs, cb, lam)
    gram = _gram_spaces(verma, spaces)

    basis = []  # (mu, monomial)
    coords: dict = {}  # mu -> {monomial: coordinate list}
    offset: dict = {}
    for mu, monos in spaces.items():
        g = gram[mu]
        chosen = _independent_rows(g)
        offset[mu] = len(basis)
        basis.extend((mu, monos[c]) for c in chosen)
        if not chosen:
            coords[mu] = {}
            continue
        sub_inv = inverse([[g[a][b] for b in chosen] for a in chosen])
        cmap = {}
        for col, m in enumerate(monos):
            gcol = [g[a][col] for a in chosen]
            cmap[m] = [sum((sub_inv[r][s] * gcol[s] for s in range(len(chosen))), Fraction(0))
                       for r in range(len(chosen))]
        coords[mu] = cmap
    if len(basis) != expected:
        raise AssertionError(f"V{lam}: quotient has dimension {len(basis)}, Weyl formula gives {expected}")

    def to_module(vec: dict, mu) -> list:
        """(row, value) entries of the class of a Verma vector of weight mu."""
        cmap = coords.get(mu)
        if not cmap:
            return []
        acc: dict = {}
        for m, c in vec.items():
            for r, x in enumerate(cmap[m]):
                if x:
                    acc[r] = acc.get(r, 0) + c * x
        base = offset[mu]
        return [(base + r, x) for r, x in acc.items() if x]

    n = len(basis)
    entries = {lab: [] for lab in cb.labels}
    for col, (mu, m) in enumerate(basis):
        for k in range(cb.npos):
            rw = verma.root_weights[k]
            up = tuple(a + b for a, b in zip(mu, rw))
            if up in coords:
                entries[cb.labels[cb.e(k)]].extend((r, col, x) for r, x in to_module(verma.e_act(k, m), up))
            down = tuple(a - b for a, b in zip(mu, rw))
            if down in coords:
                entries[cb.labels[cb.f(k)]].extend((r, col, x) for r, x in to_module(verma.f_act(k, m), down))
        for i in range(rs.rank):
            if mu[i]:
                entries[cb.labels[cb.h(i)]].append((col, col, mu[i]))
    action = {lab: LinearOperator.from_entries(n, ents) for lab, ents in entries.items()}
    return HighestWeightModule.from_weight_basis(
        rs, cb, [mu for mu, _ in basis], action, highest_weights=(lam,), name=f"V{lam}"
    )


# -- constructions ---------------------------------------------------------------


def _same_algebra(*mods):
    t = {m.rs.cartan_type for m in mods}
    if len(t) != 1:
        raise ModuleError(f"modules over different root systems: {sorted(map(str, t))}")


def tensor(m1: HighestWeightModule, m2: HighestWeightModule) -> HighestWeightModule:
    _same_algebra(m1, m2)
    n1, n2 = m1.dim, m2.dim
    action = {}
    for lab in m1.cb.labels:
        a, b = m1.action[lab], m2.action[lab]
        ents = []
        for i, row in a.rows():
            for j, x in row.items():
                for k in range(n2):
                    ents.append((i * n2 + k, j * n2 + k, x))
        for i, row in b.rows():
            for j, x in row.items():
                for k in range(n1):
                    ents.append((k * n2 + i, k * n2 + j, x))
        action[lab] = LinearOperator.from_entries(n1 * n2, ents)
    weights = [tuple(x + y for x, y in zip(w1, w2)) for w1 in m1.weights for w2 in m2.weights]
    return HighestWeightModule.from_weight_basis(m1.rs, m1.cb, weights, action,
                                                 name=f"({m1.name} x {m2.name})")


def sym_power(m: HighestWeightModule, k: int) -> HighestWeightModule:
    """k-th symmetric power in the monomial basis, monomials in lex order of index tuples."""
    if k < 0:
        raise ModuleError("negative symmetric power")
    monos = list(combinations_with_replacement(range(m.dim), k))
    index = {t: i for i, t in enumerate(monos)}
    action = {}
    for lab in m.cb.labels:
        a = m.action[lab]
        cols: dict = {}
        for j, row in a.rows():
            for i, x in row.items():
                cols.setdefault(i, []).append((j, x))  # a[j, i]: image of e_i has e_j-coefficient x
        ents = []
        for c, t in enumerate(monos):
            for pos, i in enumerate(t):
                for j, x in cols.get(i, ()):
                    new = tuple(sorted(t[:pos] + (j,) + t[pos + 1:]))
                    ents.append((index[new], c, x))
        action[lab] = LinearOperator.from_entries(len(monos), ents)
    weights = []
    for t in monos:
        w = [0] * m.rs.rank
        for i in t:
            w = [a + b for a, b in zip(w, m.weights[i])]
        weights.append(tuple(w))
    return HighestWeightModule.from_weight_basis(m.rs, m.cb, weights, action, name=f"Sym^{k}({m.name})")


def dual(m: HighestWeightModule) -> HighestWeightModule:
    action = {lab: -m.action[lab].transpose() for lab in m.cb.labels}
    weights = [tuple(-c for c in w) for w in m.weights]
    return HighestWeightModule.from_weight_basis(m.rs, m.cb, weights, action, name=f"{m.name}*")


def direct_sum(*mods: HighestWeightModule) -> HighestWeightModule:
    _same_algebra(*mods)
    cb = mods[0].cb
    n = sum(m.dim for m in mods)
    action = {}
    for lab in cb.labels:
        ents = []
        off = 0
        for m in mods:
            ents.extend((off + i, off + j, x) for (i, j), x in m.action[lab].entries.items())
            off += m.dim
        action[lab] = LinearOperator.from_entries(n, ents)
    weights = [w for m in mods for w in m.weights]
    hw = None
    if all(m.highest_weights is not None for m in mods):
        hw = tuple(sorted((w for m in mods for w in m.highest_weights), reverse=True))
    return HighestWeightModule.from_weight_basis(mods[0].rs, cb, weights, action, hw,
                                                 name=" + ".join(m.name for m in mods))


def trivial_module(rs: RootSystem, cb: ChevalleyBasis) -> HighestWeightModule:
    return simple_module(rs, cb, (0,) * rs.rank)


# -- analysis --------------------------------------------------------------------


def weight_decomposition(m: HighestWeightModule) -> dict:
    """Simultaneous h-eigenspaces: weight -> list of basis vectors (dense Fraction lists)."""
    hs = [m.action[m.cb.labels[m.cb.h(i)]] for i in range(m.rs.rank)]
    if all(h.is_diagonal() for h in hs):
        out: dict = {}
        for k in range(m.dim):
            w = tuple(h[k, k] for h in hs)
            if any(x.denominator != 1 for x in w):
                raise AssertionError("non-integral h eigenvalue")
            v = [Fraction(0)] * m.dim
            v[k] = Fraction(1)
            out.setdefault(tuple(int(x) for x in w), []).append(v)
        return out
    # general path: split by one h at a time
    spaces = {(): [[Fraction(int(i == j)) for j in range(m.dim)] for i in range(m.dim)]}
    for h in hs:
        bound = max((sum(abs(x) for x in row.values()) for _, row in h.rows()), default=0)
        nxt = {}
        for w, vecs in spaces.items():
            images = [h.apply(v) for v in vecs]
            for c in range(-int(bound), int(bound) + 1):
                # solve (h - c) sum x_i v_i = 0 in coordinates of vecs
                cols = [[img[r] - c * v[r] for img, v in zip(images, vecs)] for r in range(m.dim)]
                ker = nullspace(cols, len(vecs))
                if ker:
                    nxt[w + (c,)] = [[sum((x[i] * vecs[i][r] for i in range(len(vecs))), Fraction(0))
                                      for r in range(m.dim)] for x in ker]
        spaces = nxt
    if sum(len(v) for v in spaces.values()) != m.dim:
        raise AssertionError("h action is not diagonalizable over Q")
    return spaces


def decompose(m: HighestWeightModule) -> list:
    """Highest weights of the simple summands (with multiplicity), from maximal vectors."""
    es = [m.action[m.cb.labels[m.cb.e(k)]] for k in range(m.cb.npos)]
    out = []
    for w, vecs in weight_decomposition(m).items():
        if not is_dominant(m.rs, w):
            continue
        rows = []
        for e in es:
            images = [e.apply(v) for v in vecs]
            rows.extend([img[r] for img in images] for r in range(m.dim))
        nullity = len(nullspace(rows, len(vecs))) if rows else len(vecs)
        out.extend([w] * nullity)
    out.sort(reverse=True)
    return out


def freudenthal_mult(rs: RootSystem, lam, mu, max_depth: int = 10_000) -> int:
    """Multiplicity of mu in V(lam) by Freudenthal's recursion."""
    lam = tuple(lam)
    if not is_dominant(rs, lam):
        raise ModuleError(f"{lam} is not dominant")
    rho = rs.rho
    lr = tuple(a + b for a, b in zip(lam, rho))
    norm_lr = rs.inner(lr, lr)
    pos_w = [rs.root_to_weight(a) for a in rs.positive_roots]
    memo: dict = {}

    def mult(nu, depth):
        if depth > max_depth:
            raise DepthOverflow("Freudenthal recursion too deep")
        nu = rs.dominant_conjugate(nu)
        if nu in memo:
            return memo[nu]
        if not rs.is_leq(nu, lam):
            return 0
        if nu == lam:
            return 1
        total = Fraction(0)
        for aw in pos_w:
            k = 1
            while True:
                x = tuple(a + k * b for a, b in zip(nu, aw))
                if not rs.is_leq(rs.dominant_conjugate(x), lam):
                    break
                total += rs.inner(x, aw) * mult(x, depth + 1)
                k += 1
        nr = tuple(a + b for a, b in zip(nu, rho))
        denom = norm_lr - rs.inner(nr, nr)
        val = 2 * total / denom
        assert val.denominator == 1
        memo[nu] = int(val)
        return memo[nu]

    return mult(tuple(mu), 0)
