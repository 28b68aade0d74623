"""Divided powers, the minimal admissible lattice, and reduction mod p."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .highestweight import HighestWeightModule, ModuleError
from .lattice import PLattice, hermite_form
from .linalg import LinearOperator, valuation

__all__ = [
    "DividedPowerSet",
    "ModpModule",
    "NotPIntegral",
    "divided_powers",
    "minimal_admissible_lattice",
    "reduce_mod_p",
    "highest_weight_vector",
]


class NotPIntegral(ValueError):
    """An operator does not preserve the lattice it is being reduced on."""

    def __init__(self, label, detail=""):
        self.label = label
        super().__init__(f"operator {label} is not p-integral on this lattice{': ' + detail if detail else ''}")


@dataclass(frozen=True, eq=False)
class DividedPowerSet:
    """X^(k) = X^k / k! for every root vector X = e_a or f_a; keys are (label, k)."""

    module: HighestWeightModule
    ops: dict = field(repr=False)
    degree: dict  # label -> nilpotency degree (first k with X^k = 0)

    def get(self, label: str, k: int) -> LinearOperator:
        if k == 0:
            return LinearOperator.identity(self.module.dim)
        op = self.ops.get((label, k))
        return op if op is not None else LinearOperator.zero(self.module.dim)

    def labels(self) -> list[str]:
        return list(self.degree)

    def items(self):
        """((label, k), operator) for 1 <= k < degree, in a fixed order."""
        for lab in self.degree:
            for k in range(1, self.degree[lab]):
                yield (lab, k), self.ops[(lab, k)]


@lru_cache(maxsize=128)
def divided_powers(m: HighestWeightModule) -> DividedPowerSet:
    cb = m.cb
    ops, degree = {}, {}
    for idx in list(range(cb.npos)) + [cb.f(k) for k in range(cb.npos)]:
        lab = cb.labels[idx]
        x = m.action[lab]
        cur = LinearOperator.identity(m.dim)
        k = 0
        while True:
            nxt = (cur @ x).scale(Fraction(1, k + 1))
            if nxt.is_zero():
                break
            k += 1
            ops[(lab, k)] = nxt
            cur = nxt
            if k > m.dim:
                raise AssertionError(f"{lab} is not nilpotent")
        degree[lab] = k + 1
    return DividedPowerSet(m, ops, degree)


def highest_weight_vector(m: HighestWeightModule) -> list[Fraction]:
    if m.highest_weights is None or len(m.highest_weights) != 1:
        raise ModuleError("module is not marked as simple with a single highest weight")
    lam = tuple(m.highest_weights[0])
    hits = [k for k, (w, _) in enumerate(m.basis_labels) if w == lam]
    if len(hits) != 1:
        raise ModuleError("highest weight space is not one-dimensional")
    v = [Fraction(0)] * m.dim
    v[hits[0]] = Fraction(1)
    return v


def minimal_admissible_lattice(m: HighestWeightModule, p: int) -> PLattice:
    """Z_(p)-span of f_b1^(a1) ... f_bN^(aN) v over PBW exponent tuples."""
    dp = divided_powers(m)
    cb = m.cb
    span = [highest_weight_vector(m)]
    # apply f_bN^(a) first, f_b1^(a) last; keep a Z_(p)-basis at every stage
    for k in reversed(range(cb.npos)):
        lab = cb.labels[cb.f(k)]
        new = list(span)
        for a in range(1, dp.degree[lab]):
            op = dp.get(lab, a)
            new.extend(op.apply(v) for v in span)
        span, _ = hermite_form(new, p, m.dim)
    lat = PLattice.from_generators(span, p, m)
    for (lab, k), op in dp.items():
        for r in lat.rows:
            if not lat.contains(op.apply(r)):
                raise NotPIntegral(f"{lab}^({k})", "closure check of the minimal lattice failed")
    return lat


def _mod_p(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


def _matrix_in_basis(lat: PLattice, op: LinearOperator, label) -> np.ndarray:
    n = lat.dim
    out = np.zeros((n, n), dtype=np.int64)
    for j, b in enumerate(lat.rows):
        c = lat.coords(op.apply(b))
        for i, x in enumerate(c):
            if x:
                if valuation(x, lat.p) < 0:
                    raise NotPIntegral(label, f"image of basis vector {j}")
                out[i, j] = _mod_p(x, lat.p)
    return out


@dataclass(frozen=True, eq=False)
class ModpModule:
    """Reduction L/pL: matrices over F_p acting on columns, in the canonical basis of L."""

    p: int
    dim: int
    gens: dict = field(repr=False)  # label -> array
    divided: dict = field(repr=False)  # (label, k) -> array
    weights: tuple  # weight of each lattice basis vector, None when it is not a weight vector

    def lie_generators(self) -> list[np.ndarray]:
        return list(self.gens.values())

    def weight_projections(self) -> list[np.ndarray]:
        if any(w is None for w in self.weights):
            raise ModuleError("lattice basis is not made of weight vectors")
        out = []
        for w in sorted(set(self.weights)):
            d = np.array([int(x == w) for x in self.weights], dtype=np.int64)
            out.append(np.diag(d))
        return out

    def group_generators(self) -> list[np.ndarray]:
        return list(self.divided.values()) + self.weight_projections()

    def generators(self, kind: str) -> list[np.ndarray]:
        if kind == "lie":
            return self.lie_generators()
        if kind == "group":
            return self.group_generators()
        raise ValueError(f"unknown generator set {kind!r}")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "dim": self.dim,
            "weights": [None if w is None else list(w) for w in self.weights],
            "generators": {lab: a.tolist() for lab, a in self.gens.items()},
            "divided_powers": {f"{lab}^({k})": a.tolist() for (lab, k), a in self.divided.items()},
        }


def _row_weight(m: HighestWeightModule, row) -> tuple | None:
    ws = {m.basis_labels[i][0] for i, x in enumerate(row) if x}
    return ws.pop() if len(ws) == 1 else None


def reduce_mod_p(lat: PLattice, m: HighestWeightModule, p: int | None = None, divided: bool = True) -> ModpModule:
    """Rewrite the Chevalley generators (and divided powers) in a basis of ``lat`` and reduce mod p."""
    p = lat.p if p is None else p
    if p != lat.p:
        raise ValueError(f"lattice is over Z_({lat.p}), not Z_({p})")
    gens = {lab: _matrix_in_basis(lat, m.action[lab], lab) for lab in m.cb.labels}
    dmats = {}
    if divided:
        for (lab, k), op in divided_powers(m).items():
            dmats[(lab, k)] = _matrix_in_basis(lat, op, f"{lab}^({k})")
    weights = tuple(_row_weight(m, r) for r in lat.rows)
    return ModpModule(p, lat.dim, gens, dmats, weights)
