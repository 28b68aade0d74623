"""Stability of lattices under the Lie algebra, the torus and the group.

A lattice is G-stable when it is torus-homogeneous and stable under every
divided power e_a^(k), f_a^(k).  One-step windows M <= L <= p^-1 M are handled
on the residue side: L corresponds to the subspace U = (L/M) of F_p^n written
in the canonical basis of M.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fp
from .highestweight import HighestWeightModule, decompose
from .lattice import PLattice, hermite_form
from .zform import ModpModule, divided_powers, minimal_admissible_lattice, reduce_mod_p

__all__ = [
    "PLattice",
    "StabilityReport",
    "Theorem2Report",
    "CapExceeded",
    "SearchFailure",
    "SUBSPACE_CAP",
    "is_lie_stable",
    "is_torus_homogeneous",
    "is_group_stable",
    "classify",
    "is_p_latticed",
    "lift_subspace",
    "residue_subspace",
    "enumerate_intermediate",
    "classify_window",
    "verify_theorem2",
    "counterexample_lattice",
    "steinberg_digits",
    "spin",
    "monomial_lattice",
    "residue_dimension_vector",
    "extremes_lattice",
]

SUBSPACE_CAP = 2_000_000


class CapExceeded(RuntimeError):
    def __init__(self, needed: int, cap: int):
        self.needed, self.cap = needed, cap
        super().__init__(f"window has {needed} subspaces, over the cap of {cap}")


class SearchFailure(RuntimeError):
    pass


def _subspace_cap(cap):
    if cap is not None:
        return cap
    return int(os.environ.get("ARTIFACT_SUBSPACE_CAP", SUBSPACE_CAP))


# -- single-lattice predicates ----------------------------------------------------


def _module(lat: PLattice, m):
    m = m if m is not None else lat.module
    if m is None:
        raise ValueError("lattice carries no module; pass one explicitly")
    return m


def _stable_under(lat: PLattice, ops) -> tuple[bool, tuple | None]:
    for label, op in ops:
        for i, r in enumerate(lat.rows):
            if not lat.contains(op.apply(r)):
                return False, (i, label)
    return True, None


def is_lie_stable(lat: PLattice, m: HighestWeightModule | None = None):
    """(flag, witness): witness is (basis row, generator label) of a failure."""
    m = _module(lat, m)
    return _stable_under(lat, ((lab, m.action[lab]) for lab in m.cb.labels))


def is_torus_homogeneous(lat: PLattice, m: HighestWeightModule | None = None):
    """(flag, witness): witness is (basis row, weight) whose projection leaves the lattice."""
    m = _module(lat, m)
    blocks = m.weight_blocks()
    for i, r in enumerate(lat.rows):
        support = {m.basis_labels[j][0] for j, x in enumerate(r) if x}
        if len(support) < 2:
            continue
        for w in sorted(support):
            idx = set(blocks[w])
            proj = [x if j in idx else Fraction(0) for j, x in enumerate(r)]
            if not lat.contains(proj):
                return False, (i, w)
    return True, None


def _divided_items(m):
    return ((f"{lab}^({k})", op) for (lab, k), op in divided_powers(m).items())


def is_group_stable(lat: PLattice, m: HighestWeightModule | None = None, fault: bool = False):
    """(flag, witness).  ``fault`` swaps in the Lie test, for exercising failure paths."""
    m = _module(lat, m)
    if fault:
        return is_lie_stable(lat, m)
    ok, w = is_torus_homogeneous(lat, m)
    if not ok:
        return False, ("torus",) + w
    return _stable_under(lat, _divided_items(m))


@dataclass(frozen=True)
class StabilityReport:
    lie_stable: bool
    torus_homogeneous: bool
    group_stable: bool
    witnesses: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.group_stable and not (self.lie_stable and self.torus_homogeneous):
            raise AssertionError("group-stable lattice that is not Lie-stable and homogeneous")

    def flags(self) -> tuple[bool, bool, bool]:
        return self.lie_stable, self.torus_homogeneous, self.group_stable

    def to_json(self) -> dict:
        return {
            "lie_stable": self.lie_stable,
            "torus_homogeneous": self.torus_homogeneous,
            "group_stable": self.group_stable,
            "witnesses": {k: _jsonable(v) for k, v in sorted(self.witnesses.items())},
        }


def _jsonable(x):
    if isinstance(x, tuple):
        return [_jsonable(y) for y in x]
    return x


def classify(lat: PLattice, m: HighestWeightModule | None = None) -> StabilityReport:
    m = _module(lat, m)
    lie, wl = is_lie_stable(lat, m)
    tor, wt = is_torus_homogeneous(lat, m)
    grp, wg = is_group_stable(lat, m)
    wit = {k: v for k, v in (("lie_stable", wl), ("torus_homogeneous", wt), ("group_stable", wg)) if v}
    return StabilityReport(lie, tor, grp, wit)


def is_p_latticed(v: HighestWeightModule, p: int):
    """(flag, offending highest weight or None)."""
    hws = v.highest_weights if v.highest_weights is not None else tuple(decompose(v))
    for w in hws:
        if any(c > p - 1 for c in w):
            return False, tuple(w)
    return True, None


def steinberg_digits(lam, p: int) -> list[tuple[int, ...]]:
    """Coefficient-wise base-p digits: lam = sum_t p^t digits[t]."""
    lam = [int(c) for c in lam]
    if any(c < 0 for c in lam):
        raise ValueError(f"{tuple(lam)} is not dominant")
    if not any(lam):
        return [tuple(lam)]
    out = []
    while any(lam):
        out.append(tuple(c % p for c in lam))
        lam = [c // p for c in lam]
    return out


def monomial_lattice(m: HighestWeightModule, p: int) -> PLattice:
    return PLattice.standard(m.dim, p, m)


def extremes_lattice(p: int) -> PLattice:
    """M + p^-1 (x^p + y^p) inside Sym^p of the standard A1 module, M the monomial lattice."""
    from .chevalley import chevalley_basis
    from .highestweight import simple_module, sym_power
    from .rootsystem import CartanType, build_root_system

    rs = build_root_system(CartanType("A", 1))
    m = sym_power(simple_module(rs, chevalley_basis(rs), (1,)), p)
    v = [Fraction(0)] * m.dim
    v[0] = v[-1] = Fraction(1, p)
    return monomial_lattice(m, p).add([v])


# -- windows -----------------------------------------------------------------------


def lift_subspace(mref: PLattice, u) -> PLattice:
    """The lattice M + p^-1 (lift of U), U given by rows in M-basis coordinates."""
    u = np.atleast_2d(np.asarray(u, dtype=np.int64))
    inv_p = Fraction(1, mref.p)
    extra = []
    for row in u:
        if row.any():
            vec = [Fraction(0)] * mref.dim
            for i, c in enumerate(row.tolist()):
                if c:
                    for j, x in enumerate(mref.rows[i]):
                        vec[j] += c * x
            extra.append([x * inv_p for x in vec])
    rows, piv = hermite_form(list(mref.rows) + extra, mref.p, mref.dim)
    return PLattice(mref.p, rows, piv, mref.module, window=(-1, 0))


def residue_subspace(lat: PLattice, mref: PLattice) -> np.ndarray:
    """U = (L / M) in F_p^n, for M <= L <= p^-1 M, as an RREF matrix."""
    p = mref.p
    if not (lat.contains_lattice(mref) and mref.scale(-1).contains_lattice(lat)):
        raise ValueError("lattice is not in the window of the reference")
    rows = []
    for r in lat.rows:
        c = mref.coords([x * p for x in r])
        rows.append([x.numerator * pow(x.denominator, -1, p) % p for x in c])
    red, _ = fp.rref_mod_p(np.array(rows, dtype=np.int64), p)
    return red


def residue_dimension_vector(lat: PLattice, mref: PLattice) -> dict:
    """weight -> dim of (U intersect the weight space), for U the residue subspace of lat."""
    m = _module(mref, None)
    red = residue_subspace(lat, mref)
    weights = reduce_mod_p(mref, m, divided=False).weights
    out = {}
    for w in sorted(set(weights)):
        others = [i for i, x in enumerate(weights) if x != w]
        if red.shape[0] == 0:
            out[w] = 0
        elif not others:
            out[w] = red.shape[0]
        else:
            # dim (U ∩ V_w) = dim U - rank of U projected away from V_w
            out[w] = red.shape[0] - fp.rank_mod_p(red[:, others], mref.p)
    return out


def _check_window_count(n: int, p: int, cap) -> int:
    cap = _subspace_cap(cap)
    total = fp.count_subspaces(n, p)
    if total > cap:
        raise CapExceeded(total, cap)
    return total


def enumerate_intermediate(mref: PLattice, p: int | None = None, cap: int | None = None) -> list[PLattice]:
    """Every lattice L with M <= L <= p^-1 M, one per F_p-subspace, in RREF enumeration order."""
    p = mref.p if p is None else p
    n = mref.dim
    _check_window_count(n, p, cap)
    out = []
    for piv in fp.pivot_sets(n):
        for u in fp.subspace_batch(n, piv, p):
            out.append(lift_subspace(mref, u))
    return out


def _classify_chunk(args):
    n, p, chunk, lie_gens, grp_gens = args
    lie_hits, grp_hits, count = [], [], 0
    for piv in chunk:
        batch = fp.subspace_batch(n, piv, p)
        count += batch.shape[0]
        lm = fp.stable_mask(batch, piv, lie_gens, p)
        gm = fp.stable_mask(batch, piv, grp_gens, p)
        lie_hits.extend(batch[lm].tolist())
        grp_hits.extend(batch[gm].tolist())
    return count, lie_hits, grp_hits


def classify_window(modp: ModpModule, jobs: int = 1, cap: int | None = None, fault: bool = False):
    """Residue-side classification of every subspace of F_p^n.

    Returns (count, Lie-stable subspaces, group-stable subspaces); subspaces are RREF row lists.
    """
    n, p = modp.dim, modp.p
    _check_window_count(n, p, cap)
    lie_gens = modp.lie_generators()
    grp_gens = lie_gens if fault else modp.group_generators()
    sets = list(fp.pivot_sets(n))
    jobs = max(1, int(jobs))
    chunks = [sets[i::jobs] for i in range(jobs)] if jobs > 1 else [sets]
    tasks = [(n, p, c, lie_gens, grp_gens) for c in chunks if c]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_classify_chunk, tasks))
    else:
        results = [_classify_chunk(t) for t in tasks]
    count = sum(r[0] for r in results)
    lie = sorted(tuple(map(tuple, u)) for r in results for u in r[1])
    grp = sorted(tuple(map(tuple, u)) for r in results for u in r[2])
    return count, lie, grp


@dataclass
class Theorem2Report:
    p: int
    cartan_type: str
    rank: int
    lam: list | None
    p_latticed: bool
    window_size: int
    lie_stable_count: int
    group_stable_count: int
    equal: bool
    counterexample: PLattice | None = None
    expected_window_size: int = 0
    lie_lattices: list = field(default_factory=list, repr=False)
    group_lattices: list = field(default_factory=list, repr=False)

    def __post_init__(self):
        if self.equal and self.counterexample is not None:
            raise AssertionError("equal window sets cannot carry a counterexample")

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "type": self.cartan_type,
            "rank": self.rank,
            "lambda": self.lam,
            "p_latticed": self.p_latticed,
            "window_size": self.window_size,
            "lie_stable_count": self.lie_stable_count,
            "group_stable_count": self.group_stable_count,
            "equal": self.equal,
            "counterexample": None if self.counterexample is None else self.counterexample.matrix_strings(),
        }


def verify_theorem2(v: HighestWeightModule, p: int, mref: PLattice, jobs: int = 1,
                    cap: int | None = None, fault: bool = False, lam=None) -> Theorem2Report:
    """Classify the whole window M <= L <= p^-1 M on both sides and compare."""
    if mref.p != p:
        raise ValueError("reference lattice is over a different prime")
    grp_ok, _ = is_group_stable(mref, v)
    if not grp_ok:
        raise ValueError("reference lattice is not G-stable")
    expected = _check_window_count(v.dim, p, cap)
    modp = reduce_mod_p(mref, v)
    count, lie_res, grp_res = classify_window(modp, jobs=jobs, cap=cap, fault=fault)
    if count != expected:
        raise AssertionError(f"enumerated {count} subspaces, expected {expected}")

    lie_lats = [lift_subspace(mref, u) for u in lie_res]
    grp_lats = [lift_subspace(mref, u) for u in grp_res]
    # the lattice side must agree with the residue side
    for lat in lie_lats:
        if not is_lie_stable(lat, v)[0]:
            raise AssertionError("residue-side Lie stability disagrees with the lattice check")
    for lat in grp_lats:
        if not is_group_stable(lat, v, fault=fault)[0]:
            raise AssertionError("residue-side group stability disagrees with the lattice check")
    lie_lats.sort(key=PLattice.key)
    grp_lats.sort(key=PLattice.key)
    grp_set = set(grp_lats)
    extra = [lat for lat in lie_lats if lat not in grp_set]
    equal = set(lie_lats) == grp_set
    latticed, _ = is_p_latticed(v, p)
    rs = v.rs
    if lam is None and v.highest_weights is not None and len(v.highest_weights) == 1:
        lam = list(v.highest_weights[0])
    return Theorem2Report(
        p=p, cartan_type=rs.cartan_type.family, rank=rs.rank, lam=None if lam is None else list(lam),
        p_latticed=latticed, window_size=count, lie_stable_count=len(lie_lats),
        group_stable_count=len(grp_lats), equal=equal,
        counterexample=extra[0] if extra else None, expected_window_size=expected,
        lie_lattices=lie_lats, group_lattices=grp_lats,
    )


# -- spinning and the counterexample search -------------------------------------------


def spin(modp: ModpModule, v, generators: str = "lie") -> np.ndarray:
    """Smallest subspace containing v and closed under the chosen generators (RREF rows)."""
    v = np.asarray(v, dtype=np.int64) % modp.p
    if v.ndim == 1 and not v.any():
        raise ValueError("cannot spin the zero vector")
    return fp.spin_mod_p(modp.generators(generators), v, modp.p)


def _is_group_stable_residue(modp, u, fault):
    gens = modp.lie_generators() if fault else modp.group_generators()
    return fp.is_stable(gens, u, modp.p)


def _search(v, modp: ModpModule, mref: PLattice, fault: bool, seed_order: str):
    n, p = modp.dim, modp.p
    for i in (range(n) if seed_order == "forward" else reversed(range(n))):
        s = np.zeros(n, dtype=np.int64)
        s[i] = 1
        q0 = spin(modp, s, "lie")
        big = spin(modp, s, "group")
        if q0.shape[0] >= big.shape[0]:
            continue
        candidates = []
        for t in big[::-1]:
            if np.array_equal(t, s):
                continue
            q = spin(modp, (s + t) % p, "lie")
            if 0 < q.shape[0] < n and not _is_group_stable_residue(modp, q, fault):
                candidates.append(q)
                break
        candidates.append(q0)
        for q in candidates:
            lat = lift_subspace(mref, q)
            if is_lie_stable(lat, v)[0] and not is_group_stable(lat, v, fault=fault)[0]:
                return lat
    return None


def counterexample_lattice(v: HighestWeightModule, p: int, mref: PLattice | None = None,
                           fault: bool = False, max_shifts: int = 4, seed_order: str = "forward") -> PLattice:
    """A Lie-stable lattice that is not G-stable, found by spinning in the residue module."""
    if is_p_latticed(v, p)[0] and not fault:
        raise ValueError("module is p-latticed; no counterexample exists")
    if mref is None:
        mref = minimal_admissible_lattice(v, p)
    refs = [mref]
    seen = {mref}
    while refs and max_shifts >= 0:
        cur = refs.pop(0)
        modp = reduce_mod_p(cur, v)
        lat = _search(v, modp, cur, fault, seed_order)
        if lat is not None:
            return lat
        # move the window: preimages of proper H-submodules are G-stable references
        for i in range(modp.dim):
            s = np.zeros(modp.dim, dtype=np.int64)
            s[i] = 1
            sub = spin(modp, s, "group")
            if sub.shape[0] < modp.dim:
                nxt = lift_subspace(cur, sub)
                if nxt not in seen:
                    seen.add(nxt)
                    refs.append(nxt)
        max_shifts -= 1
    raise SearchFailure(f"no Lie-stable, non-G-stable lattice found for p={p}")
