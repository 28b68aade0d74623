"""lielattice command line.

Exit codes: 0 ok / prediction matched, 1 mismatch, 2 usage or validation error,
3 a size cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, prod

from .chevalley import chevalley_basis
from .highestweight import (
    DIM_CAP,
    HighestWeightModule,
    ModuleError,
    ModuleTooLarge,
    decompose,
    simple_module,
    sym_power,
    tensor,
)
from .lattice import LatticeError, PLattice
from .latticelab import (
    CapExceeded,
    SearchFailure,
    classify,
    classify_window,
    counterexample_lattice,
    extremes_lattice,
    is_group_stable,
    is_p_latticed,
    lift_subspace,
    monomial_lattice,
    residue_dimension_vector,
    verify_theorem2,
)
from .linalg import parse_frac
from .rootsystem import CartanType, RootSystemError, build_root_system, weyl_dim
from .zform import minimal_admissible_lattice, reduce_mod_p

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


@dataclass
class RunConfig:
    family: str = "A"
    rank: int = 1
    weights: list = field(default_factory=lambda: [(1,)])
    p: int | None = None
    recipe: str = "simple"
    power: int = 2
    ref: str | None = None
    dim_cap: int = DIM_CAP
    subspace_cap: int = 2_000_000
    out: str | None = None
    jobs: int = 1
    seed_order: str = "forward"
    inject_fault: bool = False

    def __post_init__(self):
        if self.dim_cap <= 0 or self.subspace_cap <= 0:
            raise UsageError("caps must be positive")
        for w in self.weights:
            if len(w) != self.rank:
                raise UsageError(f"weight {','.join(map(str, w))} has length {len(w)}, rank is {self.rank}")
        if self.p is not None and not _is_prime(self.p):
            raise UsageError(f"p = {self.p} is not prime")
        if self.recipe not in ("simple", "sym-power", "tensor"):
            raise UsageError(f"unknown recipe {self.recipe!r}")
        if self.recipe != "tensor" and len(self.weights) != 1:
            raise UsageError("give exactly one --weight unless --recipe tensor")


def _parse_weight(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"weight must be comma-separated integers, got {text!r}") from None


def _config(args) -> RunConfig:
    family, rank = args.type.strip().upper(), args.rank
    if len(family) > 1:
        family, rank = family[0], int(family[1:]) if rank is None else rank
    rank = 1 if rank is None else rank
    CartanType(family, rank)  # validates
    weights = getattr(args, "weight", None) or [(1,) + (0,) * (rank - 1)]
    return RunConfig(
        family=family,
        rank=rank,
        weights=list(weights),
        p=getattr(args, "p", None),
        recipe=getattr(args, "recipe", "simple"),
        power=getattr(args, "power", 2),
        ref=getattr(args, "ref", None),
        dim_cap=int(os.environ.get("ARTIFACT_DIM_CAP", DIM_CAP)),
        subspace_cap=int(os.environ.get("ARTIFACT_SUBSPACE_CAP", 2_000_000)),
        out=getattr(args, "out", None),
        jobs=getattr(args, "jobs", 1),
        seed_order=getattr(args, "seed_order", "forward"),
        inject_fault=getattr(args, "inject_fault", False),
    )


def build_module(cfg: RunConfig) -> HighestWeightModule:
    rs = build_root_system(CartanType(cfg.family, cfg.rank))
    cb = chevalley_basis(rs)
    dims = [weyl_dim(rs, w) for w in cfg.weights]
    if cfg.recipe == "simple":
        total = dims[0]
    elif cfg.recipe == "sym-power":
        if cfg.power < 0:
            raise UsageError("--power must be non-negative")
        total = comb(dims[0] + cfg.power - 1, cfg.power)
    else:
        total = prod(dims)
    if total > cfg.dim_cap:
        raise ModuleTooLarge(f"module would have dimension {total} > cap {cfg.dim_cap}")
    mods = [simple_module(rs, cb, w, dim_cap=cfg.dim_cap) for w in cfg.weights]
    if cfg.recipe == "simple":
        return mods[0]
    if cfg.recipe == "sym-power":
        return sym_power(mods[0], cfg.power)
    out = mods[0]
    for m in mods[1:]:
        out = tensor(out, m)
    return out


def _require_p(cfg):
    if cfg.p is None:
        raise UsageError("--p is required")
    return cfg.p


def reference_lattice(cfg: RunConfig, m: HighestWeightModule) -> PLattice:
    p = _require_p(cfg)
    ref = cfg.ref or ("minimal" if cfg.recipe == "simple" else "monomial")
    if ref == "minimal":
        if m.highest_weights is None:
            raise UsageError("the minimal lattice needs a simple module; use --ref monomial")
        return minimal_admissible_lattice(m, p)
    lat = monomial_lattice(m, p)
    if not is_group_stable(lat, m)[0]:
        raise UsageError("the monomial lattice of this module is not G-stable; use --ref minimal")
    return lat


def _lambda_field(cfg: RunConfig, m: HighestWeightModule):
    if cfg.recipe == "simple":
        return list(cfg.weights[0])
    hws = decompose(m)
    return list(hws[0]) if len(hws) == 1 else [list(w) for w in hws]


# -- commands ----------------------------------------------------------------------


def cmd_root(cfg: RunConfig, args) -> tuple[dict, int]:
    rs = build_root_system(CartanType(cfg.family, cfg.rank))
    return {
        "type": cfg.family,
        "rank": cfg.rank,
        "cartan_matrix": [list(r) for r in rs.cartan_matrix],
        "num_roots": len(rs.roots),
        "num_positive_roots": len(rs.positive_roots),
        "positive_roots": [list(r) for r in rs.positive_roots],
        "roots": [list(r) for r in rs.roots],
    }, EXIT_OK


def cmd_module(cfg: RunConfig, args) -> tuple[dict, int]:
    m = build_module(cfg)
    out = {
        "type": cfg.family,
        "rank": cfg.rank,
        "recipe": cfg.recipe,
        "dim": m.dim,
        "weights": [list(w) for w in m.weights],
        "highest_weights": [list(w) for w in decompose(m)],
    }
    if args.matrices:
        out["action"] = {lab: m.action[lab].to_json() for lab in m.cb.labels}
    return out, EXIT_OK


def cmd_latticed(cfg: RunConfig, args) -> tuple[dict, int]:
    p = _require_p(cfg)
    m = build_module(cfg)
    flag, bad = is_p_latticed(m, p)
    hws = m.highest_weights if m.highest_weights is not None else decompose(m)
    return {
        "p": p,
        "p_latticed": flag,
        "highest_weights": [list(w) for w in hws],
        "offending_weight": None if bad is None else list(bad),
    }, EXIT_OK


def _parse_vector(text: str, n: int) -> list[Fraction]:
    parts = [parse_frac(x) for x in text.split(",")]
    if len(parts) != n:
        raise UsageError(f"vector {text!r} has length {len(parts)}, module has dimension {n}")
    return parts


def cmd_lattice_check(cfg: RunConfig, args) -> tuple[dict, int]:
    m = build_module(cfg)
    p = _require_p(cfg)
    if args.lattice_file:
        with open(args.lattice_file) as fh:
            lat = PLattice.from_json(json.load(fh), module=m)
        if lat.p != p:
            raise UsageError("lattice file is over a different prime")
    else:
        lat = reference_lattice(cfg, m)
        if args.add:
            lat = lat.add([_parse_vector(v, m.dim) for v in args.add])
    rep = classify(lat, m)
    return {"p": p, "lattice": lat.matrix_strings(), **rep.to_json()}, EXIT_OK


def cmd_lattice_enumerate(cfg: RunConfig, args) -> tuple[dict, int]:
    m = build_module(cfg)
    mref = reference_lattice(cfg, m)
    modp = reduce_mod_p(mref, m)
    count, lie, grp = classify_window(modp, jobs=cfg.jobs, cap=cfg.subspace_cap)
    lie_set, grp_set = set(lie), set(grp)
    listed = sorted(lie_set | grp_set) if not args.all else None
    entries = []
    if args.all:
        from . import fp

        for piv in fp.pivot_sets(modp.dim):
            for u in fp.subspace_batch(modp.dim, piv, modp.p):
                key = tuple(map(tuple, u.tolist()))
                entries.append(_window_entry(mref, key, key in lie_set, key in grp_set))
    else:
        entries = [_window_entry(mref, key, key in lie_set, key in grp_set) for key in listed]
    return {
        "p": modp.p,
        "reference": mref.matrix_strings(),
        "window_size": count,
        "lie_stable_count": len(lie),
        "group_stable_count": len(grp),
        "lattices": entries,
    }, EXIT_OK


def _window_entry(mref, key, lie, grp):
    lat = lift_subspace(mref, list(key)) if key else mref
    return {"residue": [list(r) for r in key], "basis": lat.matrix_strings(), "lie_stable": lie, "group_stable": grp}


def cmd_counterexample(cfg: RunConfig, args) -> tuple[dict, int]:
    m = build_module(cfg)
    p = _require_p(cfg)
    mref = reference_lattice(cfg, m)
    lat = counterexample_lattice(m, p, mref, seed_order=cfg.seed_order)
    rep = classify(lat, m)
    dims = residue_dimension_vector(lat, mref) if mref.scale(-1).contains_lattice(lat) and lat.contains_lattice(mref) else None
    return {
        "p": p,
        "lambda": _lambda_field(cfg, m),
        "reference": mref.matrix_strings(),
        "lattice": lat.matrix_strings(),
        **rep.to_json(),
        "residue_dimensions": None if dims is None else [[list(w), d] for w, d in dims.items()],
    }, EXIT_OK


def run_verify(cfg: RunConfig) -> tuple[dict, bool]:
    """Window report for one configuration plus whether it matches the prediction."""
    m = build_module(cfg)
    p = _require_p(cfg)
    mref = reference_lattice(cfg, m)
    rep = verify_theorem2(m, p, mref, jobs=cfg.jobs, cap=cfg.subspace_cap,
                          fault=cfg.inject_fault, lam=_lambda_field(cfg, m))
    if rep.p_latticed:
        ok = rep.equal
    elif not rep.equal:
        ok = rep.counterexample is not None
    else:
        try:
            counterexample_lattice(m, p, mref, fault=cfg.inject_fault, seed_order=cfg.seed_order)
            ok = True
        except SearchFailure:
            ok = False
    return rep.to_json(), ok


def cmd_verify(cfg: RunConfig, args) -> tuple[dict, int]:
    data, ok = run_verify(cfg)
    return data, EXIT_OK if ok else EXIT_MISMATCH


CATALOG = (
    # (label, family, rank, weights, p, recipe, power, ref)
    *((f"restricted A1 {m}w p={p}", "A", 1, [(m,)], p, "simple", 2, "minimal") for p in (2, 3, 5) for m in range(p)),
    *((f"restricted A2 {w} p={p}", "A", 2, [w], p, "simple", 2, "minimal")
      for p in (2, 3) for w in ((1, 0), (0, 1), (1, 1))),
    *((f"non-restricted A1 {m}w p={p}", "A", 1, [(m,)], p, "simple", 2, "minimal") for p in (2, 3) for m in (p, p + 1)),
    ("non-restricted A2 (2, 0) p=2", "A", 2, [(2, 0)], 2, "simple", 2, "minimal"),
)


def cmd_catalog(cfg: RunConfig, args) -> tuple[dict, int]:
    rows, mismatch, capped = [], False, False
    for p in (2, 3, 5):
        rep = classify(extremes_lattice(p))
        ok = rep.flags() == (True, False, False)
        mismatch |= not ok
        label = f"A1 Sym^{p} + (x^p+y^p)/p"
        rows.append({"case": label, "status": "ok" if ok else "MISMATCH", **rep.to_json()})
        print(f"{label:32s} {'ok' if ok else 'MISMATCH':8s} flags={rep.flags()}", file=sys.stderr)
    for label, fam, rank, weights, p, recipe, power, ref in CATALOG:
        c = RunConfig(family=fam, rank=rank, weights=weights, p=p, recipe=recipe, power=power, ref=ref,
                      dim_cap=cfg.dim_cap, subspace_cap=cfg.subspace_cap, jobs=cfg.jobs,
                      inject_fault=cfg.inject_fault)
        try:
            data, ok = run_verify(c)
            status = "ok" if ok else "MISMATCH"
            mismatch |= not ok
        except CapExceeded as exc:
            data, status = {"window_size": exc.needed}, "CAP"
            capped = True
        rows.append({"case": label, "status": status, **{k: data.get(k) for k in
                     ("p_latticed", "window_size", "lie_stable_count", "group_stable_count", "equal")}})
        print(f"{label:32s} {status:8s} window={data.get('window_size')} "
              f"lie={data.get('lie_stable_count')} group={data.get('group_stable_count')}", file=sys.stderr)
    code = EXIT_MISMATCH if mismatch else (EXIT_CAP if capped else EXIT_OK)
    return {"cases": rows}, code


# -- parser ------------------------------------------------------------------------


def _add_common(sp, need_p=False, window=False):
    sp.add_argument("--type", default="A", help="Cartan family (A, B, C, D, G) or a full name like A2")
    sp.add_argument("--rank", type=int, default=None)
    sp.add_argument("--weight", type=_parse_weight, action="append",
                    help="highest weight as comma-separated omega-coefficients (repeat for --recipe tensor)")
    sp.add_argument("--recipe", choices=("simple", "sym-power", "tensor"), default="simple")
    sp.add_argument("--power", type=int, default=2, help="exponent for --recipe sym-power")
    sp.add_argument("--p", type=int, required=need_p)
    sp.add_argument("--out", help="write JSON here instead of stdout")
    if window:
        sp.add_argument("--ref", choices=("monomial", "minimal"), default=None,
                        help="reference lattice M of the window M <= L <= p^-1 M")
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--seed-order", choices=("forward", "reverse"), default="forward")


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="lielattice", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("root", help="root system summary")
    sp.add_argument("--type", default="A")
    sp.add_argument("--rank", type=int, default=None)
    sp.add_argument("--out")

    sp = sub.add_parser("module", help="build a module and list its weights")
    _add_common(sp)
    sp.add_argument("--matrices", action="store_true", help="include the action matrices")

    sp = sub.add_parser("latticed", help="is the module p-latticed?")
    _add_common(sp, need_p=True)

    lat = sub.add_parser("lattice", help="lattice tools")
    lsub = lat.add_subparsers(dest="lattice_command", required=True)
    sp = lsub.add_parser("check", help="stability report for one lattice")
    _add_common(sp, need_p=True, window=True)
    sp.add_argument("--add", action="append", metavar="VEC",
                    help="extra generator, comma-separated rationals like 1/3,0,0,1/3")
    sp.add_argument("--lattice-file", help="PLattice JSON to check instead of the reference")
    sp = lsub.add_parser("enumerate", help="classify every lattice in the window")
    _add_common(sp, need_p=True, window=True)
    sp.add_argument("--all", action="store_true", help="list every window lattice, not only the stable ones")

    sp = sub.add_parser("counterexample", help="Lie-stable lattice that is not G-stable")
    _add_common(sp, need_p=True, window=True)

    sp = sub.add_parser("verify", help="compare Lie- and G-stable lattices in one window")
    _add_common(sp, need_p=True, window=True)
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)

    sp = sub.add_parser("catalog", help="run the whole verification catalog")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--out")
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    return ap


COMMANDS = {
    "root": cmd_root,
    "module": cmd_module,
    "latticed": cmd_latticed,
    ("lattice", "check"): cmd_lattice_check,
    ("lattice", "enumerate"): cmd_lattice_enumerate,
    "counterexample": cmd_counterexample,
    "verify": cmd_verify,
    "catalog": cmd_catalog,
}


def _emit(data, path):
    text = json.dumps(data, indent=2) + "\n"
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    key = (args.command, args.lattice_command) if args.command == "lattice" else args.command
    try:
        if args.command == "catalog":
            cfg = RunConfig(dim_cap=int(os.environ.get("ARTIFACT_DIM_CAP", DIM_CAP)),
                            subspace_cap=int(os.environ.get("ARTIFACT_SUBSPACE_CAP", 2_000_000)),
                            jobs=args.jobs, out=args.out, inject_fault=args.inject_fault)
        else:
            cfg = _config(args)
        data, code = COMMANDS[key](cfg, args)
    except (CapExceeded, ModuleTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (UsageError, RootSystemError, ModuleError, LatticeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SearchFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    _emit(data, cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
