import itertools
from functools import lru_cache

from lielattice import CartanType, build_root_system, chevalley_basis, simple_module, weyl_dim

ALL_TYPES = ["A1", "A2", "A3", "A4", "B2", "B3", "C2", "C3", "D3", "D4", "G2"]


@lru_cache(maxsize=None)
def rs_cb(name):
    rs = build_root_system(CartanType.parse(name))
    return rs, chevalley_basis(rs)


@lru_cache(maxsize=None)
def simple(name, lam):
    rs, cb = rs_cb(name)
    return simple_module(rs, cb, tuple(lam))


def construction_catalog(max_dim=30):
    """Dominant weights of dimension <= max_dim on A1, A2, B2, C2, plus the G2 fundamentals."""
    out = []
    for name in ("A1", "A2", "B2", "C2"):
        rs, _ = rs_cb(name)
        for lam in itertools.product(range(max_dim), repeat=rs.rank):
            if weyl_dim(rs, lam) <= max_dim:
                out.append((name, lam))
    out += [("G2", (0, 0)), ("G2", (1, 0)), ("G2", (0, 1))]
    return out
