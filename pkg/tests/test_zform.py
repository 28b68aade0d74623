import dataclasses
import json
from fractions import Fraction
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lielattice import fp
from lielattice.highestweight import ModuleError, sym_power
from lielattice.latticelab import extremes_lattice, is_group_stable, is_torus_homogeneous, monomial_lattice
from lielattice.lattice import PLattice
from lielattice.zform import (
    NotPIntegral,
    divided_powers,
    highest_weight_vector,
    minimal_admissible_lattice,
    reduce_mod_p,
)

from conftest import simple

F = Fraction


def marked_sym(m):
    """Sym^m of the A1 standard module, marked as simple of highest weight m."""
    s = sym_power(simple("A1", (1,)), m)
    return dataclasses.replace(s, highest_weights=((m,),))


def test_divided_power_examples():
    v = simple("A1", (1,))
    dp = divided_powers(v)
    assert dp.get("e1", 2).is_zero()
    assert dp.degree == {"e1": 2, "f1": 2}
    for m in (simple("A2", (1, 1)), simple("G2", (1, 0))):
        dp = divided_powers(m)
        for lab in dp.labels():
            assert dp.get(lab, 1) == m.action[lab]
            assert dp.get(lab, dp.degree[lab]).is_zero()
            assert dp.degree[lab] <= m.dim + 1


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_divided_powers_on_sym_p(p):
    s = sym_power(simple("A1", (1,)), p)
    dp = divided_powers(s)
    top = [F(int(i == 0)) for i in range(p + 1)]
    # basis index k is x^(p-k) y^k, and f sends x to y
    for k in range(p + 1):
        assert dp.get("f1", k).apply(top) == [F(comb(p, k)) if i == k else F(0) for i in range(p + 1)]


@settings(max_examples=25, deadline=None)
@given(name_lam=st.sampled_from([("A1", (4,)), ("A2", (2, 1)), ("B2", (1, 1)), ("G2", (1, 0))]), data=st.data())
def test_divided_power_multiplicativity(name_lam, data):
    m = simple(*name_lam)
    dp = divided_powers(m)
    lab = data.draw(st.sampled_from(dp.labels()))
    j = data.draw(st.integers(0, dp.degree[lab]))
    k = data.draw(st.integers(0, dp.degree[lab]))
    assert dp.get(lab, j) @ dp.get(lab, k) == dp.get(lab, j + k).scale(comb(j + k, j))


@pytest.mark.parametrize("p", [2, 3, 5])
def test_minimal_lattice_on_sym_p(p):
    lat = minimal_admissible_lattice(marked_sym(p), p)
    expected = PLattice.from_generators(
        [[F(comb(p, k)) if i == k else F(0) for i in range(p + 1)] for k in range(p + 1)], p)
    assert lat == expected
    assert lat.pivot_exponents() == tuple(int(0 < k < p) for k in range(p + 1))


def test_minimal_lattice_trivial_cases():
    for p in (2, 3):
        v = simple("A1", (1,))
        assert minimal_admissible_lattice(v, p) == monomial_lattice(v, p)
        assert minimal_admissible_lattice(simple("A2", (0, 0)), p).dim == 1


def test_minimal_lattice_needs_marking():
    with pytest.raises(ModuleError):
        highest_weight_vector(sym_power(simple("A1", (1,)), 3))


@pytest.mark.parametrize("name, lam, p", [
    ("A2", (1, 1), 3), ("A2", (2, 0), 2), ("B2", (1, 1), 2), ("C2", (0, 2), 3), ("G2", (1, 0), 2), ("G2", (0, 1), 3),
])
def test_minimal_lattice_is_admissible(name, lam, p):
    m = simple(name, lam)
    lat = minimal_admissible_lattice(m, p)
    assert is_torus_homogeneous(lat)[0]
    assert is_group_stable(lat)[0]
    assert lat.contains(highest_weight_vector(m))


def test_reduce_standard_module():
    v = simple("A1", (1,))
    red = reduce_mod_p(monomial_lattice(v, 3), v)
    assert np.array_equal(red.gens["e1"], [[0, 1], [0, 0]])
    assert np.array_equal(red.gens["f1"], [[0, 0], [1, 0]])
    assert np.array_equal(red.gens["h1"], [[1, 0], [0, 2]])  # diag(1, -1) mod 3
    assert red.weights == ((1,), (-1,))


def test_reduce_sym_p_monomial():
    s = sym_power(simple("A1", (1,)), 3)
    red = reduce_mod_p(monomial_lattice(s, 3), s)
    # e x^3 = 0 and f x^3 = 3 x^2 y = 0 mod 3: x^3 spans a Lie-stable line
    assert not red.gens["e1"][:, 0].any() and not red.gens["f1"][:, 0].any()
    # f^(3) x^3 = y^3 survives in the divided powers
    assert red.divided[("f1", 3)][3, 0] == 1
    data = json.loads(json.dumps(red.to_json()))
    assert data["p"] == 3 and data["weights"][0] == [3]


def test_reduce_not_p_integral():
    lat = extremes_lattice(3)
    with pytest.raises(NotPIntegral) as err:
        reduce_mod_p(lat, lat.module)
    assert "^(" in err.value.label
    # the plain Lie generators do preserve it
    assert reduce_mod_p(lat, lat.module, divided=False).dim == 4


def test_reduce_rejects_other_prime():
    v = simple("A1", (1,))
    with pytest.raises(ValueError):
        reduce_mod_p(monomial_lattice(v, 3), v, p=5)


@pytest.mark.parametrize("name, lam, p", [("A2", (1, 1), 3), ("B2", (1, 0), 2), ("G2", (1, 0), 3), ("A1", (4,), 2)])
def test_reduction_commutes_with_bracket(name, lam, p):
    m = simple(name, lam)
    lat = minimal_admissible_lattice(m, p)
    red = reduce_mod_p(lat, m)
    cb = m.cb
    for i in range(cb.dim):
        for j in range(cb.dim):
            x, y = red.gens[cb.labels[i]], red.gens[cb.labels[j]]
            lhs = (x @ y - y @ x) % p
            rhs = np.zeros_like(lhs)
            for k, c in cb.bracket_basis(i, j).items():
                rhs = (rhs + c * red.gens[cb.labels[k]]) % p
            assert np.array_equal(lhs, rhs), (cb.labels[i], cb.labels[j])


@pytest.mark.parametrize("name, lam, p", [("A1", (4,), 2), ("A2", (2, 0), 2), ("A2", (1, 1), 3)])
def test_divided_power_identities_survive_reduction(name, lam, p):
    m = simple(name, lam)
    red = reduce_mod_p(minimal_admissible_lattice(m, p), m)
    dp = divided_powers(m)
    ident = np.eye(m.dim, dtype=np.int64)
    for lab in dp.labels():
        get = lambda k: red.divided.get((lab, k), np.zeros_like(ident)) if k else ident
        for j in range(dp.degree[lab]):
            for k in range(dp.degree[lab]):
                assert np.array_equal((get(j) @ get(k)) % p, (comb(j + k, j) * get(j + k)) % p)


@pytest.mark.parametrize("name, lam, p", [
    ("A1", (2,), 3), ("A1", (4,), 5), ("A2", (1, 1), 2), ("A2", (2, 1), 3), ("B2", (0, 1), 2), ("G2", (1, 0), 3),
])
def test_restricted_reductions_are_simple(name, lam, p):
    m = simple(name, lam)
    red = reduce_mod_p(minimal_admissible_lattice(m, p), m)
    for i in range(m.dim):
        seed = np.zeros(m.dim, dtype=np.int64)
        seed[i] = 1
        assert fp.spin_mod_p(red.lie_generators(), seed, p).shape[0] == m.dim


@pytest.mark.parametrize("name, lam, p, sub_dim", [
    ("B2", (1, 0), 2, 1), ("C2", (0, 1), 2, 1), ("G2", (1, 0), 2, 1), ("G2", (0, 1), 3, 7),
])
def test_some_restricted_reductions_are_reducible(name, lam, p, sub_dim):
    """Small-characteristic Weyl modules with a proper G-submodule, so Lie-spin cannot fill the space."""
    m = simple(name, lam)
    red = reduce_mod_p(minimal_admissible_lattice(m, p), m)
    dims = set()
    for i in range(m.dim):
        seed = np.zeros(m.dim, dtype=np.int64)
        seed[i] = 1
        lie = fp.spin_mod_p(red.lie_generators(), seed, p).shape[0]
        grp = fp.spin_mod_p(red.group_generators(), seed, p).shape[0]
        assert lie <= grp
        if grp < m.dim:
            dims.add(grp)
    assert dims == {sub_dim}
