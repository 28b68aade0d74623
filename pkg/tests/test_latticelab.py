from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lielattice import fp
from lielattice.highestweight import direct_sum, sym_power
from lielattice.lattice import PLattice
from lielattice.latticelab import (
    CapExceeded,
    StabilityReport,
    Theorem2Report,
    classify,
    classify_window,
    counterexample_lattice,
    enumerate_intermediate,
    extremes_lattice,
    is_group_stable,
    is_lie_stable,
    is_p_latticed,
    is_torus_homogeneous,
    lift_subspace,
    monomial_lattice,
    residue_dimension_vector,
    residue_subspace,
    spin,
    steinberg_digits,
    verify_theorem2,
)
from lielattice.zform import minimal_admissible_lattice, reduce_mod_p

from conftest import simple

F = Fraction


def sym(m):
    return sym_power(simple("A1", (1,)), m)


def unit(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


# -- single-lattice predicates ----------------------------------------------------


@pytest.mark.parametrize("p", [2, 3, 5])
def test_extremes_lattice_flags(p):
    lat = extremes_lattice(p)
    assert is_lie_stable(lat)[0]
    ok, wit = is_torus_homogeneous(lat)
    assert not ok and wit[1] in {(p,), (-p,)}
    ok, wit = is_group_stable(lat)
    assert not ok and wit[0] == "torus"
    assert classify(lat).flags() == (True, False, False)


def test_minimal_lattice_flags():
    for name, lam, p in [("A2", (1, 1), 2), ("B2", (0, 1), 3), ("G2", (0, 1), 2)]:
        m = simple(name, lam)
        lat = minimal_admissible_lattice(m, p)
        assert classify(lat).flags() == (True, True, True)
        assert classify(lat.scale(-1)).flags() == (True, True, True)


def test_perturbed_lattice_fails_with_witness():
    v = sym(2)
    lat = monomial_lattice(v, 3).add([[F(1, 3), F(1, 3), F(0)]])
    ok, wit = is_lie_stable(lat)
    assert not ok
    row, label = wit
    assert not lat.contains(v.action[label].apply(lat.rows[row]))
    assert not is_torus_homogeneous(lat)[0]


def test_monomial_lattice_is_homogeneous():
    for name, lam in [("A2", (1, 1)), ("G2", (1, 0))]:
        assert is_torus_homogeneous(monomial_lattice(simple(name, lam), 5))[0]


def test_stability_report_invariant():
    with pytest.raises(AssertionError):
        StabilityReport(lie_stable=False, torus_homogeneous=True, group_stable=True)
    assert StabilityReport(True, False, False).to_json()["group_stable"] is False


@settings(max_examples=30, deadline=None)
@given(data=st.data(), k=st.integers(-3, 3))
def test_reports_are_scaling_invariant(data, k):
    p = data.draw(st.sampled_from([2, 3]))
    v = sym(data.draw(st.integers(1, 4)))
    n = v.dim
    extra = data.draw(st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), max_size=2))
    lat = monomial_lattice(v, p).add([[F(x, p) for x in row] for row in extra])
    assert classify(lat).flags() == classify(lat.scale(k)).flags()


def test_p_latticed_examples():
    for p in (2, 3, 5):
        for m in range(p):
            assert is_p_latticed(simple("A1", (m,)), p) == (True, None)
        assert is_p_latticed(simple("A1", (p,)), p) == (False, (p,))
    assert is_p_latticed(simple("A2", (0, 0)), 2)[0]
    # reducible modules are judged on every summand
    mixed = direct_sum(simple("A2", (1, 0)), simple("A2", (0, 2)))
    assert is_p_latticed(mixed, 2) == (False, (0, 2))
    assert is_p_latticed(mixed, 3)[0]


def test_steinberg_digits_examples():
    for p in (2, 3, 5):
        assert steinberg_digits((p,), p) == [(0,), (1,)]
        assert steinberg_digits((p - 1,), p) == [(p - 1,)]
        assert steinberg_digits((p + 1, 1), p) == [(1, 1), (1, 0)]
    assert steinberg_digits((0, 0), 3) == [(0, 0)]
    with pytest.raises(ValueError):
        steinberg_digits((-1,), 2)


@settings(max_examples=50, deadline=None)
@given(lam=st.lists(st.integers(0, 200), min_size=1, max_size=4), p=st.sampled_from([2, 3, 5, 7]))
def test_steinberg_digits_reassemble(lam, p):
    digits = steinberg_digits(lam, p)
    assert all(0 <= c < p for d in digits for c in d)
    assert tuple(sum(p**t * d[i] for t, d in enumerate(digits)) for i in range(len(lam))) == tuple(lam)
    assert any(digits[-1]) or not any(lam)


# -- windows ----------------------------------------------------------------------


@pytest.mark.parametrize("n, p, count", [(1, 2, 2), (1, 7, 2), (2, 3, 6), (4, 2, 67)])
def test_enumerate_intermediate_counts(n, p, count):
    mref = PLattice.standard(n, p)
    lats = enumerate_intermediate(mref)
    assert len(lats) == count == fp.count_subspaces(n, p)
    assert len(set(lats)) == count
    top = mref.scale(-1)
    assert all(lat.contains_lattice(mref) and top.contains_lattice(lat) for lat in lats)


def test_enumerate_cap():
    with pytest.raises(CapExceeded) as err:
        enumerate_intermediate(PLattice.standard(4, 2), cap=50)
    assert err.value.needed == 67


def test_cap_from_environment(monkeypatch):
    monkeypatch.setenv("ARTIFACT_SUBSPACE_CAP", "5")
    with pytest.raises(CapExceeded):
        enumerate_intermediate(PLattice.standard(2, 3))


def test_lift_and_residue_are_inverse():
    v = simple("A2", (1, 0))
    mref = minimal_admissible_lattice(v, 2)
    for piv in fp.pivot_sets(3):
        for u in fp.subspace_batch(3, piv, 2):
            lat = lift_subspace(mref, u)
            assert np.array_equal(residue_subspace(lat, mref), u)


@pytest.mark.parametrize("v, p", [
    (sym(2), 2), (sym(3), 2), (sym(3), 3), (sym(2), 3), (simple("A2", (1, 0)), 3),
])
def test_residue_side_matches_lattice_side(v, p):
    """L is Lie (group) stable iff L/M is closed under the reduced generators (divided powers and weights)."""
    mref = monomial_lattice(v, p) if v.highest_weights is None else minimal_admissible_lattice(v, p)
    modp = reduce_mod_p(mref, v)
    for piv in fp.pivot_sets(v.dim):
        for u in fp.subspace_batch(v.dim, piv, p):
            lat = lift_subspace(mref, u)
            assert is_lie_stable(lat, v)[0] == fp.is_stable(modp.lie_generators(), u, p)
            assert is_group_stable(lat, v)[0] == fp.is_stable(modp.group_generators(), u, p)


def test_classify_window_independent_of_jobs():
    v = sym(4)
    modp = reduce_mod_p(monomial_lattice(v, 2), v)
    one = classify_window(modp, jobs=1)
    three = classify_window(modp, jobs=3)
    assert one == three
    assert one[0] == fp.count_subspaces(5, 2)


def test_verify_standard_module():
    v = simple("A1", (1,))
    mref = monomial_lattice(v, 3)
    rep = verify_theorem2(v, 3, mref)
    assert rep.equal and rep.p_latticed and rep.window_size == 6
    assert rep.lie_lattices == rep.group_lattices == sorted([mref, mref.scale(-1)], key=PLattice.key)
    assert rep.to_json()["counterexample"] is None


def test_verify_sym_p_has_the_extremes_lattice():
    v = sym(3)
    rep = verify_theorem2(v, 3, monomial_lattice(v, 3))
    assert not rep.p_latticed and not rep.equal
    assert rep.window_size == rep.expected_window_size == fp.count_subspaces(4, 3)
    ext = extremes_lattice(3)
    assert ext in rep.lie_lattices and ext not in rep.group_lattices
    assert set(rep.group_lattices) < set(rep.lie_lattices)
    assert rep.to_json()["counterexample"] is not None


def test_verify_restricted_equal():
    v = sym(2)
    rep = verify_theorem2(v, 3, monomial_lattice(v, 3))
    assert rep.equal and rep.counterexample is None


def test_verify_rejects_bad_reference():
    v = simple("A1", (3,))
    with pytest.raises(ValueError):
        verify_theorem2(v, 3, monomial_lattice(v, 3))  # f^k v is not a divided-power basis


def test_window_report_invariant():
    with pytest.raises(AssertionError):
        Theorem2Report(3, "A", 1, [1], True, 6, 2, 2, True, counterexample=PLattice.standard(2, 3))


def test_fault_injection_hides_the_difference():
    v = sym(3)
    rep = verify_theorem2(v, 3, monomial_lattice(v, 3), fault=True)
    assert rep.equal


# -- spinning and counterexamples ---------------------------------------------------


def test_spin_examples():
    p = 3
    v = simple("A1", (2,))
    modp = reduce_mod_p(minimal_admissible_lattice(v, p), v)
    for i in range(v.dim):
        assert spin(modp, unit(v.dim, i)).shape[0] == v.dim
    # the reduced minimal lattice of V(p w): f never reaches f^(p) v, the divided powers do
    w = simple("A1", (p,))
    modp = reduce_mod_p(minimal_admissible_lattice(w, p), w)
    top = unit(w.dim, 0)
    assert spin(modp, top, "lie").shape[0] == p
    assert spin(modp, top, "group").shape[0] == w.dim
    # on the monomial lattice of Sym^p, x^p spans a Lie-stable line and x^p, y^p a G-stable plane
    s = sym(p)
    modp = reduce_mod_p(monomial_lattice(s, p), s)
    assert spin(modp, top, "lie").shape[0] == 1
    assert spin(modp, top, "group").tolist() == [[1, 0, 0, 0], [0, 0, 0, 1]]
    with pytest.raises(ValueError):
        spin(modp, np.zeros(s.dim, dtype=np.int64))


@settings(max_examples=30, deadline=None)
@given(data=st.data())
def test_spin_idempotent_and_monotone(data):
    p = data.draw(st.sampled_from([2, 3]))
    s = sym(data.draw(st.integers(2, 5)))
    modp = reduce_mod_p(monomial_lattice(s, p), s)
    vec = np.array(data.draw(st.lists(st.integers(0, p - 1), min_size=s.dim, max_size=s.dim)), dtype=np.int64)
    if not vec.any():
        vec[0] = 1
    lie = spin(modp, vec, "lie")
    grp = spin(modp, vec, "group")
    assert np.array_equal(fp.spin_mod_p(modp.lie_generators(), lie, p), lie)
    # Lie-spin lies inside the group spin
    assert fp.rank_mod_p(np.vstack([grp, lie]), p) == grp.shape[0]


def test_counterexample_reproduces_extremes_lattice():
    p = 3
    v = sym(p)
    mref = monomial_lattice(v, p)
    lat = counterexample_lattice(v, p, mref)
    ext = extremes_lattice(p)
    assert classify(lat).flags() == classify(ext).flags() == (True, False, False)
    assert residue_dimension_vector(lat, mref) == residue_dimension_vector(ext, monomial_lattice(ext.module, p))


@pytest.mark.parametrize("name, lam, p", [
    ("A1", (2,), 2), ("A1", (3,), 2), ("A1", (3,), 3), ("A1", (4,), 3), ("A2", (2, 0), 2), ("A2", (0, 2), 2),
])
def test_counterexamples_verify(name, lam, p):
    v = simple(name, lam)
    for order in ("forward", "reverse"):
        lat = counterexample_lattice(v, p, seed_order=order)
        assert is_lie_stable(lat)[0] and not is_group_stable(lat)[0]


def test_counterexample_requires_non_restricted():
    with pytest.raises(ValueError):
        counterexample_lattice(simple("A1", (2,)), 3)
