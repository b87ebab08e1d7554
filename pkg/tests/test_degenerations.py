"""Chamber combinatorics of boundary degenerations.

Expected values fixed by hand before running the implementation:
  * rank one, theta empty: the tile set is {identity, reflection}, c = 2.
  * PGL3 group case: exactly one little-Weyl element carries the first
    simple spherical root to the second; c({0}) = 2; the empty face is
    tiled by 6 chambers and the full face by 1.
  * gl(2) inside so(5): center surjectivity fails exactly at theta = {0}.
"""

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from spherica import _linalg as la
from spherica.catalog import entry_names, get_entry, load_catalog
from spherica.degenerations import (
    c_of_theta,
    center_surjectivity,
    center_surjectivity_all,
    delta_x_rows,
    generic_injectivity,
    theta_face,
    verify_tiling,
    wx_theta_omega,
)

RANK_ONE = [
    "GL3_in_SL4",
    "SL2_in_SL2xSL2",
    "Sp4_in_SL4",
    "SO6_in_SO7",
    "Spin7_in_Spin8",
    "SO4_in_SO5",
    "G2_in_Spin7",
    "SL2xSL2_in_Sp4",
    "Spin9_in_F4",
    "SL3_in_G2",
    "T_in_SL2",
    "T_in_PGL2",
    "PO2_in_PGL2",
    "PGL2_group",
    "Sp4_in_GL4",
    "whittaker_GL2",
]

POSITIVE = [e.name for e in load_catalog() if e.expect_fail is None]


def all_subsets(d):
    r = len(d.spherical_roots)
    for size in range(r + 1):
        yield from combinations(range(r), size)


# -- exact chamber sets -------------------------------------------------------


@pytest.mark.parametrize("name", RANK_ONE)
def test_rank_one_empty_theta_is_identity_and_reflection(name):
    d = get_entry(name).datum
    mats = wx_theta_omega(d, (), ())
    assert len(mats) == 2
    ident = tuple(tuple(1 if i == j else 0 for j in range(d.rank)) for i in range(d.rank))
    assert ident in mats
    (gamma,) = delta_x_rows(d)
    other = next(m for m in mats if m != ident)
    assert tuple(-x for x in gamma) == tuple(la.matvec(other, gamma))


@pytest.mark.parametrize("name", RANK_ONE)
def test_rank_one_counts(name):
    d = get_entry(name).datum
    assert c_of_theta(d, ()) == 2
    assert c_of_theta(d, (0,)) == 1


def test_pgl3_single_transporter():
    d = get_entry("PGL3_group").datum
    mats = wx_theta_omega(d, (0,), (1,))
    assert len(mats) == 1
    g1, g2 = delta_x_rows(d)
    assert tuple(la.matvec(mats[0], g1)) == g2


def test_pgl3_counts():
    d = get_entry("PGL3_group").datum
    assert c_of_theta(d, ()) == 6
    assert c_of_theta(d, (0,)) == 2
    assert c_of_theta(d, (1,)) == 2
    assert c_of_theta(d, (0, 1)) == 1


def test_size_mismatch_gives_empty_set():
    d = get_entry("PGL3_group").datum
    assert wx_theta_omega(d, (0,), ()) == ()
    assert wx_theta_omega(d, (), (0, 1)) == ()


def test_full_theta_stabilizer_is_identity():
    for name in POSITIVE:
        d = get_entry(name).datum
        full = tuple(range(len(d.spherical_roots)))
        mats = wx_theta_omega(d, full, full)
        assert len(mats) == 1
        assert c_of_theta(d, full) == 1


def test_identity_always_transports_theta_to_itself():
    for name in ["GL4_in_SO8", "Sp6_in_GL6", "gl_n_so_odd"]:
        d = get_entry(name).datum
        for t in all_subsets(d):
            mats = wx_theta_omega(d, t, t)
            ident = tuple(
                tuple(1 if i == j else 0 for j in range(d.rank)) for i in range(d.rank)
            )
            assert ident in mats


@pytest.mark.parametrize("name", ["PGL3_group", "GL4_in_SO8", "gl_n_so_odd"])
def test_composition_law(name):
    d = get_entry(name).datum
    subsets = list(all_subsets(d))
    table = {
        (t, o): wx_theta_omega(d, t, o)
        for t in subsets
        for o in subsets
        if len(t) == len(o)
    }
    for (t, o), ws in table.items():
        for (o2, z), ws2 in table.items():
            if o2 != o:
                continue
            for w in ws:
                for w2 in ws2:
                    assert la.matmul(w2, w) in table[(t, z)]


@pytest.mark.parametrize("name", ["PGL3_group", "GL4_in_SO8"])
def test_inverse_swaps_theta_and_omega(name):
    d = get_entry(name).datum
    subsets = list(all_subsets(d))
    for t in subsets:
        for o in subsets:
            if len(t) != len(o):
                continue
            for m in wx_theta_omega(d, t, o):
                minv = tuple(
                    tuple(int(x) for x in row) for row in la.inverse(m)
                )
                assert minv in wx_theta_omega(d, o, t)


# -- faces ------------------------------------------------------------------


def test_empty_theta_face_is_valuation_cone():
    d = get_entry("GL4_in_SO8").datum
    face = theta_face(d, ())
    assert set(face.cone.rays()[0]) == set(d.valuation_cone().rays()[0])
    assert len(face.subspace_basis) == d.rank


def test_face_subspace_dimension():
    for name in POSITIVE:
        d = get_entry(name).datum
        for t in all_subsets(d):
            face = theta_face(d, t)
            assert len(face.subspace_basis) == d.rank - len(t)
            rows = delta_x_rows(d)
            for i in t:
                for b in face.subspace_basis:
                    assert la.dot(rows[i], b) == 0


def test_levi_tilde_frozen_for_gl4_so8():
    d = get_entry("GL4_in_SO8").datum
    assert theta_face(d, ()).levi_tilde == (0, 2)
    assert theta_face(d, (0,)).levi_tilde == (0, 1, 2)
    assert theta_face(d, (1,)).levi_tilde == (0, 2, 3)
    assert theta_face(d, (0, 1)).levi_tilde == (0, 1, 2, 3)


def test_theta_face_rejects_bad_index():
    d = get_entry("T_in_PGL2").datum
    with pytest.raises(ValueError):
        theta_face(d, (3,))


# -- tiling -----------------------------------------------------------------


def test_tiling_all_rank_le3_entries():
    for name in POSITIVE:
        d = get_entry(name).datum
        if d.rank > 3:
            continue
        for t in all_subsets(d):
            rep = verify_tiling(d, t, n_samples=3000, seed=5)
            assert rep.passed, (name, t, rep)
            assert rep.tile_count == c_of_theta(d, t)
            assert rep.covered_once == rep.samples == 3000
            assert rep.facets_ok


def test_tiling_pgl3_chamber_counts():
    d = get_entry("PGL3_group").datum
    assert verify_tiling(d, (), n_samples=500, seed=1).tile_count == 6
    assert verify_tiling(d, (0,), n_samples=500, seed=1).tile_count == 2
    assert verify_tiling(d, (0, 1), n_samples=50, seed=1).tile_count == 1


def test_tiling_deterministic_in_seed():
    d = get_entry("GL4_in_SO8").datum
    a = verify_tiling(d, (0,), n_samples=800, seed=42)
    b = verify_tiling(d, (0,), n_samples=800, seed=42)
    assert a == b
    c = verify_tiling(d, (0,), n_samples=800, seed=43)
    assert c.passed and c.tile_count == a.tile_count


def test_tiling_report_serializes():
    d = get_entry("T_in_SL2").datum
    rep = verify_tiling(d, (), n_samples=100, seed=0)
    data = rep.to_dict()
    assert data["passed"] is True
    assert data["tile_count"] == 2
    assert data["samples"] == 100


# -- generic injectivity ------------------------------------------------------


@pytest.mark.parametrize("name", RANK_ONE + ["PGL3_group", "GL4_in_SO8"])
def test_generic_injectivity_true(name):
    rep = generic_injectivity(get_entry(name).datum)
    assert rep.status == "true"
    assert rep.violation is None
    assert rep.pairs_checked > 0


def test_generic_injectivity_fails_off_wavefront():
    # gl(2) inside so(5): the ambient swap reflection matches the empty face
    # subspace with itself but no sign-flip little-Weyl element induces it
    d = get_entry("gl_n_so_odd").datum
    assert not d.is_wavefront()
    rep = generic_injectivity(d)
    assert rep.status == "false"
    assert rep.violation["theta"] == [] and rep.violation["omega"] == []
    w = d.ambient.from_word(rep.violation["weyl_word"])
    assert w.matrix == ((0, 1), (1, 0))


def test_generic_injectivity_undecided_on_low_cap(monkeypatch):
    monkeypatch.setenv("SPHERICA_WEYL_CAP", "4")
    rep = generic_injectivity(get_entry("PGL3_group").datum)
    assert rep.status == "undecided"
    assert rep.to_dict()["status"] == "undecided"


# -- center surjectivity -----------------------------------------------------


def test_center_surjectivity_table_gl2_so5():
    d = get_entry("gl_n_so_odd").datum
    got = {t: center_surjectivity(d, t) for t in all_subsets(d)}
    assert got == {(): True, (0,): False, (1,): True, (0, 1): True}


def test_center_surjectivity_g2_stand_in():
    d = get_entry("G2_alpha1_plus_alpha2").datum
    assert center_surjectivity(d, ()) is True
    assert center_surjectivity(d, (0,)) is False


def test_center_surjectivity_all_iff_wavefront():
    for e in load_catalog():
        if e.expect_fail is not None:
            continue
        assert center_surjectivity_all(e.datum) == e.datum.is_wavefront(), e.name


def test_full_theta_center():
    # trivial target whenever the spherical roots span: then always true; the
    # standalone rank-two stand-in keeps a line of target but has no center
    for name in POSITIVE:
        d = get_entry(name).datum
        full = tuple(range(len(d.spherical_roots)))
        expected = name != "G2_alpha1_plus_alpha2"
        assert center_surjectivity(d, full) is expected, name


# -- randomized coherence ------------------------------------------------------


@given(st.integers(0, 3), st.integers(0, 3))
def test_transport_preserves_counts(i, j):
    d = get_entry("GL4_in_SO8").datum
    subsets = list(all_subsets(d))
    t, o = subsets[i], subsets[j]
    ws = wx_theta_omega(d, t, o)
    if len(t) != len(o):
        assert ws == ()
        return
    rows = delta_x_rows(d)
    target = {rows[k] for k in o}
    for m in ws:
        imgs = {tuple(int(x) for x in la.matvec(m, rows[k])) for k in t}
        assert imgs == target
