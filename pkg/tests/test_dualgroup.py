"""Dual root datum construction, group naming, Arthur weight, morphism report.

Group-name expectations were derived by hand before running the code:
lattice-versus-root-lattice indices computed from Smith normal forms of the
explicit coroot projections listed in comments below.
"""

import pytest

from spherica import _linalg as la
from spherica.catalog import get_entry, load_catalog
from spherica.dualgroup import (
    DualGroupError,
    arthur_sl2_weight,
    build_dual_datum,
    distinguished_morphism_report,
    identify_group,
    is_strongly_tempered_candidate,
)


def positive_entries():
    return [e for e in load_catalog() if e.expect_fail is None]


# -- build and classification ---------------------------------------------------


def test_torus_quotient_sl2():
    # lattice Z*alpha, root coordinate 1, coroot pairing <alpha, alpha-check> = 2
    dual = build_dual_datum(get_entry("T_in_SL2").datum)
    assert dual.cartan_type == "A1"
    assert dual.lattice_rows == ((2,),)
    assert dual.simple_roots == ((1,),)
    assert dual.simple_coroots == ((2,),)
    assert dual.group_name == "SL2"
    assert dual.roots == ((-1,), (1,))


def test_torus_quotient_pgl2():
    dual = build_dual_datum(get_entry("T_in_PGL2").datum)
    assert dual.group_name == "SL2"
    assert dual.lattice_rows == ((1,),)


def test_type_n_requires_saturated_variant():
    d = get_entry("PO2_in_PGL2").datum
    with pytest.raises(DualGroupError):
        build_dual_datum(d, "gx")
    dual = build_dual_datum(d, "gxprime")
    assert dual.lattice_rows == ((1,),)
    assert dual.group_name == "SL2"


def test_saturated_variant_never_errors_on_valid_entries():
    for e in positive_entries():
        dual = build_dual_datum(e.datum, "gxprime")
        assert dual.rank == e.datum.rank


def test_group_case_pgl2():
    dual = build_dual_datum(get_entry("PGL2_group").datum)
    # sigma-check restricts to value 2 on the anti-diagonal basis vector
    assert dual.simple_roots == ((1,),)
    assert dual.simple_coroots == ((2,),)
    assert dual.group_name == "SL2"


def test_group_case_pgl3():
    dual = build_dual_datum(get_entry("PGL3_group").datum)
    assert dual.cartan_type == "A2"
    assert dual.group_name == "SL3"
    assert len(dual.roots) == 6


def test_diagonal_sl2_names_pgl2():
    # gamma = 2 * basis vector, so the root coordinate is 2 and the index
    # of the root lattice is 1: adjoint side
    dual = build_dual_datum(get_entry("SL2_in_SL2xSL2").datum)
    assert dual.simple_roots == ((2,),)
    assert dual.simple_coroots == ((1,),)
    assert dual.group_name == "PGL2"


def test_symplectic_quotients_give_gl():
    dual4 = build_dual_datum(get_entry("Sp4_in_GL4").datum)
    assert dual4.cartan_type == "A1 x T1"
    assert dual4.group_name == "GL2"
    assert dual4.torus_embedding() == ((1, 1, 0, 0), (0, 0, 1, 1))

    dual6 = build_dual_datum(get_entry("Sp6_in_GL6").datum)
    assert dual6.cartan_type == "A2 x T1"
    assert dual6.group_name == "GL3"
    assert dual6.torus_embedding() == (
        (1, 1, 0, 0, 0, 0),
        (0, 0, 1, 1, 0, 0),
        (0, 0, 0, 0, 1, 1),
    )


def test_gl4_in_so8_dual_is_spin5():
    # coroot projections (1,-1) and (0,2): index 2 sublattice = weight lattice
    dual = build_dual_datum(get_entry("GL4_in_SO8").datum)
    assert dual.cartan_type == "B2"
    assert dual.group_name == "Spin5"
    assert len(dual.roots) == 8


def test_non_wavefront_dual_is_product():
    dual = build_dual_datum(get_entry("gl_n_so_odd").datum)
    assert dual.cartan_type == "A1 x A1"
    assert dual.group_name == "SL2 x SL2"


def test_whittaker_dual_gl2():
    dual = build_dual_datum(get_entry("whittaker_GL2").datum)
    assert dual.group_name == "GL2"


def test_rank_one_reference_rows_give_sl2():
    for e in positive_entries():
        if e.reference_index is None or e.datum.rank != 1:
            continue
        dual = build_dual_datum(e.datum)
        assert dual.group_name in ("SL2", "PGL2"), e.name
        assert dual.cartan_type == "A1", e.name


def test_expected_cartan_types_match_catalog():
    for e in positive_entries():
        dual = build_dual_datum(e.datum, "gxprime")
        assert dual.cartan_type == e.dual_cartan, e.name


# -- root datum axioms -----------------------------------------------------------


def test_root_datum_axioms():
    for e in positive_entries():
        dual = build_dual_datum(e.datum, "gxprime")
        roots = set(dual.roots)
        pairs = dict(zip(dual.roots, dual.coroots))
        assert len(dual.roots) % 2 == 0, e.name
        for gamma, check in pairs.items():
            assert la.dot(gamma, check) == 2, e.name
            for delta in roots:
                n = la.dot(delta, check)
                assert n == int(n), e.name
                refl = tuple(x - int(n) * g for x, g in zip(delta, gamma))
                assert refl in roots, e.name


def test_weyl_group_of_datum_equals_little_weyl():
    for e in positive_entries():
        if "N" in e.root_types:
            continue  # gx undefined; the saturated variant changes coordinates
        dual = build_dual_datum(e.datum, "gx")
        generated = {w.matrix for w in dual.datum.generate_weyl()}
        restricted = set(e.datum.little_weyl_group().restricted)
        assert generated == restricted, e.name


def test_type_g_coroot_restrictions_coincide():
    for e in positive_entries():
        d = e.datum
        for nr in d.normalize_roots():
            if nr.kind != "G":
                continue
            a, b = nr.associated
            ca = d.ambient.coroot_of_root[a]
            cb = d.ambient.coroot_of_root[b]
            for row in d.lattice:
                assert la.dot(row, ca) == la.dot(row, cb), e.name


# -- Arthur weight ----------------------------------------------------------------


def test_arthur_weight_empty_levi_is_zero():
    w = arthur_sl2_weight(get_entry("PGL2_group").datum)
    assert w.vector == (0, 0)


def test_arthur_weight_gl3_in_sl4():
    w = arthur_sl2_weight(get_entry("GL3_in_SL4").datum)
    assert w.vector == (-1, 2, -1)


def test_arthur_weight_pairs_two_with_levi_coroots():
    for e in positive_entries():
        d = e.datum
        w = arthur_sl2_weight(d)
        for j in d.levi:
            assert w.pairing(d.ambient.simple_coroots[j]) == 2, e.name


def test_arthur_weight_spin9_in_f4():
    d = get_entry("Spin9_in_F4").datum
    w = arthur_sl2_weight(d)
    assert len(d.ambient.levi_positive_roots(d.levi)) == 9
    for j in (0, 1, 2):
        assert w.pairing(d.ambient.simple_coroots[j]) == 2


# -- distinguished morphism report -------------------------------------------------


def test_morphism_report_passes_on_catalog():
    for e in positive_entries():
        rep = distinguished_morphism_report(e.datum)
        assert rep.independent, e.name
        assert rep.passed, e.name


def test_morphism_report_sp4_sl4_associated_roots():
    rep = distinguished_morphism_report(get_entry("Sp4_in_SL4").datum)
    (entry,) = rep.entries
    assert set(entry.associated) == {(1, 1, -1), (-1, 1, 1)}


def test_morphism_report_diagonal_sl2():
    rep = distinguished_morphism_report(get_entry("SL2_in_SL2xSL2").datum)
    (entry,) = rep.entries
    assert set(entry.associated) == {(2, 0), (0, -2)}
    assert rep.independent


def test_morphism_report_serializes():
    rep = distinguished_morphism_report(get_entry("GL4_in_SO8").datum)
    data = rep.to_dict()
    assert data["passed"] is True
    assert len(data["entries"]) == 2


# -- strong temperedness candidate ---------------------------------------------------


def test_strongly_tempered_candidates():
    assert is_strongly_tempered_candidate(get_entry("T_in_SL2").datum)
    assert is_strongly_tempered_candidate(get_entry("T_in_PGL2").datum)
    assert is_strongly_tempered_candidate(get_entry("PGL2_group").datum)
    assert is_strongly_tempered_candidate(get_entry("PGL3_group").datum)
    assert not is_strongly_tempered_candidate(get_entry("Sp4_in_GL4").datum)
    assert not is_strongly_tempered_candidate(get_entry("Sp6_in_GL6").datum)
    assert not is_strongly_tempered_candidate(get_entry("whittaker_GL2").datum)


def test_identify_group_plain_torus():
    from spherica.rootdata import RootDatum

    e = RootDatum(rank=3, simple_roots=(), simple_coroots=())
    assert identify_group(e) == "T3"
