"""Unramified factor bookkeeping against counting oracles.

Expected values fixed by hand before running the implementation:
  * open-cell index for the projective line: the lower-triangular orbit of
    [1:0] has q of the q+1 lines, so the index is (q+1)/q;
  * full flags in 3-space: the unipotent lower-triangular orbit of the
    coordinate flag has q^3 of the (q^2+q+1)(q+1) flags, so the index is
    ((1-q^-2)/(1-q^-1))^2 (1-q^-3)/(1-q^-2);
  * rank-one torus datum: c(s) = (1-q^(-1-s))^2/(1-q^(-1-2s)), and the
    normalized factor at s = 0 is the quotient with numerator atoms
    (1-q^(-1)e[+-2]), denominator atoms (1-q^(-1/2)e[+-1]) twice each, and
    prefactor (1-q^(-1))/(1-q^(-2));
  * group case under two copies of the adjoint rank-one group: every atom
    cancels and 1/(1-q^(-1-s))^2 is left; the rank-two group case leaves
    1/(1-q^(-1-s))^4.
"""

import cmath
import math
import random
from fractions import Fraction
from itertools import product as iproduct

import pytest
from hypothesis import given, strategies as st

from spherica import _linalg as la
from spherica.catalog import ColorAtom, entry_names, get_entry, load_catalog
from spherica.lfactor import (
    Atom,
    BranchError,
    Factored,
    LFactorError,
    PoleError,
    SatakeParam,
    c_factor,
    l_flat,
    l_sharp,
    positive_restricted_roots,
    q_factor,
    restricted_roots,
    whittaker_colors,
)
from spherica.lfactor import _reflection_matrices
from spherica.rootdata import weight_model
from spherica.spherical import SphericalDatum

HALF = Fraction(1, 2)
PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71]

COLORED = ["T_in_SL2", "T_in_PGL2", "PGL2_group", "PGL3_group"]


def borel_datum():
    return SphericalDatum(
        ambient=weight_model("A2"),
        lattice=((1, 0), (0, 1)),
        spherical_roots=((2, -1), (-1, 2)),
        levi=(),
    )


def rank_zero_datum(levi):
    return SphericalDatum(
        ambient=weight_model("A1"), lattice=(), spherical_roots=(), levi=levi
    )


def unitary_chi(rng, k):
    return SatakeParam(
        tuple(cmath.exp(2j * math.pi * rng.random()) for _ in range(k))
    )


# -- counting oracles ---------------------------------------------------------


def projective_line_cell_index(q):
    """Index of the lower-triangular orbit of the base line, by enumeration.

    Lines are normalized spanning vectors of F_q^2.  The (2,2) entry of a
    lower-triangular matrix acts on the complementary column and never
    moves the base line, so only the first column is enumerated.
    """

    def normalize(v):
        for i, x in enumerate(v):
            if x % q:
                inv = pow(x, q - 2, q)
                return tuple(y * inv % q for y in v)
        return None

    lines = set()
    for v in iproduct(range(q), range(q)):
        n = normalize(v)
        if n is not None:
            lines.add(n)
    orbit = set()
    for a in range(1, q):
        for c in range(q):
            orbit.add(normalize((a, c)))
    return Fraction(len(lines), len(orbit))


def flag_cell_index(q):
    """Index of the unipotent lower-triangular orbit of the coordinate flag
    of F_q^3, by enumeration.

    A flag is (line, plane) stored as a normalized spanning vector and a
    normalized defining functional with zero pairing.
    """

    def normalize(v):
        for x in v:
            if x % q:
                inv = pow(x, q - 2, q)
                return tuple(y * inv % q for y in v)
        return None

    vectors = [normalize(v) for v in iproduct(range(q), repeat=3)]
    reps = sorted({v for v in vectors if v is not None})
    flags = {
        (line, functional)
        for line in reps
        for functional in reps
        if sum(x * y for x, y in zip(line, functional)) % q == 0
    }
    orbit = set()
    for a, b, c in iproduct(range(q), repeat=3):
        # u = [[1,0,0],[a,1,0],[b,c,1]]: image of the base line is (1,a,b),
        # the image plane span{(1,a,b),(0,1,c)} has normal (ac-b, -c, 1)
        line = normalize((1, a, b))
        functional = normalize(((a * c - b) % q, (-c) % q, 1))
        orbit.add((line, functional))
    return Fraction(len(flags), len(orbit))


@pytest.mark.parametrize("p", PRIMES)
def test_open_cell_index_matches_projective_line_count(p):
    idx = projective_line_cell_index(p)
    assert idx == Fraction(p + 1, p)
    assert q_factor(get_entry("T_in_PGL2")).as_fraction(p) == idx


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_open_cell_index_matches_flag_count(p):
    idx = flag_cell_index(p)
    assert idx == Fraction((p + 1) * (p * p + p + 1), p**3)
    assert q_factor(borel_datum()).as_fraction(p) == idx


# -- frozen factored forms -----------------------------------------------


def test_open_cell_factor_rank_one():
    assert q_factor(get_entry("T_in_PGL2")) == Factored(
        (Atom(1, 2, 2, (0,)),), (Atom(1, 1, 2, (0,)),)
    )


def test_open_cell_factor_full_levi_is_one():
    assert q_factor(rank_zero_datum((0,))) == Factored()


def test_boundary_constant_rank_one_torus():
    assert c_factor(get_entry("T_in_PGL2")) == Factored(
        (Atom(1, 1, 1, (0,)), Atom(1, 1, 1, (0,))), (Atom(1, 1, 2, (0,)),)
    )
    assert c_factor(get_entry("T_in_PGL2"), q=9) == Fraction(8, 9)


def test_boundary_constant_equal_color_and_coroot_gives_one():
    e = get_entry("whittaker_GL2")
    generic = c_factor(e, colors=whittaker_colors(e), whittaker=False)
    assert generic == Factored()
    assert c_factor(e) == Factored()


def test_normalized_factor_atoms_rank_one_torus():
    got = l_sharp(get_entry("T_in_PGL2"), s=0)
    expected = Factored(
        numerator=(
            Atom(1, 1, 0, (2,)),
            Atom(1, 1, 0, (-2,)),
            Atom(1, 1, 0, (0,)),
        ),
        denominator=(
            Atom(1, 2, 0, (0,)),
            Atom(1, HALF, 0, (1,)),
            Atom(1, HALF, 0, (1,)),
            Atom(1, HALF, 0, (-1,)),
            Atom(1, HALF, 0, (-1,)),
        ),
    )
    assert got == expected


def test_normalized_factor_atoms_rank_one_torus_symbolic():
    got = l_sharp(get_entry("T_in_PGL2"))
    expected = Factored(
        numerator=(
            Atom(1, 1, 1, (2,)),
            Atom(1, 1, 1, (-2,)),
            Atom(1, 1, 1, (0,)),
            Atom(1, 1, 1, (0,)),
        ),
        denominator=(
            Atom(1, HALF, 1, (1,)),
            Atom(1, HALF, 1, (1,)),
            Atom(1, HALF, 1, (-1,)),
            Atom(1, HALF, 1, (-1,)),
            Atom(1, 1, 2, (0,)),
            Atom(1, 2, 2, (0,)),
        ),
    )
    assert got == expected
    assert l_sharp(get_entry("T_in_SL2")) == expected


def test_normalized_factor_group_cases_cancel():
    assert l_sharp(get_entry("PGL2_group")) == Factored(
        (), (Atom(1, 1, 1, (0,)), Atom(1, 1, 1, (0,)))
    )
    assert l_sharp(get_entry("PGL3_group")) == Factored(
        (), (Atom(1, 1, 1, (0, 0)),) * 4
    )


def test_group_case_is_character_free():
    for name in ("PGL2_group", "PGL3_group"):
        reduced = l_sharp(get_entry(name)).canceled()
        for atom in reduced.numerator + reduced.denominator:
            assert all(c == 0 for c in atom.coweight)


def test_group_case_open_cell_is_boundary_constant_squared():
    for name in ("PGL2_group", "PGL3_group"):
        e = get_entry(name)
        c = c_factor(e)
        assert q_factor(e) == c.times(c)


def test_rank_zero_normalized_factor_is_inverse_open_cell():
    d = rank_zero_datum(())
    assert l_sharp(d) == Factored((Atom(1, 1, 2, ()),), (Atom(1, 2, 2, ()),))
    assert l_sharp(rank_zero_datum((0,))) == Factored()


# -- restricted root pairs -------------------------------------------------


@pytest.mark.parametrize("name", entry_names())
def test_restricted_pairs_pair_to_two(name):
    e = get_entry(name)
    pairs = restricted_roots(e)
    assert len(pairs) % 2 == 0
    for g, c in pairs:
        assert la.dot(g, c) == 2
        assert (tuple(-x for x in g), tuple(-x for x in c)) in set(pairs)
    assert len(positive_restricted_roots(e)) * 2 == len(pairs)


@pytest.mark.parametrize("name", entry_names())
def test_restricted_pairs_invariant_under_little_weyl(name):
    e = get_entry(name)
    if not e.datum.spherical_roots:
        return
    full = set(restricted_roots(e))
    for m, mi in _reflection_matrices(e.datum):
        image = {
            (
                tuple(int(x) for x in la.matvec(m, g)),
                tuple(la.vecmat(c, mi)),
            )
            for g, c in full
        }
        assert image == full


def test_rank_one_torus_pairs():
    assert restricted_roots(get_entry("T_in_PGL2")) == (
        ((-1,), (Fraction(-2),)),
        ((1,), (Fraction(2),)),
    )


# -- symmetry, positivity, relation ----------------------------------------


@pytest.mark.parametrize("name", COLORED)
def test_little_weyl_invariance_on_random_characters(name):
    e = get_entry(name)
    f = l_sharp(e)
    rng = random.Random(hash(name) % 100000)
    for _ in range(5):
        chi = unitary_chi(rng, e.datum.rank)
        base = f.evaluate(7, chi, Fraction(1, 5))
        for m, mi in _reflection_matrices(e.datum):
            moved = f.evaluate(7, chi.pullback(mi), Fraction(1, 5))
            assert abs(moved - base) < 1e-9


@pytest.mark.parametrize("name", ["T_in_PGL2", "T_in_SL2"])
def test_positivity_on_unitary_characters(name):
    e = get_entry(name)
    f = l_sharp(e)
    rng = random.Random(11)
    for _ in range(50):
        chi = unitary_chi(rng, e.datum.rank)
        v = f.evaluate(7, chi, 0)
        assert abs(v.imag) < 1e-9
        assert v.real > -1e-12


@pytest.mark.parametrize("name", COLORED + ["whittaker_GL2"])
def test_flat_factor_relation_to_normalized_factor(name):
    # the two factors differ by (1-q^-s)^k (1-q^(-1-s))^(2k) Q / c and the
    # exponent swap -s vs -1-s in the character numerator
    e = get_entry(name)
    d = e.datum
    k = d.rank
    q, s = 11, Fraction(3, 10)
    rng = random.Random(5 + k)
    chi = unitary_chi(rng, k)
    lf = l_flat(e).evaluate(q, chi, s)
    ls = l_sharp(e).evaluate(q, chi, s)
    Q = q_factor(e).evaluate(q, None, s)
    c = 1 if e.whittaker else c_factor(e).evaluate(q, None, s)
    down, up = float(q) ** float(-s), float(q) ** float(-1 - s)
    ratio = (1 - down) ** k * (1 - up) ** (2 * k) * Q / c
    for _, co in restricted_roots(d):
        ev = chi.e_value(co)
        ratio *= (1 - down * ev) / (1 - up * ev)
    assert abs(lf / ls - ratio) < 1e-9


def test_flat_factor_forced_zero_order_is_rank():
    for name in COLORED:
        e = get_entry(name)
        assert l_flat(e).forced_zero_order(0) == e.datum.rank
        chi = unitary_chi(random.Random(3), e.datum.rank)
        assert abs(l_flat(e).evaluate(7, chi, 0)) == 0
    assert l_flat(rank_zero_datum((0,))).forced_zero_order(0) == 0
    assert l_flat(rank_zero_datum((0,))) == Factored()


# -- error contracts ---------------------------------------------------------


def test_pole_at_symbolic_collapse():
    with pytest.raises(PoleError):
        q_factor(get_entry("T_in_PGL2"), s=Fraction(-1, 2))
    with pytest.raises(PoleError):
        c_factor(get_entry("T_in_PGL2"), s=Fraction(-1, 2))


def test_pole_on_character_divisor():
    d = get_entry("T_in_PGL2").datum
    colors = (ColorAtom(theta=(Fraction(1),), sign=1, q_exp=Fraction(1)),)
    chi = SatakeParam((2.0,))
    with pytest.raises(PoleError):
        l_sharp(d, colors=colors, chi=chi, q=4, s=0)


def test_modulus_outside_lattice_span_is_reported():
    e = get_entry("G2_alpha1_plus_alpha2_rank_one")
    with pytest.raises(LFactorError):
        c_factor(e, colors=whittaker_colors(e), whittaker=False)


def test_color_validation():
    d = get_entry("T_in_PGL2").datum
    with pytest.raises(LFactorError):
        c_factor(d, colors=((Fraction(0),), 1, Fraction(1)) * 0 + (((Fraction(0),), 1, Fraction(1)),))
    with pytest.raises(LFactorError):
        c_factor(d, colors=(((Fraction(1), Fraction(1)), 1, Fraction(1)),))
    with pytest.raises(LFactorError):
        c_factor(d, colors=(((Fraction(1),), 3, Fraction(1)),))


# -- character evaluations ---------------------------------------------------


def test_character_evaluation_is_multiplicative():
    chi = SatakeParam.from_values([3 + 4j, -2.0])
    a = (HALF, Fraction(3, 2))
    b = (Fraction(1), -HALF)
    total = tuple(x + y for x, y in zip(a, b))
    assert abs(chi.e_value(total) - chi.e_value(a) * chi.e_value(b)) < 1e-12


def test_character_branch_is_surfaced():
    declared = SatakeParam((1j,))
    assert declared.branch_note is None
    principal = SatakeParam.from_values([4.0])
    assert principal.branch_note is not None
    assert abs(principal.values[0] - 4.0) < 1e-12
    flipped = SatakeParam((-principal.sqrt_values[0],))
    assert abs(flipped.values[0] - 4.0) < 1e-12
    assert abs(flipped.e_value((HALF,)) + principal.e_value((HALF,))) < 1e-12


def test_character_rejects_undeclared_roots():
    chi = SatakeParam((1j, 2.0))
    with pytest.raises(BranchError):
        chi.e_value((Fraction(1, 4), Fraction(0)))
    with pytest.raises(LFactorError):
        chi.e_value((Fraction(1),))
    with pytest.raises(LFactorError):
        SatakeParam((0.0,))


def test_character_pullback_matches_coweight_action():
    rng = random.Random(23)
    chi = unitary_chi(rng, 3)
    matrix = ((1, -2, 0), (0, 1, 1), (2, 0, -1))
    for _ in range(20):
        c = tuple(Fraction(rng.randrange(-4, 5), 2) for _ in range(3))
        lhs = chi.pullback(matrix).e_value(c)
        rhs = chi.e_value(la.vecmat(c, matrix))
        assert abs(lhs - rhs) < 1e-9


# -- factored arithmetic -------------------------------------------------


def test_equality_cancels_identical_atoms_only():
    a = Atom(1, 1, 0, (2,))
    b = Atom(1, 2, 0, (0,))
    assert Factored((a, b), (b,)) == Factored((a,), ())
    assert Factored((a,), ()) != Factored((b,), ())
    # (1-q^-2) and (1-q^-1)(1+q^-1) agree as functions but not as atoms
    assert Factored((Atom(1, 2, 0, ()),), ()) != Factored(
        (Atom(1, 1, 0, ()), Atom(-1, 1, 0, ())), ()
    )


def test_serialization_roundtrip():
    f = l_sharp(get_entry("T_in_PGL2"))
    assert Factored.from_dict(f.to_dict()) == f
    a = Atom(-1, HALF, 2, (Fraction(1, 2), Fraction(-3)))
    assert Atom.from_dict(a.to_dict()) == a
    chi = SatakeParam.from_dict({"values": [[0.0, 1.0]], "q": 7, "s": 0})
    assert abs(chi.values[0] - 1j) < 1e-12
    again = SatakeParam.from_dict(chi.to_dict())
    assert again.branch_declared


def test_display_forms():
    assert str(Atom(1, 1, 2, (0,))) == "(1 - q^(-1-2s))"
    assert str(Atom(-1, HALF, 0, (1,))) == "(1 + q^(-1/2) e[1])"
    assert str(Atom(1, 0, 1, (0,))) == "(1 - q^(-s))"
    assert str(Factored()) == "1"
    shown = str(q_factor(get_entry("T_in_PGL2")))
    assert shown == "(1 - q^(-2-2s)) / (1 - q^(-1-2s))"


@st.composite
def atoms(draw):
    sign = draw(st.sampled_from([1, -1]))
    q_exp = Fraction(draw(st.integers(min_value=0, max_value=6)), 2)
    s_mult = Fraction(draw(st.integers(min_value=0, max_value=4)))
    coweight = (
        Fraction(draw(st.integers(min_value=-2, max_value=2))),
        Fraction(draw(st.integers(min_value=-2, max_value=2))),
    )
    return Atom(sign, q_exp, s_mult, coweight)


@given(st.lists(atoms(), max_size=4), st.lists(atoms(), max_size=4), atoms())
def test_inserting_matching_atoms_preserves_equality(num, den, extra):
    f = Factored(tuple(num), tuple(den))
    g = Factored(tuple(num) + (extra,), tuple(den) + (extra,))
    assert f == g
    assert hash(f) == hash(g)


@given(st.lists(atoms(), max_size=4), st.lists(atoms(), max_size=4))
def test_cancellation_preserves_values(num, den):
    f = Factored(tuple(num), tuple(den))
    chi = SatakeParam((0.5 + 0.5j, -1.25))
    try:
        direct = f.evaluate(3, chi, Fraction(1, 3))
    except PoleError:
        return
    reduced = f.canceled().evaluate(3, chi, Fraction(1, 3))
    assert abs(direct - reduced) < 1e-9 * max(1.0, abs(direct))


# -- whole-catalog structure ---------------------------------------------


@pytest.mark.parametrize("name", entry_names())
def test_open_cell_factor_shape(name):
    f = q_factor(get_entry(name))
    assert len(f.numerator) == len(f.denominator)
    for atom in f.numerator:
        assert atom.sign == 1
        assert atom.s_mult == 2 * (atom.q_exp - 1)
        assert all(c == 0 for c in atom.coweight)
    for atom in f.denominator:
        assert atom.sign == 1
        assert atom.s_mult == 2 * atom.q_exp
        assert atom.q_exp > 0
    value = f.as_fraction(5)
    assert value >= 1
