"""Dual root data attached to a spherical datum.

Builds the root datum whose simple roots are the normalized spherical roots,
read in coordinates of the character lattice (or of its saturation for the
primed variant), with coroots the restrictions of the normalized coroot
functionals.  Also provides the commuting SL(2) weight attached to the Levi
and the consistency report for the distinguished morphism data.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _linalg as la
from .rootdata import RootDatum, WeylElement
from .spherical import SphericalDatum


class DualGroupError(ValueError):
    pass


_SC_NAMES = {
    "A": lambda n: f"SL{n + 1}",
    "B": lambda n: f"Spin{2 * n + 1}",
    "C": lambda n: f"Sp{2 * n}",
    "D": lambda n: f"Spin{2 * n}",
}
_ADJOINT_NAMES = {
    "A": lambda n: f"PGL{n + 1}",
    "B": lambda n: f"SO{2 * n + 1}",
    "C": lambda n: f"PSp{2 * n}",
    "D": lambda n: f"PSO{2 * n}",
}
_CARTAN_DET = {"A": lambda n: n + 1, "B": lambda n: 2, "C": lambda n: 2,
               "D": lambda n: 4, "E": lambda n: {6: 3, 7: 2, 8: 1}[n],
               "F": lambda n: 1, "G": lambda n: 1}


@dataclass(frozen=True)
class DualRootDatum:
    """Root datum on the restricted character lattice.

    `datum` carries the spherical side: characters are elements of the
    lattice spanned by `lattice_rows`, simple roots are the normalized
    spherical roots, coroots their restricted functionals.  The group the
    construction names lives on the dual side, so `group_name` classifies
    `datum.dual()`."""

    variant: str
    lattice_rows: tuple
    simple_roots: tuple
    simple_coroots: tuple
    roots: tuple
    coroots: tuple
    datum: RootDatum
    cartan_type: str
    group_name: str

    @property
    def rank(self) -> int:
        return len(self.lattice_rows)

    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    def torus_embedding(self) -> tuple:
        """Cocharacter vectors of the ambient maximal torus spanning the
        restricted dual torus (rows = images of the standard cocharacters)."""
        return self.lattice_rows

    def to_dict(self) -> dict:
        return {
            "variant": self.variant,
            "lattice_rows": [list(r) for r in self.lattice_rows],
            "simple_roots": [list(r) for r in self.simple_roots],
            "simple_coroots": [list(r) for r in self.simple_coroots],
            "root_count": len(self.roots),
            "cartan_type": self.cartan_type,
            "group_name": self.group_name,
        }


def _integral(coords) -> Optional[tuple]:
    if coords is None:
        return None
    out = []
    for x in coords:
        f = Fraction(x)
        if f.denominator != 1:
            return None
        out.append(int(f))
    return tuple(out)


def _restrict_elements(elements: Sequence[WeylElement], rows) -> tuple:
    """Matrices of ambient Weyl elements in the coordinates of the given
    lattice basis rows."""
    rows_t = la.transpose(rows)
    k = len(rows)
    out = []
    for w in elements:
        cols = []
        for b in rows:
            c = _integral(la.solve(rows_t, w.apply(b)))
            if c is None:
                raise DualGroupError(
                    "little Weyl group does not preserve the lattice"
                )
            cols.append(c)
        out.append(tuple(tuple(cols[j][i] for j in range(k)) for i in range(k)))
    return tuple(out)


def _rows_saturated(rows) -> bool:
    if not rows:
        return True
    _, s, _, _ = la.smith_normal_form(rows)
    r = la.rank(rows)
    for i in range(r):
        if abs(s[i][i]) != 1:
            return False
    return True


def _component_index(roots_rows) -> int:
    """Index of the root lattice inside the saturated span lattice."""
    sat = la.saturate_rows(roots_rows)
    sat_t = la.transpose(sat)
    rel = []
    for r in roots_rows:
        c = _integral(la.solve(sat_t, r))
        if c is None:
            raise DualGroupError("root outside its saturated span")
        rel.append(c)
    _, s, _, _ = la.smith_normal_form(rel)
    idx = 1
    for i in range(len(rel)):
        idx *= abs(s[i][i])
    return idx


def _component_name(e: RootDatum, label: str, indices) -> str:
    letter, n = label[0], int(label[1:])
    roots_rows = [e.simple_roots[i] for i in indices]
    idx = _component_index(roots_rows)
    det = _CARTAN_DET[letter](n)
    if idx == det:
        if letter in _SC_NAMES:
            return _SC_NAMES[letter](n)
        return label
    if idx == 1:
        if letter in _ADJOINT_NAMES:
            return _ADJOINT_NAMES[letter](n)
        return label
    if letter == "D" and idx == 2:
        # distinguish the vector-representation lattice from the half-spin ones
        c_rows = [
            [la.dot(e.simple_roots[i], e.simple_coroots[j]) for j in indices]
            for i in indices
        ]
        first_weight_coords = la.matvec(la.transpose(la.inverse(c_rows)), la.vec([1] + [0] * (len(indices) - 1)))
        vec_weight = [Fraction(0)] * e.rank
        for c, i in zip(first_weight_coords, indices):
            for t in range(e.rank):
                vec_weight[t] += c * e.simple_roots[i][t]
        sat = la.saturate_rows(roots_rows)
        if _integral(la.solve(la.transpose(sat), vec_weight)) is not None:
            return f"SO{2 * n}"
    return f"{label} intermediate"


def identify_group(e: RootDatum) -> str:
    """Classify a root datum up to isomorphism as a group name.

    Products are named factor by factor using the lattice each factor spans,
    so amalgamated central quotients fall back to per-factor approximations;
    a reductive GL pattern (type A, one-dimensional center, both lattices
    saturated) is recognized exactly."""
    comps = e.components
    ss = sum(len(ind) for _, ind in comps)
    t = e.rank - ss
    if not comps:
        return f"T{e.rank}"
    if len(comps) == 1 and t == 1 and comps[0][0].startswith("A"):
        label, ind = comps[0]
        m = len(ind) + 1
        if _rows_saturated(e.simple_roots) and _rows_saturated(e.simple_coroots):
            return f"GL{m}"
    names = [_component_name(e, label, ind) for label, ind in comps]
    if t > 0:
        names.append(f"T{t}")
    return " x ".join(names)


def build_dual_datum(d: SphericalDatum, variant: str = "gx") -> DualRootDatum:
    if variant not in ("gx", "gxprime"):
        raise ValueError("variant must be 'gx' or 'gxprime'")
    normalized = d.normalize_roots()
    if variant == "gx":
        for i, nr in enumerate(normalized):
            if nr.kind == "N":
                raise DualGroupError(
                    f"normalized root {i} has type N; "
                    "only the saturated variant carries a dual datum"
                )
        rows = tuple(tuple(int(x) for x in r) for r in d.lattice)
    else:
        rows = tuple(
            tuple(int(x) for x in r) for r in la.saturate_rows(d.lattice)
        )
    rows_t = la.transpose(rows)

    simple_roots = []
    simple_coroots = []
    for i, nr in enumerate(normalized):
        coords = _integral(la.solve(rows_t, nr.gamma))
        if coords is None:
            raise DualGroupError(
                f"normalized root {i} does not lie in the chosen lattice"
            )
        simple_roots.append(coords)
        pair = _integral([la.dot(b, nr.coroot) for b in rows])
        if pair is None:
            raise DualGroupError(
                f"coroot of normalized root {i} is not integral on the lattice"
            )
        simple_coroots.append(pair)

    lw = d.little_weyl_group()
    mats = _restrict_elements(lw.elements, rows)
    inv_mats = _restrict_elements([w.inverse() for w in lw.elements], rows)

    # full root system: W_X orbit of the simple roots, coroots carried along
    root_to_coroot = {}
    for gamma, check in zip(simple_roots, simple_coroots):
        for m, minv in zip(mats, inv_mats):
            r = tuple(int(x) for x in la.matvec(m, gamma))
            c = tuple(int(x) for x in la.vecmat(check, minv))
            if r in root_to_coroot and root_to_coroot[r] != c:
                raise DualGroupError(
                    "inconsistent coroots in the Weyl saturation"
                )
            root_to_coroot[r] = c
    all_roots = tuple(sorted(root_to_coroot))
    all_coroots = tuple(root_to_coroot[r] for r in all_roots)

    datum = RootDatum(
        rank=len(rows),
        simple_roots=tuple(simple_roots),
        simple_coroots=tuple(simple_coroots),
        name=(d.name + " restricted") if d.name else "restricted",
    )
    return DualRootDatum(
        variant=variant,
        lattice_rows=rows,
        simple_roots=tuple(simple_roots),
        simple_coroots=tuple(simple_coroots),
        roots=all_roots,
        coroots=all_coroots,
        datum=datum,
        cartan_type=datum.cartan_type(),
        group_name=identify_group(datum.dual()),
    )


@dataclass(frozen=True)
class ArthurWeight:
    """The character 2*rho of the Levi, as a vector on the ambient lattice."""

    vector: tuple
    levi: tuple

    def pairing(self, coweight) -> Fraction:
        return la.dot(self.vector, coweight)


def arthur_sl2_weight(d: SphericalDatum) -> ArthurWeight:
    amb = d.ambient
    vec = [0] * amb.rank
    for root in amb.levi_positive_roots(d.levi):
        for i in range(amb.rank):
            vec[i] += root[i]
    for j in d.levi:
        if la.dot(vec, amb.simple_coroots[j]) != 2:
            raise DualGroupError(
                f"Levi sum pairs to {la.dot(vec, amb.simple_coroots[j])} "
                f"with simple coroot {j}, expected 2"
            )
    return ArthurWeight(vector=tuple(vec), levi=tuple(d.levi))


@dataclass(frozen=True)
class MorphismEntry:
    gamma: tuple
    kind: str
    associated: tuple
    orthogonal_to_levi: bool
    commutes_with_weight: bool


@dataclass(frozen=True)
class MorphismReport:
    entries: tuple
    independent: bool

    @property
    def passed(self) -> bool:
        return self.independent and all(
            e.orthogonal_to_levi and e.commutes_with_weight for e in self.entries
        )

    def to_dict(self) -> dict:
        return {
            "entries": [
                {
                    "gamma": list(e.gamma),
                    "kind": e.kind,
                    "associated": [list(r) for r in e.associated],
                    "orthogonal_to_levi": e.orthogonal_to_levi,
                    "commutes_with_weight": e.commutes_with_weight,
                }
                for e in self.entries
            ],
            "independent": self.independent,
            "passed": self.passed,
        }


def distinguished_morphism_report(d: SphericalDatum) -> MorphismReport:
    """Checks that the associated roots can support a morphism landing in
    their root spaces: joint linear independence, orthogonality to the Levi
    half-sum, and commutation with the Levi SL(2) weight."""
    amb = d.ambient
    rho_l = amb.rho_levi(d.levi)
    weight = arthur_sl2_weight(d)
    entries = []
    collected = []
    for nr in d.normalize_roots():
        ortho = all(amb.form_value(r, rho_l) == 0 for r in nr.associated)
        commutes = all(
            weight.pairing(amb.coroot_of_root[r]) == 0 for r in nr.associated
        )
        entries.append(
            MorphismEntry(
                gamma=nr.gamma,
                kind=nr.kind,
                associated=nr.associated,
                orthogonal_to_levi=ortho,
                commutes_with_weight=commutes,
            )
        )
        collected.extend(nr.associated)
    independent = la.rank(collected) == len(collected)
    return MorphismReport(entries=tuple(entries), independent=independent)


def is_strongly_tempered_candidate(d: SphericalDatum) -> bool:
    """Necessary combinatorial condition: the restricted datum is semisimple
    of full rank (no central torus), so the dual group can exhaust the dual
    of the ambient group along the restricted directions."""
    dual = build_dual_datum(d, "gx")
    return dual.semisimple_rank() == dual.rank
