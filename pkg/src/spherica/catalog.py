"""Reference catalog of spherical homogeneous data.

Each entry packages a SphericalDatum together with its expected invariants:
normalized-root types, Levi set, little Weyl group order, dual Cartan type,
wavefront verdict, and (where the theory supplies them) color data for the
Plancherel factors.  Twelve entries form the rank-one reference table; the
rest exercise higher rank, group cases, a Whittaker-type datum, and one
deliberately degenerate configuration kept as a negative test.

Simple roots follow Bourbaki numbering throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .rootdata import (
    RootDatum,
    adjoint_model,
    gl_model,
    product,
    so_even_model,
    so_odd_model,
    sp_model,
    weight_model,
)
from .spherical import SphericalDatum

Vec = tuple


@dataclass(frozen=True)
class ColorAtom:
    """One color: a coweight theta of the restricted torus (coordinates in
    the dual of the character-lattice basis), a sign, and a q-exponent."""

    theta: tuple
    sign: int
    q_exp: Fraction

    def to_dict(self) -> dict:
        return {
            "theta": [str(Fraction(t)) for t in self.theta],
            "sign": self.sign,
            "q_exp": str(self.q_exp),
        }

    @staticmethod
    def from_dict(data: dict) -> "ColorAtom":
        return ColorAtom(
            theta=tuple(Fraction(t) for t in data["theta"]),
            sign=int(data["sign"]),
            q_exp=Fraction(data["q_exp"]),
        )


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    datum: SphericalDatum
    dual_cartan: str
    root_types: tuple
    levi: tuple
    gammas: tuple
    gamma_coords: tuple
    weyl_order: int
    symmetric: bool
    wavefront: bool
    whittaker: bool = False
    colors: tuple = None
    reference_index: int = None
    expect_fail: str = None

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "datum": self.datum.to_dict(),
            "dual_cartan": self.dual_cartan,
            "root_types": list(self.root_types),
            "levi": list(self.levi),
            "gammas": [list(g) for g in self.gammas],
            "gamma_coords": [list(c) for c in self.gamma_coords],
            "weyl_order": self.weyl_order,
            "symmetric": self.symmetric,
            "wavefront": self.wavefront,
            "whittaker": self.whittaker,
            "colors": None
            if self.colors is None
            else [c.to_dict() for c in self.colors],
            "reference_index": self.reference_index,
            "expect_fail": self.expect_fail,
        }

    @staticmethod
    def from_dict(data: dict) -> "CatalogEntry":
        return CatalogEntry(
            name=data["name"],
            datum=SphericalDatum.from_dict(data["datum"]),
            dual_cartan=data["dual_cartan"],
            root_types=tuple(data["root_types"]),
            levi=tuple(data["levi"]),
            gammas=tuple(tuple(g) for g in data["gammas"]),
            gamma_coords=tuple(tuple(c) for c in data["gamma_coords"]),
            weyl_order=data["weyl_order"],
            symmetric=data["symmetric"],
            wavefront=data["wavefront"],
            whittaker=data["whittaker"],
            colors=None
            if data["colors"] is None
            else tuple(ColorAtom.from_dict(c) for c in data["colors"]),
            reference_index=data["reference_index"],
            expect_fail=data["expect_fail"],
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "CatalogEntry":
        return CatalogEntry.from_dict(json.loads(text))


def _half() -> Fraction:
    return Fraction(1, 2)


def _entries() -> tuple:
    out = []

    # ---- rank-one reference table ------------------------------------------

    out.append(
        CatalogEntry(
            name="GL3_in_SL4",
            datum=SphericalDatum(
                ambient=weight_model("A3"),
                lattice=((1, 0, 1),),
                spherical_roots=((1, 0, 1),),
                levi=(1,),
                name="GL3_in_SL4",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(1,),
            gammas=((1, 0, 1),),
            gamma_coords=((1, 1, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=1,
        )
    )

    amb2 = product(
        weight_model("A1"), weight_model("A1"), negate_second=True, name="SL2xSL2"
    )
    out.append(
        CatalogEntry(
            name="SL2_in_SL2xSL2",
            datum=SphericalDatum(
                ambient=amb2,
                lattice=((1, -1),),
                spherical_roots=((2, -2),),
                levi=(),
                name="SL2_in_SL2xSL2",
            ),
            dual_cartan="A1",
            root_types=("G",),
            levi=(),
            gammas=((2, -2),),
            gamma_coords=((1, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=2,
        )
    )

    out.append(
        CatalogEntry(
            name="Sp4_in_SL4",
            datum=SphericalDatum(
                ambient=weight_model("A3"),
                lattice=((0, 2, 0),),
                spherical_roots=((0, 2, 0),),
                levi=(0, 2),
                name="Sp4_in_SL4",
            ),
            dual_cartan="A1",
            root_types=("G",),
            levi=(0, 2),
            gammas=((0, 2, 0),),
            gamma_coords=((1, 2, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=3,
        )
    )

    out.append(
        CatalogEntry(
            name="SO6_in_SO7",
            datum=SphericalDatum(
                ambient=so_odd_model(3),
                lattice=((1, 0, 0),),
                spherical_roots=((1, 0, 0),),
                levi=(1, 2),
                name="SO6_in_SO7",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(1, 2),
            gammas=((1, 0, 0),),
            gamma_coords=((1, 1, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=4,
        )
    )

    out.append(
        CatalogEntry(
            name="Spin7_in_Spin8",
            datum=SphericalDatum(
                ambient=so_even_model(4),
                lattice=((2, 0, 0, 0),),
                spherical_roots=((2, 0, 0, 0),),
                levi=(1, 2, 3),
                name="Spin7_in_Spin8",
            ),
            dual_cartan="A1",
            root_types=("G",),
            levi=(1, 2, 3),
            gammas=((2, 0, 0, 0),),
            gamma_coords=((2, 2, 1, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=5,
        )
    )

    out.append(
        CatalogEntry(
            name="GL4_in_SO8",
            datum=SphericalDatum(
                ambient=so_even_model(4),
                lattice=((1, 1, 0, 0), (0, 0, 1, 1)),
                spherical_roots=((1, 1, -1, -1), (0, 0, 2, 2)),
                levi=(0, 2),
                name="GL4_in_SO8",
            ),
            dual_cartan="B2",
            root_types=("G", "T"),
            levi=(0, 2),
            gammas=((1, 1, -1, -1), (0, 0, 1, 1)),
            gamma_coords=((1, 2, 1, 0), (0, 0, 0, 1)),
            weyl_order=8,
            symmetric=True,
            wavefront=True,
            reference_index=6,
        )
    )

    out.append(
        CatalogEntry(
            name="SO4_in_SO5",
            datum=SphericalDatum(
                ambient=so_odd_model(2),
                lattice=((1, 0),),
                spherical_roots=((1, 0),),
                levi=(1,),
                name="SO4_in_SO5",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(1,),
            gammas=((1, 0),),
            gamma_coords=((1, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=7,
        )
    )

    out.append(
        CatalogEntry(
            name="G2_in_Spin7",
            datum=SphericalDatum(
                ambient=so_odd_model(3),
                lattice=((1, 1, 1),),
                spherical_roots=((1, 1, 1),),
                levi=(0, 1),
                name="G2_in_Spin7",
            ),
            dual_cartan="A1",
            root_types=("G",),
            levi=(0, 1),
            gammas=((1, 1, 1),),
            gamma_coords=((1, 2, 3),),
            weyl_order=2,
            symmetric=False,
            wavefront=True,
            reference_index=8,
        )
    )

    out.append(
        CatalogEntry(
            name="SL2xSL2_in_Sp4",
            datum=SphericalDatum(
                ambient=sp_model(2),
                lattice=((1, 1),),
                spherical_roots=((1, 1),),
                levi=(0,),
                name="SL2xSL2_in_Sp4",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(0,),
            gammas=((1, 1),),
            gamma_coords=((1, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=9,
        )
    )

    out.append(
        CatalogEntry(
            name="Spin9_in_F4",
            datum=SphericalDatum(
                ambient=weight_model("F4"),
                lattice=((0, 0, 0, 1),),
                spherical_roots=((0, 0, 0, 1),),
                levi=(0, 1, 2),
                name="Spin9_in_F4",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(0, 1, 2),
            gammas=((0, 0, 0, 1),),
            gamma_coords=((1, 2, 3, 2),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            reference_index=10,
        )
    )

    out.append(
        CatalogEntry(
            name="SL3_in_G2",
            datum=SphericalDatum(
                ambient=weight_model("G2"),
                lattice=((1, 0),),
                spherical_roots=((1, 0),),
                levi=(1,),
                name="SL3_in_G2",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(1,),
            gammas=((1, 0),),
            gamma_coords=((2, 1),),
            weyl_order=2,
            symmetric=False,
            wavefront=True,
            reference_index=11,
        )
    )

    # the rank-one lattice Z*gamma is degenerate here (see the negative entry
    # below); the full weight lattice keeps the same normalized root and Levi
    out.append(
        CatalogEntry(
            name="G2_alpha1_plus_alpha2",
            datum=SphericalDatum(
                ambient=weight_model("G2"),
                lattice=((1, 0), (0, 1)),
                spherical_roots=((-1, 1),),
                levi=(),
                name="G2_alpha1_plus_alpha2",
            ),
            dual_cartan="A1 x T1",
            root_types=("T",),
            levi=(),
            gammas=((-1, 1),),
            gamma_coords=((1, 1),),
            weyl_order=2,
            symmetric=False,
            wavefront=False,
            reference_index=12,
        )
    )

    # ---- torus quotients of rank one ----------------------------------------

    out.append(
        CatalogEntry(
            name="T_in_SL2",
            datum=SphericalDatum(
                ambient=weight_model("A1"),
                lattice=((2,),),
                spherical_roots=((2,),),
                levi=(),
                name="T_in_SL2",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(),
            gammas=((2,),),
            gamma_coords=((1,),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            colors=(
                ColorAtom(theta=(Fraction(1),), sign=1, q_exp=_half()),
                ColorAtom(theta=(Fraction(1),), sign=1, q_exp=_half()),
            ),
        )
    )

    out.append(
        CatalogEntry(
            name="T_in_PGL2",
            datum=SphericalDatum(
                ambient=adjoint_model("A1"),
                lattice=((1,),),
                spherical_roots=((2,),),
                levi=(),
                name="T_in_PGL2",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(),
            gammas=((1,),),
            gamma_coords=((1,),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            colors=(
                ColorAtom(theta=(Fraction(1),), sign=1, q_exp=_half()),
                ColorAtom(theta=(Fraction(1),), sign=1, q_exp=_half()),
            ),
        )
    )

    out.append(
        CatalogEntry(
            name="PO2_in_PGL2",
            datum=SphericalDatum(
                ambient=adjoint_model("A1"),
                lattice=((2,),),
                spherical_roots=((2,),),
                levi=(),
                name="PO2_in_PGL2",
            ),
            dual_cartan="A1",
            root_types=("N",),
            levi=(),
            gammas=((1,),),
            gamma_coords=((1,),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
        )
    )

    # ---- group cases ---------------------------------------------------------

    ambg2 = product(
        adjoint_model("A1"), adjoint_model("A1"), negate_second=True, name="PGL2xPGL2"
    )
    out.append(
        CatalogEntry(
            name="PGL2_group",
            datum=SphericalDatum(
                ambient=ambg2,
                lattice=((1, -1),),
                spherical_roots=((1, -1),),
                levi=(),
                name="PGL2_group",
            ),
            dual_cartan="A1",
            root_types=("G",),
            levi=(),
            gammas=((1, -1),),
            gamma_coords=((1, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
            colors=(ColorAtom(theta=(Fraction(2),), sign=1, q_exp=Fraction(1)),),
        )
    )

    ambg3 = product(
        adjoint_model("A2"), adjoint_model("A2"), negate_second=True, name="PGL3xPGL3"
    )
    out.append(
        CatalogEntry(
            name="PGL3_group",
            datum=SphericalDatum(
                ambient=ambg3,
                lattice=((1, 0, -1, 0), (0, 1, 0, -1)),
                spherical_roots=((1, 0, -1, 0), (0, 1, 0, -1)),
                levi=(),
                name="PGL3_group",
            ),
            dual_cartan="A2",
            root_types=("G", "G"),
            levi=(),
            gammas=((1, 0, -1, 0), (0, 1, 0, -1)),
            gamma_coords=((1, 0, 1, 0), (0, 1, 0, 1)),
            weyl_order=6,
            symmetric=True,
            wavefront=True,
            colors=(
                ColorAtom(
                    theta=(Fraction(2), Fraction(-1)), sign=1, q_exp=Fraction(1)
                ),
                ColorAtom(
                    theta=(Fraction(-1), Fraction(2)), sign=1, q_exp=Fraction(1)
                ),
                ColorAtom(theta=(Fraction(1), Fraction(1)), sign=1, q_exp=Fraction(1)),
            ),
        )
    )

    # ---- higher-rank symmetric quotients ---------------------------------------

    out.append(
        CatalogEntry(
            name="Sp4_in_GL4",
            datum=SphericalDatum(
                ambient=gl_model(4),
                lattice=((1, 1, 0, 0), (0, 0, 1, 1)),
                spherical_roots=((1, 1, -1, -1),),
                levi=(0, 2),
                name="Sp4_in_GL4",
            ),
            dual_cartan="A1 x T1",
            root_types=("G",),
            levi=(0, 2),
            gammas=((1, 1, -1, -1),),
            gamma_coords=((1, 2, 1),),
            weyl_order=2,
            symmetric=True,
            wavefront=True,
        )
    )

    out.append(
        CatalogEntry(
            name="Sp6_in_GL6",
            datum=SphericalDatum(
                ambient=gl_model(6),
                lattice=(
                    (1, 1, 0, 0, 0, 0),
                    (0, 0, 1, 1, 0, 0),
                    (0, 0, 0, 0, 1, 1),
                ),
                spherical_roots=(
                    (1, 1, -1, -1, 0, 0),
                    (0, 0, 1, 1, -1, -1),
                ),
                levi=(0, 2, 4),
                name="Sp6_in_GL6",
            ),
            dual_cartan="A2 x T1",
            root_types=("G", "G"),
            levi=(0, 2, 4),
            gammas=((1, 1, -1, -1, 0, 0), (0, 0, 1, 1, -1, -1)),
            gamma_coords=((1, 2, 1, 0, 0), (0, 0, 1, 2, 1)),
            weyl_order=6,
            symmetric=True,
            wavefront=True,
        )
    )

    # ---- non-wavefront and Whittaker-type entries --------------------------------

    out.append(
        CatalogEntry(
            name="gl_n_so_odd",
            datum=SphericalDatum(
                ambient=so_odd_model(2),
                lattice=((1, 0), (0, 1)),
                spherical_roots=((1, 0), (0, 1)),
                levi=(),
                name="gl_n_so_odd",
            ),
            dual_cartan="A1 x A1",
            root_types=("T", "T"),
            levi=(),
            gammas=((1, 0), (0, 1)),
            gamma_coords=((1, 1), (0, 1)),
            weyl_order=4,
            symmetric=False,
            wavefront=False,
        )
    )

    out.append(
        CatalogEntry(
            name="whittaker_GL2",
            datum=SphericalDatum(
                ambient=gl_model(2),
                lattice=((1, 0), (0, 1)),
                spherical_roots=((1, -1),),
                levi=(),
                name="whittaker_GL2",
            ),
            dual_cartan="A1 x T1",
            root_types=("T",),
            levi=(),
            gammas=((1, -1),),
            gamma_coords=((1,),),
            weyl_order=2,
            symmetric=False,
            wavefront=True,
            whittaker=True,
            colors=(),
        )
    )

    # ---- negative test -----------------------------------------------------------

    out.append(
        CatalogEntry(
            name="G2_alpha1_plus_alpha2_rank_one",
            datum=SphericalDatum(
                ambient=weight_model("G2"),
                lattice=((-1, 1),),
                spherical_roots=((-1, 1),),
                levi=(),
                name="G2_alpha1_plus_alpha2_rank_one",
            ),
            dual_cartan="A1",
            root_types=("T",),
            levi=(),
            gammas=((-1, 1),),
            gamma_coords=((1, 1),),
            weyl_order=2,
            symmetric=False,
            wavefront=False,
            expect_fail="nondegeneracy",
        )
    )

    return tuple(out)


_CATALOG = None


def load_catalog() -> tuple:
    """All catalog entries, in a fixed order."""
    global _CATALOG
    if _CATALOG is None:
        _CATALOG = _entries()
    return _CATALOG


def entry_names() -> tuple:
    return tuple(e.name for e in load_catalog())


def get_entry(name: str) -> CatalogEntry:
    for e in load_catalog():
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry named {name!r}")


def reference_rows() -> tuple:
    """The twelve rank-one reference entries, by table position."""
    rows = [e for e in load_catalog() if e.reference_index is not None]
    return tuple(sorted(rows, key=lambda e: e.reference_index))
