"""Combinatorial data of a spherical homogeneous space.

A `SphericalDatum` packages an ambient root datum, the sublattice of
characters that the space sees, its spherical roots, and the simple roots of
the stabilizing Levi. From these it computes, exactly:

  * the normalized spherical roots, each classified as type T (a root that
    lies in the lattice), N (a root that does not), or G (a sum of two
    strongly orthogonal roots), together with the associated positive
    root(s), the coroot functional, and a canonical Weyl-group lift;
  * the little Weyl group generated by the lifts, with its action restricted
    to the character lattice;
  * the valuation cone and both wavefront tests (a support criterion and an
    exact cone comparison against the image of the antidominant chamber).

All of this is lattice combinatorics: integers and Fractions throughout.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from . import _linalg as la
from .rootdata import Cone, RootDatum, WeylElement, _identity_element, _int_rows


class SphericalDataError(ValueError):
    """Structurally or semantically inconsistent spherical data."""


@dataclass(frozen=True)
class NormalizedRoot:
    """A spherical root in normalized form.

    `sigma` is the root as given; `gamma` the primitive vector in the root
    lattice on the same ray; `kind` one of "T", "N", "G"; `associated` the
    positive ambient root(s) attached to gamma (one for T/N, a strongly
    orthogonal pair for G); `coroot` the functional 2(gamma, .)/(gamma,
    gamma) as a coweight vector; `lift` the canonical Weyl element acting as
    the reflection in gamma on the character lattice and preserving the
    positive Levi roots.
    """

    sigma: tuple[int, ...]
    gamma: tuple[int, ...]
    kind: str
    associated: tuple[tuple[int, ...], ...]
    coroot: tuple[Fraction, ...]
    lift: WeylElement


@dataclass(frozen=True)
class LittleWeylGroup:
    """The group generated by the canonical lifts, with restricted action.

    `elements[i]` acts on ambient characters; `restricted[i]` is the same
    element written in lattice coordinates (an integer matrix acting on
    column coordinate vectors). `generators` indexes the lifts of the
    normalized roots inside `elements`.
    """

    elements: tuple[WeylElement, ...]
    restricted: tuple[tuple[tuple[int, ...], ...], ...]
    generators: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def restriction_of(self, w: WeylElement) -> tuple[tuple[int, ...], ...]:
        for e, r in zip(self.elements, self.restricted):
            if e.matrix == w.matrix:
                return r
        raise KeyError("element is not in the little Weyl group")


@dataclass(frozen=True)
class WavefrontReport:
    """Outcome of the two wavefront tests.

    `support_ok` : every normalized root has a private simple root in its
                   support (no other normalized root uses it);
    `center_ok`  : central ambient coweights cover the lineality of the
                   valuation cone;
    `cone_ok`    : the projected antidominant chamber equals the valuation
                   cone exactly (linear-programming check on generators).
    `is_wavefront` is the criterion verdict, support_ok and center_ok.
    """

    is_wavefront: bool
    support_ok: bool
    center_ok: bool
    cone_ok: bool
    private_simple: tuple[tuple[int, int], ...]
    missing: tuple[int, ...]
    uncovered: Optional[tuple[Fraction, ...]]


def _as_frac_vec(v: Sequence) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


@dataclass(frozen=True)
class SphericalDatum:
    """Ambient group + character lattice + spherical roots + Levi."""

    ambient: RootDatum
    lattice: tuple[tuple[int, ...], ...]
    spherical_roots: tuple[tuple[int, ...], ...]
    levi: tuple[int, ...]
    valuation_cone_rays: Optional[tuple[tuple[int, ...], ...]] = None
    name: str = ""

    def __post_init__(self):
        n = self.ambient.rank
        object.__setattr__(self, "lattice", _int_rows(self.lattice))
        object.__setattr__(self, "spherical_roots", _int_rows(self.spherical_roots))
        object.__setattr__(self, "levi", tuple(sorted(int(i) for i in self.levi)))
        if self.valuation_cone_rays is not None:
            object.__setattr__(
                self, "valuation_cone_rays", _int_rows(self.valuation_cone_rays)
            )
        for r in self.lattice + self.spherical_roots:
            if len(r) != n:
                raise SphericalDataError("vector length does not match ambient rank")
        if la.rank(self.lattice) != len(self.lattice):
            raise SphericalDataError("character lattice basis is dependent")
        ss = len(self.ambient.simple_roots)
        if len(set(self.levi)) != len(self.levi):
            raise SphericalDataError("levi indices repeat")
        if any(i < 0 or i >= ss for i in self.levi):
            raise SphericalDataError("levi index out of range")
        for s in self.spherical_roots:
            if all(x == 0 for x in s):
                raise SphericalDataError("zero spherical root")

    # -- basic coordinates ---------------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.lattice)

    def lattice_coords(self, v: Sequence) -> Optional[tuple[Fraction, ...]]:
        """Coordinates of an ambient character in the lattice basis."""
        return la.solve(la.transpose(self.lattice), la.vec(v))

    def in_lattice(self, v: Sequence) -> bool:
        return la.in_row_lattice(la.vec(v), self.lattice)

    def project_coweight(self, c: Sequence) -> tuple[Fraction, ...]:
        """Image of an ambient coweight in dual lattice coordinates."""
        return tuple(la.dot(row, c) for row in self.lattice)

    # -- normalization ---------------------------------------------------------

    @cached_property
    def normalized_roots(self) -> tuple[NormalizedRoot, ...]:
        out = []
        for idx, sigma in enumerate(self.spherical_roots):
            out.append(self._normalize_one(idx, sigma))
        return tuple(out)

    def normalize_roots(self) -> tuple[NormalizedRoot, ...]:
        return self.normalized_roots

    def _normalize_one(self, idx: int, sigma) -> NormalizedRoot:
        amb = self.ambient
        coords = amb.root_coordinates(sigma)
        rebuilt = [Fraction(0)] * amb.rank
        for c, a in zip(coords, amb.simple_roots):
            for k in range(amb.rank):
                rebuilt[k] += c * a[k]
        if tuple(rebuilt) != _as_frac_vec(sigma):
            raise SphericalDataError(
                f"spherical root {idx} is not in the span of the roots"
            )
        if any(c < 0 for c in coords):
            raise SphericalDataError(
                f"spherical root {idx} is not a nonnegative combination of simple roots"
            )
        gcoords = la.primitive(coords)
        gamma = tuple(
            sum(gcoords[i] * amb.simple_roots[i][k] for i in range(len(gcoords)))
            for k in range(amb.rank)
        )
        gg = amb.form_value(gamma, gamma)
        coroot = tuple(2 * x / gg for x in la.matvec(amb.invariant_form, gamma))
        if gamma in amb.coroot_of_root:
            kind = "T" if self.in_lattice(gamma) else "N"
            lift = amb.reflection_of(gamma, amb.coroot_of_root[gamma])
            return NormalizedRoot(
                sigma=tuple(sigma),
                gamma=gamma,
                kind=kind,
                associated=(gamma,),
                coroot=coroot,
                lift=lift,
            )
        pair, lift = self._canonical_pair(idx, gamma)
        return NormalizedRoot(
            sigma=tuple(sigma),
            gamma=gamma,
            kind="G",
            associated=pair,
            coroot=coroot,
            lift=lift,
        )

    def _acts_as_gamma_reflection(self, w: WeylElement, gamma) -> bool:
        amb = self.ambient
        gg = amb.form_value(gamma, gamma)
        for b in self.lattice:
            c = 2 * amb.form_value(b, gamma) / gg
            expect = tuple(Fraction(b[k]) - c * gamma[k] for k in range(amb.rank))
            if _as_frac_vec(w.apply(b)) != expect:
                return False
        return True

    def _preserves_levi_positives(self, w: WeylElement) -> bool:
        pos = set(self.ambient.levi_positive_roots(self.levi))
        return all(w.apply(r) in pos for r in pos)

    def _conjugate_to_simple_pair(self, alpha, beta) -> bool:
        simple = set(self.ambient.simple_roots)
        start = frozenset((alpha, beta))
        seen = {start}
        frontier = [start]
        refl = [self.ambient.reflection(i) for i in range(len(simple))]
        while frontier:
            cur = frontier.pop()
            if all(v in simple for v in cur):
                return True
            for s in refl:
                nxt = frozenset(s.apply(v) for v in cur)
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)
        return False

    def _canonical_pair(self, idx: int, gamma):
        """The unique strongly orthogonal pair alpha+beta = gamma whose
        product of reflections restricts to the gamma-reflection and
        preserves the positive Levi roots."""
        amb = self.ambient
        pos = amb.positive_roots
        index = {r: i for i, r in enumerate(pos)}
        roots = set(pos) | {tuple(-x for x in r) for r in pos}
        found = []
        for i, alpha in enumerate(pos):
            beta = tuple(gamma[k] - alpha[k] for k in range(amb.rank))
            if beta not in index or index[beta] < i:
                continue
            if amb.form_value(alpha, beta) != 0:
                continue
            diff = tuple(alpha[k] - beta[k] for k in range(amb.rank))
            if diff in roots:
                continue
            w = amb.reflection_of(alpha, amb.coroot_of_root[alpha]) * amb.reflection_of(
                beta, amb.coroot_of_root[beta]
            )
            if not self._acts_as_gamma_reflection(w, gamma):
                continue
            if not self._preserves_levi_positives(w):
                continue
            if not self._conjugate_to_simple_pair(alpha, beta):
                continue
            found.append(((alpha, beta), w))
        if not found:
            raise SphericalDataError(
                f"spherical root {idx} is not a root and admits no strongly "
                "orthogonal decomposition with a canonical lift"
            )
        if len(found) > 1:
            raise SphericalDataError(
                f"spherical root {idx} admits multiple canonical decompositions"
            )
        return found[0]

    # -- little Weyl group -----------------------------------------------------

    def _restricted_matrix(self, w: WeylElement) -> tuple[tuple[int, ...], ...]:
        cols = []
        for b in self.lattice:
            c = self.lattice_coords(w.apply(b))
            if c is None:
                raise SphericalDataError(
                    "little Weyl group does not preserve the lattice span"
                )
            for x in c:
                if x.denominator != 1:
                    raise SphericalDataError(
                        "little Weyl group does not preserve the lattice"
                    )
            cols.append(tuple(int(x) for x in c))
        k = len(cols)
        return tuple(tuple(cols[j][i] for j in range(k)) for i in range(k))

    @cached_property
    def little_weyl(self) -> LittleWeylGroup:
        gens = [nr.lift for nr in self.normalized_roots]
        e = _identity_element(self.ambient.rank)
        seen = {e.matrix: 0}
        elements = [e]
        frontier = [e]
        while frontier:
            nxt = []
            for w in frontier:
                for g in gens:
                    u = g * w
                    if u.matrix not in seen:
                        seen[u.matrix] = len(elements)
                        elements.append(u)
                        nxt.append(u)
            frontier = nxt
        restricted = tuple(self._restricted_matrix(w) for w in elements)
        gen_idx = tuple(seen[g.matrix] for g in gens)
        return LittleWeylGroup(
            elements=tuple(elements), restricted=restricted, generators=gen_idx
        )

    def little_weyl_group(self) -> LittleWeylGroup:
        return self.little_weyl

    # -- cones and wavefront -----------------------------------------------------

    def sigma_lattice_coords(self) -> tuple[tuple[int, ...], ...]:
        rows = []
        for i, s in enumerate(self.spherical_roots):
            c = self.lattice_coords(s)
            if c is None or any(x.denominator != 1 for x in c):
                raise SphericalDataError(
                    f"spherical root {i} is not in the character lattice"
                )
            rows.append(tuple(int(x) for x in c))
        return tuple(rows)

    def valuation_cone(self) -> Cone:
        """{v : <sigma, v> <= 0 for all spherical roots}, in dual lattice
        coordinates."""
        return Cone(dim=self.rank, ineq_normals=self.sigma_lattice_coords())

    def wavefront_report(self) -> WavefrontReport:
        amb = self.ambient
        gammas = self.normalized_roots
        supports = [
            {i for i, c in enumerate(amb.root_coordinates(nr.gamma)) if c != 0}
            for nr in gammas
        ]
        private = []
        missing = []
        for i, supp in enumerate(supports):
            others = set().union(*(supports[:i] + supports[i + 1 :])) if len(supports) > 1 else set()
            own = sorted(supp - others)
            if own:
                private.append((i, own[0]))
            else:
                missing.append(i)
        support_ok = not missing

        sig = self.sigma_lattice_coords()
        lin_basis = la.nullspace(sig, self.rank)
        central = la.nullspace(amb.simple_roots, amb.rank)
        central_img = [self.project_coweight(z) for z in central]
        center_ok = la.rank(central_img + lin_basis) == la.rank(central_img)

        amb_cone = Cone(dim=amb.rank, ineq_normals=amb.simple_roots)
        rays, lines = amb_cone.rays()
        img_gens = [self.project_coweight(r) for r in rays]
        img_lines = [self.project_coweight(l) for l in lines]
        vrays, vlin = self.valuation_cone().rays()
        cone_ok = True
        uncovered = None
        targets = [la.vec(r) for r in vrays]
        for l in vlin:
            targets.append(la.vec(l))
            targets.append(la.vscale(-1, l))
        for t in targets:
            if not la.cone_member(img_gens, img_lines, t):
                cone_ok = False
                uncovered = tuple(t)
                break
        return WavefrontReport(
            is_wavefront=support_ok and center_ok,
            support_ok=support_ok,
            center_ok=center_ok,
            cone_ok=cone_ok,
            private_simple=tuple(private),
            missing=tuple(missing),
            uncovered=uncovered,
        )

    def is_wavefront(self) -> bool:
        return self.wavefront_report().is_wavefront

    # -- validation -------------------------------------------------------------

    def validate(self) -> tuple[str, ...]:
        """Semantic checks; returns a tuple of problem descriptions."""
        problems = []
        amb = self.ambient
        for i, s in enumerate(self.spherical_roots):
            if not self.in_lattice(s):
                problems.append(f"spherical root {i} is not in the character lattice")
        if la.rank(self.spherical_roots) != len(self.spherical_roots):
            problems.append("spherical roots are linearly dependent")
        for j in self.levi:
            cor = amb.simple_coroots[j]
            if any(la.dot(row, cor) != 0 for row in self.lattice):
                problems.append(
                    f"levi simple root {j} does not annihilate the character lattice"
                )
        levi_cors = [la.vec(amb.simple_coroots[j]) for j in self.levi]
        base_rank = la.rank(levi_cors)
        for c in amb.positive_coroots:
            if all(la.dot(row, c) == 0 for row in self.lattice):
                if la.rank(levi_cors + [la.vec(c)]) != base_rank:
                    problems.append(
                        f"coroot {c} annihilates the lattice but is outside the "
                        "Levi coroot span"
                    )
        if problems:
            return tuple(problems)
        try:
            normalized = self.normalized_roots
        except SphericalDataError as e:
            problems.append(str(e))
            return tuple(problems)
        for i, nr in enumerate(normalized):
            if not self._preserves_levi_positives(nr.lift):
                problems.append(
                    f"canonical lift of normalized root {i} moves the positive "
                    "Levi roots"
                )
            if not self._acts_as_gamma_reflection(nr.lift, nr.gamma):
                problems.append(
                    f"canonical lift of normalized root {i} is not the "
                    "gamma-reflection on the lattice"
                )
        for i, a in enumerate(normalized):
            for j, b in enumerate(normalized):
                if i == j:
                    continue
                v = la.dot(a.gamma, b.coroot)
                if v.denominator != 1 or v > 0:
                    problems.append(
                        f"normalized roots {i} and {j} pair to {v}, not a "
                        "nonpositive integer"
                    )
        try:
            self.little_weyl_group()
        except SphericalDataError as e:
            problems.append(str(e))
        if self.valuation_cone_rays is not None:
            derived = self.valuation_cone()
            for r in self.valuation_cone_rays:
                if not derived.contains(r):
                    problems.append(
                        f"declared valuation ray {r} lies outside the computed cone"
                    )
            drays, dlin = derived.rays()
            given = [la.vec(r) for r in self.valuation_cone_rays]
            lines = [la.vec(l) for l in dlin]
            for r in drays:
                if not la.cone_member(given, lines, la.vec(r)):
                    problems.append(
                        f"computed valuation ray {r} is not generated by the "
                        "declared rays"
                    )
        return tuple(problems)

    # -- serialization ------------------------------------------------------------

    def to_dict(self) -> dict:
        d = {
            "ambient": self.ambient.to_dict(),
            "char_lattice_basis": [list(r) for r in self.lattice],
            "levi": list(self.levi),
            "name": self.name,
            "spherical_roots": [list(r) for r in self.spherical_roots],
        }
        if self.valuation_cone_rays is not None:
            d["valuation_cone_rays"] = [list(r) for r in self.valuation_cone_rays]
        return d

    @staticmethod
    def from_dict(data: dict) -> "SphericalDatum":
        rays = data.get("valuation_cone_rays")
        return SphericalDatum(
            ambient=RootDatum.from_dict(data["ambient"]),
            lattice=tuple(tuple(r) for r in data["char_lattice_basis"]),
            spherical_roots=tuple(tuple(r) for r in data["spherical_roots"]),
            levi=tuple(data.get("levi", ())),
            valuation_cone_rays=tuple(tuple(r) for r in rays) if rays else None,
            name=data.get("name", ""),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_json(text: str) -> "SphericalDatum":
        return SphericalDatum.from_dict(json.loads(text))
