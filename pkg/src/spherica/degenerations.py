"""Boundary-degeneration combinatorics on the restricted coweight space.

Everything lives in the coordinates dual to the character-lattice basis:
a face of the valuation cone is cut out by the normalized spherical roots in
lattice coordinates, the little Weyl group acts through the contragredients
of its restricted matrices, and tiles of a face subspace are indexed by the
little-Weyl elements carrying the face's root subset into the simple set.

The single sign convention used throughout: the distinguished chamber is the
antidominant one (the valuation cone itself), and the chamber attached to a
subset Theta is the face of that cone orthogonal to Theta.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from . import _linalg as la
from .rootdata import Cone
from .spherical import SphericalDatum


@dataclass(frozen=True)
class ThetaFace:
    theta: tuple
    levi_tilde: tuple
    subspace_basis: tuple
    cone: Cone


def delta_x_rows(d: SphericalDatum) -> tuple:
    """Primitive lattice-coordinate vectors of the spherical roots."""
    rows = []
    for coords in d.sigma_lattice_coords():
        rows.append(la.primitive(coords))
    return tuple(rows)


def _check_theta(d: SphericalDatum, theta: Sequence[int]) -> tuple:
    t = tuple(sorted(set(int(i) for i in theta)))
    for i in t:
        if not 0 <= i < len(d.spherical_roots):
            raise ValueError(f"theta index {i} out of range")
    return t


def theta_face(d: SphericalDatum, theta: Sequence[int]) -> ThetaFace:
    t = _check_theta(d, theta)
    rows = delta_x_rows(d)
    k = d.rank
    supp = set(d.levi)
    for i in t:
        coords = d.ambient.root_coordinates(d.normalize_roots()[i].gamma)
        supp.update(j for j, c in enumerate(coords) if c != 0)
    eq = tuple(rows[i] for i in t)
    ineq = tuple(rows[i] for i in range(len(rows)) if i not in t)
    basis = la.nullspace(eq, k) if eq else la.nullspace((), k)
    return ThetaFace(
        theta=t,
        levi_tilde=tuple(sorted(supp)),
        subspace_basis=tuple(tuple(x) for x in basis),
        cone=Cone(dim=k, ineq_normals=ineq, eq_normals=eq),
    )


def _wx_matrices(d: SphericalDatum) -> tuple:
    """Distinct restricted matrices of the little Weyl group, paired with
    the matrices of the inverse elements."""
    lw = d.little_weyl_group()
    seen = {}
    for w, m in zip(lw.elements, lw.restricted):
        if m not in seen:
            seen[m] = lw.restriction_of(w.inverse())
    return tuple(seen.items())


def wx_theta_omega(
    d: SphericalDatum, theta: Sequence[int], omega: Sequence[int]
) -> tuple:
    """Restricted matrices of the little-Weyl elements carrying the root
    subset theta onto omega."""
    t = _check_theta(d, theta)
    o = _check_theta(d, omega)
    rows = delta_x_rows(d)
    source = [rows[i] for i in t]
    target = {rows[i] for i in o}
    if len(t) != len(o):
        return ()
    out = []
    for m, _ in _wx_matrices(d):
        if {tuple(int(x) for x in la.matvec(m, g)) for g in source} == target:
            out.append(m)
    return tuple(out)


def c_of_theta(d: SphericalDatum, theta: Sequence[int]) -> int:
    """Number of little-Weyl elements mapping theta into the simple set."""
    t = _check_theta(d, theta)
    rows = delta_x_rows(d)
    simple = set(rows)
    source = [rows[i] for i in t]
    count = 0
    for m, _ in _wx_matrices(d):
        if all(tuple(int(x) for x in la.matvec(m, g)) in simple for g in source):
            count += 1
    total = 0
    for o in combinations(range(len(rows)), len(t)):
        total += len(wx_theta_omega(d, t, o))
    if total != count:
        raise RuntimeError("chamber count does not match the orbit-sum identity")
    return count


# -- tiling ---------------------------------------------------------------------


@dataclass(frozen=True)
class TilingReport:
    theta: tuple
    tile_count: int
    samples: int
    covered_once: int
    uncovered: tuple
    multiply_covered: tuple
    facets_ok: bool
    facet_failures: tuple

    @property
    def passed(self) -> bool:
        return (
            not self.uncovered
            and not self.multiply_covered
            and self.covered_once == self.samples
            and self.facets_ok
        )

    def to_dict(self) -> dict:
        return {
            "theta": list(self.theta),
            "tile_count": self.tile_count,
            "samples": self.samples,
            "covered_once": self.covered_once,
            "uncovered": [list(v) for v in self.uncovered],
            "multiply_covered": [list(v) for v in self.multiply_covered],
            "facets_ok": self.facets_ok,
            "facet_failures": [str(f) for f in self.facet_failures],
            "passed": self.passed,
        }


def _full_root_rows(d: SphericalDatum) -> tuple:
    rows = delta_x_rows(d)
    out = set()
    for m, _ in _wx_matrices(d):
        for g in rows:
            out.add(tuple(int(x) for x in la.matvec(m, g)))
    return tuple(sorted(out))


def _tiles(d: SphericalDatum, t: tuple) -> tuple:
    """Tiles of the theta subspace: for w with w(theta) = omega simple, the
    pullback of the omega chamber.  Returns per-tile strict-normal rows in
    lattice coordinates."""
    rows = delta_x_rows(d)
    inverse_of = dict(_wx_matrices(d))
    tiles = []
    for o in combinations(range(len(rows)), len(t)):
        for m in wx_theta_omega(d, t, o):
            minv = inverse_of[m]
            normals = []
            for j in range(len(rows)):
                if j not in o:
                    normals.append(
                        tuple(int(x) for x in la.matvec(minv, rows[j]))
                    )
            tiles.append(((o, m), tuple(normals)))
    return tuple(tiles)


def verify_tiling(
    d: SphericalDatum,
    theta: Sequence[int],
    n_samples: int = 10**4,
    seed: int = 0,
) -> TilingReport:
    t = _check_theta(d, theta)
    face = theta_face(d, t)
    basis = face.subspace_basis
    m_dim = len(basis)
    tiles = _tiles(d, t)

    def in_coords(row) -> tuple:
        return tuple(la.dot(row, b) for b in basis)

    tile_normals = [
        [in_coords(r) for r in normals] for _, normals in tiles
    ]
    walls = []
    for g in _full_root_rows(d):
        w = in_coords(g)
        if any(x != 0 for x in w):
            walls.append(w)

    uncovered = []
    multiply = []
    covered_once = 0
    if m_dim == 0:
        # zero-dimensional face: the origin must lie in exactly one tile
        count = sum(1 for normals in tile_normals if not normals)
        if count == 1:
            covered_once = n_samples
        elif count == 0:
            uncovered.append(())
        else:
            multiply.append(())
        samples_done = n_samples
    else:
        rng = np.random.default_rng(seed)
        wall_mat = (
            np.array(walls, dtype=np.int64).T if walls else None
        )
        norm_mats = [
            np.array(rows, dtype=np.int64).T
            if rows
            else np.zeros((m_dim, 0), dtype=np.int64)
            for rows in tile_normals
        ]
        samples_done = 0
        guard = 0
        while samples_done < n_samples:
            guard += 1
            if guard > 200:
                raise RuntimeError("wall rejection rate too high while sampling")
            batch = rng.integers(-1000, 1001, size=(max(n_samples, 1024), m_dim))
            if wall_mat is not None:
                keep = ~np.any(batch @ wall_mat == 0, axis=1)
                batch = batch[keep]
            else:
                batch = batch[~np.all(batch == 0, axis=1)]
            if batch.shape[0] == 0:
                continue
            take = min(batch.shape[0], n_samples - samples_done)
            batch = batch[:take]
            counts = np.zeros(take, dtype=np.int64)
            for nm in norm_mats:
                if nm.shape[1] == 0:
                    counts += 1
                    continue
                counts += np.all(batch @ nm < 0, axis=1)
            samples_done += take
            covered_once += int(np.count_nonzero(counts == 1))
            for idx in np.nonzero(counts == 0)[0][:5]:
                uncovered.append(tuple(int(x) for x in batch[idx]))
            for idx in np.nonzero(counts > 1)[0][:5]:
                multiply.append(tuple(int(x) for x in batch[idx]))

    facet_failures = []
    for (key, _), normals in zip(tiles, tile_normals):
        for i, n0 in enumerate(normals):
            others = [n for j, n in enumerate(normals) if j != i]
            point = la.strict_negative_point(others, [n0], m_dim)
            if point is None:
                continue  # degenerate: not an actual facet
            closed = 0
            interior = 0
            for rows in tile_normals:
                vals = [
                    sum(Fraction(a) * Fraction(x) for a, x in zip(r, point))
                    for r in rows
                ]
                if all(v <= 0 for v in vals):
                    closed += 1
                if all(v < 0 for v in vals):
                    interior += 1
            if closed != 2 or interior != 0:
                facet_failures.append((key, i, closed, interior))

    return TilingReport(
        theta=t,
        tile_count=len(tiles),
        samples=samples_done,
        covered_once=covered_once,
        uncovered=tuple(uncovered),
        multiply_covered=tuple(multiply),
        facets_ok=not facet_failures,
        facet_failures=tuple(facet_failures),
    )


# -- generic injectivity ------------------------------------------------------------


@dataclass(frozen=True)
class InjectivityReport:
    status: str  # "true", "false", or "undecided"
    violation: Optional[dict]
    pairs_checked: int

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "violation": self.violation,
            "pairs_checked": self.pairs_checked,
        }


def _char_subspace(d: SphericalDatum, t: tuple) -> tuple:
    """Basis of the theta-orthogonal part of the rational character span,
    as ambient character vectors."""
    rows = delta_x_rows(d)
    eq = tuple(rows[i] for i in t)
    coeffs = la.nullspace(eq, d.rank) if eq else la.nullspace((), d.rank)
    out = []
    for c in coeffs:
        v = [Fraction(0)] * d.ambient.rank
        for ci, b in zip(c, d.lattice):
            for j in range(d.ambient.rank):
                v[j] += ci * b[j]
        out.append(tuple(v))
    return tuple(out)


def generic_injectivity(d: SphericalDatum) -> InjectivityReport:
    """True when every ambient Weyl element matching two face subspaces acts
    on them like some little-Weyl element."""
    try:
        ambient_weyl = d.ambient.generate_weyl()
    except RuntimeError:
        return InjectivityReport(status="undecided", violation=None, pairs_checked=0)
    lifts = d.little_weyl_group().elements
    r = len(d.spherical_roots)
    subsets = [tuple(c) for size in range(r + 1) for c in combinations(range(r), size)]
    spaces = {t: _char_subspace(d, t) for t in subsets}
    pairs = 0
    for t in subsets:
        vt = spaces[t]
        for o in subsets:
            if len(t) != len(o):
                continue
            vo = spaces[o]
            base_rank = la.rank(vo)
            for w in ambient_weyl:
                images = [w.apply(x) for x in vt]
                if la.rank(list(vo) + images) != base_rank:
                    continue
                pairs += 1
                if any(
                    all(u.apply(x) == img for x, img in zip(vt, images))
                    for u in lifts
                ):
                    continue
                return InjectivityReport(
                    status="false",
                    violation={
                        "theta": list(t),
                        "omega": list(o),
                        "weyl_word": list(d.ambient.reduced_word(w)),
                    },
                    pairs_checked=pairs,
                )
    return InjectivityReport(status="true", violation=None, pairs_checked=pairs)


# -- center surjectivity ----------------------------------------------------------


def center_surjectivity(d: SphericalDatum, theta: Sequence[int]) -> bool:
    """Whether coweights centralizing the theta Levi restrict onto the whole
    theta face subspace."""
    t = _check_theta(d, theta)
    face = theta_face(d, t)
    amb = d.ambient
    levi_rows = tuple(amb.simple_roots[j] for j in face.levi_tilde)
    central = la.nullspace(levi_rows, amb.rank) if levi_rows else la.nullspace((), amb.rank)
    image = [d.project_coweight(c) for c in central]
    return la.rank(image) == d.rank - len(t)


def center_surjectivity_all(d: SphericalDatum) -> bool:
    r = len(d.spherical_roots)
    for size in range(r + 1):
        for t in combinations(range(r), size):
            if not center_surjectivity(d, t):
                return False
    return True
