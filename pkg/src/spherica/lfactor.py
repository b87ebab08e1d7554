"""Unramified Plancherel factors kept as exact factored quotients.

The local quantities attached to a spherical datum (the open-cell index Q,
the boundary constant c, and the normalized factors built from them) are
finite products of atoms

    1 - sign * q^(-(a + b*s)) * e^(coweight)

with rational exponents a, b and the coweight written in the dual basis of
the datum's character lattice.  Products are stored in factored form with
Fraction arithmetic; simplification cancels identical atom pairs only, so
the L-function shape of every factor stays visible.  Numeric evaluation
plugs in a residue cardinality q, a shift s, and a torus character given by
declared square roots of its values on the lattice basis.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _linalg as la
from .catalog import ColorAtom
from .degenerations import delta_x_rows
from .spherical import SphericalDatum

__all__ = [
    "Atom",
    "BranchError",
    "Factored",
    "LFactorError",
    "PoleError",
    "SatakeParam",
    "c_factor",
    "l_flat",
    "l_sharp",
    "positive_restricted_roots",
    "q_factor",
    "restricted_roots",
    "whittaker_colors",
]


class LFactorError(ValueError):
    """A factor cannot be built or evaluated from the given data."""


class PoleError(LFactorError):
    """The requested point lies on a pole divisor."""


class BranchError(LFactorError):
    """A coweight needs a square-root branch that was never declared."""


def _exp_str(q_exp: Fraction, s_mult: Fraction) -> str:
    parts = []
    if q_exp != 0:
        parts.append(str(-q_exp))
    if s_mult != 0:
        c = -s_mult
        if c == 1:
            term = "s"
        elif c == -1:
            term = "-s"
        else:
            term = f"{c}s"
        if parts and not term.startswith("-"):
            term = "+" + term
        parts.append(term)
    return "".join(parts) or "0"


@dataclass(frozen=True)
class Atom:
    """One factor 1 - sign * q^(-(q_exp + s_mult*s)) * e^(coweight)."""

    sign: int
    q_exp: Fraction
    s_mult: Fraction
    coweight: tuple

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise LFactorError("atom sign must be +1 or -1")
        object.__setattr__(self, "q_exp", Fraction(self.q_exp))
        object.__setattr__(self, "s_mult", Fraction(self.s_mult))
        object.__setattr__(
            self, "coweight", tuple(Fraction(c) for c in self.coweight)
        )

    def sort_key(self):
        return (self.q_exp, self.s_mult, self.coweight, self.sign)

    def with_s(self, s) -> "Atom":
        """Fold a numeric shift into the q-exponent."""
        s = Fraction(s)
        return Atom(
            self.sign, self.q_exp + self.s_mult * s, Fraction(0), self.coweight
        )

    def is_zero_at(self, s=0) -> bool:
        """True when the atom vanishes identically in q and the character."""
        return (
            self.sign == 1
            and all(c == 0 for c in self.coweight)
            and self.q_exp + self.s_mult * Fraction(s) == 0
        )

    def evaluate(self, q, chi=None, s=0):
        expo = self.q_exp + self.s_mult * Fraction(s)
        term = self.sign * _qpow(q, -expo)
        if any(c != 0 for c in self.coweight):
            if chi is None:
                raise LFactorError(
                    "atom carries a character part but no character was given"
                )
            term = term * chi.e_value(self.coweight)
        return 1 - term

    def to_dict(self) -> dict:
        return {
            "sign": self.sign,
            "q_exp": str(self.q_exp),
            "s_mult": str(self.s_mult),
            "coweight": [str(c) for c in self.coweight],
        }

    @staticmethod
    def from_dict(data: dict) -> "Atom":
        return Atom(
            sign=int(data["sign"]),
            q_exp=Fraction(data["q_exp"]),
            s_mult=Fraction(data["s_mult"]),
            coweight=tuple(Fraction(c) for c in data["coweight"]),
        )

    def __str__(self):
        op = "-" if self.sign == 1 else "+"
        factors = []
        if self.q_exp != 0 or self.s_mult != 0:
            factors.append(f"q^({_exp_str(self.q_exp, self.s_mult)})")
        if any(c != 0 for c in self.coweight):
            factors.append("e[" + ",".join(str(c) for c in self.coweight) + "]")
        rhs = " ".join(factors) or "1"
        return f"(1 {op} {rhs})"


def _qpow(q, expo: Fraction):
    # exact when the exponent is integral and q rational
    if expo.denominator == 1:
        if isinstance(q, (int, Fraction)):
            return Fraction(q) ** int(expo)
        return q ** int(expo)
    if isinstance(q, complex):
        return q ** float(expo)
    return float(q) ** float(expo)


@dataclass(frozen=True, eq=False)
class Factored:
    """Quotient of two atom multisets.

    Equality compares the multisets after cancelling identical atom pairs,
    so two assemblies of the same quotient agree atom for atom.
    """

    numerator: tuple = ()
    denominator: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "numerator", tuple(self.numerator))
        object.__setattr__(self, "denominator", tuple(self.denominator))

    def canceled(self) -> "Factored":
        num = list(self.numerator)
        den = []
        for atom in self.denominator:
            if atom in num:
                num.remove(atom)
            else:
                den.append(atom)
        return Factored(tuple(num), tuple(den))

    def times(self, other: "Factored") -> "Factored":
        return Factored(
            self.numerator + other.numerator,
            self.denominator + other.denominator,
        )

    def over(self, other: "Factored") -> "Factored":
        return Factored(
            self.numerator + other.denominator,
            self.denominator + other.numerator,
        )

    __mul__ = times
    __truediv__ = over

    def with_s(self, s) -> "Factored":
        return Factored(
            tuple(a.with_s(s) for a in self.numerator),
            tuple(a.with_s(s) for a in self.denominator),
        )

    def _normal(self):
        c = self.canceled()
        key = lambda a: a.sort_key()
        return (
            tuple(sorted(c.numerator, key=key)),
            tuple(sorted(c.denominator, key=key)),
        )

    def __eq__(self, other):
        if not isinstance(other, Factored):
            return NotImplemented
        return self._normal() == other._normal()

    def __hash__(self):
        return hash(self._normal())

    def forced_zero_order(self, s=0) -> int:
        """Order of vanishing forced by atoms that are identically zero."""
        up = sum(1 for a in self.numerator if a.is_zero_at(s))
        down = sum(1 for a in self.denominator if a.is_zero_at(s))
        return up - down

    def evaluate(self, q, chi=None, s=0):
        num = Fraction(1)
        for a in self.numerator:
            num = num * a.evaluate(q, chi, s)
        den = Fraction(1)
        for a in self.denominator:
            v = a.evaluate(q, chi, s)
            if v == 0:
                raise PoleError(f"denominator atom {a} vanishes at the given point")
            den = den * v
        return num / den

    def as_fraction(self, q, s=0) -> Fraction:
        """Exact rational value; defined when no atom needs a character or
        a fractional power of q."""
        val = self.evaluate(Fraction(q), None, s)
        if not isinstance(val, Fraction):
            raise LFactorError("value is not exactly rational at these arguments")
        return val

    def to_dict(self) -> dict:
        return {
            "numerator": [a.to_dict() for a in self.numerator],
            "denominator": [a.to_dict() for a in self.denominator],
        }

    @staticmethod
    def from_dict(data: dict) -> "Factored":
        return Factored(
            tuple(Atom.from_dict(a) for a in data["numerator"]),
            tuple(Atom.from_dict(a) for a in data["denominator"]),
        )

    def __str__(self):
        def side(atoms):
            if not atoms:
                return "1"
            counts = {}
            for a in sorted(atoms, key=lambda x: x.sort_key()):
                counts[a] = counts.get(a, 0) + 1
            return " ".join(
                str(a) + (f"^{m}" if m > 1 else "") for a, m in counts.items()
            )

        num = side(self.numerator)
        if not self.denominator:
            return num
        return num + " / " + side(self.denominator)


@dataclass(frozen=True)
class SatakeParam:
    """Unramified character evaluation on the restricted coweight lattice.

    `sqrt_values[i]` is a declared square root of the character's value on
    the i-th basis coweight, so coweights with half-integral coordinates
    have a well-defined evaluation.  `branch_declared` records whether the
    caller chose the roots; when the principal branch was filled in
    automatically the ambiguity is surfaced through `branch_note`.
    """

    sqrt_values: tuple
    branch_declared: bool = True
    q: Optional[object] = None
    s: Optional[object] = None

    def __post_init__(self):
        roots = tuple(complex(v) for v in self.sqrt_values)
        if any(v == 0 for v in roots):
            raise LFactorError("character values must be nonzero")
        object.__setattr__(self, "sqrt_values", roots)

    @classmethod
    def from_values(cls, values: Sequence, q=None, s=None) -> "SatakeParam":
        roots = tuple(cmath.sqrt(complex(v)) for v in values)
        return cls(roots, branch_declared=False, q=q, s=s)

    @property
    def rank(self) -> int:
        return len(self.sqrt_values)

    @property
    def values(self) -> tuple:
        return tuple(v * v for v in self.sqrt_values)

    @property
    def branch_note(self) -> Optional[str]:
        if self.branch_declared:
            return None
        return (
            "square roots were filled in by the principal branch; flip the "
            "sign of an entry of sqrt_values to select the other sheet"
        )

    def e_value(self, coweight: Sequence) -> complex:
        if len(coweight) != len(self.sqrt_values):
            raise LFactorError("coweight length does not match the character rank")
        out = complex(1)
        for root, c in zip(self.sqrt_values, coweight):
            doubled = Fraction(c) * 2
            if doubled.denominator != 1:
                raise BranchError(
                    "coordinate %s needs a root beyond the declared square roots"
                    % c
                )
            out *= root ** int(doubled)
        return out

    def pullback(self, matrix: Sequence[Sequence[int]]) -> "SatakeParam":
        """The character composed with an integer action on coweights.

        Row i of the matrix is the image of the i-th basis coweight, so
        pullback(M).e_value(c) == e_value(c.M).
        """
        rows = [tuple(int(x) for x in row) for row in matrix]
        if len(rows) != len(self.sqrt_values):
            raise LFactorError("matrix size does not match the character rank")
        new = []
        for row in rows:
            if len(row) != len(self.sqrt_values):
                raise LFactorError("matrix size does not match the character rank")
            prod = complex(1)
            for root, m in zip(self.sqrt_values, row):
                prod *= root ** m
            new.append(prod)
        return SatakeParam(
            tuple(new), branch_declared=self.branch_declared, q=self.q, s=self.s
        )

    def to_dict(self) -> dict:
        return {
            "sqrt_values": [[v.real, v.imag] for v in self.sqrt_values],
            "branch_declared": self.branch_declared,
            "q": self.q,
            "s": self.s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SatakeParam":
        def as_complex(x):
            if isinstance(x, (list, tuple)):
                return complex(x[0], x[1])
            return complex(x)

        q = data.get("q")
        s = data.get("s")
        if "sqrt_values" in data:
            roots = tuple(as_complex(x) for x in data["sqrt_values"])
            return cls(roots, branch_declared=True, q=q, s=s)
        return cls.from_values([as_complex(x) for x in data["values"]], q=q, s=s)


# -- restricted root system ----------------------------------------------


def _reflection_matrices(d: SphericalDatum) -> tuple:
    lw = d.little_weyl_group()
    seen = {}
    for w, m in zip(lw.elements, lw.restricted):
        if m not in seen:
            seen[m] = lw.restriction_of(w.inverse())
    return tuple(seen.items())


def _datum_of(d) -> SphericalDatum:
    return d.datum if hasattr(d, "datum") else d


def restricted_roots(d) -> tuple:
    """All (root, coroot) pairs of the restricted system.

    Roots are integer vectors in lattice coordinates, coroots Fraction
    vectors in the dual basis.  Each simple pair is read off the rank-one
    part of its reflection matrix and the rest is the orbit under the
    little Weyl group.
    """
    d = _datum_of(d)
    if not d.spherical_roots:
        return ()
    mats = _reflection_matrices(d)
    k = d.rank
    simple = []
    for g in delta_x_rows(d):
        found = None
        for m, m_inv in mats:
            if tuple(int(x) for x in la.matvec(m, g)) != tuple(-x for x in g):
                continue
            diff = [
                [(1 if i == j else 0) - m[i][j] for j in range(k)]
                for i in range(k)
            ]
            if la.rank(diff) != 1:
                continue
            piv = next(i for i, x in enumerate(g) if x != 0)
            c = tuple(Fraction(diff[piv][j], g[piv]) for j in range(k))
            outer_ok = all(
                diff[i][j] == g[i] * c[j] for i in range(k) for j in range(k)
            )
            if outer_ok and la.dot(g, c) == 2:
                found = (tuple(int(x) for x in g), c)
                break
        if found is None:
            raise LFactorError("no reflection realizes a simple restricted root")
        simple.append(found)
    out = set()
    for m, m_inv in mats:
        for g, c in simple:
            out.add(
                (
                    tuple(int(x) for x in la.matvec(m, g)),
                    tuple(Fraction(x) for x in la.vecmat(c, m_inv)),
                )
            )
    return tuple(sorted(out))


def positive_restricted_roots(d) -> tuple:
    """The pairs of restricted_roots whose root side is a nonnegative
    combination of the simple restricted roots."""
    d = _datum_of(d)
    rows = delta_x_rows(d)
    out = []
    for g, c in restricted_roots(d):
        coords = la.solve(la.transpose(rows), la.vec(g))
        if coords is not None and all(x >= 0 for x in coords):
            out.append((g, c))
    return tuple(out)


# -- the factors -----------------------------------------------------------


def _resolve(d, colors, whittaker):
    entry = d if hasattr(d, "datum") else None
    d = _datum_of(d)
    if entry is not None:
        if colors is None:
            colors = entry.colors
        if whittaker is None:
            whittaker = entry.whittaker
    triples = []
    for c in colors or ():
        if isinstance(c, ColorAtom):
            theta, sign, r = c.theta, c.sign, c.q_exp
        else:
            theta, sign, r = c
        theta = tuple(Fraction(x) for x in theta)
        if len(theta) != d.rank:
            raise LFactorError("color coweight length does not match the rank")
        if all(x == 0 for x in theta):
            raise LFactorError("color coweight must be nonzero")
        if int(sign) not in (1, -1):
            raise LFactorError("color sign must be +1 or -1")
        triples.append((theta, int(sign), Fraction(r)))
    return d, tuple(triples), bool(whittaker)


def _zero(d: SphericalDatum) -> tuple:
    return (Fraction(0),) * d.rank


def _finish(f: Factored, q, chi, s):
    if chi is not None:
        q = chi.q if q is None else q
        s = chi.s if s is None else s
    if s is None and q is not None:
        s = 0
    if s is not None:
        f = f.with_s(s)
        for a in f.denominator:
            if a.is_zero_at(0):
                raise PoleError(
                    f"denominator atom {a} vanishes identically at s = {s}"
                )
    if q is None:
        return f
    return f.evaluate(q, chi, 0)


def _q_build(d: SphericalDatum) -> Factored:
    amb = d.ambient
    levi_pos = set(amb.levi_positive_roots(d.levi))
    zero = _zero(d)
    num, den = [], []
    for root in amb.positive_roots:
        if root in levi_pos:
            continue
        h = la.dot(amb.rho(), amb.coroot_of_root[root])
        if h == 0:
            raise PoleError("a coroot outside the Levi pairs to zero with rho")
        num.append(Atom(1, 1 + h, 2 * h, zero))
        den.append(Atom(1, h, 2 * h, zero))
    return Factored(tuple(num), tuple(den))


def q_factor(d, q=None, s=None):
    """Index of the open cell of the parabolic attached to the datum.

    Product over coroots outside the Levi of (1 - q^{-1} e^a)/(1 - e^a)
    evaluated on the (1/2 + s) power of the modulus character, with the
    calibration e^a(delta^t) = q^(-2t<rho, a>).  Returns the factored form,
    or its value when q is given.
    """
    d = _datum_of(d)
    return _finish(_q_build(d), q, None, s)


def _modular_coords(d: SphericalDatum) -> tuple:
    amb = d.ambient
    bar = la.vsub(la.vec(amb.rho()), la.vec(amb.rho_levi(d.levi)))
    t = d.lattice_coords(bar)
    if t is None:
        raise LFactorError(
            "the parabolic modulus character is not in the span of the lattice"
        )
    return t


def _c_build(d: SphericalDatum, triples, whittaker: bool) -> Factored:
    if whittaker:
        return Factored()
    t = _modular_coords(d)
    zero = _zero(d)
    num, den = [], []
    for theta, sign, r in triples:
        h = la.dot(t, theta)
        num.append(Atom(sign, r + h, 2 * h, zero))
    for _, c in positive_restricted_roots(d):
        h = la.dot(t, c)
        if h == 0:
            raise PoleError(
                "a restricted coroot pairs to zero with the parabolic modulus"
            )
        den.append(Atom(1, h, 2 * h, zero))
    return Factored(tuple(num), tuple(den))


def c_factor(d, q=None, s=None, colors=None, whittaker=None):
    """Boundary constant of the datum.

    Quotient over the color data and the positive restricted coroots of
    (1 - sign q^{-r} e^theta)/(1 - e^gamma) on the (1/2 + s) power of the
    parabolic modulus; a Whittaker-flagged datum short-circuits to 1.
    """
    d, triples, wh = _resolve(d, colors, whittaker)
    return _finish(_c_build(d, triples, wh), q, None, s)


def _chi_parts(d: SphericalDatum, triples):
    num = [Atom(1, 1, 1, c) for _, c in restricted_roots(d)]
    den = []
    for theta, sign, r in triples:
        den.append(Atom(sign, r, 1, theta))
        den.append(Atom(sign, r, 1, tuple(-x for x in theta)))
    return num, den


def l_sharp(d, colors=None, chi=None, q=None, s=None, whittaker=None):
    """Normalized local factor c^2/Q times the character quotient.

    The character part multiplies (1 - q^{-1-s} e^gamma) over the whole
    restricted coroot system against (1 - sign q^{-r-s} e^theta) over the
    sign-symmetrized color data, and the constant part is divided by
    (1 - q^{-1-s})^(2 rank) so the rank-one torus datum reproduces the
    reference quotient exactly.
    """
    d, triples, wh = _resolve(d, colors, whittaker)
    cfac = _c_build(d, triples, wh)
    qfac = _q_build(d)
    chi_num, chi_den = _chi_parts(d, triples)
    zero = _zero(d)
    num = list(cfac.numerator) * 2 + list(qfac.denominator) + chi_num
    den = list(cfac.denominator) * 2 + list(qfac.numerator) + chi_den
    den += [Atom(1, 1, 1, zero)] * (2 * d.rank)
    f = Factored(tuple(num), tuple(den)).canceled()
    return _finish(f, q, chi, s)


def l_flat(d, colors=None, chi=None, q=None, s=None, whittaker=None):
    """Companion factor with a forced zero of order rank at s = 0.

    Same shape as l_sharp but with the character numerator taken at
    exponent -s instead of -1-s, a bare (1 - q^{-s})^rank factor, and a
    single power of the boundary constant.
    """
    d, triples, wh = _resolve(d, colors, whittaker)
    cfac = _c_build(d, triples, wh)
    zero = _zero(d)
    num = list(cfac.numerator) + [Atom(1, 0, 1, zero)] * d.rank
    num += [Atom(1, 0, 1, c) for _, c in restricted_roots(d)]
    den = list(cfac.denominator)
    for theta, sign, r in triples:
        den.append(Atom(sign, r, 1, theta))
        den.append(Atom(sign, r, 1, tuple(-x for x in theta)))
    f = Factored(tuple(num), tuple(den)).canceled()
    return _finish(f, q, chi, s)


def whittaker_colors(d) -> tuple:
    """Color data calibrated so the generic boundary-constant formula
    collapses to 1: one color of sign +1 and exponent 0 per positive
    restricted coroot."""
    d = _datum_of(d)
    out = []
    for _, c in positive_restricted_roots(d):
        out.append(
            ColorAtom(
                theta=tuple(Fraction(x) for x in c), sign=1, q_exp=Fraction(0)
            )
        )
    return tuple(out)
