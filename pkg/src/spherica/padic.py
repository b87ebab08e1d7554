"""Exact p-adic matrix decompositions and boundary-degeneration orbits.

Everything here is computed over Q with exact rationals; the prime p only
enters through valuations.  The central object is the Cartan decomposition
A = U * D * V of an invertible matrix, where U and V are p-integral with
p-integral inverses and D = diag(p^e1, ..., p^en) with e1 <= ... <= en.
A flag type ``theta`` is a strictly increasing tuple of cut dimensions;
a matrix is theta-large when the exponent jump at every cut is at least a
configured threshold ``t_exp``.

A theta-large matrix degenerates to a :class:`DegenerationPoint`: a
decreasing kernel flag, an increasing image flag, and the invertible maps
induced on the graded pieces, recorded up to one common scalar.  The maps
``to_degeneration`` and ``from_degeneration`` pass between matrices and
degeneration points.  Reassembly uses the coordinate splitting defined by
the point's own frames, so the matrix round trip is exact; the orbit-level
content is that both maps descend to congruence orbits once
``t_exp = 2m + 2`` for the level-m group ``J = 1 + p^m * (p-integral
matrices)``: matrices in one J-orbit degenerate to ``j_equivalent`` points,
and points in one J-orbit reassemble into one ``J * scalars`` class, which
is what :func:`in_j_orbit` decides on the matrix side.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import _linalg as la


class PadicError(ValueError):
    """Raised for inputs outside the domain of the p-adic routines."""


class ThetaGapError(PadicError):
    """Raised when a valuation-gap requirement at the flag cuts fails."""


def _is_prime(p) -> bool:
    if not isinstance(p, int) or p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def pval(x, p: int):
    """p-adic valuation of a rational number; ``math.inf`` for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num = abs(x.numerator)
    while num % p == 0:
        num //= p
        v += 1
    den = x.denominator
    while den % p == 0:
        den //= p
        v -= 1
    return v


def t_exp_for_level(m: int) -> int:
    """Gap threshold that makes degeneration well defined at congruence level m."""
    if not isinstance(m, int) or m < 1:
        raise PadicError(f"congruence level must be a positive integer, got {m!r}")
    return 2 * m + 2


def _frac_rows(rows) -> tuple:
    return tuple(tuple(Fraction(x) for x in r) for r in rows)


def _det(rows) -> Fraction:
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for t in range(n):
        piv = next((i for i in range(t, n) if m[i][t] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != t:
            m[t], m[piv] = m[piv], m[t]
            det = -det
        det *= m[t][t]
        for r in range(t + 1, n):
            f = m[r][t] / m[t][t]
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[t])]
    return det


def _check_theta(theta, n: int) -> tuple:
    theta = tuple(int(d) for d in theta)
    if any(not 0 < d < n for d in theta):
        raise PadicError(f"flag cuts must lie strictly between 0 and {n}, got {theta}")
    if any(a >= b for a, b in zip(theta, theta[1:])):
        raise PadicError(f"flag cuts must increase strictly, got {theta}")
    return theta


@dataclass(frozen=True)
class ValuedMatrix:
    """Invertible square matrix of exact rationals, valued at a prime p."""

    entries: tuple
    p: int

    def __post_init__(self):
        rows = _frac_rows(self.entries)
        object.__setattr__(self, "entries", rows)
        n = len(rows)
        if n < 2 or any(len(r) != n for r in rows):
            raise PadicError("entries must form a square matrix of size at least 2")
        if not _is_prime(self.p):
            raise PadicError(f"p = {self.p!r} is not prime")
        det = _det(rows)
        if det == 0:
            raise PadicError("matrix is singular")
        object.__setattr__(self, "_det", det)

    @classmethod
    def identity(cls, n: int, p: int) -> "ValuedMatrix":
        return cls(la.identity(n), p)

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def det(self) -> Fraction:
        return self._det

    def val(self, i: int, j: int):
        return pval(self.entries[i][j], self.p)

    def min_val(self):
        return min(pval(x, self.p) for row in self.entries for x in row)

    def is_integral(self) -> bool:
        return all(pval(x, self.p) >= 0 for row in self.entries for x in row)

    def _same_prime(self, other: "ValuedMatrix"):
        if self.p != other.p:
            raise PadicError(f"mixed primes {self.p} and {other.p}")

    def __matmul__(self, other: "ValuedMatrix") -> "ValuedMatrix":
        self._same_prime(other)
        return ValuedMatrix(la.matmul(self.entries, other.entries), self.p)

    def inverse(self) -> "ValuedMatrix":
        return ValuedMatrix(la.inverse(self.entries), self.p)

    def scale(self, c) -> "ValuedMatrix":
        c = Fraction(c)
        if c == 0:
            raise PadicError("scalar must be nonzero")
        return ValuedMatrix(tuple(tuple(c * x for x in row) for row in self.entries), self.p)

    def pgl_normalized(self) -> "ValuedMatrix":
        """Rescale by a power of p so that val(det) lands in [0, n)."""
        v = pval(self.det, self.p)
        shift = v // self.n
        if shift == 0:
            return self
        return self.scale(Fraction(self.p) ** -shift)

    def to_dict(self) -> dict:
        return {"p": self.p, "entries": [[str(x) for x in row] for row in self.entries]}

    @classmethod
    def from_dict(cls, data: dict) -> "ValuedMatrix":
        return cls(tuple(tuple(Fraction(x) for x in row) for row in data["entries"]), int(data["p"]))


def _exponents_rows(rows, p: int) -> tuple:
    """Elementary-divisor valuations of an invertible rational matrix."""
    n = len(rows)
    m = [list(map(Fraction, r)) for r in rows]
    out = []
    for t in range(n):
        best, bestval = None, None
        for i in range(t, n):
            for j in range(t, n):
                if m[i][j] != 0:
                    v = pval(m[i][j], p)
                    if bestval is None or v < bestval:
                        best, bestval = (i, j), v
        if best is None:
            raise PadicError("matrix is singular")
        bi, bj = best
        if bi != t:
            m[t], m[bi] = m[bi], m[t]
        if bj != t:
            for row in m:
                row[t], row[bj] = row[bj], row[t]
        piv = m[t][t]
        for r in range(t + 1, n):
            f = m[r][t] / piv
            if f:
                m[r] = [a - f * b for a, b in zip(m[r], m[t])]
        for c in range(t + 1, n):
            f = m[t][c] / piv
            if f:
                for row in m:
                    row[c] -= f * row[t]
        out.append(bestval)
    return tuple(out)


def elementary_exponents(a: ValuedMatrix) -> tuple:
    return _exponents_rows(a.entries, a.p)


def cartan(a: ValuedMatrix):
    """Decompose a = u @ d @ v with p-unimodular u, v and d = diag(p^e), e sorted.

    The pivot with minimal valuation is promoted at every step, so the
    eliminations only ever multiply by p-integral factors and u, v stay
    p-integral with p-integral inverses.
    """
    p, n = a.p, a.n
    m = [list(r) for r in a.entries]
    u = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    v = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    for t in range(n):
        best, bestval = None, None
        for i in range(t, n):
            for j in range(t, n):
                if m[i][j] != 0:
                    w = pval(m[i][j], p)
                    if bestval is None or w < bestval:
                        best, bestval = (i, j), w
        if best is None:
            raise PadicError("matrix is singular")
        bi, bj = best
        if bi != t:
            m[t], m[bi] = m[bi], m[t]
            for row in u:
                row[t], row[bi] = row[bi], row[t]
        if bj != t:
            for row in m:
                row[t], row[bj] = row[bj], row[t]
            v[t], v[bj] = v[bj], v[t]
        piv = m[t][t]
        for r in range(t + 1, n):
            f = m[r][t] / piv
            if f:
                m[r] = [a_ - f * b_ for a_, b_ in zip(m[r], m[t])]
                for row in u:
                    row[t] += f * row[r]
        for c in range(t + 1, n):
            f = m[t][c] / piv
            if f:
                for row in m:
                    row[c] -= f * row[t]
                v[t] = [a_ + f * b_ for a_, b_ in zip(v[t], v[c])]
    exps = [pval(m[k][k], p) for k in range(n)]
    for k in range(n):
        unit = m[k][k] / Fraction(p) ** exps[k]
        for row in u:
            row[k] *= unit
    d = [[Fraction(p) ** exps[k] if k == c else Fraction(0) for c in range(n)] for k in range(n)]
    return ValuedMatrix(u, p), ValuedMatrix(d, p), ValuedMatrix(v, p)


def is_theta_large(a: ValuedMatrix, theta, t_exp: int) -> bool:
    """Do the Cartan exponents of a jump by at least t_exp at every cut?"""
    theta = _check_theta(theta, a.n)
    e = elementary_exponents(a)
    return all(e[d] - e[d - 1] >= t_exp for d in theta)


# ---------------------------------------------------------------------------
# p-local lattices attached to flags, and flag-adapted bases.
#
# Saturations, adapted bases and congruence witnesses are only ever consumed
# modulo a power of p, so they are computed with entries reduced to canonical
# representatives mod p^M for a working precision M carrying enough slack;
# global normal forms over the integers would blow up on the frame sizes that
# appear here.


def _rep(x, p: int, pM: int) -> int:
    """Representative in [0, p^M) of a p-integral rational."""
    x = Fraction(x)
    return x.numerator * pow(x.denominator % pM, -1, pM) % pM


def _int_val(x: int, p: int, cap: int) -> int:
    """Valuation of an integer representative, capped at the precision."""
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def _matmul_mod(a, b, pM: int):
    k, cols = len(b), len(b[0])
    return [
        [sum(row[t] * b[t][j] for t in range(k)) % pM for j in range(cols)] for row in a
    ]


def _inv_mod(rows, p: int, pM: int):
    n = len(rows)
    aug = [
        [rows[i][j] % pM for j in range(n)] + [1 if i == j else 0 for j in range(n)]
        for i in range(n)
    ]
    for t in range(n):
        r = next((i for i in range(t, n) if aug[i][t] % p), None)
        if r is None:
            raise PadicError("matrix is not invertible at p")
        aug[t], aug[r] = aug[r], aug[t]
        inv = pow(aug[t][t], -1, pM)
        aug[t] = [x * inv % pM for x in aug[t]]
        for i in range(n):
            if i != t and aug[i][t]:
                f = aug[i][t]
                aug[i] = [(x - f * y) % pM for x, y in zip(aug[i], aug[t])]
    return [row[n:] for row in aug]


def _reduce_step(row, basis, pivots, p: int, M: int, pM: int):
    """Eliminate known pivots, then strip p until a unit entry appears.

    Returns the reduced row, or None when the row dies in the current span.
    Stripping p keeps the row inside any p-saturated lattice containing it.
    """
    guard = 0
    while True:
        for piv, b in zip(pivots, basis):
            f = row[piv] * pow(b[piv], -1, pM) % pM
            if f:
                row = [(x - f * y) % pM for x, y in zip(row, b)]
        if not any(row):
            return None
        v = min(_int_val(x, p, M) for x in row if x)
        if v == 0:
            return row
        guard += v
        if guard > M:
            raise PadicError("working precision exhausted while reducing a lattice row")
        row = [(x // p ** v) % pM for x in row]


def _sat_columns_mod(frame_rows, cols, p: int, M: int) -> list:
    """Rows of a p-saturated basis for the span of the chosen frame columns.

    Entries are representatives mod p^M; every row is normalized to carry a
    unit pivot, so the basis stays unimodular-extendable mod p.
    """
    pM = p ** M
    n = len(frame_rows)
    basis, pivots = [], []
    for c in cols:
        col = [Fraction(frame_rows[r][c]) for r in range(n)]
        v = min(pval(x, p) for x in col if x != 0)
        row = [_rep(x / Fraction(p) ** v, p, pM) for x in col]
        row = _reduce_step(row, basis, pivots, p, M, pM)
        if row is None:
            raise PadicError("frame columns are not independent")
        piv = next(j for j in range(n) if row[j] % p)
        unit = pow(row[piv], -1, pM)
        basis.append([x * unit % pM for x in row])
        pivots.append(piv)
    return [tuple(r) for r in basis]


def _extend_mod(sub_rows, big_rows, p: int, M: int) -> list:
    """Rows inside span(big) completing sub_rows to a basis of span(big).

    All spans are p-saturated lattices presented mod p^M; sub must embed in
    big with torsion-free quotient, else the chain is rejected.
    """
    pM = p ** M
    need = len(big_rows) - len(sub_rows)
    basis, pivots = [], []
    for r in sub_rows:
        row = [x % pM for x in r]
        for piv, b in zip(pivots, basis):
            f = row[piv] * pow(b[piv], -1, pM) % pM
            if f:
                row = [(x - f * y) % pM for x, y in zip(row, b)]
        piv = next((j for j in range(len(row)) if row[j] % p), None)
        if piv is None:
            raise PadicError("flag members are not nested")
        unit = pow(row[piv], -1, pM)
        basis.append([x * unit % pM for x in row])
        pivots.append(piv)
    out = []
    for r in big_rows:
        if len(out) == need:
            break
        row = _reduce_step([x % pM for x in r], basis, pivots, p, M, pM)
        if row is None:
            continue
        piv = next(j for j in range(len(row)) if row[j] % p)
        unit = pow(row[piv], -1, pM)
        row = [x * unit % pM for x in row]
        out.append(tuple(row))
        basis.append(row)
        pivots.append(piv)
    if len(out) != need:
        raise PadicError("flag members are not nested")
    return out


def _adapted_mod(sats, p: int, M: int, n: int) -> list:
    """Unimodular-mod-p rows such that rows[n - dim_i:] span the i-th lattice.

    ``sats`` is a strictly decreasing chain of saturated mod-p^M row bases.
    """
    rows = [tuple(r) for r in (sats[-1] if sats else [])]
    for level in range(len(sats) - 2, -1, -1):
        rows = _extend_mod(rows, sats[level], p, M) + rows
    top = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    return _extend_mod(rows, top, p, M) + rows


def _chain_witness(sats_a, sats_b, p: int, m: int, n: int, M: int):
    """An integer matrix in 1 + p^m*(integral) carrying chain b onto chain a.

    Both arguments are decreasing chains of saturated mod-p^M row bases with
    matching dimensions.  None means the chains are not congruent mod p^m.
    The witness is exact as a rational matrix: once its congruence check
    passes it is a genuine unit of the level-m group, only its alignment of
    the chains is up to p^M.
    """
    dims = [len(s) for s in sats_a]
    if dims != [len(s) for s in sats_b]:
        return None
    if not sats_a:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    pM = p ** M
    ca = [list(r) for r in zip(*_adapted_mod(sats_a, p, M, n))]
    cb = [list(r) for r in zip(*_adapted_mod(sats_b, p, M, n))]
    t = _matmul_mod(_inv_mod(ca, p, pM), cb, pM)

    def grade(j):
        return sum(1 for d in dims if j >= n - d)

    trunc = []
    for r in range(n):
        row = []
        for c in range(n):
            if grade(r) >= grade(c):
                row.append(t[r][c])
            else:
                if _int_val(t[r][c], p, M) < m:
                    return None
                row.append(0)
        trunc.append(row)
    w = _matmul_mod(_matmul_mod(ca, trunc, pM), _inv_mod(cb, p, pM), pM)
    pm = p ** m
    for i in range(n):
        for j in range(n):
            if (w[i][j] - (1 if i == j else 0)) % pm:
                raise PadicError("flag witness drifted out of the congruence group")
    return w


# ---------------------------------------------------------------------------
# Degeneration points.


@dataclass(frozen=True)
class DegenerationPoint:
    """Two flags plus the invertible maps induced on the graded pieces.

    The kernel flag is decreasing: member i is spanned by the kernel-frame
    columns with index >= theta[i-1].  The image flag is increasing: member i
    is spanned by the first theta[i-1] image-frame columns.  Block i holds the
    matrix of the induced map from kernel grade i to image grade i, written in
    the window columns of the two frames.  Rescaling every block by one common
    scalar gives the same point.
    """

    p: int
    theta: tuple
    kernel_frame: ValuedMatrix
    image_frame: ValuedMatrix
    blocks: tuple

    def __post_init__(self):
        n = self.kernel_frame.n
        theta = _check_theta(self.theta, n)
        object.__setattr__(self, "theta", theta)
        if self.image_frame.n != n:
            raise PadicError("frames must have the same size")
        if self.kernel_frame.p != self.p or self.image_frame.p != self.p:
            raise PadicError("frames must carry the same prime as the point")
        blocks = tuple(_frac_rows(b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        if len(blocks) != len(theta) + 1:
            raise PadicError(f"expected {len(theta) + 1} blocks, got {len(blocks)}")
        for (lo, hi), b in zip(self.windows, blocks):
            size = hi - lo
            if len(b) != size or any(len(r) != size for r in b):
                raise PadicError(f"block for window {(lo, hi)} must be {size} x {size}")
            if _det(b) == 0:
                raise PadicError("graded blocks must be invertible")

    @property
    def n(self) -> int:
        return self.kernel_frame.n

    @property
    def cuts(self) -> tuple:
        return (0,) + self.theta + (self.n,)

    @property
    def windows(self) -> tuple:
        c = (0,) + tuple(self.theta) + (len(self.kernel_frame.entries),)
        return tuple((c[i], c[i + 1]) for i in range(len(c) - 1))

    def _precision(self, m: int = 0) -> int:
        """Working p-power precision with slack for saturation and witnesses."""
        span = 0
        for frame in (self.kernel_frame, self.image_frame):
            for row in frame.entries:
                for x in row:
                    if x != 0:
                        span = max(span, abs(pval(x, self.p)))
            span = max(span, abs(pval(frame.det, self.p)))
        for b in self.blocks:
            for row in b:
                for x in row:
                    if x != 0:
                        span = max(span, abs(pval(x, self.p)))
        return m + 4 * self.n * (span + 2) + 8

    def kernel_lattice(self, i: int, precision: Optional[int] = None) -> list:
        """Saturated basis rows of kernel-flag member i (1-based), mod p^precision."""
        M = precision if precision is not None else self._precision()
        return _sat_columns_mod(
            self.kernel_frame.entries, range(self.theta[i - 1], self.n), self.p, M
        )

    def image_lattice(self, i: int, precision: Optional[int] = None) -> list:
        M = precision if precision is not None else self._precision()
        return _sat_columns_mod(
            self.image_frame.entries, range(0, self.theta[i - 1]), self.p, M
        )

    def _frame_cols(self, kernel: bool, i: int) -> list:
        frame = self.kernel_frame.entries if kernel else self.image_frame.entries
        d = self.theta[i - 1]
        cols = range(d, self.n) if kernel else range(0, d)
        return [tuple(frame[r][c] for r in range(self.n)) for c in cols]

    def scaled(self, c) -> "DegenerationPoint":
        c = Fraction(c)
        if c == 0:
            raise PadicError("scalar must be nonzero")
        blocks = tuple(tuple(tuple(c * x for x in row) for row in b) for b in self.blocks)
        return DegenerationPoint(self.p, self.theta, self.kernel_frame, self.image_frame, blocks)

    def _compatible(self, other: "DegenerationPoint") -> bool:
        return self.p == other.p and self.theta == other.theta and self.n == other.n

    def _graded_transport(self, other: "DegenerationPoint"):
        """other's blocks rewritten in self's frame coordinates (equal flags)."""
        xk = la.matmul(la.inverse(self.kernel_frame.entries), other.kernel_frame.entries)
        xi = la.matmul(la.inverse(self.image_frame.entries), other.image_frame.entries)
        out = []
        for (lo, hi), b in zip(self.windows, other.blocks):
            mk = [row[lo:hi] for row in xk[lo:hi]]
            mi = [row[lo:hi] for row in xi[lo:hi]]
            try:
                mk_inv = la.inverse(mk)
            except ValueError:
                return None
            out.append(la.matmul(la.matmul(mi, b), mk_inv))
        return tuple(out)

    def _flags_equal(self, other: "DegenerationPoint") -> bool:
        for i in range(1, len(self.theta) + 1):
            for kernel in (True, False):
                mine = self._frame_cols(kernel, i)
                theirs = other._frame_cols(kernel, i)
                if la.rank(mine + theirs) != len(mine):
                    return False
        return True

    def same_point(self, other: "DegenerationPoint") -> bool:
        """Exact equality: equal flags and blocks matching up to one scalar."""
        if not self._compatible(other):
            return False
        if not self._flags_equal(other):
            return False
        transported = self._graded_transport(other)
        if transported is None:
            return False
        scalar = None
        for mine, theirs in zip(self.blocks, transported):
            for rm, rt in zip(mine, theirs):
                for a, b in zip(rm, rt):
                    if a == 0 and b == 0:
                        continue
                    if a == 0 or b == 0:
                        return False
                    if scalar is None:
                        scalar = b / a
                    elif b / a != scalar:
                        return False
        return scalar is not None

    def j_equivalent(self, other: "DegenerationPoint", m: int) -> bool:
        """Are the two points related by the level-m congruence group?

        Flags are compared through their saturated lattices mod p^m; the
        blocks are then compared up to one common scalar after moving the
        other point onto the same flags by an explicit witness.  The block
        test is exact whenever each block is a p-power times a p-unimodular
        matrix, and is sufficient in general.
        """
        if not isinstance(m, int) or m < 1:
            raise PadicError(f"congruence level must be a positive integer, got {m!r}")
        if not self._compatible(other):
            return False
        k, n, p = len(self.theta), self.n, self.p
        M = max(self._precision(m), other._precision(m))
        wk = _chain_witness(
            [self.kernel_lattice(i, M) for i in range(1, k + 1)],
            [other.kernel_lattice(i, M) for i in range(1, k + 1)],
            p, m, n, M,
        )
        if wk is None:
            return False
        wi = _chain_witness(
            [self.image_lattice(i, M) for i in range(k, 0, -1)],
            [other.image_lattice(i, M) for i in range(k, 0, -1)],
            p, m, n, M,
        )
        if wi is None:
            return False
        moved = DegenerationPoint(
            p,
            self.theta,
            ValuedMatrix(la.matmul(wk, other.kernel_frame.entries), p),
            ValuedMatrix(la.matmul(wi, other.image_frame.entries), p),
            other.blocks,
        )
        transported = self._graded_transport(moved)
        if transported is None:
            return False
        anchor = min(
            ((i, j) for i in range(len(self.blocks[0])) for j in range(len(self.blocks[0]))),
            key=lambda ij: pval(self.blocks[0][ij[0]][ij[1]], p),
        )
        base = self.blocks[0][anchor[0]][anchor[1]]
        scalar = transported[0][anchor[0]][anchor[1]] / base
        if scalar == 0:
            return False
        for mine, theirs in zip(self.blocks, transported):
            rel = la.matmul(la.inverse(mine), theirs)
            size = len(rel)
            for i in range(size):
                for j in range(size):
                    x = rel[i][j] / scalar - (1 if i == j else 0)
                    if pval(x, p) < m:
                        return False
        return True

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "theta": list(self.theta),
            "kernel_frame": self.kernel_frame.to_dict(),
            "image_frame": self.image_frame.to_dict(),
            "blocks": [[[str(x) for x in row] for row in b] for b in self.blocks],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DegenerationPoint":
        return cls(
            int(data["p"]),
            tuple(int(d) for d in data["theta"]),
            ValuedMatrix.from_dict(data["kernel_frame"]),
            ValuedMatrix.from_dict(data["image_frame"]),
            tuple(
                tuple(tuple(Fraction(x) for x in row) for row in b) for b in data["blocks"]
            ),
        )


# ---------------------------------------------------------------------------
# The two transfer maps.


def to_degeneration(a: ValuedMatrix, theta, t_exp: int) -> DegenerationPoint:
    """Degenerate a theta-large matrix to flags plus graded blocks."""
    theta = _check_theta(theta, a.n)
    u, d, v = cartan(a)
    exps = [pval(d.entries[i][i], a.p) for i in range(a.n)]
    for cut in theta:
        if exps[cut] - exps[cut - 1] < t_exp:
            raise ThetaGapError(
                f"exponent jump {exps[cut] - exps[cut - 1]} at cut {cut} is below {t_exp}"
            )
    cuts = (0,) + theta + (a.n,)
    blocks = []
    for i in range(len(cuts) - 1):
        lo, hi = cuts[i], cuts[i + 1]
        blocks.append(tuple(tuple(d.entries[r][c] for c in range(lo, hi)) for r in range(lo, hi)))
    return DegenerationPoint(a.p, theta, v.inverse(), u, tuple(blocks))


def _validate_splitting(z: DegenerationPoint, frame_rows, kernel: bool):
    n, p = z.n, z.p
    rows = _frac_rows(frame_rows)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise PadicError("splitting frames must be square of the point's size")
    if _det(rows) == 0:
        raise PadicError("splitting frames must be invertible")
    for i in range(1, len(z.theta) + 1):
        d = z.theta[i - 1]
        cols = range(d, n) if kernel else range(0, d)
        span = [tuple(rows[r][c] for r in range(n)) for c in cols]
        ref = z._frame_cols(kernel, i)
        if la.rank(span + ref) != len(ref):
            raise PadicError("splitting frame is not adapted to the flag")
    return rows


def from_degeneration(
    z: DegenerationPoint,
    t_exp: int,
    theta=None,
    splitting: Optional[tuple] = None,
) -> ValuedMatrix:
    """Reassemble a matrix from a degeneration point through a flag splitting.

    The splitting defaults to the coordinate one carried by the point's own
    frames; a custom pair (kernel frame, image frame) of invertible matrices
    adapted to the flags may be supplied.  The point must satisfy the graded
    valuation-gap bound for t_exp, measured in the saturated integral
    structure of the flags so the verdict does not depend on the frames;
    otherwise ThetaGapError is raised.
    """
    if theta is not None and _check_theta(theta, z.n) != z.theta:
        raise PadicError(f"flag type {tuple(theta)} does not match the point's {z.theta}")
    n, p, k = z.n, z.p, len(z.theta)
    e_rows = _frac_rows(z.kernel_frame.entries)
    f_rows = _frac_rows(z.image_frame.entries)
    einv = la.inverse(e_rows)
    finv = la.inverse(f_rows)
    if all(
        pval(x, p) >= 0
        for rows in (e_rows, einv, f_rows, finv)
        for row in rows
        for x in row
    ):
        # unimodular frames already give integral bases of the graded pieces
        spans = [_exponents_rows(b, p) for b in z.blocks]
    else:
        M = z._precision()
        ck_meas = la.transpose(
            _adapted_mod([z.kernel_lattice(i, M) for i in range(1, k + 1)], p, M, n)
        )
        image_rows = _adapted_mod([z.image_lattice(i, M) for i in range(k, 0, -1)], p, M, n)
        ci_meas = la.transpose(image_rows[::-1])
        tk_meas = la.matmul(einv, ck_meas)
        ti_meas = la.matmul(la.inverse(ci_meas), f_rows)
        spans = []
        for (lo, hi), b in zip(z.windows, z.blocks):
            mk = [row[lo:hi] for row in tk_meas[lo:hi]]
            mi = [row[lo:hi] for row in ti_meas[lo:hi]]
            spans.append(_exponents_rows(la.matmul(la.matmul(mi, b), mk), p))
    for i in range(len(spans) - 1):
        gap = min(spans[i + 1]) - max(spans[i])
        if gap < t_exp:
            raise ThetaGapError(
                f"graded exponent gap {gap} after window {i + 1} is below {t_exp}"
            )
    if splitting is None:
        ck, ci = e_rows, f_rows
    else:
        ck_raw, ci_raw = splitting
        if isinstance(ck_raw, ValuedMatrix):
            ck_raw = ck_raw.entries
        if isinstance(ci_raw, ValuedMatrix):
            ci_raw = ci_raw.entries
        ck = _validate_splitting(z, ck_raw, kernel=True)
        ci = _validate_splitting(z, ci_raw, kernel=False)
    tk = la.matmul(einv, ck)
    ti = la.matmul(la.inverse(ci), f_rows)
    graded = []
    for (lo, hi), b in zip(z.windows, z.blocks):
        mk = [row[lo:hi] for row in tk[lo:hi]]
        mi = [row[lo:hi] for row in ti[lo:hi]]
        graded.append(la.matmul(la.matmul(mi, b), mk))
    assembled = [[Fraction(0)] * n for _ in range(n)]
    for (lo, hi), g in zip(z.windows, graded):
        for i in range(hi - lo):
            for j in range(hi - lo):
                assembled[lo + i][lo + j] = g[i][j]
    out = la.matmul(la.matmul(ci, assembled), la.inverse(ck))
    return ValuedMatrix(out, p)


def in_j_orbit(a: ValuedMatrix, b: ValuedMatrix, m: int) -> bool:
    """Is b in a * J * scalars with J = 1 + p^m * (p-integral matrices)?"""
    if not isinstance(m, int) or m < 1:
        raise PadicError(f"congruence level must be a positive integer, got {m!r}")
    a._same_prime(b)
    if a.n != b.n:
        return False
    rel = la.matmul(la.inverse(a.entries), b.entries)
    c = rel[0][0]
    if c == 0:
        return False
    for i in range(a.n):
        for j in range(a.n):
            x = rel[i][j] / c - (1 if i == j else 0)
            if pval(x, a.p) < m:
                return False
    return True


# ---------------------------------------------------------------------------
# Random instances.


def _unit_choices(p: int) -> list:
    return [u for u in (1, -1, 3, 5, 7) if u % p][:4]


def random_unimodular(rng, n: int, p: int) -> ValuedMatrix:
    """Random p-integral matrix with p-integral inverse (shear/permutation words)."""
    rows = [list(r) for r in la.identity(n)]
    units = _unit_choices(p)
    for _ in range(2):
        perm = list(range(n))
        rng.shuffle(perm)
        rows = [[rows[i][perm[j]] for j in range(n)] for i in range(n)]
        upper = [
            [Fraction(1) if i == j else Fraction(rng.randint(-2, 2)) if i < j else Fraction(0) for j in range(n)]
            for i in range(n)
        ]
        lower = [
            [Fraction(1) if i == j else Fraction(rng.randint(-2, 2)) if i > j else Fraction(0) for j in range(n)]
            for i in range(n)
        ]
        rows = la.matmul(la.matmul(rows, upper), lower)
    scale = [Fraction(rng.choice(units)) for _ in range(n)]
    rows = [[scale[j] * rows[i][j] for j in range(n)] for i in range(n)]
    return ValuedMatrix(rows, p)


def random_theta_large(
    rng,
    n: int,
    p: int,
    theta,
    t_exp: int,
    grade_spread: int = 0,
    scalar: bool = False,
) -> ValuedMatrix:
    """Random theta-large matrix: unimodular sandwich around diag(p^e)."""
    theta = _check_theta(theta, n)
    cuts = (0,) + theta + (n,)
    exps = []
    base = rng.randint(0, 2)
    for i in range(len(cuts) - 1):
        size = cuts[i + 1] - cuts[i]
        block = [base + rng.randint(0, grade_spread) for _ in range(size)]
        exps.extend(block)
        base = max(block) + t_exp + rng.randint(0, 2)
    d = [[Fraction(p) ** exps[i] if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    out = random_unimodular(rng, n, p) @ ValuedMatrix(d, p) @ random_unimodular(rng, n, p)
    if scalar:
        units = _unit_choices(p)
        c = Fraction(p) ** rng.randint(-2, 2) * Fraction(rng.choice(units), rng.choice(units))
        out = out.scale(c)
    return out
