"""Spectral theory of semi-infinite banded self-adjoint operators.

An operator here acts on square-summable sequences indexed by the natural
numbers: beyond a finite threshold its rows follow a fixed symmetric Toeplitz
band (the "tail"), and a finite symmetric block perturbs the corner.  The
tail's Laurent symbol controls the essential spectrum; bound states are the
square-summable solutions built from the inside-disk roots of the symbol.

Conventions:
  * the circle is parameterized by theta in [0, 1), z = exp(2 pi i theta);
  * the continuous (Plancherel) density at lambda is the sum of |slope|^-1
    over the unimodular roots of P(z) = lambda, so the pushforward of the
    Haar probability measure integrates to 1 over the essential spectrum.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eig_banded

_CIRCLE_TOL = 1e-9


class ScatterError(ValueError):
    pass


class SingularDensityError(ScatterError):
    pass


@dataclass(frozen=True)
class LaurentSymbol:
    """P(z) = sum c_|k| z^k over |k| <= K; real on the unit circle."""

    coeffs: tuple  # (c0, c1, ..., cK)

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ScatterError("symbol needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(float(c) for c in self.coeffs))

    @property
    def radius(self) -> int:
        return len(self.coeffs) - 1

    def value(self, z: complex) -> complex:
        out = complex(self.coeffs[0])
        for d in range(1, len(self.coeffs)):
            out += self.coeffs[d] * (z**d + z**-d)
        return out

    def eval_theta(self, theta: float) -> float:
        out = self.coeffs[0]
        for d in range(1, len(self.coeffs)):
            out += 2.0 * self.coeffs[d] * math.cos(2.0 * math.pi * d * theta)
        return out

    def slope(self, theta: float) -> float:
        out = 0.0
        for d in range(1, len(self.coeffs)):
            out -= 4.0 * math.pi * d * self.coeffs[d] * math.sin(2.0 * math.pi * d * theta)
        return out

    def lambda_roots(self, lam: float) -> np.ndarray:
        """Roots of P(z) = lam, as the 2K roots of the palindromic polynomial."""
        k = self.radius
        if k == 0:
            raise ScatterError("constant symbol has no root structure")
        if self.coeffs[k] == 0:
            raise ScatterError("unsupported symbol: degenerate leading coefficient")
        poly = list(self.coeffs[::-1])  # cK ... c1 c0
        poly[k] -= lam
        poly += list(self.coeffs[1:])  # c1 ... cK
        return np.roots(poly)

    def critical_thetas(self) -> tuple:
        """Points where the slope vanishes."""
        k = self.radius
        if k == 0 or all(c == 0 for c in self.coeffs[1:]):
            return (0.0,)
        # d/dtheta P = -4 pi sum d c_d sin(2 pi d theta); zeros from the
        # palindromic polynomial sum d c_d (z^(K+d) - z^(K-d))
        poly = np.zeros(2 * k + 1)
        for d in range(1, k + 1):
            poly[k - d] += d * self.coeffs[d]
            poly[k + d] -= d * self.coeffs[d]
        poly = np.trim_zeros(poly, "f")
        out = set()
        for z in np.roots(poly):
            if abs(abs(z) - 1.0) < 1e-7:
                out.add(round((cmath.phase(z) / (2 * math.pi)) % 1.0, 12))
        out.update((0.0, 0.5))
        return tuple(sorted(out))

    def band(self) -> tuple:
        vals = [self.eval_theta(t) for t in self.critical_thetas()]
        return (min(vals), max(vals))

    def critical_values(self) -> tuple:
        vals = sorted({round(self.eval_theta(t), 12) for t in self.critical_thetas()})
        return tuple(vals)


@dataclass(frozen=True)
class SemiInfiniteOperator:
    """Banded self-adjoint operator on l2(N) with Toeplitz tail.

    block holds the (M+K) x (M+K) corner; rows at index >= M follow the tail.
    """

    band_radius: int
    tail: tuple
    threshold: int
    block: tuple

    def __post_init__(self):
        k, m = self.band_radius, self.threshold
        if k < 1:
            raise ScatterError("band radius must be at least 1")
        if m < 0:
            raise ScatterError("perturbation threshold must be non-negative")
        if len(self.tail) != k + 1:
            raise ScatterError("tail must list c0..cK")
        object.__setattr__(self, "tail", tuple(float(c) for c in self.tail))
        blk = tuple(tuple(float(x) for x in row) for row in self.block)
        object.__setattr__(self, "block", blk)
        n = m + k
        if len(blk) != n or any(len(row) != n for row in blk):
            raise ScatterError("perturbation block must be (M+K) x (M+K)")
        for i in range(n):
            for j in range(n):
                if blk[i][j] != blk[j][i]:
                    raise ScatterError("perturbation block must be symmetric")
                if abs(i - j) > k and blk[i][j] != 0.0:
                    raise ScatterError("entry outside the band must vanish")
                if max(i, j) >= m:
                    want = self.tail[abs(i - j)] if abs(i - j) <= k else 0.0
                    if blk[i][j] != want:
                        raise ScatterError(
                            "rows at or beyond the threshold must follow the tail"
                        )

    @property
    def corner_size(self) -> int:
        return self.threshold + self.band_radius

    def entry(self, i: int, j: int):
        if i < 0 or j < 0:
            return 0.0
        n = self.corner_size
        if i < n and j < n:
            return self.block[i][j]
        d = abs(i - j)
        return self.tail[d] if d <= self.band_radius else 0.0

    def symbol(self) -> LaurentSymbol:
        return LaurentSymbol(self.tail)

    def gershgorin_bound(self) -> float:
        tail_sum = abs(self.tail[0]) + 2.0 * sum(abs(c) for c in self.tail[1:])
        best = tail_sum
        for i in range(self.corner_size):
            s = sum(
                abs(self.entry(i, j))
                for j in range(max(0, i - self.band_radius), i + self.band_radius + 1)
            )
            best = max(best, s)
        return best

    def apply(self, f: Dict[int, Fraction]) -> Dict[int, Fraction]:
        """Exact image of a finitely-supported vector on N."""
        out: Dict[int, Fraction] = {}
        for j, val in f.items():
            if val == 0:
                continue
            for i in range(max(0, j - self.band_radius), j + self.band_radius + 1):
                a = self.entry(i, j)
                if a != 0.0:
                    out[i] = out.get(i, Fraction(0)) + Fraction(a) * val
        return {i: v for i, v in out.items() if v != 0}

    def to_dict(self) -> dict:
        return {
            "K": self.band_radius,
            "tail": list(self.tail),
            "M": self.threshold,
            "block": [list(row) for row in self.block],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @staticmethod
    def from_dict(data: dict) -> "SemiInfiniteOperator":
        return SemiInfiniteOperator(
            band_radius=int(data["K"]),
            tail=tuple(data["tail"]),
            threshold=int(data["M"]),
            block=tuple(tuple(row) for row in data["block"]),
        )

    @staticmethod
    def from_json(text: str) -> "SemiInfiniteOperator":
        return SemiInfiniteOperator.from_dict(json.loads(text))


def free_jacobi(k: int = 1, c: Optional[Sequence] = None) -> SemiInfiniteOperator:
    """Pure Toeplitz operator with no perturbation (M = 0)."""
    tail = tuple([0.0] + [1.0] * k) if c is None else tuple(c)
    k = len(tail) - 1
    block = tuple(
        tuple(tail[abs(i - j)] if abs(i - j) <= k else 0.0 for j in range(k))
        for i in range(k)
    )
    return SemiInfiniteOperator(band_radius=k, tail=tail, threshold=0, block=block)


def rank_one_perturbed(b: float) -> SemiInfiniteOperator:
    """Free Jacobi with corner entry A_00 = b."""
    return SemiInfiniteOperator(
        band_radius=1, tail=(0.0, 1.0), threshold=1, block=((float(b), 1.0), (1.0, 0.0))
    )


# -- asymptotic basis ------------------------------------------------------------


@lru_cache(maxsize=None)
def _v_vector(op: SemiInfiniteOperator, k: int) -> tuple:
    m_thr, band = op.threshold, op.band_radius
    if k >= m_thr + band:
        return ((k, Fraction(1)),)
    ck = Fraction(op.tail[band])
    if ck == 0:
        raise ScatterError("unsupported symbol: degenerate leading coefficient")
    m = k + band
    acc: Dict[int, Fraction] = {}
    for n, val in op.apply(dict(_v_vector(op, m))).items():
        acc[n] = acc.get(n, Fraction(0)) + val
    for d in range(-band + 1, band + 1):
        c = Fraction(op.tail[abs(d)])
        if c == 0:
            continue
        for n, val in _v_vector(op, m + d):
            acc[n] = acc.get(n, Fraction(0)) - c * val
    return tuple(sorted((n, val / ck) for n, val in acc.items() if val != 0))


def asymptotics_e(op: SemiInfiniteOperator, k: int) -> Dict[int, Fraction]:
    """Image of the formal basis vector at integer k under the asymptotics map.

    Equals the basis vector itself once k >= M + K; below that it is solved
    by running the tail recurrence downward, which needs cK != 0.
    """
    if op.tail[op.band_radius] == 0:
        raise ScatterError("unsupported symbol: degenerate leading coefficient")
    return dict(_v_vector(op, k))


def e_map(op: SemiInfiniteOperator, g: Dict[int, Fraction]) -> Dict[int, Fraction]:
    """Linear extension of asymptotics_e to finitely-supported vectors on Z."""
    out: Dict[int, Fraction] = {}
    for k, coeff in g.items():
        if coeff == 0:
            continue
        for n, val in _v_vector(op, k):
            out[n] = out.get(n, Fraction(0)) + Fraction(coeff) * val
    return {n: v for n, v in out.items() if v != 0}


def toeplitz_apply(tail: Sequence, g: Dict[int, Fraction]) -> Dict[int, Fraction]:
    """Two-sided Toeplitz action on a finitely-supported vector on Z."""
    k = len(tail) - 1
    out: Dict[int, Fraction] = {}
    for m, val in g.items():
        if val == 0:
            continue
        for d in range(-k, k + 1):
            c = Fraction(tail[abs(d)])
            if c == 0:
                continue
            out[m - d] = out.get(m - d, Fraction(0)) + c * Fraction(val)
    return {n: v for n, v in out.items() if v != 0}


# -- discrete spectrum -----------------------------------------------------------


@dataclass(frozen=True)
class EigenPacket:
    """A square-summable eigenvector, stored by its inside-disk root data."""

    eigenvalue: float
    alphas: tuple  # inside-disk roots, conjugate-closed
    q_coefficients: tuple  # coefficient per confluent basis function (root, power)
    basis: tuple  # (root, power) pairs matching q_coefficients
    initial_segment: tuple  # f(0..M+K)
    residual: float

    def value(self, n: int) -> float:
        if n < len(self.initial_segment):
            return self.initial_segment[n]
        out = 0j
        for coeff, (alpha, power) in zip(self.q_coefficients, self.basis):
            out += coeff * (n**power) * (alpha**n)
        return out.real

    @property
    def decay_rate(self) -> float:
        return max(abs(a) for a in self.alphas)

    def norm(self) -> float:
        total = 0.0
        n = 0
        while True:
            x = self.value(n)
            total += x * x
            n += 1
            if n > 64 and (self.decay_rate**n) < 1e-18:
                break
            if n > 200000:
                break
        return math.sqrt(total)

    def overlap(self, f: Dict[int, float]) -> float:
        """Inner product of f with the packet normalized to unit length."""
        raw = sum(float(v) * self.value(n) for n, v in f.items())
        return raw / self.norm()

    def to_dict(self) -> dict:
        return {
            "eigenvalue": self.eigenvalue,
            "alphas": [[a.real, a.imag] for a in self.alphas],
            "residual": self.residual,
            "initial_segment": list(self.initial_segment),
        }


def _inside_factor(symbol: LaurentSymbol, lam: float):
    """Monic polynomial with the strictly-inside roots of P(z) = lam, or None
    if any root sits in the unit-circle tolerance band."""
    roots = symbol.lambda_roots(lam)
    inside = [z for z in roots if abs(z) < 1.0 - _CIRCLE_TOL]
    boundary = [z for z in roots if abs(abs(z) - 1.0) <= _CIRCLE_TOL]
    if boundary:
        return None, tuple(boundary)
    q = np.poly(inside) if inside else np.array([1.0])
    return np.real_if_close(q, tol=1e6).astype(complex), tuple(inside)


def _boundary_matrix(op: SemiInfiniteOperator, lam: float):
    """Square system whose kernel is the space of decaying eigenvectors.

    Unknowns f(0..B+K-1) with B = max(M, K); rows are the B eigen-equations
    at the corner plus K copies of the inside-factor recurrence.
    """
    k, m_thr = op.band_radius, op.threshold
    b = max(m_thr, k)
    q, extra = _inside_factor(op.symbol(), lam)
    if q is None:
        return None, extra
    size = b + k
    mat = np.zeros((size, size))
    for x in range(b):
        for j in range(0, x + k + 1):
            mat[x, j] += op.entry(x, j)
        mat[x, x] -= lam
    qr = q[::-1].real  # ascending: q0 ... q_{deg}, monic
    deg = len(qr) - 1
    for t in range(k):
        n = b - k + t
        row = b + t
        for i in range(deg + 1):
            mat[row, n + i] += qr[i]
        # if fewer than K roots lie inside (cannot happen off the essential
        # spectrum), the remaining columns stay zero and the determinant
        # vanishes identically, which the scan treats as "no information"
    norms = np.linalg.norm(mat, axis=1)
    norms[norms == 0] = 1.0
    return mat / norms[:, None], extra


def _det(op: SemiInfiniteOperator, lam: float) -> Optional[float]:
    mat, _ = _boundary_matrix(op, lam)
    if mat is None:
        return None
    return float(np.linalg.det(mat))


def _truncated_band(op: SemiInfiniteOperator, n: int) -> np.ndarray:
    k = op.band_radius
    band = np.zeros((k + 1, n))
    for d in range(k + 1):
        for j in range(n - d):
            band[d, j] = op.entry(j + d, j)
    return band


def _oracle_eigenpairs(op: SemiInfiniteOperator, lo: float, hi: float, n: int):
    band = _truncated_band(op, n)
    try:
        vals, vecs = eig_banded(
            band, lower=True, select="v", select_range=(lo, hi)
        )
    except Exception:
        return []
    k = op.band_radius
    out = []
    for idx in range(len(vals)):
        v = vecs[:, idx]
        # residual against the untruncated operator: only the K rows just
        # past the cut can differ
        extra = 0.0
        for i in range(n, n + k):
            s = sum(op.entry(i, j) * v[j] for j in range(i - k, n))
            extra += s * s
        res = math.sqrt(extra)
        out.append((float(vals[idx]), v, res))
    return out


def _build_packet(op: SemiInfiniteOperator, lam: float) -> Optional[EigenPacket]:
    mat, _ = _boundary_matrix(op, lam)
    if mat is None:
        return None
    _, svals, vt = np.linalg.svd(mat)
    if svals[-1] > 1e-6 * svals[0]:
        return None
    f_head = vt[-1]  # values f(0 .. B+K-1)
    k, m_thr = op.band_radius, op.threshold
    b = max(m_thr, k)
    roots = [z for z in op.symbol().lambda_roots(lam) if abs(z) < 1.0 - _CIRCLE_TOL]
    # confluent basis: group roots within clustering tolerance
    clusters = []
    for z in sorted(roots, key=lambda w: (w.real, w.imag)):
        for c in clusters:
            if abs(z - c[0]) < 1e-8:
                c.append(z)
                break
        else:
            clusters.append([z])
    basis = []
    for c in clusters:
        center = sum(c) / len(c)
        for power in range(len(c)):
            basis.append((center, power))
    ns = list(range(b - k, b))
    vand = np.array(
        [[(n**p) * (a**n) for (a, p) in basis] for n in ns], dtype=complex
    )
    coeffs = np.linalg.solve(vand, f_head[b - k : b].astype(complex))

    def ansatz(n: int) -> float:
        return sum(
            co * (n**p) * (a**n) for co, (a, p) in zip(coeffs, basis)
        ).real

    seg = [
        float(f_head[n]) if n < b + k else ansatz(n)
        for n in range(m_thr + k + 1)
    ]
    rate = max(abs(a) for a, _ in basis) if basis else 0.0
    # residual over every row that can see the support
    horizon = max(200, b + k)
    while rate > 0 and rate**horizon > 1e-16 and horizon < 20000:
        horizon *= 2

    def f_at(n: int) -> float:
        return float(f_head[n]) if n < b + k else ansatz(n)

    norm2 = 0.0
    res2 = 0.0
    for i in range(horizon):
        fi = f_at(i)
        norm2 += fi * fi
        s = -lam * fi
        for j in range(max(0, i - k), i + k + 1):
            a = op.entry(i, j)
            if a != 0.0:
                s += a * f_at(j)
        res2 += s * s
    residual = math.sqrt(res2) / math.sqrt(norm2)
    return EigenPacket(
        eigenvalue=lam,
        alphas=tuple(roots),
        q_coefficients=tuple(complex(c) for c in coeffs),
        basis=tuple(basis),
        initial_segment=tuple(seg),
        residual=residual,
    )


def discrete_spectrum(
    op: SemiInfiniteOperator,
    window: Optional[tuple] = None,
    tol: float = 1e-8,
    grid_points: int = 10**4,
) -> tuple:
    return spectrum_report(op, window, tol, grid_points)["packets"]


def spectrum_report(
    op: SemiInfiniteOperator,
    window: Optional[tuple] = None,
    tol: float = 1e-8,
    grid_points: int = 10**4,
) -> dict:
    """Scan for bound states outside the essential spectrum.

    Grid-scan the boundary determinant, refine sign changes by the secant
    rule, reconstruct packets, and cross-validate against a truncated-matrix
    oracle; an oracle eigenvalue with no matching candidate is an error.
    """
    if window is None:
        r = op.gershgorin_bound() + 1.0
        window = (-r, r)
    lo, hi = float(window[0]), float(window[1])
    band_lo, band_hi = op.symbol().band()
    margin = 1e-8
    segments = []
    if lo < band_lo - margin:
        segments.append((lo, min(hi, band_lo - margin)))
    if hi > band_hi + margin:
        segments.append((max(lo, band_hi + margin), hi))

    candidates = []
    indeterminate = []
    for a, b in segments:
        if b <= a:
            continue
        xs = np.linspace(a, b, grid_points)
        vals = []
        for x in xs:
            d = _det(op, x)
            if d is None:
                indeterminate.append(float(x))
                d = math.nan
            vals.append(d)
        for i in range(len(xs) - 1):
            d0, d1 = vals[i], vals[i + 1]
            if math.isnan(d0) or math.isnan(d1):
                continue
            if d0 == 0.0:
                candidates.append(float(xs[i]))
                continue
            if d0 * d1 < 0:
                x0, x1, f0, f1 = xs[i], xs[i + 1], d0, d1
                for _ in range(80):
                    if f1 == f0:
                        break
                    x2 = x1 - f1 * (x1 - x0) / (f1 - f0)
                    x2 = min(max(x2, a), b)
                    f2 = _det(op, x2)
                    if f2 is None:
                        break
                    x0, f0, x1, f1 = x1, f1, x2, f2
                    if abs(x1 - x0) < 1e-12:
                        break
                candidates.append(float(x1))
        if vals and not math.isnan(vals[-1]) and vals[-1] == 0.0:
            candidates.append(float(xs[-1]))

    merged = []
    for x in sorted(candidates):
        if not merged or abs(x - merged[-1]) > 1e-9:
            merged.append(x)

    n_oracle = max(2000, 50 * (op.threshold + op.band_radius))
    oracle = []
    for a, b in segments:
        for lam, vec, res in _oracle_eigenpairs(op, a, b, n_oracle):
            if res <= tol and a - 1e-9 <= lam <= b + 1e-9:
                oracle.append(lam)
    oracle.sort()

    packets = []
    rejected = []
    for x in merged:
        pk = _build_packet(op, x)
        if pk is None:
            rejected.append((x, "no decaying kernel vector"))
            continue
        if not oracle or min(abs(x - l) for l in oracle) > max(tol, 1e-7):
            rejected.append((x, "no truncated-oracle eigenvalue nearby"))
            continue
        packets.append(pk)

    for lam in oracle:
        if not packets or min(abs(lam - p.eigenvalue) for p in packets) > max(tol, 1e-7):
            raise ScatterError(
                f"truncated oracle finds an eigenvalue near {lam} that the "
                f"boundary-determinant scan missed"
            )

    bound = (op.threshold + op.band_radius) * 2 * op.band_radius
    if len(packets) > bound:
        raise ScatterError("more candidates than the boundary system can carry")

    return {
        "packets": tuple(sorted(packets, key=lambda p: p.eigenvalue)),
        "indeterminate": tuple(indeterminate),
        "rejected": tuple(rejected),
        "oracle_eigenvalues": tuple(oracle),
        "window": (lo, hi),
        "essential_band": (band_lo, band_hi),
    }


# -- continuous part ------------------------------------------------------------


def slope(symbol: LaurentSymbol, theta: float) -> float:
    return symbol.slope(theta)


def continuous_density(op_or_symbol, lam: float) -> float:
    """Sum of |slope|^-1 over the unimodular roots of P(z) = lam."""
    symbol = (
        op_or_symbol.symbol()
        if isinstance(op_or_symbol, SemiInfiniteOperator)
        else op_or_symbol
    )
    band_lo, band_hi = symbol.band()
    if lam < band_lo - 1e-12 or lam > band_hi + 1e-12:
        return 0.0
    total = 0.0
    scale = sum(abs(c) for c in symbol.coeffs) + 1.0
    for z in symbol.lambda_roots(lam):
        if abs(abs(z) - 1.0) > _CIRCLE_TOL:
            continue
        theta = (cmath.phase(z) / (2 * math.pi)) % 1.0
        s = symbol.slope(theta)
        if abs(s) < 1e-7 * scale:
            raise SingularDensityError(
                f"lambda = {lam} is a critical value of the symbol"
            )
        total += 1.0 / abs(s)
    return total


def fourier_transform(f: Dict[int, float], theta: float) -> complex:
    z = cmath.exp(-2j * math.pi * theta)
    return sum(float(v) * z**n for n, v in f.items())


def plancherel_defect(
    op: SemiInfiniteOperator,
    f: Dict[int, float],
    tol: float = 1e-8,
    window: Optional[tuple] = None,
    packets: Optional[tuple] = None,
) -> float:
    """Total-measure defect ||f||^2 - (continuous integral + discrete sum).

    The continuous part integrates the density-weighted |fhat|^2 over the
    essential spectrum via the exact dtheta substitution (the lambda-side
    integrand has integrable band-edge singularities; the substitution
    removes them).
    """
    norm2 = sum(float(v) ** 2 for v in f.values())
    cont, _ = quad(
        lambda t: abs(fourier_transform(f, t)) ** 2, 0.0, 1.0, limit=400,
        epsabs=1e-11, epsrel=1e-11,
    )
    if packets is None:
        packets = discrete_spectrum(op, window=window, tol=tol)
    disc = 0.0
    for pk in packets:
        disc += pk.overlap(f) ** 2
    return norm2 - (cont + disc)


# -- moments ---------------------------------------------------------------------


def spectral_measure_oracle(
    op: SemiInfiniteOperator, f: Dict[int, Fraction], degree: int
) -> tuple:
    """Exact moments <T^m f, f> for m = 0..degree by banded products."""
    base = {int(n): Fraction(v) for n, v in f.items() if v != 0}
    out = []
    cur = dict(base)
    for m in range(degree + 1):
        if m > 0:
            cur = op.apply(cur)
        out.append(sum(val * base.get(n, Fraction(0)) for n, val in cur.items()))
    return tuple(out)


def shift_vector(f: Dict[int, Fraction], j: int) -> Dict[int, Fraction]:
    return {n + j: v for n, v in f.items()}
