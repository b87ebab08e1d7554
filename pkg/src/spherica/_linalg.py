"""Exact dense linear algebra over Fractions and integers.

All matrices here are small (bounded by the rank of an ambient reductive
group), so everything is a tuple of tuples and nothing is asymptotically
clever. No floats anywhere: rational elimination, integer Smith normal form,
and a Phase-I/II simplex over Fractions for cone queries.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vec(xs: Sequence) -> Vec:
    return tuple(fr(x) for x in xs)


def mat(rows: Sequence[Sequence]) -> Mat:
    return tuple(vec(r) for r in rows)


def zero_vec(n: int) -> Vec:
    return tuple(Fraction(0) for _ in range(n))


def identity(n: int) -> Mat:
    return tuple(
        tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n)
    )


def dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((fr(x) * fr(y) for x, y in zip(a, b, strict=True)), Fraction(0))


def vadd(a: Sequence, b: Sequence) -> Vec:
    return tuple(fr(x) + fr(y) for x, y in zip(a, b, strict=True))


def vsub(a: Sequence, b: Sequence) -> Vec:
    return tuple(fr(x) - fr(y) for x, y in zip(a, b, strict=True))


def vscale(c, a: Sequence) -> Vec:
    c = fr(c)
    return tuple(c * fr(x) for x in a)


def matvec(m: Sequence[Sequence], v: Sequence) -> Vec:
    return tuple(dot(row, v) for row in m)


def vecmat(v: Sequence, m: Sequence[Sequence]) -> Vec:
    n = len(m[0])
    return tuple(
        sum((fr(v[i]) * fr(m[i][j]) for i in range(len(m))), Fraction(0))
        for j in range(n)
    )


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Mat:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def transpose(m: Sequence[Sequence]) -> Mat:
    if not m:
        return ()
    return tuple(tuple(fr(m[i][j]) for i in range(len(m))) for j in range(len(m[0])))


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    a = [[fr(x) for x in r] for r in rows]
    if not a:
        return a, []
    m, n = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        pr = next((i for i in range(r, m) if a[i][c] != 0), None)
        if pr is None:
            continue
        a[r], a[pr] = a[pr], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], n: Optional[int] = None) -> list[Vec]:
    """Basis of {x : rows @ x = 0} over the rationals."""
    if not rows:
        assert n is not None
        return [tuple(identity(n)[i]) for i in range(n)]
    n = len(rows[0])
    a, pivots = rref(rows)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        x = [Fraction(0)] * n
        x[j] = Fraction(1)
        for r, c in enumerate(pivots):
            x[c] = -a[r][j]
        basis.append(tuple(x))
    return basis


def solve(a_rows: Sequence[Sequence], b: Sequence) -> Optional[Vec]:
    """One solution x of (a_rows) x = b, or None if inconsistent."""
    m = len(a_rows)
    if m == 0:
        return ()
    n = len(a_rows[0])
    aug = [list(r) + [b[i]] for i, r in enumerate(a_rows)]
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        x[c] = red[r][n]
    return tuple(x)


def inverse(m: Sequence[Sequence]) -> Mat:
    n = len(m)
    aug = [list(m[i]) + [Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix not invertible")
    return tuple(tuple(red[i][n:]) for i in range(n))


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(int(x)))
    return g


def primitive(v: Sequence) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (same ray)."""
    fracs = [fr(x) for x in v]
    den = 1
    for x in fracs:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fracs]
    g = content(ints)
    if g:
        ints = [x // g for x in ints]
    return tuple(ints)


# ---------------------------------------------------------------------------
# Integer lattices: Smith normal form and friends.


def smith_normal_form(a_rows: Sequence[Sequence[int]]):
    """Return (U, S, V, Vinv) with U @ A @ V = S, U and V unimodular.

    S is diagonal with d1 | d2 | ... ; Vinv is maintained alongside V so
    callers get saturations and kernels without a separate inversion.
    """
    A = [[int(x) for x in r] for r in a_rows]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    V = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    Vinv = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def add_row(i, j, k):  # row i += k * row j
        A[i] = [a + k * b for a, b in zip(A[i], A[j])]
        U[i] = [a + k * b for a, b in zip(U[i], U[j])]

    def neg_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_col(i, j, k):  # col i += k * col j
        for row in A:
            row[i] += k * row[j]
        for row in V:
            row[i] += k * row[j]
        Vinv[j] = [a - k * b for a, b in zip(Vinv[j], Vinv[i])]

    def neg_col(i):
        for row in A:
            row[i] = -row[i]
        for row in V:
            row[i] = -row[i]
        Vinv[i] = [-a for a in Vinv[i]]

    t = 0
    while t < min(m, n):
        # locate a smallest-magnitude nonzero entry in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] != 0 and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        clean = False
        while not clean:
            clean = True
            for i in range(t + 1, m):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    add_row(i, t, -q)
                    if A[i][t] != 0:
                        swap_rows(t, i)
                        clean = False
            for j in range(t + 1, n):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    add_col(j, t, -q)
                    if A[t][j] != 0:
                        swap_cols(t, j)
                        clean = False
        # divisibility: d_t must divide the rest of the block
        again = False
        for i in range(t + 1, m):
            bad = next((j for j in range(t + 1, n) if A[i][j] % A[t][t] != 0), None)
            if bad is not None:
                add_row(t, i, 1)
                again = True
                break
        if again:
            continue
        if A[t][t] < 0:
            neg_row(t)
        t += 1

    S = A
    return (
        tuple(tuple(r) for r in U),
        tuple(tuple(r) for r in S),
        tuple(tuple(r) for r in V),
        tuple(tuple(r) for r in Vinv),
    )


def integer_kernel(a_rows: Sequence[Sequence[int]], n: Optional[int] = None) -> list[tuple[int, ...]]:
    """Saturated basis of {x in Z^n : A x = 0}."""
    if not a_rows:
        assert n is not None
        return [tuple(int(x) for x in identity(n)[i]) for i in range(n)]
    n = len(a_rows[0])
    _, S, V, _ = smith_normal_form(a_rows)
    r = sum(1 for i in range(min(len(S), n)) if S[i][i] != 0)
    return [tuple(V[i][j] for i in range(n)) for j in range(r, n)]


def integer_row_basis(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of the lattice generated by the given integer rows."""
    if not rows:
        return []
    _, S, _, Vinv = smith_normal_form(rows)
    n = len(rows[0])
    out = []
    for i in range(min(len(S), n)):
        if i < len(S) and S[i][i] != 0:
            out.append(tuple(S[i][i] * Vinv[i][j] for j in range(n)))
    return out


def saturate_rows(rows: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of (Q-span of rows) intersect Z^n."""
    if not rows:
        return []
    _, S, _, Vinv = smith_normal_form(rows)
    n = len(rows[0])
    r = sum(1 for i in range(min(len(S), n)) if S[i][i] != 0)
    return [tuple(Vinv[i][j] for j in range(n)) for i in range(r)]


def in_row_lattice(v: Sequence, rows: Sequence[Sequence[int]]) -> bool:
    """Is v an integer combination of the given rows?"""
    basis = integer_row_basis(rows)
    if not basis:
        return all(fr(x) == 0 for x in v)
    coeffs = solve(transpose(basis), v)
    if coeffs is None:
        return False
    # basis rows are independent, so the solution is unique; verify anyway
    recon = vecmat(coeffs, basis)
    if tuple(recon) != vec(v):
        return False
    return all(c.denominator == 1 for c in coeffs)


# ---------------------------------------------------------------------------
# Exact simplex.  min c.x  s.t.  A x = b, x >= 0.  Bland's rule throughout.


def _simplex_core(T: list[list[Fraction]], basis: list[int], ncols: int):
    while True:
        enter = next((j for j in range(ncols) if T[-1][j] < 0), None)
        if enter is None:
            return "optimal"
        ratios = []
        for i in range(len(T) - 1):
            if T[i][enter] > 0:
                ratios.append((T[i][-1] / T[i][enter], basis[i], i))
        if not ratios:
            return "unbounded"
        _, _, leave = min(ratios, key=lambda t: (t[0], t[1]))
        piv = T[leave][enter]
        T[leave] = [x / piv for x in T[leave]]
        for i in range(len(T)):
            if i != leave and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[leave])]
        basis[leave] = enter


def simplex_min(A: Sequence[Sequence], b: Sequence, c: Sequence):
    """Solve min c.x st A x = b, x >= 0 exactly.

    Returns (status, x, value) with status one of "optimal", "infeasible",
    "unbounded".
    """
    m = len(A)
    n = len(A[0]) if m else len(c)
    rows = [[fr(x) for x in row] + [fr(b[i])] for i, row in enumerate(A)]
    for row in rows:
        if row[-1] < 0:
            row[:] = [-x for x in row]
    # Phase I
    T = [row[:-1] + [Fraction(1 if i == j else 0) for j in range(m)] + [row[-1]] for i, row in enumerate(rows)]
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * (n + m + 1)
    for i in range(m):
        obj = [o - t for o, t in zip(obj, T[i])]
    for j in range(n, n + m):
        obj[j] = Fraction(0)
    T.append(obj)
    status = _simplex_core(T, basis, n + m)
    if status != "optimal" or T[-1][-1] != 0:
        return "infeasible", None, None
    # drive artificials out of the basis where possible
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if T[i][j] != 0), None)
            if enter is not None:
                piv = T[i][enter]
                T[i] = [x / piv for x in T[i]]
                for k in range(len(T)):
                    if k != i and T[k][enter] != 0:
                        f = T[k][enter]
                        T[k] = [x - f * y for x, y in zip(T[k], T[i])]
                basis[i] = enter
    # Phase II
    T = [row[:n] + [row[-1]] for row in T[:-1]]
    obj = [fr(x) for x in c] + [Fraction(0)]
    for i in range(m):
        if basis[i] < n and obj[basis[i]] != 0:
            f = obj[basis[i]]
            obj = [x - f * y for x, y in zip(obj, T[i])]
    T.append(obj)
    status = _simplex_core(T, basis, n)
    if status == "unbounded":
        return "unbounded", None, None
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][-1]
    return "optimal", tuple(x), -T[-1][-1]


def cone_member(gens: Sequence[Sequence], lines: Sequence[Sequence], target: Sequence) -> bool:
    """Is target in cone(gens) + span(lines)?"""
    n = len(target)
    cols: list[Vec] = [vec(g) for g in gens]
    for l in lines:
        cols.append(vec(l))
        cols.append(vscale(-1, l))
    if not cols:
        return all(fr(x) == 0 for x in target)
    A = transpose(cols)
    status, _, _ = simplex_min(A, vec(target), [Fraction(0)] * len(cols))
    return status == "optimal"


def strict_negative_point(strict: Sequence[Sequence], zero: Sequence[Sequence], n: int) -> Optional[Vec]:
    """Find x with <s,x> < 0 for all s in strict and <z,x> = 0 for z in zero.

    Returns None when no such x exists. x is scaled to a primitive integer
    vector.
    """
    space = nullspace(zero, n) if zero else nullspace([], n)
    if not space:
        return None
    if not strict:
        return vec(space[0])
    # maximize t st  <s, B y> + t <= 0,  t <= 1  -> min -t, slacks s_i
    k = len(space)
    red = [[dot(s, b) for b in space] for s in strict]
    nv = 2 * k + 1 + len(strict) + 1  # y+ y- t slacks, slack for t<=1
    A = []
    b = []
    for i, row in enumerate(red):
        r = [Fraction(0)] * nv
        for j in range(k):
            r[j] = fr(row[j])
            r[k + j] = -fr(row[j])
        r[2 * k] = Fraction(1)
        r[2 * k + 1 + i] = Fraction(1)
        A.append(r)
        b.append(Fraction(0))
    r = [Fraction(0)] * nv
    r[2 * k] = Fraction(1)
    r[-1] = Fraction(1)
    A.append(r)
    b.append(Fraction(1))
    c = [Fraction(0)] * nv
    c[2 * k] = Fraction(-1)
    status, x, _ = simplex_min(A, b, c)
    if status != "optimal" or x is None or x[2 * k] <= 0:
        return None
    y = [x[j] - x[k + j] for j in range(k)]
    out = [Fraction(0)] * n
    for j in range(k):
        for i in range(n):
            out[i] += y[j] * fr(space[j][i])
    prim = primitive(out)
    return vec(prim)


def cone_rays(normals: Sequence[Sequence], n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Extreme rays (mod lineality) and lineality basis of {v : <a,v> <= 0}.

    Rays come back as primitive integer vectors, deduplicated, in a
    deterministic order.
    """
    if not normals:
        return [], [tuple(int(x) for x in row) for row in identity(n)]
    lin = nullspace(normals, n)
    lin_rows = [primitive(v) for v in lin]
    # greedy basis of a complement to the lineality space
    wbasis: list[Vec] = []
    for j in range(n):
        if len(wbasis) == n - len(lin_rows):
            break
        cand = tuple(Fraction(1 if i == j else 0) for i in range(n))
        if rank(lin_rows + wbasis + [cand]) > len(lin_rows) + len(wbasis):
            wbasis.append(cand)
    d = len(wbasis)
    if d == 0:
        return [], lin_rows
    red = [[dot(a, w) for w in wbasis] for a in normals]
    from itertools import combinations

    found: list[tuple[int, ...]] = []
    seen = set()
    for sub in combinations(range(len(red)), d - 1):
        rows = [red[i] for i in sub]
        if rank(rows) != d - 1:
            continue
        ker = nullspace(rows, d)
        if len(ker) != 1:
            continue
        y = ker[0]
        for cand in (y, vscale(-1, y)):
            vals = [dot(r, cand) for r in red]
            if all(v <= 0 for v in vals):
                lift = [Fraction(0)] * n
                for j in range(d):
                    for i in range(n):
                        lift[i] += cand[j] * wbasis[j][i]
                p = primitive(lift)
                if p not in seen and any(x != 0 for x in p):
                    seen.add(p)
                    found.append(p)
                break
    found.sort()
    return found, lin_rows
