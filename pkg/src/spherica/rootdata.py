"""Based root data over an integer lattice, with exact Weyl combinatorics.

A `RootDatum` is a lattice Z^n together with linearly independent simple
roots in the lattice and simple coroots in the dual, pairing to a finite-type
Cartan matrix. Everything downstream (Weyl groups, positive roots, invariant
forms, cones) is computed exactly: integer matrices where possible, Fractions
elsewhere.

Conventions:
  * characters are column vectors, Weyl matrices act on the left;
  * coweights are rows, `w` moves them by the inverse matrix on the right,
    so pairings are preserved;
  * `cartan_matrix()[i][j]` is the pairing of simple root i with simple
    coroot j.
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from . import _linalg as la

WEYL_CAP_ENV = "SPHERICA_WEYL_CAP"
_DEFAULT_WEYL_CAP = 10_000_000


def _int_rows(rows: Sequence[Sequence]) -> tuple[tuple[int, ...], ...]:
    out = []
    for r in rows:
        rr = []
        for x in r:
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError("root datum entries must be integers")
                x = x.numerator
            if not isinstance(x, int):
                if isinstance(x, float) and x.is_integer():
                    x = int(x)
                else:
                    raise ValueError("root datum entries must be integers")
            rr.append(int(x))
        out.append(tuple(rr))
    return tuple(out)


@dataclass(frozen=True)
class WeylElement:
    """An element of the Weyl group, stored as its lattice action."""

    matrix: tuple[tuple[int, ...], ...]
    inv: tuple[tuple[int, ...], ...]

    def apply(self, v: Sequence) -> tuple:
        return tuple(
            sum(self.matrix[i][j] * v[j] for j in range(len(v)))
            for i in range(len(self.matrix))
        )

    def apply_coweight(self, c: Sequence) -> tuple:
        n = len(self.inv)
        return tuple(
            sum(c[i] * self.inv[i][j] for i in range(n)) for j in range(n)
        )

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        m = tuple(
            tuple(
                sum(self.matrix[i][k] * other.matrix[k][j] for k in range(len(self.matrix)))
                for j in range(len(self.matrix))
            )
            for i in range(len(self.matrix))
        )
        inv = tuple(
            tuple(
                sum(other.inv[i][k] * self.inv[k][j] for k in range(len(self.inv)))
                for j in range(len(self.inv))
            )
            for i in range(len(self.inv))
        )
        return WeylElement(m, inv)

    def inverse(self) -> "WeylElement":
        return WeylElement(self.inv, self.matrix)

    def is_identity(self) -> bool:
        n = len(self.matrix)
        return all(
            self.matrix[i][j] == (1 if i == j else 0)
            for i in range(n)
            for j in range(n)
        )


def _identity_element(n: int) -> WeylElement:
    m = tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))
    return WeylElement(m, m)


class CartanTypeError(ValueError):
    pass


def _classify_component(nodes: list[int], C) -> tuple[str, list[int]]:
    """Classify one Dynkin component; return (label, Bourbaki ordering).

    The ordering lists the datum's vertex indices in the Bourbaki numbering
    of the recognized type. Raises CartanTypeError for anything that is not
    finite type.
    """
    n = len(nodes)
    if n == 1:
        return "A1", nodes[:]
    adj = {v: [] for v in nodes}
    marks = {}
    for a in nodes:
        for b in nodes:
            if a < b and C[a][b] != 0:
                m = C[a][b] * C[b][a]
                if m not in (1, 2, 3):
                    raise CartanTypeError(
                        f"bond {a},{b} has |C_ab C_ba| = {m}, not finite type"
                    )
                adj[a].append(b)
                adj[b].append(a)
                marks[(a, b)] = marks[(b, a)] = m
    if sum(len(v) for v in adj.values()) // 2 != n - 1:
        raise CartanTypeError("Dynkin component is not a tree")
    degs = {v: len(adj[v]) for v in nodes}
    if any(d > 3 for d in degs.values()):
        raise CartanTypeError("vertex of degree > 3")
    branch = [v for v in nodes if degs[v] == 3]
    if len(branch) > 1:
        raise CartanTypeError("more than one branch vertex")
    multi = [e for e, m in marks.items() if e[0] < e[1] and m > 1]

    def chain_from(start: int) -> list[int]:
        order = [start]
        prev = None
        cur = start
        while True:
            nxt = [u for u in adj[cur] if u != prev]
            if not nxt:
                return order
            prev, cur = cur, nxt[0]
            order.append(cur)

    if branch:
        if multi:
            raise CartanTypeError("branch vertex together with a multiple bond")
        b = branch[0]
        arms = []
        for s in adj[b]:
            arm = [s]
            prev, cur = b, s
            while True:
                nxt = [u for u in adj[cur] if u != prev]
                if not nxt:
                    break
                prev, cur = cur, nxt[0]
                arm.append(cur)
            arms.append(arm)
        arms.sort(key=lambda a: (len(a), a[0]))
        lens = sorted(len(a) for a in arms)
        if lens[0] == 1 and lens[1] == 1:
            # D_n: two short arms plus one long (possibly empty for D4)
            long_arm = arms[2]
            order = list(reversed(long_arm)) + [b] + sorted(arms[0] + arms[1])
            return f"D{n}", order
        if lens == [1, 2, n - 4]:
            label = {6: "E6", 7: "E7", 8: "E8"}.get(n)
            if label is None:
                raise CartanTypeError("E-shape of impossible rank")
            one_arm = arms[0]
            two_arms = [a for a in arms if len(a) == 2]
            if len(two_arms) == 2:  # E6: pick deterministic
                two_arms.sort(key=lambda a: a[-1])
                two, long_arm = two_arms[0], two_arms[1]
            else:
                two = two_arms[0]
                long_arm = arms[2]
            order = [two[1], one_arm[0], two[0], b] + long_arm
            return label, order
        raise CartanTypeError("branch arms do not match D or E")

    ends = [v for v in nodes if degs[v] == 1]
    chain = chain_from(min(ends))
    if not multi:
        return f"A{n}", chain
    if len(multi) > 1:
        raise CartanTypeError("more than one multiple bond in a chain")
    (a, b) = multi[0]
    m = marks[(a, b)]
    if m == 3:
        if n != 2:
            raise CartanTypeError("triple bond outside rank 2")
        # G2: alpha1 short, alpha2 long; C[long][short] = -3
        if C[a][b] == -3:
            return "G2", [b, a]
        return "G2", [a, b]
    # one double bond
    pos = {v: i for i, v in enumerate(chain)}
    i, j = sorted((pos[a], pos[b]))
    if {i, j} == {len(chain) - 2, len(chain) - 1}:
        first, last = chain[-2], chain[-1]
    elif {i, j} == {0, 1}:
        chain = list(reversed(chain))
        first, last = chain[-2], chain[-1]
    else:
        if n == 4 and {i, j} == {1, 2}:
            # F4: alpha2 long, alpha3 short, C[2][3] = -2 in Bourbaki
            c2, c3 = chain[1], chain[2]
            if C[c2][c3] == -2:
                return "F4", chain
            return "F4", list(reversed(chain))
        raise CartanTypeError("interior double bond only allowed in F4")
    # C[long][short] = -2: the end vertex `last` is short for B, long for C
    if n == 2:
        if C[first][last] == -2:
            return "B2", [first, last]
        return "B2", [last, first]
    if C[first][last] == -2:
        return f"B{n}", chain
    return f"C{n}", chain


@dataclass(frozen=True)
class RootDatum:
    """Based root datum: simple (co)roots in Z^n, finite Cartan type."""

    rank: int
    simple_roots: tuple[tuple[int, ...], ...]
    simple_coroots: tuple[tuple[int, ...], ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "simple_roots", _int_rows(self.simple_roots))
        object.__setattr__(self, "simple_coroots", _int_rows(self.simple_coroots))
        n = self.rank
        if not isinstance(n, int) or n < 0:
            raise ValueError("rank must be a nonnegative integer")
        if len(self.simple_roots) != len(self.simple_coroots):
            raise ValueError("need equally many simple roots and coroots")
        for r in self.simple_roots + self.simple_coroots:
            if len(r) != n:
                raise ValueError("root/coroot length does not match rank")
        r = len(self.simple_roots)
        if r > n:
            raise ValueError("more simple roots than the lattice rank allows")
        C = [
            [sum(self.simple_roots[i][k] * self.simple_coroots[j][k] for k in range(n)) for j in range(r)]
            for i in range(r)
        ]
        for i in range(r):
            if C[i][i] != 2:
                raise ValueError(f"<alpha_{i}, coroot_{i}> = {C[i][i]}, expected 2")
            for j in range(r):
                if i != j:
                    if C[i][j] > 0:
                        raise ValueError(
                            f"<alpha_{i}, coroot_{j}> = {C[i][j]} > 0 off the diagonal"
                        )
                    if (C[i][j] == 0) != (C[j][i] == 0):
                        raise ValueError(
                            f"asymmetric vanishing in Cartan entries ({i},{j})"
                        )
        if la.rank(self.simple_roots) != r:
            raise ValueError("simple roots are linearly dependent")
        if la.rank(self.simple_coroots) != r:
            raise ValueError("simple coroots are linearly dependent")
        # classification doubles as the finite-type check
        self._classify(C)

    # -- structure ---------------------------------------------------------

    @cached_property
    def cartan_matrix(self) -> tuple[tuple[int, ...], ...]:
        n, r = self.rank, len(self.simple_roots)
        return tuple(
            tuple(
                sum(self.simple_roots[i][k] * self.simple_coroots[j][k] for k in range(n))
                for j in range(r)
            )
            for i in range(r)
        )

    def _classify(self, C=None) -> list[tuple[str, list[int]]]:
        if C is None:
            C = self.cartan_matrix
        r = len(self.simple_roots)
        seen = set()
        comps = []
        for start in range(r):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                v = stack.pop()
                for u in range(r):
                    if u not in seen and C[v][u] != 0:
                        seen.add(u)
                        comp.append(u)
                        stack.append(u)
            comp.sort()
            comps.append(comp)
        return [_classify_component(comp, C) for comp in comps]

    @cached_property
    def components(self) -> tuple[tuple[str, tuple[int, ...]], ...]:
        """Irreducible components as (label, vertex indices in Bourbaki order)."""
        return tuple((lbl, tuple(order)) for lbl, order in self._classify())

    def cartan_type(self) -> str:
        parts = [lbl for lbl, _ in self.components]
        central = self.rank - len(self.simple_roots)
        if central > 0:
            parts.append(f"T{central}")
        return " x ".join(parts) if parts else "T0"

    def semisimple_rank(self) -> int:
        return len(self.simple_roots)

    def dual(self) -> "RootDatum":
        return RootDatum(
            rank=self.rank,
            simple_roots=self.simple_coroots,
            simple_coroots=self.simple_roots,
            name=f"dual({self.name})" if self.name else "",
        )

    # -- roots -------------------------------------------------------------

    @cached_property
    def _root_coord_projector(self) -> tuple[tuple[Fraction, ...], ...]:
        """Left inverse of simple-roots^T: maps a root span vector to its
        simple-root coordinates."""
        R = la.mat(self.simple_roots)
        G = la.matmul(R, la.transpose(R))
        return la.matmul(la.inverse(G), R)

    def root_coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        return la.matvec(self._root_coord_projector, la.vec(v))

    @cached_property
    def positive_roots(self) -> tuple[tuple[int, ...], ...]:
        """All positive roots, as lattice vectors, sorted by height then value."""
        r = len(self.simple_roots)
        if r == 0:
            return ()
        roots = {}
        for i, a in enumerate(self.simple_roots):
            coeff = tuple(1 if k == i else 0 for k in range(r))
            roots[a] = coeff
        changed = True
        while changed:
            changed = False
            for beta, coeff in list(roots.items()):
                for i in range(r):
                    pair = sum(beta[k] * self.simple_coroots[i][k] for k in range(self.rank))
                    new = tuple(
                        beta[k] - pair * self.simple_roots[i][k] for k in range(self.rank)
                    )
                    newc = tuple(
                        coeff[k] - (pair if k == i else 0) for k in range(r)
                    )
                    if new not in roots and all(c >= 0 for c in newc) and any(c > 0 for c in newc):
                        roots[new] = newc
                        changed = True
        return tuple(sorted(roots, key=lambda b: (sum(roots[b]), b)))

    @cached_property
    def positive_coroots(self) -> tuple[tuple[int, ...], ...]:
        return self.dual().positive_roots

    @cached_property
    def coroot_of_root(self) -> dict:
        """Map from each positive root to its coroot.

        Built by transporting simple pairs around the Weyl group: the coroot
        of w(alpha_i) is w(coroot_i)."""
        out = {}
        todo = list(zip(self.simple_roots, self.simple_coroots))
        seen = set(self.simple_roots)
        while todo:
            beta, bc = todo.pop()
            if self._is_positive_root_vec(beta):
                out[beta] = bc
            else:
                out[tuple(-x for x in beta)] = tuple(-x for x in bc)
            for i in range(len(self.simple_roots)):
                s = self.reflection(i)
                nb, nc = s.apply(beta), s.apply_coweight(bc)
                pos = nb if self._is_positive_root_vec(nb) else tuple(-x for x in nb)
                if pos not in seen:
                    seen.add(pos)
                    todo.append((nb, nc))
        return out

    def _is_positive_root_vec(self, v) -> bool:
        coords = self.root_coordinates(v)
        return all(c >= 0 for c in coords) and any(c > 0 for c in coords)

    def rho(self) -> tuple[Fraction, ...]:
        """Half-sum of positive roots."""
        n = self.rank
        tot = [Fraction(0)] * n
        for b in self.positive_roots:
            for k in range(n):
                tot[k] += b[k]
        return tuple(x / 2 for x in tot)

    def levi_positive_roots(self, subset: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        """Positive roots supported on the given set of simple indices."""
        sub = set(subset)
        out = []
        for b in self.positive_roots:
            coords = self.root_coordinates(b)
            if all(c == 0 or i in sub for i, c in enumerate(coords)):
                out.append(b)
        return tuple(out)

    def rho_levi(self, subset: Sequence[int]) -> tuple[Fraction, ...]:
        tot = [Fraction(0)] * self.rank
        for b in self.levi_positive_roots(subset):
            for k in range(self.rank):
                tot[k] += b[k]
        return tuple(x / 2 for x in tot)

    # -- Weyl group --------------------------------------------------------

    def reflection(self, i: int) -> WeylElement:
        n = self.rank
        a, ac = self.simple_roots[i], self.simple_coroots[i]
        m = tuple(
            tuple((1 if p == q else 0) - a[p] * ac[q] for q in range(n))
            for p in range(n)
        )
        return WeylElement(m, m)

    def reflection_of(self, root: Sequence[int], coroot: Sequence[int]) -> WeylElement:
        n = self.rank
        m = tuple(
            tuple((1 if p == q else 0) - root[p] * coroot[q] for q in range(n))
            for p in range(n)
        )
        return WeylElement(m, m)

    def generate_weyl(self, cap: Optional[int] = None) -> tuple[WeylElement, ...]:
        """All Weyl elements, by breadth-first search from the identity.

        Aborts with RuntimeError if the group exceeds `cap` (default comes
        from the SPHERICA_WEYL_CAP environment variable, else 10^7).
        """
        if cap is None:
            cap = int(os.environ.get(WEYL_CAP_ENV, _DEFAULT_WEYL_CAP))
        gens = [self.reflection(i) for i in range(len(self.simple_roots))]
        e = _identity_element(self.rank)
        seen = {e.matrix: e}
        frontier = [e]
        out = [e]
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    u = w * s
                    if u.matrix not in seen:
                        if len(seen) + 1 > cap:
                            raise RuntimeError(
                                f"Weyl group has more than {cap} elements; "
                                f"raise {WEYL_CAP_ENV} to allow this"
                            )
                        seen[u.matrix] = u
                        nxt.append(u)
                        out.append(u)
            nxt.sort(key=lambda w: w.matrix)
            frontier = nxt
        return tuple(out)

    def weyl_order(self) -> int:
        return len(self.generate_weyl())

    def length(self, w: WeylElement) -> int:
        return sum(
            1
            for b in self.positive_roots
            if not self._is_positive_root_vec(w.apply(b))
        )

    def reduced_word(self, w: WeylElement) -> tuple[int, ...]:
        """Reduced word by the descent walk, smallest index first at each step."""
        collected = []
        cur = w
        guard = 4 * len(self.positive_roots) + 4
        while not cur.is_identity():
            i = next(
                (
                    i
                    for i in range(len(self.simple_roots))
                    if not self._is_positive_root_vec(cur.apply(self.simple_roots[i]))
                ),
                None,
            )
            if i is None or len(collected) > guard:
                raise ValueError("element is not in the Weyl group of this datum")
            collected.append(i)
            cur = cur * self.reflection(i)
        return tuple(reversed(collected))

    def from_word(self, word: Sequence[int]) -> WeylElement:
        w = _identity_element(self.rank)
        for i in word:
            w = w * self.reflection(i)
        return w

    def minimal_coset_reps(self, levi: Sequence[int]) -> tuple[WeylElement, ...]:
        """Minimal-length representatives of W / W_levi."""
        sub = list(levi)
        return tuple(
            w
            for w in self.generate_weyl()
            if all(
                self._is_positive_root_vec(w.apply(self.simple_roots[j])) for j in sub
            )
        )

    # -- invariant form ----------------------------------------------------

    @cached_property
    def invariant_form(self) -> tuple[tuple[Fraction, ...], ...]:
        """W-invariant symmetric form with short roots of squared length 2.

        On the span of the roots the normalization is per irreducible
        component; the form is extended by a unit form on the W-fixed
        complement, with the two blocks orthogonal.
        """
        n, r = self.rank, len(self.simple_roots)
        C = self.cartan_matrix
        d = [Fraction(0)] * r
        for _, order in self.components:
            comp = list(order)
            d[comp[0]] = Fraction(1)
            stack = [comp[0]]
            done = {comp[0]}
            while stack:
                v = stack.pop()
                for u in comp:
                    if u not in done and C[v][u] != 0:
                        d[u] = d[v] * C[u][v] / C[v][u]
                        done.add(u)
                        stack.append(u)
            m = min(d[u] for u in comp)
            for u in comp:
                d[u] /= m
        fixed = la.nullspace(self.simple_coroots, n) if r else la.nullspace([], n)
        basis = [la.vec(b) for b in self.simple_roots] + [la.vec(f) for f in fixed]
        M = la.transpose(basis)  # columns are the basis vectors
        Minv = la.inverse(M)
        block = [[Fraction(0)] * n for _ in range(n)]
        for i in range(r):
            for j in range(r):
                block[i][j] = d[j] * C[i][j]
        for k in range(r, n):
            block[k][k] = Fraction(1)
        B = la.matmul(la.matmul(la.transpose(Minv), block), Minv)
        return tuple(tuple(row) for row in B)

    def form_value(self, x: Sequence, y: Sequence) -> Fraction:
        B = self.invariant_form
        return la.dot(la.matvec(B, la.vec(x)), la.vec(y))

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "rank": self.rank,
            "simple_roots": [list(r) for r in self.simple_roots],
            "simple_coroots": [list(r) for r in self.simple_coroots],
            "name": self.name,
        }

    @staticmethod
    def from_dict(data) -> "RootDatum":
        if isinstance(data, str):
            return weight_model(data)
        if "cartan" in data and "simple_roots" not in data:
            return weight_model(data["cartan"])
        return RootDatum(
            rank=data["rank"],
            simple_roots=tuple(tuple(r) for r in data["simple_roots"]),
            simple_coroots=tuple(tuple(r) for r in data["simple_coroots"]),
            name=data.get("name", ""),
        )


# ---------------------------------------------------------------------------
# Standard constructors.


def standard_cartan(label: str) -> list[list[int]]:
    m = re.fullmatch(r"([A-G])(\d+)", label.strip())
    if not m:
        raise ValueError(f"cannot parse Cartan label {label!r}")
    letter, n = m.group(1), int(m.group(2))
    ok = {
        "A": n >= 1,
        "B": n >= 2,
        "C": n >= 2,
        "D": n >= 4,
        "E": n in (6, 7, 8),
        "F": n == 4,
        "G": n == 2,
    }
    if not ok.get(letter, False):
        raise ValueError(f"no finite type {label}")
    C = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def bond(i, j, cij=-1, cji=-1):
        C[i][j], C[j][i] = cij, cji

    if letter in "ABC":
        for i in range(n - 1):
            bond(i, i + 1)
        if letter == "B":
            bond(n - 2, n - 1, -2, -1)
        if letter == "C":
            bond(n - 2, n - 1, -1, -2)
    elif letter == "D":
        for i in range(n - 3):
            bond(i, i + 1)
        bond(n - 3, n - 2)
        bond(n - 3, n - 1)
    elif letter == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        for a, b in zip(chain, chain[1:]):
            bond(a, b)
        bond(1, 3)
    elif letter == "F":
        bond(0, 1)
        bond(1, 2, -2, -1)
        bond(2, 3)
    elif letter == "G":
        bond(0, 1, -1, -3)
    return C


def _parse_product(label: str) -> list[str]:
    return [p.strip() for p in re.split(r"[x+*]", label) if p.strip()]


def weight_model(label: str, name: str = "") -> RootDatum:
    """Simply connected datum for a Cartan label: lattice = weight lattice.

    Products are accepted with "x" separators, e.g. "A1 x A1".
    """
    parts = _parse_product(label)
    data = []
    for part in parts:
        C = standard_cartan(part)
        n = len(C)
        roots = [tuple(C[i]) for i in range(n)]
        coroots = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        data.append((n, roots, coroots))
    return _assemble(data, name or label)


def adjoint_model(label: str, name: str = "") -> RootDatum:
    """Adjoint datum: lattice = root lattice, simple roots the basis."""
    parts = _parse_product(label)
    data = []
    for part in parts:
        C = standard_cartan(part)
        n = len(C)
        roots = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        coroots = [tuple(C[j][i] for j in range(n)) for i in range(n)]
        data.append((n, roots, coroots))
    return _assemble(data, name or f"adjoint {label}")


def _assemble(data, name: str) -> RootDatum:
    total = sum(d[0] for d in data)
    roots, coroots = [], []
    off = 0
    for n, rs, cs in data:
        for r in rs:
            roots.append((0,) * off + r + (0,) * (total - off - n))
        for c in cs:
            coroots.append((0,) * off + c + (0,) * (total - off - n))
        off += n
    return RootDatum(rank=total, simple_roots=tuple(roots), simple_coroots=tuple(coroots), name=name)


def gl_model(n: int, name: str = "") -> RootDatum:
    """GL_n: lattice Z^n with roots e_i - e_{i+1}."""
    roots = []
    for i in range(n - 1):
        v = [0] * n
        v[i], v[i + 1] = 1, -1
        roots.append(tuple(v))
    return RootDatum(
        rank=n,
        simple_roots=tuple(roots),
        simple_coroots=tuple(roots),
        name=name or f"GL{n}",
    )


def so_odd_model(r: int, name: str = "") -> RootDatum:
    """SO_{2r+1}: lattice Z^r, type B_r with integral characters only."""
    roots, coroots = [], []
    for i in range(r - 1):
        v = [0] * r
        v[i], v[i + 1] = 1, -1
        roots.append(tuple(v))
        coroots.append(tuple(v))
    last = [0] * r
    last[r - 1] = 1
    roots.append(tuple(last))
    last2 = [0] * r
    last2[r - 1] = 2
    coroots.append(tuple(last2))
    return RootDatum(
        rank=r,
        simple_roots=tuple(roots),
        simple_coroots=tuple(coroots),
        name=name or f"SO{2*r+1}",
    )


def sp_model(r: int, name: str = "") -> RootDatum:
    """Sp_{2r}: lattice Z^r, type C_r."""
    so = so_odd_model(r)
    return RootDatum(
        rank=r,
        simple_roots=so.simple_coroots,
        simple_coroots=so.simple_roots,
        name=name or f"Sp{2*r}",
    )


def so_even_model(r: int, name: str = "") -> RootDatum:
    """SO_{2r}: lattice Z^r, type D_r (r >= 2), self-dual simple roots."""
    if r < 2:
        raise ValueError("so_even_model needs rank >= 2")
    roots = []
    for i in range(r - 1):
        v = [0] * r
        v[i], v[i + 1] = 1, -1
        roots.append(tuple(v))
    last = [0] * r
    last[r - 2], last[r - 1] = 1, 1
    roots.append(tuple(last))
    return RootDatum(
        rank=r,
        simple_roots=tuple(roots),
        simple_coroots=tuple(roots),
        name=name or f"SO{2*r}",
    )


def product(a: RootDatum, b: RootDatum, negate_second: bool = False, name: str = "") -> RootDatum:
    """Direct product of data. With negate_second the second factor's roots
    and coroots are negated, i.e. its opposite Borel is taken as the base."""
    n = a.rank + b.rank
    sgn = -1 if negate_second else 1
    roots = [r + (0,) * b.rank for r in a.simple_roots]
    roots += [(0,) * a.rank + tuple(sgn * x for x in r) for r in b.simple_roots]
    coroots = [c + (0,) * b.rank for c in a.simple_coroots]
    coroots += [(0,) * a.rank + tuple(sgn * x for x in c) for c in b.simple_coroots]
    return RootDatum(
        rank=n,
        simple_roots=tuple(roots),
        simple_coroots=tuple(coroots),
        name=name or f"{a.name} x {b.name}",
    )


# ---------------------------------------------------------------------------
# Cones (H-representation over Q, exact).


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone {v : <a, v> <= 0 for ineq, <z, v> = 0 for eq}."""

    dim: int
    ineq_normals: tuple[tuple, ...] = ()
    eq_normals: tuple[tuple, ...] = ()

    def contains(self, v: Sequence) -> bool:
        return all(la.dot(a, v) <= 0 for a in self.ineq_normals) and all(
            la.dot(z, v) == 0 for z in self.eq_normals
        )

    def contains_strictly(self, v: Sequence) -> bool:
        return all(la.dot(a, v) < 0 for a in self.ineq_normals) and all(
            la.dot(z, v) == 0 for z in self.eq_normals
        )

    def relative_interior_point(self):
        """A rational point with all inequalities strict, or None if the cone
        has smaller dimension than its inequality description suggests."""
        return la.strict_negative_point(
            list(self.ineq_normals), list(self.eq_normals), self.dim
        )

    def rays(self) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
        """(extreme rays mod lineality, lineality basis), both primitive."""
        normals = list(self.ineq_normals)
        eqs = list(self.eq_normals)
        all_normals = normals + eqs + [la.vscale(-1, z) for z in eqs]
        return la.cone_rays(all_normals, self.dim)

    def linear_span_dim(self) -> int:
        rays, lin = self.rays()
        return la.rank([la.vec(r) for r in rays] + [la.vec(l) for l in lin])
