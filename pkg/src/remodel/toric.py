"""Combinatorial data of a toric Calabi-Yau 3-orbifold with a framed outer brane.

Input: the 2d lattice points of the height-1 polytope slice (rays first, then
the remaining lattice points), a simplicial triangulation into 3-cones, a
preferred flag (3-cone plus an outer edge of it), and an integer framing.

Everything derived here is exact: relation lattice, divisor functionals, the
nef-positive charge basis, box elements with ages and group structure,
effective curve classes, flag normal forms and framed torus weights.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence


class GeometryError(Exception):
    """Raised for inputs outside the supported geometry class."""
    exit_code = 3


class FramingError(Exception):
    """Raised when the framing is degenerate for the given geometry."""
    exit_code = 4


# ---------------------------------------------------------------------------
# small exact integer/rational linear algebra
# ---------------------------------------------------------------------------

def solve_linear(A: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> list[Fraction]:
    """Solve the square system A x = b over Fractions (raises on singular A)."""
    n = len(A)
    M = [[Fraction(A[i][j]) for j in range(n)] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if M[r][col] != 0), None)
        if piv is None:
            raise GeometryError("singular linear system in lattice computation")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [x / pv for x in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][n] for i in range(n)]


def smith_kernel(A: list[list[int]]) -> list[list[int]]:
    """Saturated integer kernel basis of the integer matrix A (rows x cols).

    Returns rows spanning ker(A) ∩ Z^cols, in Hermite normal form. Column
    operations on A are tracked on an identity matrix; the columns that end
    up annihilated give a saturated basis because the tracking matrix stays
    unimodular throughout.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    M = [list(r) for r in A]
    V = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def col_swap(j, k):
        for r in M:
            r[j], r[k] = r[k], r[j]
        for r in V:
            r[j], r[k] = r[k], r[j]

    def col_addmul(j, k, t):
        for r in M:
            r[j] += t * r[k]
        for r in V:
            r[j] += t * r[k]

    pr = 0
    for i in range(rows):
        while True:
            nz = [j for j in range(pr, cols) if M[i][j] != 0]
            if not nz:
                break
            j0 = min(nz, key=lambda j: abs(M[i][j]))
            col_swap(pr, j0)
            done = True
            for j in range(pr + 1, cols):
                if M[i][j] != 0:
                    col_addmul(j, pr, -(M[i][j] // M[i][pr]))
                    if M[i][j] != 0:
                        done = False
            if done:
                break
        if any(M[i][j] != 0 for j in range(pr, cols)):
            pr += 1
    basis = [[V[r][j] for r in range(cols)] for j in range(pr, cols)]
    return hnf_rows(basis)


def hnf_rows(B: list[list[int]]) -> list[list[int]]:
    """Row-style Hermite normal form: canonical basis of the row lattice
    (positive pivots, entries above a pivot reduced into [0, pivot))."""
    rows = [list(r) for r in B if any(r)]
    if not rows:
        return []
    cols = len(rows[0])
    out: list[list[int]] = []
    col = 0
    while rows and col < cols:
        nz = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        if not nz:
            col += 1
            continue
        while len(nz) > 1:
            nz.sort(key=lambda r: abs(r[col]))
            a = nz[0]
            merged = [a]
            for r in nz[1:]:
                t = r[col] // a[col]
                rr = [x - t * y for x, y in zip(r, a)]
                if rr[col] != 0:
                    merged.append(rr)
                elif any(rr):
                    rest.append(rr)
            if len(merged) == 1:
                break
            nz = merged
        piv = nz[0]
        if piv[col] < 0:
            piv = [-x for x in piv]
        out.append(piv)
        rows = rest
        col += 1
    for idx in range(len(out) - 1, -1, -1):
        piv = out[idx]
        pcol = next(j for j in range(cols) if piv[j] != 0)
        for k in range(idx):
            t = out[k][pcol] // piv[pcol]
            if t:
                out[k] = [x - t * y for x, y in zip(out[k], piv)]
    return out


def det3(b1, b2, b3) -> int:
    return (b1[0] * (b2[1] * b3[2] - b2[2] * b3[1])
            - b1[1] * (b2[0] * b3[2] - b2[2] * b3[0])
            + b1[2] * (b2[0] * b3[1] - b2[1] * b3[0]))


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """g, x, y with a x + b y = g = gcd(|a|, |b|)."""
    if b == 0:
        return (abs(a), 1 if a >= 0 else -1, 0)
    g, x, y = ext_gcd(b, a % b)
    return (g, y, x - (a // b) * y)


def _rank(rows) -> int:
    M = [list(map(Fraction, r)) for r in rows]
    if not M:
        return 0
    rank = 0
    used = [False] * len(M)
    for c in range(len(M[0])):
        piv = next((r for r in range(len(M)) if not used[r] and M[r][c] != 0), None)
        if piv is None:
            continue
        used[piv] = True
        rank += 1
        for r in range(len(M)):
            if r != piv and M[r][c] != 0:
                f = M[r][c] / M[piv][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[piv])]
    return rank


def _snf3(B: list[list[int]]) -> tuple[tuple[int, int, int], tuple]:
    """Smith normal form of a 3x3 integer matrix: (diag, U) with U B V = diag.

    Only the row-operation matrix U is returned; it converts a lattice vector
    into coordinates for the quotient group ⊕ Z_{d_k}.
    """
    M = [list(r) for r in B]
    n = 3
    U = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def row_swap(i, j):
        M[i], M[j] = M[j], M[i]
        U[i], U[j] = U[j], U[i]

    def row_addmul(i, j, t):
        M[i] = [x + t * y for x, y in zip(M[i], M[j])]
        U[i] = [x + t * y for x, y in zip(U[i], U[j])]

    def col_swap(i, j):
        for r in M:
            r[i], r[j] = r[j], r[i]

    def col_addmul(i, j, t):
        for r in M:
            r[i] += t * r[j]

    for k in range(n):
        while True:
            entries = [(abs(M[i][j]), i, j)
                       for i in range(k, n) for j in range(k, n) if M[i][j] != 0]
            if not entries:
                break
            _, i0, j0 = min(entries)
            if i0 != k:
                row_swap(k, i0)
            if j0 != k:
                col_swap(k, j0)
            for i in range(k + 1, n):
                if M[i][k] != 0:
                    row_addmul(i, k, -(M[i][k] // M[k][k]))
            for j in range(k + 1, n):
                if M[k][j] != 0:
                    col_addmul(j, k, -(M[k][j] // M[k][k]))
            if all(M[i][k] == 0 for i in range(k + 1, n)) and \
               all(M[k][j] == 0 for j in range(k + 1, n)):
                break
        if M[k][k] < 0:
            M[k] = [-x for x in M[k]]
            U[k] = [-x for x in U[k]]
    diag = (M[0][0], M[1][1], M[2][2])
    return diag, tuple(tuple(r) for r in U)


# ---------------------------------------------------------------------------
# data records
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoxElement:
    index: int                                   # position in the cone's box list
    v: tuple[int, int, int]                      # representative in the fundamental cell
    c: tuple[Fraction, Fraction, Fraction]       # weights w.r.t. (b_i1, b_i2, b_i3)
    age: Fraction


@dataclass(frozen=True)
class FlagData:
    i1: int
    i2: int
    i3: int
    r: int            # lattice index along the flag direction
    s: int            # twist, 0 <= s < r
    m: int            # order of the edge stabilizer
    e1: tuple[int, int]
    e2: tuple[int, int]
    mn: tuple[tuple[int, int], ...]              # chart exponents (m_i, n_i), all points
    u_loc: tuple[int, int]                       # framing vector in this chart
    weights: tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class Cone:
    index: int
    tri: tuple[int, int, int]     # point indices (i1, i2, i3), counterclockwise
    order: int                    # = 2 * area = |G_sigma|
    flag: FlagData
    box: tuple[BoxElement, ...]
    snf_diag: tuple[int, int, int]
    snf_u: tuple[tuple[int, int, int], ...]


@dataclass(frozen=True)
class KClass:
    """An effective class, stored by exact pairings with every divisor."""
    pairings: tuple[Fraction, ...]   # <D_i, beta> for every point i
    degrees: tuple[int, ...]         # <H_a, beta> >= 0
    v: tuple[int, int, int]          # sum_i ceil(<D_i, beta>) b_i


class Geometry:
    def __init__(self, raw: Mapping):
        self.raw = dict(raw)
        self._build()

    # -- construction -------------------------------------------------------
    def _build(self):
        raw = self.raw
        pts = [tuple(int(x) for x in p) for p in raw["points"]]
        if len(set(pts)) != len(pts):
            raise GeometryError("duplicate lattice points")
        self.points: list[tuple[int, int]] = pts
        self.n_points = len(pts)
        self.n_rays = int(raw.get("n_rays", len(pts)))
        if not (3 <= self.n_rays <= self.n_points):
            raise GeometryError("need at least three rays")
        self.p = self.n_points - 3
        self.p_prime = self.n_rays - 3
        self.framing = int(raw.get("framing", 1))
        self.truncation = dict(raw.get("truncation", {}))
        self.truncation.setdefault("q_order", 8)
        self.truncation.setdefault("x_order", 6)
        self.truncation.setdefault("z_order", 6)
        self.q_values = raw.get("q_values")

        self.b = [(m, n, 1) for (m, n) in pts]
        tris = [tuple(int(i) for i in t) for t in raw["triangles"]]
        for t in tris:
            if len(t) != 3 or len(set(t)) != 3:
                raise GeometryError(f"bad triangle {t}")
            if any(i >= self.n_rays for i in t):
                raise GeometryError(f"triangle {t} uses a non-ray point")
            if _orient2(pts[t[0]], pts[t[1]], pts[t[2]]) <= 0:
                raise GeometryError(f"triangle {t} is not counterclockwise")
        self.triangles = tris

        self.hull = _convex_hull(pts)
        self.genus, self.n_boundary = _lattice_counts(self.hull)
        self.n_branch = 2 * self.genus - 2 + self.n_boundary
        area2 = _polygon_area2(self.hull)
        if sum(_orient2(pts[t[0]], pts[t[1]], pts[t[2]]) for t in tris) != area2:
            raise GeometryError("triangulation does not cover the polytope")

        # relation lattice: kernel of v -> sum_i v_i b_i
        A = [[self.b[i][r] for i in range(self.n_points)] for r in range(3)]
        basis = smith_kernel(A)
        if len(basis) != self.p:
            raise GeometryError("relation lattice has unexpected rank")
        self.L_basis = basis
        # P[a][i] = <D_i, beta_a>
        self.P = [[Fraction(basis[a][i]) for i in range(self.n_points)]
                  for a in range(self.p)]

        fspec = raw.get("flag", {})
        sigma0 = int(fspec.get("sigma", 0))
        if not (0 <= sigma0 < len(tris)):
            raise GeometryError("flag sigma out of range")
        self.sigma0 = sigma0
        tau = fspec.get("tau")
        if tau is None:
            raise GeometryError("flag requires an edge 'tau'")
        self.tau0 = (int(tau[0]), int(tau[1]))
        if not set(self.tau0) <= set(tris[sigma0]):
            raise GeometryError("tau is not an edge of sigma")
        _check_outer_edge(pts, self.tau0)

        self.cones: list[Cone] = []
        for ci, t in enumerate(tris):
            if ci == sigma0:
                i2, i3 = self.tau0
                i1 = next(i for i in t if i not in self.tau0)
                order = (i1, i2, i3)
                if _orient2(pts[i1], pts[i2], pts[i3]) <= 0:
                    raise GeometryError("preferred flag (i1,i2,i3) must be counterclockwise")
            else:
                order = _canonical_ccw(pts, t)
            self.cones.append(self._build_cone(ci, order))
        self.cone0 = self.cones[sigma0]
        self.flag0 = self.cone0.flag

        if sum(c.order for c in self.cones) != area2:
            raise GeometryError("cone orders do not add up to twice the area")

        self._build_charges()
        self._validate_framing()

    def _build_cone(self, index: int, order: tuple[int, int, int]) -> Cone:
        i1, i2, i3 = order
        pts = self.points
        b1, b2, b3 = self.b[i1], self.b[i2], self.b[i3]
        vol = det3(b1, b2, b3)
        if vol <= 0:
            raise GeometryError("cone is not positively oriented")

        ux, uy = pts[i2][0] - pts[i3][0], pts[i2][1] - pts[i3][1]
        m = math.gcd(abs(ux), abs(uy))
        if m == 0:
            raise GeometryError("degenerate edge")
        e2 = (ux // m, uy // m)
        _, aa, bb = ext_gcd(e2[0], e2[1])
        e1 = (bb, -aa)
        if e1[0] * e2[1] - e1[1] * e2[0] != 1:
            raise GeometryError("unimodular completion failed")
        vx, vy = pts[i1][0] - pts[i3][0], pts[i1][1] - pts[i3][1]
        # write v = alpha e1 + beta e2; then r = alpha, s = -beta normalized mod r
        alpha = vx * e2[1] - vy * e2[0]
        beta = -(vx * e1[1] - vy * e1[0])
        r = alpha
        if r <= 0:
            raise GeometryError("flag normal form has nonpositive index")
        s = (-beta) % r
        u = (s + beta) // r
        e1 = (e1[0] + u * e2[0], e1[1] + u * e2[1])
        if (vx, vy) != (r * e1[0] - s * e2[0], r * e1[1] - s * e2[1]):
            raise GeometryError("flag normal form inconsistent")
        if r * m != vol:
            raise GeometryError("normal form volume mismatch")

        px3, py3 = pts[i3]
        mn = []
        for (px, py) in pts:
            dx, dy = px - px3, py - py3
            mm = dx * e2[1] - dy * e2[0]
            nn = -(dx * e1[1] - dy * e1[0])
            mn.append((mm, nn))

        a_, b_ = e1
        c_, d_ = e2
        f = self.framing
        u1 = d_ - f * c_
        u2 = -b_ + f * a_
        w1 = Fraction(u1, r)
        w2 = Fraction(s * u1, r * m) + Fraction(u2, m)
        w3 = -w1 - w2
        flag = FlagData(i1, i2, i3, r, s, m, e1, e2, tuple(mn), (u1, u2), (w1, w2, w3))

        box, diag, U = self._box_elements(order, vol)
        return Cone(index, order, vol, flag, box, diag, U)

    def _box_elements(self, order, vol):
        i1, i2, i3 = order
        B = [self.b[i1], self.b[i2], self.b[i3]]
        corners = []
        for m1 in (0, 1):
            for m2 in (0, 1):
                for m3 in (0, 1):
                    corners.append(tuple(m1 * B[0][k] + m2 * B[1][k] + m3 * B[2][k]
                                         for k in range(3)))
        lo = [min(c[k] for c in corners) for k in range(3)]
        hi = [max(c[k] for c in corners) for k in range(3)]
        Bmat = [[Fraction(B[j][k]) for j in range(3)] for k in range(3)]
        found = []
        for x in range(lo[0], hi[0] + 1):
            for y in range(lo[1], hi[1] + 1):
                for z in range(lo[2], hi[2] + 1):
                    c = solve_linear(Bmat, [Fraction(x), Fraction(y), Fraction(z)])
                    if all(0 <= ci < 1 for ci in c):
                        found.append(((x, y, z), tuple(c)))
        if len(found) != vol:
            raise GeometryError("box enumeration mismatch")
        found.sort(key=lambda vc: vc[1])
        box = tuple(BoxElement(i, v, c, sum(c, Fraction(0)))
                    for i, (v, c) in enumerate(found))
        diag, U = _snf3([[B[j][k] for j in range(3)] for k in range(3)])
        return box, diag, U

    def _build_charges(self):
        """Choose the charge basis H_a (nef-positive on every cone) and the
        expansion coefficients m_i of each divisor in that basis."""
        p, pp = self.p, self.p_prime
        self.I_sigma: list[list[int]] = []
        self.dual_vectors: list[dict[int, tuple[Fraction, ...]]] = []
        for cone in self.cones:
            inside = set(cone.tri)
            I = [i for i in range(self.n_points) if i not in inside]
            self.I_sigma.append(I)
            duals: dict[int, tuple[Fraction, ...]] = {}
            if p:
                M = [[self.P[a][j] for j in I] for a in range(p)]   # p x p
                for col, j in enumerate(I):
                    rhs = [Fraction(1) if c == col else Fraction(0) for c in range(p)]
                    x = solve_linear([[M[a][c] for a in range(p)] for c in range(p)], rhs)
                    vec = tuple(sum(x[a] * self.P[a][i] for a in range(p))
                                for i in range(self.n_points))
                    duals[j] = vec
            self.dual_vectors.append(duals)

        if p == 0:
            self.H = []
            self.s_matrices = [dict() for _ in self.cones]
            self.m_coeffs = [tuple() for _ in range(self.n_points)]
            return

        # to evaluate a functional (given by its action on the relation basis)
        # on a pairing vector, express the vector in the basis via p pivots
        pivot_cols: list[int] = []
        probe: list[list[Fraction]] = []
        for i in range(self.n_points):
            cand = [self.P[a][i] for a in range(p)]
            if _rank(probe + [cand]) > len(pivot_cols):
                pivot_cols.append(i)
                probe.append(cand)
            if len(pivot_cols) == p:
                break
        self._pivot_cols = pivot_cols
        self._pivot_mat = [[self.P[a][i] for a in range(p)] for i in pivot_cols]

        I0 = self.I_sigma[self.sigma0]
        box_pts = list(range(self.n_rays, self.n_points))
        fixed = [tuple(self.P[a][i] for a in range(p)) for i in box_pts]

        def valid_everywhere(h_action):
            for ci in range(len(self.cones)):
                for j in self.I_sigma[ci]:
                    val = self._pair_action(h_action, self.dual_vectors[ci][j])
                    if val.denominator != 1 or val < 0:
                        return False
            return True

        candidates = []
        bound = 4
        for svec in _tuples(p, bound):
            if not any(svec):
                continue
            h = tuple(sum(Fraction(svec[c]) * self.P[a][I0[c]] for c in range(p))
                      for a in range(p))
            if valid_everywhere(h):
                candidates.append((svec, h))
        candidates.sort(key=lambda t: t[0])

        sel_actions: list[tuple[Fraction, ...]] = []
        for svec, h in candidates:
            if len(sel_actions) == pp:
                break
            if _independent(sel_actions + [h], fixed):
                sel_actions.append(h)
        if len(sel_actions) != pp:
            raise GeometryError("could not find a nef-positive charge basis (bound 4)")

        H_actions = sel_actions + fixed
        if not _independent(H_actions, []):
            raise GeometryError("charge basis is degenerate")
        self.H = H_actions

        self.s_matrices: list[dict[int, dict[int, int]]] = []
        for ci in range(len(self.cones)):
            mat: dict[int, dict[int, int]] = {}
            for a, h in enumerate(H_actions):
                rep: dict[int, int] = {}
                for j in self.I_sigma[ci]:
                    val = self._pair_action(h, self.dual_vectors[ci][j])
                    if val.denominator != 1 or val < 0:
                        raise GeometryError("charge basis is not nef-positive on a cone")
                    rep[j] = int(val)
                mat[a] = rep
            self.s_matrices.append(mat)

        Hcols = [[self.H[a][c] for a in range(p)] for c in range(p)]
        self.m_coeffs = []
        for i in range(self.n_points):
            d_action = [self.P[a][i] for a in range(p)]
            x = solve_linear(Hcols, d_action)
            self.m_coeffs.append(tuple(x))

    def _pair_action(self, h_action, beta_pair):
        """<H, beta> where H acts on the relation basis as h_action and beta is
        a pairing vector in the relation subspace."""
        p = self.p
        rhs = [beta_pair[i] for i in self._pivot_cols]
        x = solve_linear(self._pivot_mat, rhs)
        return sum(h_action[a] * x[a] for a in range(p))

    def _validate_framing(self):
        for cone in self.cones:
            if any(w == 0 for w in cone.flag.weights):
                raise FramingError(
                    f"framing {self.framing} is degenerate at cone {cone.index}: "
                    f"weights {tuple(str(w) for w in cone.flag.weights)}")

    # -- queries -------------------------------------------------------------
    def degrees_of_pairings(self, pair: Sequence[Fraction]) -> tuple[Fraction, ...]:
        """<H_a, beta> for each a, from the pairing vector of beta."""
        return tuple(self._pair_action(self.H[a], tuple(pair)) for a in range(self.p))

    def v_point(self, pair: Sequence[Fraction]) -> tuple[int, int, int]:
        v = [0, 0, 0]
        for i in range(self.n_points):
            c = math.ceil(pair[i])
            if c:
                for k in range(3):
                    v[k] += c * self.b[i][k]
        return (v[0], v[1], v[2])

    def box_lookup(self, cone: Cone, v: Sequence[int]) -> BoxElement | None:
        """The box element of `cone` equivalent to v modulo the cone lattice."""
        B = [self.b[cone.tri[0]], self.b[cone.tri[1]], self.b[cone.tri[2]]]
        Bmat = [[Fraction(B[j][k]) for j in range(3)] for k in range(3)]
        c = solve_linear(Bmat, [Fraction(x) for x in v])
        cf = tuple(ci - math.floor(ci) for ci in c)
        for el in cone.box:
            if el.c == cf:
                return el
        return None

    def box_by_c(self, cone: Cone, c: Sequence[Fraction]) -> BoxElement | None:
        cf = tuple(Fraction(x) - math.floor(Fraction(x)) for x in c)
        for el in cone.box:
            if el.c == cf:
                return el
        return None

    def box_inverse(self, cone: Cone, el: BoxElement) -> BoxElement:
        res = self.box_lookup(cone, tuple(-x for x in el.v))
        if res is None:
            raise GeometryError("box inverse not found")
        return res

    def box_compose(self, cone: Cone, e1: BoxElement, e2: BoxElement) -> BoxElement:
        res = self.box_lookup(cone, tuple(x + y for x, y in zip(e1.v, e2.v)))
        if res is None:
            raise GeometryError("box composition not found")
        return res

    def characters(self, cone: Cone) -> list[list[Fraction]]:
        """Character table of G_sigma as exact phase exponents.

        chars[rho][g] is the Fraction t in [0,1) with character value
        e^{2 pi i t}; rows are indexed by characters (lex over the cyclic
        factors of the group), columns by box elements in cone.box order.
        """
        diag = [max(d, 1) for d in cone.snf_diag]
        U = cone.snf_u
        labels = []
        for a0 in range(diag[0]):
            for a1 in range(diag[1]):
                for a2 in range(diag[2]):
                    labels.append((a0, a1, a2))
        table: list[list[Fraction]] = []
        for lab in labels:
            row = []
            for el in cone.box:
                coords = [sum(U[k][j] * el.v[j] for j in range(3)) % diag[k]
                          for k in range(3)]
                expo = sum(Fraction(lab[k] * coords[k], diag[k]) for k in range(3))
                row.append(expo - math.floor(expo))
            table.append(row)
        return table

    def keff(self, max_degree: int) -> list[KClass]:
        """All nonzero effective classes with every H-degree <= max_degree."""
        seen: dict[tuple, KClass] = {}
        if self.p == 0:
            return []
        for ci in range(len(self.cones)):
            I = self.I_sigma[ci]
            duals = self.dual_vectors[ci]
            smat = self.s_matrices[ci]
            deg_inc = {j: tuple(smat[a][j] for a in range(self.p)) for j in I}

            def rec(idx: int, pair: tuple, degs: tuple):
                if idx == len(I):
                    if any(degs) and pair not in seen:
                        seen[pair] = KClass(pair, degs, self.v_point(pair))
                    return
                j = I[idx]
                inc = deg_inc[j]
                cur_pair, cur_degs = pair, degs
                while all(d <= max_degree for d in cur_degs):
                    rec(idx + 1, cur_pair, cur_degs)
                    if not any(inc):
                        raise GeometryError("unbounded effective cone direction")
                    cur_pair = tuple(x + y for x, y in zip(cur_pair, duals[j]))
                    cur_degs = tuple(d + i for d, i in zip(cur_degs, inc))

            zero_pair = tuple(Fraction(0) for _ in range(self.n_points))
            rec(0, zero_pair, tuple(0 for _ in range(self.p)))
        return sorted(seen.values(), key=lambda k: (sum(k.degrees), k.pairings))

    def pf_betas(self) -> list[tuple[Fraction, ...]]:
        """Relation-basis vectors oriented so every H-degree is >= 0, as
        pairing vectors; the generators for the recurrence operators."""
        out = []
        for a in range(self.p):
            pair = tuple(self.P[a][i] for i in range(self.n_points))
            degs = self.degrees_of_pairings(pair)
            if all(d >= 0 for d in degs):
                out.append(pair)
                continue
            neg = tuple(-x for x in pair)
            if all(d >= 0 for d in self.degrees_of_pairings(neg)):
                out.append(neg)
            else:
                raise GeometryError("relation basis element has mixed degrees")
        return out

    # -- description ----------------------------------------------------------
    def describe(self) -> dict:
        f0 = self.flag0
        out = {
            "points": [list(p) for p in self.points],
            "n_rays": self.n_rays,
            "triangles": [list(t) for t in self.triangles],
            "flag": {"sigma": self.sigma0, "tau": list(self.tau0)},
            "framing": self.framing,
            "truncation": dict(self.truncation),
        }
        if self.q_values is not None:
            out["q_values"] = self.q_values
        out["derived"] = {
            "parameters": self.p,
            "kahler_parameters": self.p_prime,
            "genus": self.genus,
            "boundary_points": self.n_boundary,
            "critical_points": self.n_branch,
            "cone_orders": [c.order for c in self.cones],
            "flag_normal_form": {"r": f0.r, "s": f0.s, "m": f0.m},
            "framed_weights": [str(w) for w in f0.weights],
            "ages": {str(ci): [str(el.age) for el in cone.box]
                     for ci, cone in enumerate(self.cones)},
            "charge_matrix": [[str(self.P[a][i]) for i in range(self.n_points)]
                              for a in range(self.p)],
            "coefficient_exponents": {
                str(i): {str(a): self.s_matrices[self.sigma0][a][i]
                         for a in range(self.p)}
                for i in self.I_sigma[self.sigma0]
            } if self.p else {},
            "divisor_in_basis": [[str(x) for x in self.m_coeffs[i]]
                                 for i in range(self.n_points)],
            "mirror_monomials": [list(mn) for mn in f0.mn],
        }
        return out


# ---------------------------------------------------------------------------
# polygon helpers
# ---------------------------------------------------------------------------

def _orient2(p1, p2, p3) -> int:
    return (p2[0] - p1[0]) * (p3[1] - p1[1]) - (p2[1] - p1[1]) * (p3[0] - p1[0])


def _canonical_ccw(pts, tri) -> tuple[int, int, int]:
    t = sorted(tri)
    if _orient2(pts[t[0]], pts[t[1]], pts[t[2]]) > 0:
        return (t[0], t[1], t[2])
    return (t[0], t[2], t[1])


def _convex_hull(pts) -> list[tuple[int, int]]:
    ps = sorted(set(pts))
    if len(ps) <= 2:
        raise GeometryError("degenerate polytope")

    def half(points):
        out = []
        for p in points:
            while len(out) >= 2 and _orient2(out[-2], out[-1], p) <= 0:
                out.pop()
            out.append(p)
        return out

    lower = half(ps)
    upper = half(list(reversed(ps)))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise GeometryError("polytope has empty interior area")
    return hull


def _polygon_area2(hull) -> int:
    s = 0
    n = len(hull)
    for i in range(n):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return abs(s)


def _lattice_counts(hull) -> tuple[int, int]:
    """(#interior, #boundary) lattice points of the hull polygon."""
    nb = 0
    n = len(hull)
    for i in range(n):
        x1, y1 = hull[i]
        x2, y2 = hull[(i + 1) % n]
        nb += math.gcd(abs(x2 - x1), abs(y2 - y1))
    a2 = _polygon_area2(hull)
    interior = (a2 - nb + 2) // 2
    return interior, nb


def _check_outer_edge(pts, tau):
    i2, i3 = tau
    p2, p3 = pts[i2], pts[i3]
    signs = set()
    for k, p in enumerate(pts):
        if k in tau:
            continue
        o = _orient2(p2, p3, p)
        if o == 0:
            lo, hi = min(p2, p3), max(p2, p3)
            if not (lo <= p <= hi):
                raise GeometryError("brane edge is not outer (collinear point outside)")
        else:
            signs.add(o > 0)
    if len(signs) > 1:
        raise GeometryError("brane edge is not on the polytope boundary")


def _tuples(p, bound):
    if p == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in _tuples(p - 1, bound):
            yield (head,) + tail


def _independent(vectors, fixed) -> bool:
    rows = [list(v) for v in fixed] + [list(v) for v in vectors]
    return _rank(rows) == len(rows)


# ---------------------------------------------------------------------------
# loading
# ---------------------------------------------------------------------------

def load_geometry(source) -> Geometry:
    """Load a geometry from a dict, a JSON string, or a path to a JSON file."""
    if isinstance(source, Geometry):
        return source
    if isinstance(source, Mapping):
        return Geometry(source)
    p = Path(source)
    if p.exists():
        return Geometry(json.loads(p.read_text()))
    return Geometry(json.loads(str(source)))


def bundled_geometry_path(name: str) -> Path:
    here = Path(__file__).parent / "geometries" / f"{name}.json"
    if not here.exists():
        raise GeometryError(f"no bundled geometry named {name!r}")
    return here


def bundled_names() -> list[str]:
    d = Path(__file__).parent / "geometries"
    return sorted(p.stem for p in d.glob("*.json"))


def load_bundled(name: str) -> Geometry:
    return load_geometry(bundled_geometry_path(name))
