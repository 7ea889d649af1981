"""A-side generating series at the preferred fixed point.

Sector series in the Novikov variables with an equivariant parameter z,
flat coordinates (closed and open), the hypergeometric recurrence operators
that annihilate them, exact disk factors with their derivative ladder, and
the zero-limit transition matrix in each twisted sector.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .rings import MPC, QQ, QQI
from .series import TSeries
from .toric import Cone, FramingError, Geometry, GeometryError

Z = "z"


def q_names(geom: Geometry) -> list[str]:
    return [f"q{a}" for a in range(geom.p)]


def _mono(ring, names, orders, exp_by_name: dict, coeff) -> TSeries:
    base = TSeries.zero(ring, names, orders)
    e = [Fraction(0)] * len(base.names)
    for k, v in exp_by_name.items():
        e[base.names.index(k)] = Fraction(v)
    return base.monomial(tuple(e), coeff)


# ---------------------------------------------------------------------------
# Bernoulli numbers and polynomials (exact)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(n: int) -> Fraction:
    if n == 0:
        return Fraction(1)
    acc = Fraction(0)
    for k in range(n):
        acc += Fraction(math.comb(n + 1, k)) * bernoulli_number(k)
    return -acc / (n + 1)


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    return sum(Fraction(math.comb(n, k)) * bernoulli_number(k) * x ** (n - k)
               for k in range(n + 1))


# ---------------------------------------------------------------------------
# sector series
# ---------------------------------------------------------------------------

def _vertex_weights(geom: Geometry, equivariant: bool) -> dict[int, Fraction]:
    fl = geom.flag0
    if not equivariant:
        return {}
    return {fl.i1: fl.weights[0], fl.i2: fl.weights[1], fl.i3: fl.weights[2]}


def _ratio_product(geom, qnames, q_order, z_order, pairings, weights
                   ) -> TSeries | None:
    """Product over all points of the one-class restriction factor; None when
    a vanishing numerator factor kills the whole term.

    Computed with a locally enlarged z cap so that monomial poles and
    geometric expansions never lose cross terms, then truncated.
    """
    slack = sum(abs(math.ceil(d)) for d in pairings) + 1
    names = list(qnames) + [Z]
    orders = [q_order] * len(qnames) + [z_order + slack]

    def linear(w, c):
        out = TSeries.zero(QQ, names, orders)
        if w != 0:
            out = out + TSeries.const(QQ, names, orders, Fraction(w))
        if c != 0:
            out = out + TSeries.var(QQ, names, orders, Z, 1, Fraction(c))
        return out

    out = TSeries.one(QQ, names, orders)
    for i, d in enumerate(pairings):
        w = weights.get(i, Fraction(0))
        if d == 0:
            continue
        if d.denominator == 1:
            di = int(d)
            if di > 0:
                for mm in range(di):
                    out = out / linear(w, d - mm)
            else:
                for mm in range(di, 0):
                    if w == 0 and d - mm == 0:
                        return None
                    out = out * linear(w, d - mm)
        else:
            cd = math.ceil(d)
            if d > 0:
                for mm in range(cd):
                    out = out / linear(w, d - mm)
            else:
                for mm in range(cd, 0):
                    out = out * linear(w, d - mm)
    return out.truncate([q_order] * len(qnames) + [z_order])


def sector_series(geom: Geometry, q_order: int | None = None,
                  z_order: int = 4, equivariant: bool = True) -> dict[int, TSeries]:
    """Restriction of the big sector series to the preferred fixed point.

    Returns {box index of the preferred cone -> Laurent series in z whose
    coefficients are power series in q0..}. The untwisted sector starts at 1;
    a class contributes to the sector its shifted support point selects, and
    only when that point lies in the preferred fundamental cell.
    """
    if q_order is None:
        q_order = geom.truncation["q_order"]
    qn = q_names(geom)
    names = qn + [Z]
    orders = [q_order] * len(qn) + [z_order]
    weights = _vertex_weights(geom, equivariant)
    cone0 = geom.cone0
    by_v = {el.v: el for el in cone0.box}

    out = {el.index: TSeries.zero(QQ, names, orders) for el in cone0.box}
    unit = by_v[(0, 0, 0)]
    out[unit.index] = TSeries.one(QQ, names, orders)
    for beta in geom.keff(q_order):
        el = by_v.get(beta.v)
        if el is None:
            continue
        fac = _ratio_product(geom, qn, q_order, z_order, beta.pairings, weights)
        if fac is None:
            continue
        mono = _mono(QQ, names, orders,
                     {f"q{a}": beta.degrees[a] for a in range(geom.p)},
                     Fraction(1))
        out[el.index] = out[el.index] + fac * mono
    return out


# ---------------------------------------------------------------------------
# flat coordinates
# ---------------------------------------------------------------------------

def _stripped_value(d: Fraction) -> Fraction | None:
    """Non-equivariant scalar of one restriction factor (z set to 1)."""
    if d == 0:
        return Fraction(1)
    if d.denominator == 1:
        di = int(d)
        if di > 0:
            return Fraction(1, math.factorial(di))
        return None  # a zero factor appears in the numerator product
    cd = math.ceil(d)
    acc = Fraction(1)
    if d > 0:
        for mm in range(cd):
            acc *= d - mm
        return 1 / acc
    for mm in range(cd, 0):
        acc *= d - mm
    return acc


def point_series(geom: Geometry, q_order: int | None = None) -> list[TSeries]:
    """For every point i, the series collecting classes shifted onto b_i with
    all restriction factors stripped of z. These build the logarithmic
    corrections of the flat coordinates."""
    if q_order is None:
        q_order = geom.truncation["q_order"]
    names = q_names(geom)
    orders = [q_order] * len(names)
    out = [TSeries.zero(QQ, names, orders) for _ in range(geom.n_points)]
    targets = {geom.b[i]: i for i in range(geom.n_points)}
    for beta in geom.keff(q_order):
        i = targets.get(beta.v)
        if i is None:
            continue
        acc = Fraction(1)
        dead = False
        for d in beta.pairings:
            val = _stripped_value(d)
            if val is None:
                dead = True
                break
            acc *= val
        if dead:
            continue
        out[i] = out[i] + _mono(QQ, names, orders,
                                {f"q{a}": beta.degrees[a] for a in range(geom.p)},
                                acc)
    return out


class LogSeries:
    """A polynomial in the formal symbols log(q_a) with series coefficients."""

    def __init__(self, p: int, parts: dict[tuple, TSeries]):
        self.p = p
        self.parts = {k: v for k, v in parts.items() if v.terms}

    @classmethod
    def from_series(cls, p: int, s: TSeries) -> "LogSeries":
        return cls(p, {tuple(0 for _ in range(p)): s})

    @classmethod
    def log_q(cls, geom: Geometry, a: int, q_order: int) -> "LogSeries":
        names = q_names(geom)
        orders = [q_order] * len(names)
        key = tuple(1 if b == a else 0 for b in range(geom.p))
        return cls(geom.p, {key: TSeries.one(QQ, names, orders)})

    def __add__(self, other: "LogSeries") -> "LogSeries":
        parts = dict(self.parts)
        for k, v in other.parts.items():
            parts[k] = parts[k] + v if k in parts else v
        return LogSeries(self.p, parts)

    def __sub__(self, other: "LogSeries") -> "LogSeries":
        return self + other.scale(Fraction(-1))

    def scale(self, c) -> "LogSeries":
        return LogSeries(self.p, {k: v.scale(c) for k, v in self.parts.items()})

    def mul_series(self, s: TSeries) -> "LogSeries":
        return LogSeries(self.p, {k: v * s for k, v in self.parts.items()})

    def theta(self, a: int) -> "LogSeries":
        """q_a d/dq_a, treating log(q_a) formally."""
        parts: dict[tuple, TSeries] = {}

        def put(key, s):
            parts[key] = parts[key] + s if key in parts else s

        for key, s in self.parts.items():
            put(key, s.theta(f"q{a}"))
            if key[a]:
                down = tuple(e - 1 if b == a else e for b, e in enumerate(key))
                put(down, s.scale(Fraction(key[a])))
        return LogSeries(self.p, parts)

    def is_zero(self) -> bool:
        return all(not v.terms for v in self.parts.values())

    def series_part(self) -> TSeries:
        key = tuple(0 for _ in range(self.p))
        for k, v in self.parts.items():
            if k != key and v.terms:
                raise ValueError("log terms present")
        if key in self.parts:
            return self.parts[key]
        raise ValueError("no plain part")


def closed_mirror_maps(geom: Geometry, q_order: int | None = None) -> list[LogSeries]:
    """Flat coordinates: log q_a plus its correction series for the first p'
    parameters, then the twisted-sector series for the remaining ones."""
    if q_order is None:
        q_order = geom.truncation["q_order"]
    A = point_series(geom, q_order)
    out = []
    for a in range(geom.p):
        if a < geom.p_prime:
            ls = LogSeries.log_q(geom, a, q_order)
            for i in range(geom.n_rays):
                coef = geom.m_coeffs[i][a]
                if coef:
                    ls = ls + LogSeries.from_series(geom.p, A[i].scale(coef))
            out.append(ls)
        else:
            i = geom.n_rays + (a - geom.p_prime)
            out.append(LogSeries.from_series(geom.p, A[i]))
    return out


def open_mirror_correction(geom: Geometry, q_order: int | None = None) -> TSeries:
    """log(open flat coordinate) - log(curve coordinate), a q-series."""
    if q_order is None:
        q_order = geom.truncation["q_order"]
    A = point_series(geom, q_order)
    fl = geom.flag0
    acc = A[fl.i1].scale(fl.weights[0])
    acc = acc + A[fl.i2].scale(fl.weights[1])
    acc = acc + A[fl.i3].scale(fl.weights[2])
    return acc


def twisted_w_series(geom: Geometry, q_order: int | None = None) -> list[TSeries]:
    """One series per age-2 element of the preferred cone: the z^{-2}
    component of the non-equivariant sector series."""
    if q_order is None:
        q_order = geom.truncation["q_order"]
    sectors = sector_series(geom, q_order, z_order=2, equivariant=False)
    out = []
    for el in geom.cone0.box:
        if el.age == 2:
            out.append(sectors[el.index].coefficient_of(Z, Fraction(-2)))
    return out


# ---------------------------------------------------------------------------
# recurrence operators
# ---------------------------------------------------------------------------

def pf_apply(geom: Geometry, beta_pair, ls: LogSeries) -> LogSeries:
    """Apply the recurrence operator of an effective relation vector.

    The operator is q^beta times the product over negative pairings of
    falling factors, minus the product over positive pairings; every factor
    is built from the logarithmic derivation D_i = sum_a m_i^(a) theta_a.
    """
    degs = geom.degrees_of_pairings(beta_pair)
    if any(d < 0 or d.denominator != 1 for d in degs):
        raise GeometryError("operator vector is not effective")

    def apply_D(i: int, shift: int, cur: LogSeries) -> LogSeries:
        acc = LogSeries(geom.p, {})
        for a in range(geom.p):
            c = geom.m_coeffs[i][a]
            if c:
                acc = acc + cur.theta(a).scale(c)
        if shift:
            acc = acc + cur.scale(Fraction(-shift))
        return acc

    neg = ls
    pos = ls
    for i, d in enumerate(beta_pair):
        if d < 0:
            for mm in range(int(-d)):
                neg = apply_D(i, mm, neg)
        elif d > 0:
            for mm in range(int(d)):
                pos = apply_D(i, mm, pos)

    names = q_names(geom)
    sample = next(iter(ls.parts.values()), None)
    orders = sample.orders if sample is not None else \
        [geom.truncation["q_order"]] * len(names)
    mono = _mono(QQ, names, orders,
                 {f"q{a}": degs[a] for a in range(geom.p)}, Fraction(1))
    return neg.mul_series(mono) - pos


def pf_check(geom: Geometry, q_order: int | None = None) -> dict[str, bool]:
    """Annihilation of every flat coordinate and twisted partner series by
    every recurrence operator, exact through the truncation order."""
    if q_order is None:
        q_order = geom.truncation["q_order"]
    results: dict[str, bool] = {}
    betas = geom.pf_betas()
    maps = closed_mirror_maps(geom, q_order)
    ws = twisted_w_series(geom, q_order)
    for bi, beta in enumerate(betas):
        for a, tau in enumerate(maps):
            results[f"beta{bi}:tau{a}"] = pf_apply(geom, beta, tau).is_zero()
        for b, w in enumerate(ws):
            ls = LogSeries.from_series(geom.p, w)
            results[f"beta{bi}:w{b}"] = pf_apply(geom, beta, ls).is_zero()
    return results


# ---------------------------------------------------------------------------
# disk factors
# ---------------------------------------------------------------------------

def _gamma_ratio(A: Fraction, C: Fraction) -> Fraction:
    """Gamma(A)/Gamma(C) for A - C an integer, as an exact rational."""
    if (A - C).denominator != 1:
        raise ValueError("gamma ratio needs an integer difference")
    for X in (A, C):
        if X.denominator == 1 and X <= 0:
            raise FramingError(f"gamma pole at argument {X}")
    acc = Fraction(1)
    if A > C:
        x = C
        while x < A:
            acc *= x
            x += 1
        return acc
    x = A
    while x < C:
        acc *= x
        x += 1
    return 1 / acc


def _frac(x: Fraction) -> Fraction:
    return x - math.floor(x)


def disk_sector(geom: Geometry, d0: int, k: int):
    """Box element of the preferred cone selected by a winding/twist pair."""
    fl = geom.flag0
    w1, w2, w3 = fl.weights
    km = Fraction(k, fl.m)
    c = (_frac(d0 * w1), _frac(d0 * w2 - km), _frac(d0 * w3 + km))
    el = geom.box_by_c(geom.cone0, c)
    if el is None:
        raise GeometryError("winding/twist pair selects no box element")
    return el


def disk_factor(geom: Geometry, ring, d0: int, k: int):
    """Exact one-boundary factor for winding d0 > 0 and twist k."""
    fl = geom.flag0
    w1, w2, w3 = fl.weights
    el = disk_sector(geom, d0, k)
    c1, c2, c3 = el.c
    B_ = d0 * w1 - c1
    if B_.denominator != 1:
        raise GeometryError("inconsistent sector data")
    if B_ < 0:
        return ring.from_int(0)
    if el.age.denominator != 1:
        raise GeometryError("non-integral age in a Calabi-Yau box")
    A_ = d0 * (w1 + w2) + c3
    C_ = d0 * w2 - c2 + 1
    g = _gamma_ratio(A_, C_) / math.factorial(int(B_))
    scale = Fraction(1, fl.m) * Fraction(d0) ** (1 - int(el.age))
    phase = ring.phase_pi(d0 * w3 - c3)
    return ring.from_fraction(scale * g) * phase


def disk_ladder(geom: Geometry, ring, x_order: int, a_max: int):
    """Boundary insertions Phi^h_a for a = -2..a_max, organized as
    {box index -> {twist -> [series in X, rung a at list index a+2]}}.

    The twist label of a winding pair (d0, k) is (-k) mod m.
    """
    fl = geom.flag0
    m = fl.m
    G0 = geom.cone0.order
    names = ["X"]
    orders = [x_order]
    out: dict[int, dict[int, list[TSeries]]] = {
        el.index: {t: [TSeries.zero(ring, names, orders)
                       for _ in range(a_max + 3)]
                   for t in range(m)}
        for el in geom.cone0.box}
    for d0 in range(1, x_order + 1):
        for k in range(m):
            el = disk_sector(geom, d0, k)
            dfac = disk_factor(geom, ring, d0, k)
            if ring.is_zero(dfac):
                continue
            t = (-k) % m
            base = TSeries.zero(ring, names, orders)
            for j in range(a_max + 3):
                a = j - 2
                coef = dfac * ring.from_fraction(
                    Fraction(d0) ** a / Fraction(G0))
                out[el.index][t][j] = out[el.index][t][j] + \
                    base.monomial((Fraction(d0),), coef)
    return out


def disk_potential(geom: Geometry, ring=QQI, x_order: int | None = None,
                   q_order: int | None = None) -> dict[int, TSeries]:
    """One-boundary potential by twist component, as a series in q and the
    open flat coordinate X."""
    if x_order is None:
        x_order = geom.truncation["x_order"]
    if q_order is None:
        q_order = geom.truncation["q_order"]
    sectors = sector_series(geom, q_order, z_order=0, equivariant=True)
    min_pow = 0
    for s in sectors.values():
        mp = s.min_power(Z)
        if mp is not None:
            min_pow = min(min_pow, int(mp))
    a_max = -2 - min_pow
    ladder = disk_ladder(geom, ring, x_order, a_max)
    m = geom.flag0.m
    qn = q_names(geom)
    out_names = qn + ["X"]
    out_orders = [q_order] * len(qn) + [x_order]
    out = {t: TSeries.zero(ring, out_names, out_orders) for t in range(m)}
    for el in geom.cone0.box:
        s = sectors[el.index]
        for kz in range(min_pow, 1):
            c = s.coefficient_of(Z, Fraction(kz))
            if not c.terms:
                continue
            c = c.map_coefficients(ring.from_fraction, ring).embed(
                out_names, out_orders)
            j = -kz    # rung a = -2 - kz sits at list index a + 2
            for t in range(m):
                rung = ladder[el.index][t][j]
                if rung.terms:
                    out[t] = out[t] + c * rung.embed(out_names, out_orders)
    return out


def annulus_start(geom: Geometry, ring=QQI, x_order: int | None = None
                  ) -> dict[tuple[int, int], TSeries]:
    """(X1 d/dX1 + X2 d/dX2) of the two-boundary potential at the zero point
    of the moduli, by twist components: the pairing of rung-0 insertions of
    mutually inverse sectors, weighted by the product of weights fixed by
    the sector."""
    if x_order is None:
        x_order = geom.truncation["x_order"]
    fl = geom.flag0
    m = fl.m
    G0 = geom.cone0.order
    ladder = disk_ladder(geom, ring, x_order, 0)
    names = ["X1", "X2"]
    orders = [x_order, x_order]
    out = {(t1, t2): TSeries.zero(ring, names, orders)
           for t1 in range(m) for t2 in range(m)}
    w = fl.weights
    for el in geom.cone0.box:
        inv = geom.box_inverse(geom.cone0, el)
        e_h = Fraction(1)
        for i in range(3):
            if el.c[i] == 0:
                e_h *= w[i]
        for t1 in range(m):
            f1 = ladder[el.index][t1][2]
            if not f1.terms:
                continue
            f1 = TSeries(ring, names, orders,
                         {(e[0], Fraction(0)): c for e, c in f1.terms.items()})
            for t2 in range(m):
                f2 = ladder[inv.index][t2][2]
                if not f2.terms:
                    continue
                f2 = TSeries(ring, names, orders,
                             {(Fraction(0), e[0]): c for e, c in f2.terms.items()})
                out[(t1, t2)] = out[(t1, t2)] + (f1 * f2).scale(
                    ring.from_fraction(Fraction(G0) * e_h))
    return out


# ---------------------------------------------------------------------------
# limit transition matrix
# ---------------------------------------------------------------------------

def r_limit(geom: Geometry, cone: Cone | None = None, z_order: int = 3,
            ring=QQI) -> list[list[TSeries]]:
    """Transition matrix at the zero limit of the moduli, block at one cone.

    Entry [delta][gamma] is a polynomial in z of degree z_order; characters
    are indexed as in Geometry.characters. The default Gaussian-rational ring
    is exact but only valid when the cone group has order dividing 4; pass
    the numeric ring for other orders.
    """
    if cone is None:
        cone = geom.cone0
    chars = geom.characters(cone)
    n = cone.order
    w = cone.flag.weights
    names = [Z]
    orders = [z_order]
    inv_index = [geom.box_inverse(cone, el).index for el in cone.box]

    # the per-element weight factor is shared by all matrix entries
    factors = []
    for el in cone.box:
        expo = TSeries.zero(QQ, names, orders)
        for i in range(3):
            for mm in range(1, z_order + 1):
                coef = (Fraction((-1) ** mm, mm * (mm + 1))
                        * bernoulli_poly(mm + 1, el.c[i])
                        * (Fraction(1) / w[i]) ** mm)
                expo = expo + TSeries.var(QQ, names, orders, Z, mm, coef)
        factors.append(expo.exp().map_coefficients(ring.from_fraction, ring))

    out = []
    for delta in range(n):
        row = []
        for gamma in range(n):
            acc = TSeries.zero(ring, names, orders)
            for el in cone.box:
                chi = ring.phase_pi(2 * chars[delta][el.index]) * \
                    ring.phase_pi(2 * chars[gamma][inv_index[el.index]])
                acc = acc + factors[el.index].scale(
                    chi * ring.from_fraction(Fraction(1, n)))
            row.append(acc)
        out.append(row)
    return out
