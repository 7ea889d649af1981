"""Truncated multivariate Laurent series with exact Fraction exponents.

The coefficient ring is pluggable (see remodel.rings): exact rationals for the
lattice/hypergeometric side, Gaussian rationals for exact puncture expansions,
mpmath complex numbers for the numeric curve side.

Truncation is per-variable: a term is kept iff every exponent e_i <= orders[i].
Exponents may be negative (Laurent) and fractional; truncation only caps above.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

Exps = tuple  # tuple[Fraction, ...]


def _fr(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class TSeries:
    __slots__ = ("ring", "names", "orders", "terms")

    def __init__(self, ring, names: Sequence[str], orders: Sequence, terms=None):
        self.ring = ring
        self.names = tuple(names)
        self.orders = tuple(_fr(o) for o in orders)
        self.terms = {}
        if terms:
            for e, c in terms.items():
                self._put(tuple(_fr(x) for x in e), c)

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, ring, names, orders):
        return cls(ring, names, orders)

    @classmethod
    def const(cls, ring, names, orders, value):
        s = cls(ring, names, orders)
        zero_exp = (Fraction(0),) * len(s.names)
        s._put(zero_exp, value)
        return s

    @classmethod
    def one(cls, ring, names, orders):
        return cls.const(ring, names, orders, ring.from_int(1))

    @classmethod
    def var(cls, ring, names, orders, name, power=1, coeff=None):
        s = cls(ring, names, orders)
        i = s.names.index(name)
        e = [Fraction(0)] * len(s.names)
        e[i] = _fr(power)
        c = s.ring.from_int(1) if coeff is None else coeff
        s._put(tuple(e), c)
        return s

    def monomial(self, exps, coeff):
        s = self._new()
        s._put(tuple(_fr(x) for x in exps), coeff)
        return s

    def _new(self):
        return TSeries(self.ring, self.names, self.orders)

    def copy(self):
        s = self._new()
        s.terms = dict(self.terms)
        return s

    # -- internals ----------------------------------------------------------
    def _put(self, e: Exps, c):
        if any(x > o for x, o in zip(e, self.orders)):
            return
        if self.ring.is_zero(c):
            return
        cur = self.terms.get(e)
        if cur is None:
            self.terms[e] = c
        else:
            v = cur + c
            if self.ring.is_zero(v):
                del self.terms[e]
            else:
                self.terms[e] = v

    def _check_layout(self, other: "TSeries"):
        if self.names != other.names:
            raise ValueError(f"variable mismatch: {self.names} vs {other.names}")

    # -- queries -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, exps):
        e = tuple(_fr(x) for x in exps)
        return self.terms.get(e, self.ring.from_int(0))

    def items_sorted(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def coefficient_of(self, name: str, power) -> "TSeries":
        """Extract the coefficient of name**power as a series in the other variables."""
        i = self.names.index(name)
        p = _fr(power)
        rest_names = self.names[:i] + self.names[i + 1:]
        rest_orders = self.orders[:i] + self.orders[i + 1:]
        out = TSeries(self.ring, rest_names, rest_orders)
        for e, c in self.terms.items():
            if e[i] == p:
                out._put(e[:i] + e[i + 1:], c)
        return out

    def powers_of(self, name: str):
        i = self.names.index(name)
        return sorted({e[i] for e in self.terms})

    def min_power(self, name: str):
        ps = self.powers_of(name)
        return ps[0] if ps else None

    def __eq__(self, other):
        if not isinstance(other, TSeries):
            return NotImplemented
        return self.names == other.names and self.terms == other.terms

    def __repr__(self):
        parts = []
        for e, c in self.items_sorted()[:12]:
            mon = "*".join(f"{n}^{x}" for n, x in zip(self.names, e) if x != 0) or "1"
            parts.append(f"({c})*{mon}")
        suffix = " + ..." if len(self.terms) > 12 else ""
        return f"TSeries[{self.ring.name}; {'+'.join(parts) or '0'}{suffix}]"

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, TSeries):
            self._check_layout(other)
            out = self.copy()
            for e, c in other.terms.items():
                out._put(e, c)
            return out
        return self + TSeries.const(self.ring, self.names, self.orders, other)

    __radd__ = __add__

    def __neg__(self):
        out = self._new()
        out.terms = {e: -c for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-other if isinstance(other, TSeries) else -TSeries.const(
            self.ring, self.names, self.orders, other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TSeries):
            self._check_layout(other)
            out = self._new()
            if not self.terms or not other.terms:
                return out
            a, b = self.terms, other.terms
            if len(a) > len(b):
                a, b = b, a
            for e1, c1 in a.items():
                for e2, c2 in b.items():
                    e = tuple(x + y for x, y in zip(e1, e2))
                    if any(x > o for x, o in zip(e, out.orders)):
                        continue
                    out._put(e, c1 * c2)
            return out
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, scalar):
        out = self._new()
        if self.ring.is_zero(scalar) if not isinstance(scalar, (int, Fraction)) else scalar == 0:
            return out
        for e, c in self.terms.items():
            out._put(e, c * scalar)
        return out

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = TSeries.one(self.ring, self.names, self.orders)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base if n > 1 else base
            n >>= 1
        return out

    def map_coefficients(self, fn: Callable, ring=None) -> "TSeries":
        out = TSeries(ring or self.ring, self.names, self.orders)
        for e, c in self.terms.items():
            out._put(e, fn(c))
        return out

    def truncate(self, orders) -> "TSeries":
        out = TSeries(self.ring, self.names, orders)
        for e, c in self.terms.items():
            out._put(e, c)
        return out

    # -- calculus -------------------------------------------------------------
    def theta(self, name: str) -> "TSeries":
        """Logarithmic derivative q d/dq: multiplies each term by its exponent."""
        i = self.names.index(name)
        out = self._new()
        for e, c in self.terms.items():
            if e[i] != 0:
                out._put(e, c * self.ring.from_fraction(e[i]))
        return out

    def derivative(self, name: str) -> "TSeries":
        i = self.names.index(name)
        out = self._new()
        for e, c in self.terms.items():
            if e[i] != 0:
                e2 = list(e)
                e2[i] = e[i] - 1
                out._put(tuple(e2), c * self.ring.from_fraction(e[i]))
        return out

    def integrate_dlog(self, name: str) -> "TSeries":
        """int_0 s dX/X performed termwise: X^e -> X^e / e. Constant term must vanish."""
        i = self.names.index(name)
        out = self._new()
        for e, c in self.terms.items():
            if e[i] == 0:
                if not self.ring.is_zero(c):
                    raise ValueError("integrand has a constant term in " + name)
                continue
            out._put(e, c / self.ring.from_fraction(e[i]))
        return out

    def integrate(self, name: str) -> "TSeries":
        """int_0^X s dX' termwise: X^e -> X^(e+1)/(e+1)."""
        i = self.names.index(name)
        out = self._new()
        for e, c in self.terms.items():
            if e[i] == -1:
                raise ValueError("termwise integration hits a log at " + name + "^-1")
            e2 = list(e)
            e2[i] = e[i] + 1
            out._put(tuple(e2), c / self.ring.from_fraction(e[i] + 1))
        return out

    # -- inverses and composition ----------------------------------------------
    def inverse(self) -> "TSeries":
        """Multiplicative inverse; requires an invertible term of minimal total degree.

        Works for series c*m*(1 + t) with m a monomial and t of positive valuation:
        the monomial part is inverted exactly, the unit part by Newton iteration.
        """
        if not self.terms:
            raise ZeroDivisionError("inverting the zero series")
        # find the unique minimal exponent under total-degree-then-lex order
        def key(e):
            return (sum(e), e)
        e0 = min(self.terms, key=key)
        c0 = self.terms[e0]
        # strip the leading monomial
        shifted = self._new()
        neg_e0 = tuple(-x for x in e0)
        inv_c0 = self.ring.from_int(1) / c0
        for e, c in self.terms.items():
            shifted._put(tuple(x + y for x, y in zip(e, neg_e0)), c * inv_c0)
        # shifted = 1 + t with t of positive total valuation; Newton: x <- x(2 - s x)
        one = TSeries.one(self.ring, self.names, self.orders)
        t = shifted - one
        if any(sum(e) <= 0 for e in t.terms):
            raise ValueError("series has several minimal-degree terms; cannot invert")
        x = one.copy()
        # Newton doubles the correct order each pass; stop at the fixed point
        for _ in range(64):
            x_next = x * (one + one - shifted * x)
            if x_next == x:
                break
            x = x_next
        out = self._new()
        for e, c in x.terms.items():
            out._put(tuple(a + b for a, b in zip(e, neg_e0)), c * inv_c0)
        return out

    def __truediv__(self, other):
        if isinstance(other, TSeries):
            return self * other.inverse()
        return self.scale(self.ring.from_int(1) / (other if not isinstance(other, (int, Fraction))
                                                   else self.ring.from_fraction(_fr(other))))

    def compose(self, name: str, g: "TSeries") -> "TSeries":
        """Substitute the variable `name` by the series g (same layout, g(0)=0 in name-degree)."""
        self._check_layout(g)
        i = self.names.index(name)
        powers = sorted({e[i] for e in self.terms})
        if any(p != int(p) or p < 0 for p in powers):
            raise ValueError("composition requires nonnegative integer powers in " + name)
        # Horner over descending powers
        out = TSeries.zero(self.ring, self.names, self.orders)
        pmax = int(powers[-1]) if powers else 0
        for p in range(pmax, -1, -1):
            out = out * g
            out = out + self.coefficient_of(name, p).embed(self.names, self.orders)
        return out

    def embed(self, names, orders) -> "TSeries":
        """View a series in a subset of variables inside a larger layout (new vars power 0)."""
        names = tuple(names)
        out = TSeries(self.ring, names, orders)
        idx = [names.index(n) for n in self.names]
        for e, c in self.terms.items():
            e2 = [Fraction(0)] * len(names)
            for j, x in zip(idx, e):
                e2[j] = x
            out._put(tuple(e2), c)
        return out

    # -- univariate functional helpers -----------------------------------------
    def exp(self) -> "TSeries":
        if not self.ring.is_zero(self.coeff((Fraction(0),) * len(self.names))):
            raise ValueError("exp requires zero constant term")
        out = TSeries.one(self.ring, self.names, self.orders)
        term = TSeries.one(self.ring, self.names, self.orders)
        k = 1
        while True:
            term = term * self
            term = term.scale(self.ring.from_fraction(Fraction(1, k)))
            if term.is_zero():
                break
            out = out + term
            k += 1
            if k > 10000:
                raise RuntimeError("exp did not truncate")
        return out

    def log1p(self) -> "TSeries":
        """log(1 + s) for s with zero constant term."""
        zero_exp = (Fraction(0),) * len(self.names)
        if not self.ring.is_zero(self.coeff(zero_exp)):
            raise ValueError("log1p requires zero constant term")
        out = TSeries.zero(self.ring, self.names, self.orders)
        power = TSeries.one(self.ring, self.names, self.orders)
        k = 1
        while True:
            power = power * self
            if power.is_zero():
                break
            sign = Fraction(1, k) if k % 2 == 1 else Fraction(-1, k)
            out = out + power.scale(self.ring.from_fraction(sign))
            k += 1
            if k > 10000:
                raise RuntimeError("log1p did not truncate")
        return out

    def sqrt_one_plus(self) -> "TSeries":
        """(1 + s)^(1/2) for s with zero constant term, via the binomial series."""
        zero_exp = (Fraction(0),) * len(self.names)
        if not self.ring.is_zero(self.coeff(zero_exp)):
            raise ValueError("sqrt_one_plus requires zero constant term")
        out = TSeries.one(self.ring, self.names, self.orders)
        power = TSeries.one(self.ring, self.names, self.orders)
        coef = Fraction(1)
        k = 0
        while True:
            power = power * self
            if power.is_zero():
                break
            k += 1
            coef = coef * (Fraction(1, 2) - (k - 1)) / k
            out = out + power.scale(self.ring.from_fraction(coef))
            if k > 10000:
                raise RuntimeError("sqrt did not truncate")
        return out

    def evaluate(self, values: Mapping[str, object]):
        """Numeric evaluation at the given variable values; returns an mpmath mpc."""
        import mpmath
        total = mpmath.mpc(0)
        for e, c in self.terms.items():
            term = self.ring.to_mpc(c)
            for n, x in zip(self.names, e):
                if x != 0:
                    term = term * mpmath.power(values[n], mpmath.mpf(x.numerator) / x.denominator)
            total += term
        return total


# -- functional inversion ------------------------------------------------------

def lagrange_invert(f: TSeries, name: str) -> TSeries:
    """Compositional inverse of a univariate-in-`name` series f = c1*w + c2*w^2 + ...

    Returns w(z) as a series in the same variable symbol, with f(w(z)) = z.
    Other variables present in the layout are carried along as coefficients,
    provided f has no terms of name-degree 0.
    """
    i = f.names.index(name)
    if any(e[i] == 0 for e in f.terms):
        raise ValueError("inversion requires vanishing constant term")
    lin = f.coefficient_of(name, 1).embed(f.names, f.orders)
    if lin.is_zero():
        raise ValueError("inversion requires a nonzero linear term")
    lin_inv = lin.inverse()
    tail = f - lin * TSeries.var(f.ring, f.names, f.orders, name)
    z = TSeries.var(f.ring, f.names, f.orders, name)
    w = z * lin_inv
    max_order = int(f.orders[i]) + 1
    for _ in range(max_order + 1):
        w_new = (z - tail.compose(name, w)) * lin_inv
        if w_new == w:
            break
        w = w_new
    return w


def sqrt_chart(xhat: TSeries, name: str, z0=None, sqrt_leading=None) -> TSeries:
    """Given x(w) = u + c2 w^2 + c3 w^3 + ... (no linear term), return the local
    coordinate change w(zeta) with x = u + zeta^2.

    `sqrt_leading` must be a square root of c2 in the coefficient ring (defaults to
    ring.sqrt(c2)); the returned series is w(zeta) = zeta/sqrt_leading * (1 + ...).
    If z0 is given it is added as a constant (the chart center in the ambient
    coordinate), matching z(zeta) = z0 + w(zeta).
    """
    i = xhat.names.index(name)
    zero_exp = (Fraction(0),) * len(xhat.names)
    s = xhat.copy()
    # drop the constant u
    s.terms.pop(zero_exp, None)
    if any(e[i] < 2 for e in s.terms):
        raise ValueError("chart requires x - u to vanish to second order")
    c2 = s.coefficient_of(name, 2).embed(s.names, s.orders)
    if c2.is_zero():
        raise ValueError("degenerate chart: no quadratic term")
    c2_const = c2.coeff(zero_exp)
    if s.ring.is_zero(c2_const):
        raise ValueError("degenerate chart: quadratic coefficient vanishes at the center")
    root = sqrt_leading if sqrt_leading is not None else xhat.ring.sqrt(c2_const)
    # zeta(w) = w * root * sqrt(1 + t(w)) with 1 + t = (x-u)/(c2(0) w^2)
    w2 = TSeries.var(s.ring, s.names, s.orders, name, power=2)
    ratio = s * w2.inverse() / c2_const
    one = TSeries.one(s.ring, s.names, s.orders)
    zeta_of_w = TSeries.var(s.ring, s.names, s.orders, name) * (ratio - one).sqrt_one_plus()
    zeta_of_w = zeta_of_w.scale(root)
    w_of_zeta = lagrange_invert(zeta_of_w, name)
    if z0 is not None:
        w_of_zeta = w_of_zeta + TSeries.const(s.ring, s.names, s.orders, z0)
    return w_of_zeta
