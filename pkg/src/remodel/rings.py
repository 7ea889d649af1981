"""Coefficient rings for truncated series: exact rationals, Gaussian rationals,
and arbitrary-precision complex floats.

A "ring" here is a small adapter object; the coefficients themselves are plain
Python objects supporting arithmetic operators (Fraction, QI, mpmath mpc).
"""
from __future__ import annotations

from fractions import Fraction
from typing import Any

import mpmath


class QI:
    """Gaussian rational a + b*i with exact Fraction components."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, QI):
            return other
        if isinstance(other, (int, Fraction)):
            return QI(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QI(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QI(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QI(o.re - self.re, o.im - self.im)

    def __neg__(self):
        return QI(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QI(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return QI((self.re * o.re + self.im * o.im) / d,
                  (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, n: int):
        if n < 0:
            return QI(1) / self ** (-n)
        out = QI(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self):
        return QI(self.re, -self.im)

    def __repr__(self):
        if self.im == 0:
            return f"QI({self.re})"
        return f"QI({self.re}, {self.im})"

    def to_mpc(self):
        return mpmath.mpc(_mpf_from_fraction(self.re), _mpf_from_fraction(self.im))


def _mpf_from_fraction(r: Fraction):
    return mpmath.mpf(r.numerator) / mpmath.mpf(r.denominator)


def phase_pi_qi(r: Fraction) -> QI:
    """e^{i pi r} as an exact Gaussian rational; requires 2r integral."""
    r = Fraction(r) % 2
    table = {Fraction(0): QI(1), Fraction(1, 2): QI(0, 1),
             Fraction(1): QI(-1), Fraction(3, 2): QI(0, -1)}
    if r not in table:
        raise ValueError(f"e^(i pi {r}) is not a Gaussian rational")
    return table[r]


def phase_pi_mpc(r: Fraction):
    """e^{i pi r} numerically at the current mpmath precision."""
    return mpmath.expjpi(_mpf_from_fraction(Fraction(r)))


class FractionRing:
    name = "QQ"

    @staticmethod
    def from_fraction(r: Fraction):
        return Fraction(r)

    @staticmethod
    def from_int(n: int):
        return Fraction(n)

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    @staticmethod
    def sqrt(x):
        f = Fraction(x)
        if f < 0:
            raise ValueError("negative rational has no rational square root")
        num = _isqrt_exact(f.numerator)
        den = _isqrt_exact(f.denominator)
        return Fraction(num, den)

    @staticmethod
    def phase_pi(r: Fraction):
        r = Fraction(r) % 2
        if r == 0:
            return Fraction(1)
        if r == 1:
            return Fraction(-1)
        raise ValueError(f"e^(i pi {r}) is not rational")

    @staticmethod
    def to_mpc(x):
        return mpmath.mpc(_mpf_from_fraction(Fraction(x)))


class GaussianRing:
    name = "QI"

    @staticmethod
    def from_fraction(r: Fraction):
        return QI(r)

    @staticmethod
    def from_int(n: int):
        return QI(n)

    @staticmethod
    def is_zero(x) -> bool:
        return x == QI(0) if isinstance(x, QI) else x == 0

    @staticmethod
    def sqrt(x):
        raise NotImplementedError("square roots are not taken in the exact Gaussian path")

    @staticmethod
    def phase_pi(r: Fraction):
        return phase_pi_qi(r)

    @staticmethod
    def to_mpc(x):
        if isinstance(x, QI):
            return x.to_mpc()
        return mpmath.mpc(_mpf_from_fraction(Fraction(x)))


class MPCRing:
    name = "MPC"

    @staticmethod
    def from_fraction(r: Fraction):
        return mpmath.mpc(_mpf_from_fraction(Fraction(r)))

    @staticmethod
    def from_int(n: int):
        return mpmath.mpc(n)

    @staticmethod
    def is_zero(x) -> bool:
        return x == 0

    @staticmethod
    def sqrt(x):
        return mpmath.sqrt(x)

    @staticmethod
    def phase_pi(r: Fraction):
        return phase_pi_mpc(r)

    @staticmethod
    def to_mpc(x):
        return mpmath.mpc(x)


def _isqrt_exact(n: int) -> int:
    import math
    r = math.isqrt(n)
    if r * r != n:
        raise ValueError(f"{n} is not a perfect square")
    return r


QQ = FractionRing()
QQI = GaussianRing()
MPC = MPCRing()
