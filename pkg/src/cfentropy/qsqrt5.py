"""Exact arithmetic in the field Q(sqrt 5).

The golden ratio and the Parry eigenvector of the Artin and Hurwitz matrices
live here, so cylinder measures and partial sums can be compared exactly.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = ["QSqrt5", "LAMBDA", "LAMBDA_INV", "golden_eigenvector"]

_SQRT5 = math.sqrt(5)


class QSqrt5:
    """``r + s * sqrt(5)`` with rational ``r``, ``s``."""

    __slots__ = ("r", "s")

    def __init__(self, r=0, s=0):
        self.r = Fraction(r)
        self.s = Fraction(s)

    @staticmethod
    def _coerce(other):
        if isinstance(other, QSqrt5):
            return other
        if isinstance(other, (int, Rational)):
            return QSqrt5(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.r + o.r, self.s + o.s)

    __radd__ = __add__

    def __neg__(self):
        return QSqrt5(-self.r, -self.s)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.r - o.r, self.s - o.s)

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QSqrt5(self.r * o.r + 5 * self.s * o.s, self.r * o.s + self.s * o.r)

    __rmul__ = __mul__

    def conjugate(self) -> "QSqrt5":
        return QSqrt5(self.r, -self.s)

    def norm(self) -> Fraction:
        return self.r * self.r - 5 * self.s * self.s

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt 5)")
        num = self * o.conjugate()
        return QSqrt5(num.r / n, num.s / n)

    def __rtruediv__(self, other):
        return QSqrt5._coerce(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return (1 / self) ** (-k)
        out, base = QSqrt5(1), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def sign(self) -> int:
        r, s = self.r, self.s
        if r >= 0 and s >= 0:
            return int(r > 0 or s > 0)
        if r <= 0 and s <= 0:
            return -1
        # opposite signs: compare r^2 with 5 s^2
        big = r * r - 5 * s * s
        return (1 if r > 0 else -1) if big > 0 else (1 if s > 0 else -1)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.r == o.r and self.s == o.s

    def __hash__(self):
        return hash((self.r, self.s)) if self.s else hash(self.r)

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.r or self.s)

    def __float__(self):
        r, s = self.r, self.s
        if (r >= 0) == (s >= 0) or not r or not s:
            return float(r) + float(s) * _SQRT5
        # opposite signs cancel; divide the exact norm by the conjugate instead
        return float(self.norm()) / (float(r) - float(s) * _SQRT5)

    def __repr__(self):
        return f"QSqrt5({self.r}, {self.s})"

    def __str__(self):
        return f"{self.r} + {self.s}*sqrt5"


LAMBDA = QSqrt5(Fraction(1, 2), Fraction(1, 2))
LAMBDA_INV = LAMBDA - 1


def golden_eigenvector() -> tuple[QSqrt5, ...]:
    """``(l+1, l, 1, l, l, 1, l, l+1) / (6l + 4)`` with ``l`` the golden ratio."""
    lam = LAMBDA
    norm = 6 * lam + 4
    return tuple(e / norm for e in (lam + 1, lam, QSqrt5(1), lam, lam, QSqrt5(1), lam, lam + 1))
