"""Exact arithmetic on the projective rational line and integer Moebius maps.

Points are homogeneous integer pairs ``(p : q)``; ``(1 : 0)`` is the point at
infinity.  Maps are 2x2 integer matrices taken up to sign, which is the group
PSL(2, Z) when the determinant is 1.

For interval work the circle is cut open at infinity, which gives the
:class:`CutPoint` order ``-inf < finite values < +inf``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import NamedTuple, Union

__all__ = [
    "ProjPoint",
    "INF",
    "CutPoint",
    "NEG_INF",
    "POS_INF",
    "MoebiusMap",
    "IDENTITY",
    "T",
    "S",
    "T_INV",
    "apply",
    "apply_cut",
    "compose",
    "inverse",
    "psl_equal",
    "compactify",
    "decompactify",
    "as_point",
    "as_cut",
]

Rational = Union[int, Fraction]


class ProjPoint(NamedTuple):
    """Normalized point ``(p : q)`` of Q u {inf}.

    Build through :meth:`of` so that ``gcd(|p|, |q|) == 1`` and ``q > 0``
    (or ``(1, 0)`` for infinity).  Tuple comparison is *not* the numeric
    order; use :class:`CutPoint` or :meth:`value` for that.
    """

    p: int
    q: int

    @classmethod
    def of(cls, p: int, q: int = 1) -> "ProjPoint":
        if p == 0 and q == 0:
            raise ValueError("(0 : 0) is not a projective point")
        g = gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        return cls(p, q)

    @classmethod
    def from_rational(cls, x: Rational) -> "ProjPoint":
        x = Fraction(x)
        return cls(x.numerator, x.denominator)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def value(self) -> Fraction | None:
        """The rational value, or ``None`` for infinity."""
        if self.q == 0:
            return None
        return Fraction(self.p, self.q)

    def __str__(self) -> str:
        if self.q == 0:
            return "inf"
        if self.q == 1:
            return str(self.p)
        return f"{self.p}/{self.q}"


INF = ProjPoint(1, 0)


@dataclass(frozen=True, order=True)
class CutPoint:
    """Point of the closed interval obtained by cutting R u {inf} at infinity.

    ``kind`` is -1, 0 or 1 for ``-inf``, a finite value and ``+inf``; the
    dataclass ordering on ``(kind, value)`` is then the interval order.
    """

    kind: int
    value: Fraction = Fraction(0)

    @classmethod
    def finite(cls, x: Rational) -> "CutPoint":
        return cls(0, Fraction(x))

    @classmethod
    def from_proj(cls, x: ProjPoint, side: int = 1) -> "CutPoint":
        """Convert; ``side`` picks the end used when ``x`` is infinity."""
        if x.q == 0:
            return POS_INF if side > 0 else NEG_INF
        return cls(0, Fraction(x.p, x.q))

    @property
    def is_finite(self) -> bool:
        return self.kind == 0

    def to_proj(self) -> ProjPoint:
        if self.kind:
            return INF
        return ProjPoint(self.value.numerator, self.value.denominator)

    def __str__(self) -> str:
        if self.kind < 0:
            return "-inf"
        if self.kind > 0:
            return "+inf"
        return str(self.value)


NEG_INF = CutPoint(-1)
POS_INF = CutPoint(1)


def as_point(x: ProjPoint | CutPoint | Rational | str) -> ProjPoint:
    """Coerce rationals, ``"p/q"`` strings, ``"inf"`` and cut points."""
    if isinstance(x, ProjPoint):
        return x
    if isinstance(x, CutPoint):
        return x.to_proj()
    if isinstance(x, str) and x.strip().lstrip("+-").lower() in ("inf", "oo", "infinity"):
        return INF
    return ProjPoint.from_rational(Fraction(x))


def as_cut(x: ProjPoint | CutPoint | Rational | str, side: int = 1) -> CutPoint:
    if isinstance(x, CutPoint):
        return x
    if isinstance(x, str):
        s = x.strip().lower()
        if s in ("-inf", "-oo", "-infinity"):
            return NEG_INF
        if s in ("inf", "+inf", "oo", "+oo", "infinity"):
            return POS_INF
    return CutPoint.from_proj(as_point(x), side)


@dataclass(frozen=True)
class MoebiusMap:
    """Integer matrix ``[[alpha, beta], [gamma, delta]]`` acting by
    ``x -> (alpha x + beta) / (gamma x + delta)``.

    Stored in PSL-canonical form: the first nonzero entry is positive, so two
    matrices represent the same map exactly when they compare equal.
    """

    alpha: int
    beta: int
    gamma: int
    delta: int

    def __post_init__(self):
        entries = (self.alpha, self.beta, self.gamma, self.delta)
        if self.det == 0:
            raise ValueError(f"singular matrix {entries}")
        lead = next(e for e in entries if e != 0)
        if lead < 0:
            for name, e in zip(("alpha", "beta", "gamma", "delta"), entries):
                object.__setattr__(self, name, -e)

    @property
    def det(self) -> int:
        return self.alpha * self.delta - self.beta * self.gamma

    def __call__(self, x: ProjPoint) -> ProjPoint:
        return apply(self, x)

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return compose(self, other)

    def __str__(self) -> str:
        return f"[[{self.alpha}, {self.beta}], [{self.gamma}, {self.delta}]]"


IDENTITY = MoebiusMap(1, 0, 0, 1)
T = MoebiusMap(1, 1, 0, 1)
S = MoebiusMap(0, -1, 1, 0)
T_INV = MoebiusMap(1, -1, 0, 1)


def apply(m: MoebiusMap, x: ProjPoint) -> ProjPoint:
    return ProjPoint.of(m.alpha * x.p + m.beta * x.q, m.gamma * x.p + m.delta * x.q)


def apply_cut(m: MoebiusMap, x: CutPoint, side: int) -> CutPoint:
    """Image of an interval endpoint under an increasing branch.

    ``side`` is -1 when ``x`` is a left endpoint and +1 for a right endpoint;
    an image at infinity is then read as ``-inf`` or ``+inf`` respectively.
    """
    return CutPoint.from_proj(apply(m, x.to_proj()), side)


def compose(m1: MoebiusMap, m2: MoebiusMap) -> MoebiusMap:
    """``m1 o m2`` (apply ``m2`` first)."""
    return MoebiusMap(
        m1.alpha * m2.alpha + m1.beta * m2.gamma,
        m1.alpha * m2.beta + m1.beta * m2.delta,
        m1.gamma * m2.alpha + m1.delta * m2.gamma,
        m1.gamma * m2.beta + m1.delta * m2.delta,
    )


def inverse(m: MoebiusMap) -> MoebiusMap:
    if m.det not in (1, -1):
        raise ValueError(f"{m} is not invertible over the integers")
    return MoebiusMap(m.delta, -m.beta, -m.gamma, m.alpha)


def psl_equal(m1: MoebiusMap, m2: MoebiusMap) -> bool:
    # both operands are already sign-normalized
    return m1 == m2


def compactify(x: CutPoint | ProjPoint | Rational) -> Fraction:
    """``x / (1 + |x|)``, sending the cut line onto [-1, 1]."""
    x = as_cut(x)
    if x.kind:
        return Fraction(x.kind)
    v = x.value
    return v / (1 + abs(v))


def decompactify(u: Rational) -> CutPoint:
    """Inverse of :func:`compactify` on [-1, 1]."""
    u = Fraction(u)
    if not -1 <= u <= 1:
        raise ValueError(f"{u} is outside [-1, 1]")
    if abs(u) == 1:
        return POS_INF if u > 0 else NEG_INF
    return CutPoint.finite(u / (1 - abs(u)))
