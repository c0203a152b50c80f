"""Entropy estimates from lap counts of iterates.

The points where ``f^k`` stops being monotone on the cut line are the
``j``-th preimages (``j < k``) of ``a``, ``b`` and the cut at infinity.  They
are accumulated backwards, one preimage level at a time, as exact integer
pairs; the lap count of ``f^k`` is one more than the number of finite points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .cfmap import Params
from .projective import INF, ProjPoint

__all__ = [
    "DepthTooLarge",
    "LapCountSeries",
    "EntropyEstimate",
    "lap_counts",
    "gauss_lap_counts",
    "entropy_estimate",
    "DEFAULT_DEPTH",
    "DEFAULT_POINT_CAP",
]

DEFAULT_DEPTH = 22
DEFAULT_POINT_CAP = 10**7


class DepthTooLarge(MemoryError):
    pass


@dataclass(frozen=True)
class LapCountSeries:
    counts: tuple[int, ...]
    params: Params | None  # None for the slow Gauss map

    def ratios(self) -> list[float]:
        c = self.counts
        return [c[i] / c[i - 1] for i in range(1, len(c))]


@dataclass(frozen=True)
class EntropyEstimate:
    value: float
    uncertainty: float


def _fab_preimages(a: Fraction, b: Fraction):
    an, ad = a.numerator, a.denominator
    bn, bd = b.numerator, b.denominator
    pole_in_cell = a <= 0 < b

    def pre(y: tuple[int, int]):
        p, q = y
        if q == 0:
            if pole_in_cell:
                yield (0, 1)
            return
        # T branch: x = y - 1 with x < a
        x = p - q
        if x * ad < an * q:
            yield (x, q)
        # S branch: x = -1/y with a <= x < b
        if p:
            xp, xq = (-q, p) if p > 0 else (q, -p)
            if an * xq <= xp * ad and xp * bd < bn * xq:
                yield (xp, xq)
        # T^-1 branch: x = y + 1 with x >= b
        x = p + q
        if x * bd >= bn * q:
            yield (x, q)

    return pre


def _gauss_preimages(y: tuple[int, int]):
    # 0 and inf are the ends of the domain, so only finite interior points count
    p, q = y
    if q == 0 or p < 0:
        return
    # 1/x branch: x = 1/y in [0, 1)
    if p > q:
        yield (q, p)
    # x - 1 branch: x = y + 1 >= 1 always
    yield (p + q, q)


def _accumulate(start, pre, n: int, cap: int) -> tuple[int, ...]:
    points = set(start)
    new = set(start)
    counts = []
    for level in range(1, n + 1):
        counts.append(1 + sum(1 for _, q in points if q))
        if level == n:
            break
        nxt = set()
        for y in new:
            for x in pre(y):
                if x not in points:
                    nxt.add(x)
        points |= nxt
        new = nxt
        if len(points) > cap:
            raise DepthTooLarge(f"{len(points)} points at depth {level + 1} exceeds cap {cap}")
    return tuple(counts)


def lap_counts(params: Params, n: int = DEFAULT_DEPTH, cap: int = DEFAULT_POINT_CAP) -> LapCountSeries:
    """Lap counts ``L_1 .. L_n`` of the iterates of ``f_{a,b}``."""
    if n < 1:
        raise ValueError("depth must be >= 1")
    start = {(params.a.numerator, params.a.denominator), (params.b.numerator, params.b.denominator), (1, 0)}
    return LapCountSeries(_accumulate(start, _fab_preimages(params.a, params.b), n, cap), params)


def gauss_lap_counts(n: int = DEFAULT_DEPTH, cap: int = DEFAULT_POINT_CAP) -> LapCountSeries:
    """Lap counts of the slow Gauss map on [0, inf]."""
    return LapCountSeries(_accumulate({(1, 1)}, _gauss_preimages, n, cap), None)


def entropy_estimate(series: LapCountSeries) -> EntropyEstimate:
    """Mean of the last three log growth ratios, with their spread."""
    if len(series.counts) < 4:
        raise ValueError("need at least 4 lap counts")
    c = series.counts
    logs = [math.log(c[i] / c[i - 1]) for i in range(len(c) - 3, len(c))]
    value = sum(logs) / 3
    return EntropyEstimate(value, max(abs(r - value) for r in logs))


def preimage_points(params: Params, n: int) -> list[set[ProjPoint]]:
    """The sets ``P_1 .. P_n`` themselves (small depths only; for checks)."""
    pre = _fab_preimages(params.a, params.b)
    levels = [{ProjPoint(params.a.numerator, params.a.denominator),
               ProjPoint(params.b.numerator, params.b.denominator), INF}]
    for _ in range(n - 1):
        prev = levels[-1]
        levels.append(levels[0] | {ProjPoint(*x) for y in prev for x in pre(y)})
    return levels

