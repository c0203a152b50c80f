"""Parry's conjugacy for the Artin (-1, 1) and Hurwitz (-1/2, 1/2) maps.

Both maps are Markov for the same eight-cell partition and share the Perron
data ``lambda = (1 + sqrt 5)/2`` and ``v`` (see :func:`golden_eigenvector`).
A cylinder ``(w_0, ..., w_n)`` carries mass ``v[w_n] / lambda^n``; the
conjugacy ``psi(x) = -1 + 2 * mass([-inf, x])`` is evaluated by descending
the cylinder tree and adding up the mass of everything to the left of ``x``.

All masses are exact elements of Q(sqrt 5), so brackets are exact too; floats
appear only in the reported ``lower`` / ``upper`` attributes.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .cfmap import BranchSymbol, Params, make_fab, validate_params
from .markov import MarkovPartition, TransitionMatrix, build_partition, transition_matrix
from .projective import (
    IDENTITY,
    S,
    T,
    T_INV,
    CutPoint,
    MoebiusMap,
    apply_cut,
    as_cut,
    compactify,
    compose,
    decompactify,
    inverse,
)
from .qsqrt5 import LAMBDA, LAMBDA_INV, QSqrt5, golden_eigenvector

__all__ = [
    "InadmissibleWord",
    "DegeneratePair",
    "Regime",
    "regime",
    "artin",
    "hurwitz",
    "shared_partition",
    "SymbolWord",
    "CylinderInterval",
    "is_admissible",
    "cylinder_measure",
    "cylinder_interval",
    "random_word",
    "expanding_property_check",
    "PsiBracket",
    "psi",
    "psi_closed_form_at_endpoints",
    "psi_equality_check",
    "quotient_bracket",
    "constant_slope_check",
    "golden_square_slope_check",
    "OFFSET_CONDITIONS",
]

PARTITION_POINTS = (-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2)


class InadmissibleWord(ValueError):
    pass


class DegeneratePair(ValueError):
    """The psi brackets of a sample pair are too close to separate."""


def shared_partition() -> MarkovPartition:
    """Shared partition, endpoints -inf, -2, -1, -1/2, 0, 1/2, 1, 2, +inf."""
    return MarkovPartition.from_points(PARTITION_POINTS)


@dataclass(frozen=True)
class Regime:
    name: str
    params: Params
    partition: MarkovPartition
    matrix: TransitionMatrix
    branches: tuple[MoebiusMap, ...]
    symbols: tuple[BranchSymbol, ...]
    v: tuple[QSqrt5, ...] = field(repr=False)
    # left_mass[i][j]: mass of the successors of cell i lying left of cell j
    left_mass: tuple[tuple[QSqrt5, ...], ...] = field(repr=False)

    @property
    def cells(self) -> list[tuple[CutPoint, CutPoint]]:
        return self.partition.cells

    def successors(self, symbol: int) -> list[int]:
        return [j + 1 for j in self.matrix.successors(symbol - 1)]


@lru_cache(maxsize=None)
def regime(name: str) -> Regime:
    coords = {"artin": (-1, 1), "hurwitz": (Fraction(-1, 2), Fraction(1, 2))}
    try:
        params = validate_params(*coords[name])
    except KeyError:
        raise ValueError(f"unknown regime {name!r}; use 'artin' or 'hurwitz'") from None
    partition = build_partition(params, PARTITION_POINTS)
    matrix = transition_matrix(params, partition)
    f = make_fab(params)
    mids = [CutPoint.finite(x) for x in (-3, Fraction(-3, 2), Fraction(-3, 4), Fraction(-1, 4),
                                         Fraction(1, 4), Fraction(3, 4), Fraction(3, 2), 3)]
    branches = tuple(f.branches[f.cell_index(m)] for m in mids)
    symbols = tuple(f.branch_at(m) for m in mids)
    v = golden_eigenvector()
    n = matrix.n
    left = []
    for i in range(n):
        row, acc = [], QSqrt5(0)
        for j in range(n):
            row.append(acc)
            if matrix[i, j]:
                acc = acc + v[j]
        left.append(tuple(row))
    return Regime(name, params, partition, matrix, branches, symbols, v, tuple(left))


def artin() -> Regime:
    return regime("artin")


def hurwitz() -> Regime:
    return regime("hurwitz")


def _regime(r: Regime | str) -> Regime:
    return regime(r) if isinstance(r, str) else r


@dataclass(frozen=True)
class SymbolWord:
    symbols: tuple[int, ...]
    regime: str = "artin"

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(int(s) for s in self.symbols))

    def __len__(self) -> int:
        return len(self.symbols)

    def __str__(self) -> str:
        return "".join(map(str, self.symbols))


def _as_word(word, regime_name: str | None = None) -> SymbolWord:
    if isinstance(word, SymbolWord):
        return word
    return SymbolWord(tuple(word), regime_name or "artin")


def is_admissible(r: Regime | str, symbols: Sequence[int]) -> bool:
    m = _regime(r).matrix
    if not symbols or any(not 1 <= s <= m.n for s in symbols):
        return False
    return all(m[s - 1, t - 1] for s, t in zip(symbols, symbols[1:]))


def _require_admissible(word: SymbolWord) -> Regime:
    r = regime(word.regime)
    if not is_admissible(r, word.symbols):
        raise InadmissibleWord(f"{word} is not {word.regime}-admissible")
    return r


def cylinder_measure(word, v: Sequence | None = None, lam=None):
    """``v[w_n] / lam^n`` (exact by default)."""
    word = _as_word(word)
    r = _require_admissible(word)
    v = r.v if v is None else v
    lam = LAMBDA if lam is None else lam
    return v[word.symbols[-1] - 1] / lam ** (len(word) - 1)


def random_word(r: Regime | str, length: int, rng: random.Random) -> SymbolWord:
    r = _regime(r)
    s = [rng.randint(1, r.matrix.n)]
    while len(s) < length:
        s.append(rng.choice(r.successors(s[-1])))
    return SymbolWord(tuple(s), r.name)


@dataclass
class ExpandingReport:
    passed: bool
    n_words: int
    max_error: float


def expanding_property_check(words: Iterable) -> ExpandingReport:
    """``mass(shift(w)) == lambda * mass(w)`` for each word (length >= 2)."""
    worst, n = 0.0, 0
    ok = True
    for w in words:
        w = _as_word(w)
        if len(w) < 2:
            raise ValueError("words must have length >= 2")
        shifted = SymbolWord(w.symbols[1:], w.regime)
        lhs, rhs = cylinder_measure(shifted), LAMBDA * cylinder_measure(w)
        ok &= lhs == rhs
        worst = max(worst, abs(float(lhs) - float(rhs)))
        n += 1
    return ExpandingReport(ok and worst <= 1e-12, n, worst)


@dataclass(frozen=True)
class CylinderInterval:
    word: SymbolWord
    lower: CutPoint
    upper: CutPoint
    composed_map: MoebiusMap

    @property
    def endpoints(self) -> tuple[CutPoint, CutPoint]:
        return self.lower, self.upper


def cylinder_interval(r: Regime | str, word) -> CylinderInterval:
    """Exact interval of points with itinerary ``word``.

    Built right to left: the last cell is pulled back through the inverse
    branch of each earlier symbol.
    """
    r = _regime(r)
    word = _as_word(word, r.name)
    if word.regime != r.name:
        word = SymbolWord(word.symbols, r.name)
    _require_admissible(word)
    lo, hi = r.cells[word.symbols[-1] - 1]
    composed = IDENTITY
    for s in reversed(word.symbols[:-1]):
        back = inverse(r.branches[s - 1])
        lo, hi = apply_cut(back, lo, -1), apply_cut(back, hi, 1)
        composed = compose(back, composed)
    return CylinderInterval(word, lo, hi, composed)


# ---------------------------------------------------------------------------
# psi


@dataclass(frozen=True)
class PsiBracket:
    lower: float
    upper: float
    depth: int
    exact_lower: QSqrt5 = field(repr=False)
    exact_upper: QSqrt5 = field(repr=False)

    @property
    def width(self) -> float:
        return self.upper - self.lower

    def contains(self, value) -> bool:
        if isinstance(value, QSqrt5):
            return self.exact_lower <= value <= self.exact_upper
        return self.lower <= value <= self.upper

    def overlaps(self, other: "PsiBracket") -> bool:
        return self.exact_lower <= other.exact_upper and other.exact_lower <= self.exact_upper


def _down(x: QSqrt5) -> float:
    """Largest float found below ``x``, checked exactly."""
    f = float(x)
    while x < Fraction(f):
        f = math.nextafter(f, -math.inf)
    return f


def _up(x: QSqrt5) -> float:
    f = float(x)
    while x > Fraction(f):
        f = math.nextafter(f, math.inf)
    return f


def psi(r: Regime | str, x, depth: int = 30) -> PsiBracket:
    """Bracket on ``psi(x)`` from the rank-``depth`` cylinder containing ``x``.

    ``x`` is a point of the cut line (uncompactified).  On a cylinder boundary
    the right-hand cylinder is followed.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    r = _regime(r)
    y = as_cut(x)
    part = r.partition
    i = part.locate(y)
    acc = sum(r.v[:i], QSqrt5(0))
    scale = QSqrt5(1)
    for _ in range(depth - 1):
        y = apply_cut(r.branches[i], y, 1 if y.kind > 0 else -1)
        j = part.locate(y)
        if not r.matrix[i, j]:
            raise AssertionError(f"descent left the admissible successors of cell {i + 1}")
        scale = scale * LAMBDA_INV
        acc = acc + r.left_mass[i][j] * scale
        i = j
    lo = 2 * acc - 1
    hi = lo + 2 * r.v[i] * scale
    return PsiBracket(_down(lo), _up(hi), depth, lo, hi)


def psi_closed_form_at_endpoints() -> list[tuple[CutPoint, QSqrt5]]:
    """``psi`` at the nine partition endpoints from partial sums of ``v``."""
    v = golden_eigenvector()
    ends = shared_partition().endpoints
    return [(e, 2 * sum(v[:i], QSqrt5(0)) - 1) for i, e in enumerate(ends)]


@dataclass
class PsiEqualityReport:
    passed: bool
    n_points: int
    max_gap: float
    max_width: float
    failures: list = field(default_factory=list)


def psi_equality_check(points: Iterable, depth: int = 30) -> PsiEqualityReport:
    """Do the Artin and Hurwitz brackets overlap at every point?"""
    rep = PsiEqualityReport(True, 0, 0.0, 0.0)
    for x in points:
        pa, ph = psi("artin", x, depth), psi("hurwitz", x, depth)
        rep.n_points += 1
        gap = max(0.0, ph.lower - pa.upper, pa.lower - ph.upper)
        rep.max_gap = max(rep.max_gap, gap)
        rep.max_width = max(rep.max_width, pa.width, ph.width)
        if not pa.overlaps(ph):
            rep.passed = False
            rep.failures.append(as_cut(x))
    return rep


# ---------------------------------------------------------------------------
# constant slope


PsiFn = Callable[[CutPoint], PsiBracket]


def quotient_bracket(psi_fn: PsiFn, f, x: CutPoint, y: CutPoint) -> tuple[QSqrt5, QSqrt5]:
    """Bracket on ``(psi(f y) - psi(f x)) / (psi(y) - psi(x))`` for ``x < y``
    in one monotone cell of ``f``."""
    if not x < y:
        x, y = y, x
    px, py = psi_fn(x), psi_fn(y)
    qx, qy = psi_fn(as_cut(f(x))), psi_fn(as_cut(f(y)))
    d_lo, d_hi = py.exact_lower - px.exact_upper, py.exact_upper - px.exact_lower
    n_lo, n_hi = qy.exact_lower - qx.exact_upper, qy.exact_upper - qx.exact_lower
    if d_lo.sign() <= 0 or n_lo.sign() <= 0:
        raise DegeneratePair(f"psi brackets at {x} and {y} are not separated")
    return n_lo / d_hi, n_hi / d_lo


def _sample_in(lo: CutPoint, hi: CutPoint, rng: random.Random, grid: int = 1 << 14) -> CutPoint:
    """Random rational strictly inside ``[lo, hi]``, uniform in compact coordinates."""
    kl, kh = compactify(lo), compactify(hi)
    return decompactify(kl + (kh - kl) * Fraction(rng.randint(1, grid - 1), grid))


def _branch_cells(params: Params) -> list[tuple[CutPoint, CutPoint]]:
    cuts = sorted({params.a, params.b, Fraction(0)})
    ends = [CutPoint(-1), *(CutPoint.finite(c) for c in cuts), CutPoint(1)]
    return [(ends[i], ends[i + 1]) for i in range(len(ends) - 1) if ends[i] < ends[i + 1]]


# (name, interval, generator, expected offset) for psi o g o psi^-1 = lambda x + c
OFFSET_CONDITIONS = (
    ("c1", (CutPoint(-1), CutPoint.finite(Fraction(-1, 2))), "T", LAMBDA - 1),
    ("c2", (CutPoint.finite(-1), CutPoint.finite(0)), "S", QSqrt5(1)),
    ("c3", (CutPoint.finite(0), CutPoint.finite(1)), "S", QSqrt5(-1)),
    ("c4", (CutPoint.finite(Fraction(1, 2)), CutPoint(1)), "Tinv", 1 - LAMBDA),
)


@dataclass
class OffsetEstimate:
    name: str
    expected: float
    estimate: float
    max_deviation: float
    contained: bool


@dataclass
class SlopeReport:
    params: Params
    psi_regime: str
    passed: bool
    n_pairs: int
    n_contained: int
    n_degenerate: int
    max_width: float
    offsets: list[OffsetEstimate] = field(default_factory=list)


def _slope_pairs(params: Params, psi_fn: PsiFn, pairs: int, rng: random.Random, report: SlopeReport):
    f = make_fab(params)
    cells = _branch_cells(params)
    attempts = 0
    while report.n_pairs < pairs:
        attempts += 1
        if attempts > 20 * pairs:
            break
        lo, hi = cells[report.n_pairs % len(cells)]
        x, y = _sample_in(lo, hi, rng), _sample_in(lo, hi, rng)
        if x == y:
            continue
        try:
            q_lo, q_hi = quotient_bracket(psi_fn, f, x, y)
        except DegeneratePair:
            report.n_degenerate += 1
            continue
        report.n_pairs += 1
        report.max_width = max(report.max_width, float(q_hi - q_lo))
        if q_lo <= LAMBDA <= q_hi:
            report.n_contained += 1


def _offsets(psi_fn: PsiFn, rng: random.Random, per_condition: int = 8) -> list[OffsetEstimate]:
    gens = {"T": T, "S": S, "Tinv": T_INV}
    out = []
    for name, (lo, hi), gen, expected in OFFSET_CONDITIONS:
        m = gens[gen]
        dev, contained, mids = 0.0, True, []
        for _ in range(per_condition):
            u = _sample_in(lo, hi, rng)
            pu, pm = psi_fn(u), psi_fn(apply_cut(m, u, -1))
            c_lo = pm.exact_lower - LAMBDA * pu.exact_upper
            c_hi = pm.exact_upper - LAMBDA * pu.exact_lower
            contained &= c_lo <= expected <= c_hi
            mid = 0.5 * (float(c_lo) + float(c_hi))
            mids.append(mid)
            dev = max(dev, abs(mid - float(expected)))
        out.append(OffsetEstimate(name, float(expected), sum(mids) / len(mids), dev, contained))
    return out


def _slope_check(params: Params, psi_regime: str, pair_samples: int, depth: int, seed: int,
                 offsets: bool) -> SlopeReport:
    rng = random.Random(seed)

    @lru_cache(maxsize=None)
    def psi_fn(x: CutPoint) -> PsiBracket:
        return psi(psi_regime, x, depth)

    rep = SlopeReport(params, psi_regime, False, 0, 0, 0, 0.0)
    _slope_pairs(params, psi_fn, pair_samples, rng, rep)
    if offsets:
        rep.offsets = _offsets(psi_fn, rng)
    rep.passed = (
        rep.n_pairs == pair_samples
        and rep.n_contained == rep.n_pairs
        and all(o.contained and o.max_deviation <= 1e-5 for o in rep.offsets)
    )
    return rep


def constant_slope_check(r: Regime | str, pair_samples: int = 100, depth: int = 30,
                         seed: int = 0) -> SlopeReport:
    """Difference quotients of ``psi o f o psi^-1`` for the regime's own map,
    plus the four offsets ``c1..c4``."""
    r = _regime(r)
    return _slope_check(r.params, r.name, pair_samples, depth, seed, offsets=True)


GOLDEN_SQUARE = (Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(1))


def golden_square_slope_check(params: Params, samples: int = 100, depth: int = 30,
                              seed: int = 0) -> SlopeReport:
    """Slope ``lambda`` for ``f_{a,b}`` under the shared ``psi``, on each of
    ``[-inf, a], [a, 0], [0, b], [b, +inf]``."""
    a0, a1, b0, b1 = GOLDEN_SQUARE
    if not (a0 <= params.a <= a1 and b0 <= params.b <= b1):
        raise ValueError(f"{params} is outside the golden square")
    return _slope_check(params, "artin", samples, depth, seed, offsets=False)
