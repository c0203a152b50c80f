"""Markov partitions of f_{a,b}, transition matrices and their spectral data.

A partition is grown from the orbit closure of the discontinuity data: the
breakpoints ``a``, ``b``, their one-sided images ``Ta, Sa, Sb, T^-1 b``, the
pole ``0`` of the ``S`` branch and the cut point at infinity.  When that set is
finite it is forward invariant and every cell is mapped by a single branch
onto a union of cells.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .cfmap import BranchedMap, Params, make_fab, make_slow_gauss
from .projective import INF, NEG_INF, POS_INF, CutPoint, ProjPoint, apply_cut, as_cut

__all__ = [
    "BudgetExhausted",
    "NotMarkov",
    "NotMarkovWithinBudget",
    "ZeroMatrix",
    "DimensionTooLarge",
    "ConvergenceError",
    "CycleWitness",
    "MarkovPartition",
    "TransitionMatrix",
    "SpectrumResult",
    "MarkovEntropy",
    "DEFAULT_MAX_POINTS",
    "DEFAULT_MAX_ITER",
    "seeds",
    "orbit_closure",
    "cycle_witness",
    "build_partition",
    "refine_partition",
    "cell_image",
    "transition_matrix",
    "slow_gauss_matrix",
    "spectral_radius",
    "right_eigenvector",
    "exact_right_eigenvector",
    "char_poly",
    "poly_eval",
    "markov_entropy",
]

DEFAULT_MAX_POINTS = 4096
DEFAULT_MAX_ITER = 4096


class BudgetExhausted(RuntimeError):
    pass


class NotMarkov(ValueError):
    def __init__(self, cell: int, detail: str = ""):
        self.cell = cell
        super().__init__(f"cell {cell} is not mapped onto a union of cells {detail}".strip())


class NotMarkovWithinBudget(RuntimeError):
    def __init__(self, params: Params, max_points: int, max_iter: int):
        self.params = params
        self.max_points = max_points
        self.max_iter = max_iter
        super().__init__(
            f"no finite orbit closure for {params} within "
            f"max_points={max_points}, max_iter={max_iter}"
        )


class ZeroMatrix(ValueError):
    """The transition graph has no cycle, so the spectral radius is 0."""


class DimensionTooLarge(ValueError):
    pass


class ConvergenceError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# orbits


def seeds(params: Params) -> list[ProjPoint]:
    a, b = params.a, params.b
    pa = ProjPoint(a.numerator, a.denominator)
    pb = ProjPoint(b.numerator, b.denominator)
    pts = [
        pa,
        pb,
        ProjPoint.of(pa.p + pa.q, pa.q),  # Ta
        ProjPoint.of(-pa.q, pa.p),  # Sa
        ProjPoint.of(-pb.q, pb.p),  # Sb, left limit at b
        ProjPoint.of(pb.p - pb.q, pb.q),  # T^-1 b
        INF,
    ]
    if a < 0 < b:
        pts.append(ProjPoint(0, 1))
    return pts


def orbit_closure(
    params: Params,
    max_points: int = DEFAULT_MAX_POINTS,
    max_iter: int = DEFAULT_MAX_ITER,
) -> list[ProjPoint]:
    """Smallest forward-invariant set containing :func:`seeds`.

    Returned sorted by value with infinity last.  Raises
    :class:`BudgetExhausted` when an orbit runs ``max_iter`` steps without
    re-entering the set or the set outgrows ``max_points``.
    """
    f = make_fab(params)
    found: set[ProjPoint] = set()
    for x in seeds(params):
        steps = 0
        while x not in found:
            found.add(x)
            if len(found) > max_points:
                raise BudgetExhausted(f"orbit closure of {params} exceeds {max_points} points")
            if steps >= max_iter:
                raise BudgetExhausted(f"orbit of a seed of {params} open after {max_iter} steps")
            x = f(x)
            steps += 1
    return sorted(found, key=lambda z: (z.q == 0, Fraction(z.p, z.q) if z.q else 0))


@dataclass(frozen=True)
class CycleWitness:
    """Matching exponents; a side whose orbits never meet is left as ``None``."""

    m_a: int | None
    k_a: int | None
    m_b: int | None
    k_b: int | None

    @property
    def complete(self) -> bool:
        return self.m_a is not None and self.m_b is not None


def _first_match(f: BranchedMap, x: ProjPoint, y: ProjPoint, n: int) -> tuple[int, int] | None:
    xs = f.orbit(x, n)
    first: dict[ProjPoint, int] = {}
    for k, z in enumerate(f.orbit(y, n)):
        first.setdefault(z, k)
    best = None
    for m, z in enumerate(xs):
        k = first.get(z)
        if k is not None and (best is None or (m + k, m) < (sum(best), best[0])):
            best = (m, k)
    return best


def cycle_witness(params: Params, max_iter: int = DEFAULT_MAX_ITER) -> CycleWitness | None:
    """Exponents with ``f^m_a(Sa) = f^k_a(Ta)`` and ``f^m_b(T^-1 b) = f^k_b(Sb)``.

    Minimal ``m + k`` first, then minimal ``m``.  A side whose orbits do not
    meet within ``max_iter`` steps is left empty; ``None`` if neither meets.
    """
    f = make_fab(params)
    _, _, ta, sa, sb, tinvb = seeds(params)[:6]
    wa = _first_match(f, sa, ta, max_iter) or (None, None)
    wb = _first_match(f, tinvb, sb, max_iter) or (None, None)
    if wa[0] is None and wb[0] is None:
        return None
    return CycleWitness(*wa, *wb)


# ---------------------------------------------------------------------------
# partitions


@dataclass(frozen=True)
class MarkovPartition:
    """Consecutive closed cells between sorted cut points ``-inf ... +inf``."""

    endpoints: tuple[CutPoint, ...]

    @classmethod
    def from_points(cls, points: Iterable) -> "MarkovPartition":
        finite = {as_cut(p) for p in points}
        finite = sorted(c for c in finite if c.is_finite)
        return cls((NEG_INF, *finite, POS_INF))

    @property
    def cells(self) -> list[tuple[CutPoint, CutPoint]]:
        e = self.endpoints
        return [(e[i], e[i + 1]) for i in range(len(e) - 1)]

    def __len__(self) -> int:
        return len(self.endpoints) - 1

    def locate(self, x: CutPoint) -> int:
        """Index of the cell ``[lo, hi)`` holding ``x``; ``+inf`` is in the last."""
        if x.kind > 0:
            return len(self) - 1
        lo, hi = 0, len(self.endpoints) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self.endpoints[mid] <= x:
                lo = mid
            else:
                hi = mid
        return lo


def _interior_point(lo: CutPoint, hi: CutPoint) -> CutPoint:
    if lo.kind < 0 and hi.kind > 0:
        return CutPoint.finite(0)
    if lo.kind < 0:
        return CutPoint.finite(hi.value - 1)
    if hi.kind > 0:
        return CutPoint.finite(lo.value + 1)
    return CutPoint.finite((lo.value + hi.value) / 2)


def cell_image(f: BranchedMap, lo: CutPoint, hi: CutPoint) -> tuple[CutPoint, CutPoint]:
    """Image of a cell on which ``f`` is a single increasing branch."""
    m = f.branches[f.cell_index(_interior_point(lo, hi))]
    return apply_cut(m, lo, -1), apply_cut(m, hi, 1)


def _check_markov(params: Params, partition: MarkovPartition) -> None:
    f = make_fab(params)
    ends = set(partition.endpoints)
    walls = [CutPoint.finite(params.a), CutPoint.finite(params.b)]
    if params.a < 0 < params.b:
        walls.append(CutPoint.finite(0))
    for i, (lo, hi) in enumerate(partition.cells):
        if any(lo < w < hi for w in walls):
            raise NotMarkov(i, "(a discontinuity lies inside it)")
        ilo, ihi = cell_image(f, lo, hi)
        if ilo not in ends or ihi not in ends or not ilo < ihi:
            raise NotMarkov(i, f"(image [{ilo}, {ihi}])")


def build_partition(params: Params, points: Iterable) -> MarkovPartition:
    partition = MarkovPartition.from_points(points)
    _check_markov(params, partition)
    return partition


def refine_partition(
    params: Params, partition: MarkovPartition, extra: Iterable = ()
) -> MarkovPartition:
    refined = MarkovPartition.from_points([*partition.endpoints, *extra])
    _check_markov(params, refined)
    return refined


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class TransitionMatrix:
    entries: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, rows: Sequence[Sequence[int]]) -> "TransitionMatrix":
        return cls(tuple(tuple(int(e) for e in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return self.entries[ij[0]][ij[1]]

    def successors(self, i: int) -> list[int]:
        return [j for j, e in enumerate(self.entries[i]) if e]

    def to_array(self, dtype=float) -> np.ndarray:
        return np.array(self.entries, dtype=dtype).reshape(self.n, self.n)

    def __str__(self) -> str:
        return "\n".join(" ".join(str(e) for e in row) for row in self.entries)


def transition_matrix(params: Params, partition: MarkovPartition) -> TransitionMatrix:
    """``M[i][j] = 1`` iff the image of cell ``i`` contains cell ``j``."""
    f = make_fab(params)
    cells = partition.cells
    rows = []
    for lo, hi in cells:
        ilo, ihi = cell_image(f, lo, hi)
        rows.append([int(ilo <= clo and chi <= ihi) for clo, chi in cells])
    return TransitionMatrix.of(rows)


def slow_gauss_matrix() -> TransitionMatrix:
    """Transitions between the cells ``[0, 1]`` and ``[1, inf]`` of the slow Gauss map."""
    g = make_slow_gauss()
    ends = [CutPoint.finite(0), CutPoint.finite(1), POS_INF]
    cells = list(zip(ends, ends[1:]))

    def on_domain(p: ProjPoint) -> CutPoint:
        # the domain is [0, inf], so infinity can only be approached from below
        return POS_INF if p.q == 0 else CutPoint.finite(p.value())

    rows = []
    for lo, hi in cells:
        m = g.branches[g.cell_index(_interior_point(lo, hi))]
        ilo, ihi = sorted(on_domain(m(c.to_proj())) for c in (lo, hi))
        if ilo not in ends or ihi not in ends:
            raise NotMarkov(len(rows), f"(image [{ilo}, {ihi}])")
        rows.append([int(ilo <= clo and chi <= ihi) for clo, chi in cells])
    return TransitionMatrix.of(rows)


@dataclass(frozen=True)
class SpectrumResult:
    rho_lower: float
    rho_upper: float
    right_eigenvector: tuple[float, ...] | None = None

    @property
    def rho(self) -> float:
        return 0.5 * (self.rho_lower + self.rho_upper)

    @property
    def entropy_lower(self) -> float:
        return math.log(self.rho_lower) if self.rho_lower > 0 else -math.inf

    @property
    def entropy_upper(self) -> float:
        return math.log(self.rho_upper)

    @property
    def entropy(self) -> float:
        return 0.5 * (self.entropy_lower + self.entropy_upper)

    @property
    def entropy_width(self) -> float:
        return self.entropy_upper - self.entropy_lower


_EPS = np.finfo(float).eps


def _collatz_wielandt(B: np.ndarray, x: np.ndarray) -> tuple[float, float]:
    y = B @ x
    r = y / x
    slack = (B.shape[0] + 4) * _EPS
    return float(r.min()) * (1 - slack), float(r.max()) * (1 + slack)


def _perron_bracket(A: np.ndarray, tol: float, max_iter: int) -> tuple[float, float]:
    """Certified bracket on the Perron root of an irreducible 0/1 matrix."""
    n = A.shape[0]
    B = A + np.eye(n)  # primitive, same Perron vector, root shifted by 1
    x = np.ones(n)
    if n <= 2000:
        w, V = np.linalg.eig(A)
        k = int(np.argmax(w.real))
        guess = np.abs(V[:, k].real)
        if guess.min() > 1e-300:
            x = guess
    x /= x.sum()
    lo, hi = _collatz_wielandt(B, x)
    for _ in range(max_iter):
        if hi - lo <= tol:
            break
        x = B @ x
        x /= x.sum()
        lo, hi = _collatz_wielandt(B, x)
    else:
        raise ConvergenceError(f"Perron bracket still {hi - lo:.3g} wide")
    return max(lo - 1, 0.0), hi - 1


def spectral_radius(M: TransitionMatrix, tol: float = 1e-12, max_iter: int = 100_000) -> SpectrumResult:
    """Bracket ``rho(M)`` as the largest Perron root over strong components."""
    A = M.to_array()
    _, labels = connected_components(csr_matrix(A), directed=True, connection="strong")
    brackets = []
    for c in np.unique(labels):
        idx = np.flatnonzero(labels == c)
        sub = A[np.ix_(idx, idx)]
        if sub.any():  # skip trivial components
            brackets.append(_perron_bracket(sub, tol, max_iter))
    if not brackets:
        raise ZeroMatrix("transition graph has no cycles")
    return SpectrumResult(max(b[0] for b in brackets), max(b[1] for b in brackets))


def right_eigenvector(M: TransitionMatrix, tol: float = 1e-13, max_iter: int = 100_000) -> np.ndarray:
    """Nonnegative right eigenvector for ``rho(M)``, normalized to sum 1."""
    A = M.to_array()
    rho = spectral_radius(M).rho
    w, V = np.linalg.eig(A)
    k = int(np.argmax(w.real))
    x = np.abs(V[:, k].real)
    x /= x.sum()
    B = A + np.eye(M.n)
    for _ in range(max_iter):
        if np.abs(A @ x - rho * x).max() <= tol:
            return x
        x = B @ x
        x /= x.sum()
    raise ConvergenceError("right eigenvector did not converge")


def exact_right_eigenvector(M: TransitionMatrix, lam) -> list:
    """Kernel vector of ``M - lam I`` over an exact field, summing to 1.

    ``lam`` may be a :class:`~fractions.Fraction` or any exact field element
    (e.g. :class:`~cfentropy.qsqrt5.QSqrt5`); the kernel must be one
    dimensional.
    """
    n = M.n
    zero = lam - lam
    rows = [[(lam if i == j else zero) * -1 + M[i, j] for j in range(n)] for i in range(n)]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [e * inv for e in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                fac = rows[i][c]
                rows[i] = [e - fac * pe for e, pe in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    if len(free) != 1:
        raise ValueError(f"kernel has dimension {len(free)}, expected 1")
    (fc,) = free
    v = [zero] * n
    v[fc] = zero + 1
    for i, c in enumerate(pivots):
        v[c] = -rows[i][fc]
    total = sum(v, zero)
    return [e / total for e in v]


def char_poly(M: TransitionMatrix) -> tuple[int, ...]:
    """Exact characteristic polynomial ``det(xI - M)``, leading coefficient first.

    Faddeev-LeVerrier over Python integers; every division is exact.
    """
    n = M.n
    if n > 64:
        raise DimensionTooLarge(f"n = {n} > 64")
    A = np.array(M.entries, dtype=object).reshape(n, n)
    coeffs = [1]
    Mk = np.zeros((n, n), dtype=object)
    eye = np.identity(n, dtype=int).astype(object)
    c = 1
    for k in range(1, n + 1):
        Mk = A.dot(Mk) + c * eye
        AM = A.dot(Mk)
        tr = sum(AM[i, i] for i in range(n))
        assert tr % k == 0
        c = -tr // k
        coeffs.append(c)
    return tuple(int(e) for e in coeffs)


def poly_eval(coeffs: Sequence[int], x):
    acc = 0 * x
    for c in coeffs:
        acc = acc * x + c
    return acc


# ---------------------------------------------------------------------------
# pipeline


@dataclass(frozen=True)
class MarkovEntropy:
    params: Params
    partition: MarkovPartition
    matrix: TransitionMatrix
    spectrum: SpectrumResult

    @property
    def entropy(self) -> float:
        return self.spectrum.entropy

    @property
    def uncertainty(self) -> float:
        return self.spectrum.entropy_width


def markov_entropy(
    params: Params,
    max_points: int = DEFAULT_MAX_POINTS,
    max_iter: int = DEFAULT_MAX_ITER,
    tol: float = 1e-12,
) -> MarkovEntropy:
    try:
        points = orbit_closure(params, max_points, max_iter)
    except BudgetExhausted as exc:
        raise NotMarkovWithinBudget(params, max_points, max_iter) from exc
    partition = build_partition(params, points)
    matrix = transition_matrix(params, partition)
    return MarkovEntropy(params, partition, matrix, spectral_radius(matrix, tol))
