"""Named verification suites run by ``cfentropy verify``.

Each suite returns a :class:`SuiteReport` made of named checks; suites run
sequentially and never raise on a failed check.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .cfmap import check_factor_relation, validate_params
from .lapcount import entropy_estimate, gauss_lap_counts
from .markov import (
    TransitionMatrix,
    char_poly,
    exact_right_eigenvector,
    markov_entropy,
    right_eigenvector,
    slow_gauss_matrix,
    spectral_radius,
)
from .parry import (
    PARTITION_POINTS,
    artin,
    constant_slope_check,
    golden_square_slope_check,
    hurwitz,
    psi,
    psi_closed_form_at_endpoints,
    psi_equality_check,
)
from .projective import IDENTITY, S, T, T_INV, compose, psl_equal
from .qsqrt5 import LAMBDA, golden_eigenvector
from .recode import exhaustive_check, verify_block_identities, verify_rank2_table

__all__ = [
    "SUITES",
    "UnknownSuite",
    "Check",
    "SuiteReport",
    "REFERENCE_M_A",
    "REFERENCE_M_H",
    "REFERENCE_M_MINUS1_0",
    "poly_mul",
    "random_rationals",
    "run_suite",
    "run_all",
]

REFERENCE_M_A = TransitionMatrix.of([
    [1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1],
])
REFERENCE_M_H = TransitionMatrix.of([
    [1, 1, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0, 0, 0],
    [0, 0, 0, 0, 0, 0, 0, 1],
    [1, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 1, 0, 0],
    [0, 0, 0, 0, 0, 0, 1, 1],
])
REFERENCE_M_MINUS1_0 = TransitionMatrix.of([
    [1, 1, 0, 0],
    [0, 0, 0, 1],
    [0, 1, 0, 0],
    [0, 0, 1, 1],
])

# golden-square parameters away from the square's edges
GOLDEN_SQUARE_SAMPLES = ((Fraction(-3, 4), Fraction(3, 4)), (Fraction(-2, 3), Fraction(3, 5)),
                         (Fraction(-5, 6), Fraction(7, 8)))


class UnknownSuite(ValueError):
    pass


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'}  {self.name}" + (f"  ({self.detail})" if self.detail else "")


@dataclass
class SuiteReport:
    suite: str
    checks: list[Check] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def lines(self) -> list[str]:
        head = f"[{self.suite}] {'PASS' if self.passed else 'FAIL'} in {self.seconds:.2f}s"
        return [head] + ["  " + c.line() for c in self.checks]


def poly_mul(*polys: tuple[int, ...]) -> tuple[int, ...]:
    """Product of integer polynomials given leading coefficient first."""
    out = (1,)
    for p in polys:
        prod = [0] * (len(out) + len(p) - 1)
        for i, x in enumerate(out):
            for j, y in enumerate(p):
                prod[i + j] += x * y
        out = tuple(prod)
    return out


def random_rationals(n: int, seed: int) -> list[Fraction]:
    """Seeded rationals spread over the whole line, denominators up to 1000."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        q = rng.randint(1, 1000)
        out.append(Fraction(rng.randint(-4 * q, 4 * q), q))
    return out


def _kappa_bracketed(lo: float, hi: float) -> bool:
    # x^3 - x^2 - 1 has a single real root, so a sign change pins it down
    cubic = lambda x: x**3 - x**2 - 1  # noqa: E731
    return cubic(Fraction(lo)) <= 0 <= cubic(Fraction(hi))


def _matrices(rep: SuiteReport, seed: int) -> None:
    A, H = artin(), hurwitz()
    rep.add("M_A from the shared partition", A.matrix == REFERENCE_M_A)
    rep.add("M_H from the shared partition", H.matrix == REFERENCE_M_H)
    golden, hexagonal = (1, -1, -1), (1, -1, 1)
    want_a = poly_mul(golden, hexagonal, (1, 0, 0, 0, 0))
    want_h = poly_mul(golden, hexagonal, (1, 0, 0, 0, -1))
    rep.add("char poly of M_A", char_poly(A.matrix) == want_a, str(char_poly(A.matrix)))
    rep.add("char poly of M_H", char_poly(H.matrix) == want_h, str(char_poly(H.matrix)))

    v = golden_eigenvector()
    for r in (A, H):
        exact = exact_right_eigenvector(r.matrix, LAMBDA)
        rep.add(f"eigenvector of M_{r.name[0].upper()} exact in Q(sqrt 5)", tuple(exact) == v)
        approx = right_eigenvector(r.matrix)
        err = max(abs(x - float(y)) for x, y in zip(approx, v))
        rep.add(f"eigenvector of M_{r.name[0].upper()} in floats", err <= 1e-10, f"max error {err:.2e}")

    me = markov_entropy(validate_params(-1, 0))
    sp = me.spectrum
    rep.add("(-1, 0) has four cells", len(me.partition) == 4, f"{len(me.partition)} cells")
    rep.add("M_{-1,0}", me.matrix == REFERENCE_M_MINUS1_0)
    rep.add("rho(M_{-1,0}) bracket holds kappa", _kappa_bracketed(sp.rho_lower, sp.rho_upper),
            f"[{float(sp.rho_lower)!r}, {float(sp.rho_upper)!r}]")
    rep.add("entropy bracket width <= 1e-9", sp.entropy_width <= 1e-9, f"{sp.entropy_width:.2e}")
    rep.add("entropy of (-1, 0) is about 0.382", abs(me.entropy - 0.382) < 5e-4, f"{me.entropy:.12f}")

    ts = compose(T, S)
    rep.add("(TS)^3 = Id", psl_equal(compose(ts, compose(ts, ts)), IDENTITY))
    rep.add("STS = T^-1 S T^-1", psl_equal(compose(S, compose(T, S)), compose(T_INV, compose(S, T_INV))))


def _psi(rep: SuiteReport, seed: int) -> None:
    for name in ("artin", "hurwitz"):
        ok, worst = True, ""
        for x, value in psi_closed_form_at_endpoints():
            br = psi(name, x, 30)
            if not br.exact_lower <= value <= br.exact_upper:
                ok, worst = False, f"misses {float(value):.6f} at {x}"
        rep.add(f"psi_{name[0].upper()} brackets hold the closed forms at the 9 endpoints", ok, worst)
    pts = [Fraction(p) for p in PARTITION_POINTS] + ["-inf", "inf"] + random_rationals(200, seed)
    res = psi_equality_check(pts, 30)
    rep.add("psi_A and psi_H brackets overlap", res.passed,
            f"{res.n_points} points, seed {seed}, max width {res.max_width:.1e}")


def _recode(rep: SuiteReport, seed: int) -> None:
    r2 = verify_rank2_table()
    rep.add("12 rank-2 matchings", r2.passed and len(r2.matched) == 12, f"mismatched {r2.mismatched}")
    blocks = verify_block_identities()
    rep.add("exceptional-block identities", blocks.passed)
    ex = exhaustive_check(12)
    rep.add("exhaustive recoding up to length 12", ex.passed, f"{ex.n_words} words, {len(ex.failures)} failures")


def _slopes(rep: SuiteReport, seed: int) -> None:
    for name in ("artin", "hurwitz"):
        r = constant_slope_check(name, 100, 30, seed)
        rep.add(f"slope lambda for {name}", r.n_pairs == 100 and r.n_contained == r.n_pairs,
                f"{r.n_contained}/{r.n_pairs} pairs, seed {seed}")
        for o in r.offsets:
            rep.add(f"offset {o.name} for {name}", o.contained and o.max_deviation <= 1e-5,
                    f"{o.estimate:.9f} vs {o.expected:.9f}")
    for a, b in GOLDEN_SQUARE_SAMPLES:
        r = golden_square_slope_check(validate_params(a, b), 100, 30, seed)
        rep.add(f"slope lambda for ({a}, {b})", r.passed, f"{r.n_contained}/{r.n_pairs} pairs")


def _gauss(rep: SuiteReport, seed: int) -> None:
    fr = check_factor_relation(1000, seed)
    rep.add("g(|x|) = |f_{-1,1}(x)|", fr.passed and fr.n_checked == 1000,
            f"{fr.n_checked} samples, seed {seed}" + ("" if fr.passed else f", fails at {fr.counterexample}"))
    M = slow_gauss_matrix()
    rep.add("two-cell matrix ((0,1),(1,1))", M.entries == ((0, 1), (1, 1)))
    sp = spectral_radius(M)
    err = abs(sp.entropy - math.log((1 + math.sqrt(5)) / 2))
    rep.add("entropy log phi", err <= 1e-10, f"error {err:.1e}")
    est = entropy_estimate(gauss_lap_counts(22))
    rep.add("lap-count estimate near log phi", abs(est.value - math.log((1 + math.sqrt(5)) / 2)) <= 0.02,
            f"{est.value:.6f}")


_SUITES: dict[str, Callable[[SuiteReport, int], None]] = {
    "matrices": _matrices,
    "psi": _psi,
    "recode": _recode,
    "slopes": _slopes,
    "gauss": _gauss,
}
SUITES = tuple(_SUITES) + ("all",)


def run_suite(name: str, seed: int = 42) -> SuiteReport:
    if name not in _SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rep = SuiteReport(name)
    start = time.perf_counter()
    _SUITES[name](rep, seed)
    rep.seconds = time.perf_counter() - start
    return rep


def run_all(seed: int = 42) -> list[SuiteReport]:
    return [run_suite(name, seed) for name in _SUITES]
