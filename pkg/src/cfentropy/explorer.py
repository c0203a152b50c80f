"""Entropy records, parameter sweeps and conjecture checks over sweeps.

A sweep is a list of candidate parameters in lexicographic order.  Each one
becomes either an :class:`EntropyRecord` or a :class:`Skip` carrying the reason,
so the two lists always account for every candidate.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .cfmap import OutOfParameterSpace, Params, validate_params
from .lapcount import DEFAULT_DEPTH, DepthTooLarge, entropy_estimate, lap_counts
from .markov import (
    DEFAULT_MAX_ITER,
    DEFAULT_MAX_POINTS,
    ConvergenceError,
    CycleWitness,
    NotMarkov,
    NotMarkovWithinBudget,
    ZeroMatrix,
    cycle_witness,
    markov_entropy,
)

__all__ = [
    "METHODS",
    "PRESETS",
    "CSV_COLUMNS",
    "LOG_KAPPA",
    "LOG_PHI",
    "SweepSpec",
    "EntropyRecord",
    "Skip",
    "SweepResult",
    "MethodFailed",
    "entropy_record",
    "preset",
    "run_sweep",
    "write_csv",
    "to_json",
    "check_conjectures",
]

METHODS = ("auto", "markov_only", "lapcount_only")
CSV_COLUMNS = (
    "a_num", "a_den", "b_num", "b_den", "entropy", "uncertainty",
    "method", "matrix_size", "m_a", "k_a", "m_b", "k_b",
)

LOG_PHI = math.log((1 + math.sqrt(5)) / 2)


def _kappa() -> float:
    # real root of x^3 - x^2 - 1, by bisection on [1, 2]
    lo, hi = 1.0, 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid**3 - mid**2 - 1 < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


LOG_KAPPA = math.log(_kappa())


class MethodFailed(RuntimeError):
    """The requested method could not produce an entropy value."""


@dataclass(frozen=True)
class EntropyRecord:
    a: Fraction
    b: Fraction
    entropy: float
    uncertainty: float
    method: str  # "markov" or "lapcount"
    matrix_size: int | None = None
    cycle_witness: CycleWitness | None = None

    @property
    def lower(self) -> float:
        return self.entropy - self.uncertainty

    @property
    def upper(self) -> float:
        return self.entropy + self.uncertainty

    def agrees_with(self, other: "EntropyRecord") -> bool:
        return abs(self.entropy - other.entropy) <= self.uncertainty + other.uncertainty

    def csv_row(self) -> list[str]:
        w = self.cycle_witness
        wit = [""] * 4 if w is None else ["" if e is None else str(e) for e in (w.m_a, w.k_a, w.m_b, w.k_b)]
        return [
            str(self.a.numerator), str(self.a.denominator),
            str(self.b.numerator), str(self.b.denominator),
            "%.12g" % self.entropy, "%.12g" % self.uncertainty,
            self.method, "" if self.matrix_size is None else str(self.matrix_size),
            *wit,
        ]

    def to_dict(self) -> dict:
        return {
            "a": str(self.a),
            "b": str(self.b),
            "entropy": self.entropy,
            "uncertainty": self.uncertainty,
            "method": self.method,
            "matrix_size": self.matrix_size,
            "cycle_witness": None if self.cycle_witness is None else asdict(self.cycle_witness),
        }


@dataclass(frozen=True)
class Skip:
    a: Fraction
    b: Fraction
    reason: str

    def to_dict(self) -> dict:
        return {"a": str(self.a), "b": str(self.b), "reason": self.reason}


@dataclass(frozen=True)
class SweepSpec:
    """A rectangular grid, or an explicit list of points when ``points`` is set."""

    a_range: tuple[Fraction, Fraction] = (Fraction(-3, 2), Fraction(0))
    b_range: tuple[Fraction, Fraction] = (Fraction(0), Fraction(3, 2))
    step: Fraction = Fraction(1, 20)
    method: str = "auto"
    max_points: int = DEFAULT_MAX_POINTS
    max_iter: int = DEFAULT_MAX_ITER
    depth: int = DEFAULT_DEPTH
    tol: float = 1e-12
    max_den: int = 64
    points: tuple[tuple[Fraction, Fraction], ...] | None = None
    name: str = "grid"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")
        if self.step <= 0:
            raise ValueError("step must be positive")

    def candidates(self) -> list[tuple[Fraction, Fraction]]:
        if self.points is not None:
            return sorted(set(self.points))
        return [(a, b) for a in _steps(*self.a_range, self.step) for b in _steps(*self.b_range, self.step)]


def _steps(lo: Fraction, hi: Fraction, step: Fraction) -> list[Fraction]:
    lo, hi, step = Fraction(lo), Fraction(hi), Fraction(step)
    n = math.floor((hi - lo) / step)
    return [lo + i * step for i in range(n + 1)]


FIXED_B_VALUES = (Fraction(1, 4), Fraction(1, 3), Fraction(2, 5))


def _fixed_b_points(step: Fraction) -> tuple:
    return tuple((a, b) for b in FIXED_B_VALUES for a in _steps(Fraction(-5, 4), b - 1, step))


def _family_points(step: Fraction) -> tuple:
    bs = _steps(Fraction(0), Fraction(1), step)
    return tuple((b - 1, b) for b in bs) + tuple((Fraction(-1), b) for b in bs)


PRESETS = ("surface", "fixed-b", "families")


def preset(name: str, **overrides) -> SweepSpec:
    """Named sweeps for the entropy surface, fixed-b slices and the two families."""
    if name == "surface":
        spec = SweepSpec(name=name)
    elif name == "fixed-b":
        step = Fraction(overrides.pop("step", Fraction(1, 60)))
        spec = SweepSpec(step=step, points=_fixed_b_points(step), name=name)
    elif name == "families":
        step = Fraction(overrides.pop("step", Fraction(1, 40)))
        spec = SweepSpec(step=step, points=_family_points(step), name=name)
    else:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    return replace(spec, **overrides)


def _markov_record(params: Params, max_points: int, max_iter: int, tol: float) -> EntropyRecord:
    me = markov_entropy(params, max_points, max_iter, tol)
    if me.uncertainty > tol:
        raise ConvergenceError(f"bracket width {me.uncertainty:.3g} exceeds tol {tol:.3g}")
    return EntropyRecord(
        params.a, params.b, me.entropy, me.uncertainty, "markov",
        len(me.partition), cycle_witness(params, max_iter),
    )


def _lapcount_record(params: Params, depth: int) -> EntropyRecord:
    est = entropy_estimate(lap_counts(params, depth))
    return EntropyRecord(params.a, params.b, est.value, est.uncertainty, "lapcount")


_MARKOV_FAILURES = (NotMarkovWithinBudget, NotMarkov, ConvergenceError, ZeroMatrix)


def entropy_record(
    params: Params,
    method: str = "auto",
    max_points: int = DEFAULT_MAX_POINTS,
    max_iter: int = DEFAULT_MAX_ITER,
    depth: int = DEFAULT_DEPTH,
    tol: float = 1e-12,
) -> EntropyRecord:
    """Entropy of ``f_{a,b}``; ``auto`` falls back to lap counting when no
    Markov partition is found within budget."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if method != "lapcount_only":
        try:
            return _markov_record(params, max_points, max_iter, tol)
        except _MARKOV_FAILURES as exc:
            if method == "markov_only":
                raise MethodFailed(str(exc)) from exc
    try:
        return _lapcount_record(params, depth)
    except DepthTooLarge as exc:
        raise MethodFailed(str(exc)) from exc


@dataclass
class SweepResult:
    spec: SweepSpec
    records: list[EntropyRecord] = field(default_factory=list)
    skipped: list[Skip] = field(default_factory=list)

    @property
    def n_candidates(self) -> int:
        return len(self.records) + len(self.skipped)

    def lookup(self) -> dict[tuple[Fraction, Fraction], EntropyRecord]:
        return {(r.a, r.b): r for r in self.records}


def _evaluate(job: tuple) -> EntropyRecord | Skip:
    a, b, spec = job
    if a.denominator > spec.max_den or b.denominator > spec.max_den:
        return Skip(a, b, f"denominator exceeds {spec.max_den}")
    try:
        params = validate_params(a, b)
    except OutOfParameterSpace as exc:
        return Skip(a, b, f"outside parameter space: {exc.constraint}")
    try:
        return entropy_record(params, spec.method, spec.max_points, spec.max_iter, spec.depth, spec.tol)
    except MethodFailed as exc:
        return Skip(a, b, f"{spec.method}: {exc}")


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """Evaluate every candidate; output order is the candidate order whatever ``jobs`` is."""
    work = [(a, b, spec) for a, b in spec.candidates()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_evaluate, work, chunksize=8))
    else:
        outcomes = [_evaluate(w) for w in work]
    result = SweepResult(spec)
    for o in outcomes:
        (result.records if isinstance(o, EntropyRecord) else result.skipped).append(o)
    return result


def write_csv(records: Iterable[EntropyRecord], stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in records:
        w.writerow(r.csv_row())


def csv_text(records: Iterable[EntropyRecord]) -> str:
    buf = io.StringIO()
    write_csv(records, buf)
    return buf.getvalue()


def to_json(result: SweepResult) -> str:
    spec = result.spec
    doc = {
        "name": spec.name,
        "method": spec.method,
        "n_candidates": result.n_candidates,
        "records": [r.to_dict() for r in result.records],
        "skipped": [s.to_dict() for s in result.skipped],
    }
    return json.dumps(doc, indent=2) + "\n"


# ---------------------------------------------------------------------------
# conjecture checks


def _rec(r: EntropyRecord) -> dict:
    return {"a": str(r.a), "b": str(r.b), "entropy": r.entropy, "uncertainty": r.uncertainty}


def _slices(records: Iterable[EntropyRecord]) -> dict[Fraction, list[EntropyRecord]]:
    out: dict[Fraction, list[EntropyRecord]] = {}
    for r in sorted(records, key=lambda r: (r.b, r.a)):
        out.setdefault(r.b, []).append(r)
    return out


def check_bounds(records: Sequence[EntropyRecord]) -> dict:
    violations = []
    for r in records:
        excess = max(LOG_KAPPA - r.upper, r.lower - LOG_PHI)
        if excess > 0:
            violations.append((excess, r))
    violations.sort(key=lambda t: -t[0])
    return {
        "lower": LOG_KAPPA,
        "upper": LOG_PHI,
        "n_records": len(records),
        "violations": len(violations),
        "worst": [dict(_rec(r), excess=e) for e, r in violations[:5]],
        "min_entropy": _rec(min(records, key=lambda r: r.entropy)) if records else None,
        "max_entropy": _rec(max(records, key=lambda r: r.entropy)) if records else None,
    }


def check_monotonicity(records: Sequence[EntropyRecord]) -> dict:
    """For each slice ``b <= 1/2``, any drop in ``a -> h`` larger than the
    uncertainties of the two records involved counts as a violation."""
    violations = []
    slices = {b: rs for b, rs in _slices(records).items() if b <= Fraction(1, 2) and len(rs) > 1}
    for b, rs in slices.items():
        best = rs[0]
        for r in rs[1:]:
            drop = best.lower - r.upper
            if drop > 0:
                violations.append((drop, best, r))
            if r.lower > best.lower:
                best = r
    violations.sort(key=lambda t: -t[0])
    return {
        "slices": len(slices),
        "violations": len(violations),
        "worst": [{"drop": d, "from": _rec(p), "to": _rec(q)} for d, p, q in violations[:5]],
    }


def check_plateau(records: Sequence[EntropyRecord]) -> dict:
    """Entropy on ``-1 <= a <= -1/(b+1)`` should not depend on ``a`` (b <= 1/2)."""
    out = []
    for b, rs in _slices(records).items():
        if b > Fraction(1, 2):
            continue
        inside = [r for r in rs if -1 <= r.a <= -1 / (b + 1)]
        if len(inside) < 2:
            continue
        lo = max(inside, key=lambda r: r.lower)
        hi = min(inside, key=lambda r: r.upper)
        hmax = max(inside, key=lambda r: r.entropy)
        hmin = min(inside, key=lambda r: r.entropy)
        out.append({
            "b": str(b),
            "n": len(inside),
            "value": hmin.entropy,
            "spread": hmax.entropy - hmin.entropy,
            "allowed": hmax.uncertainty + hmin.uncertainty,
            "consistent": lo.lower <= hi.upper,
        })
    return {"slices": out, "inconsistent": sum(not s["consistent"] for s in out)}


def check_symmetry(records: Sequence[EntropyRecord]) -> dict:
    """``f_{a,b}`` and ``f_{-b,-a}`` are conjugate, so their entropies agree."""
    table = {(r.a, r.b): r for r in records}
    pairs, bad = 0, []
    for (a, b), r in table.items():
        m = table.get((-b, -a))
        if m is None or (a, b) > (-b, -a):
            continue
        pairs += 1
        if not r.agrees_with(m):
            bad.append((abs(r.entropy - m.entropy), r, m))
    bad.sort(key=lambda t: -t[0])
    return {"pairs": pairs, "violations": len(bad), "worst": [{"gap": g, "p": _rec(p), "q": _rec(q)} for g, p, q in bad[:5]]}


def check_families(records: Sequence[EntropyRecord]) -> dict:
    """Compare ``b -> h(f_{b-1,b})`` with ``b -> h(f_{-1,b})``.

    Expected meetings are at ``b = 0`` (value log kappa) and ``b = 1/2``
    (value log phi); every other ``b`` where the curves agree is listed.
    """
    table = {(r.a, r.b): r for r in records}
    bs = sorted({b for (a, b) in table if a == b - 1 and (Fraction(-1), b) in table})
    meetings, expected = [], {}
    for b in bs:
        p, q = table[(b - 1, b)], table[(Fraction(-1), b)]
        if b in (0, Fraction(1, 2)):
            target = LOG_KAPPA if b == 0 else LOG_PHI
            expected[str(b)] = {
                "diagonal": p.entropy,
                "a=-1": q.entropy,
                "target": target,
                "meet": p.agrees_with(q),
                "at_target": abs(p.entropy - target) <= p.uncertainty and abs(q.entropy - target) <= q.uncertainty,
            }
        elif p.agrees_with(q):
            meetings.append(str(b))
    ok = len(expected) == 2 and all(e["meet"] and e["at_target"] for e in expected.values())
    return {"n_b": len(bs), "expected": expected, "expected_ok": ok, "other_meetings": meetings}


def check_conjectures(
    surface: SweepResult,
    fixed_b: SweepResult | None = None,
    families: SweepResult | None = None,
) -> dict:
    """Report (not assert) how the sweeps sit against the conjectured behaviour."""
    slices = list(surface.records) + (list(fixed_b.records) if fixed_b else [])
    uniq = list({(r.a, r.b): r for r in slices}.values())
    report = {
        "bounds": check_bounds(surface.records),
        "symmetry": check_symmetry(surface.records),
        "monotonicity": check_monotonicity(uniq),
        "plateau": check_plateau(uniq),
        "skipped": {
            "surface": len(surface.skipped),
            "fixed-b": len(fixed_b.skipped) if fixed_b else None,
            "families": len(families.skipped) if families else None,
        },
        "methods": _method_counts(uniq + (list(families.records) if families else [])),
    }
    if families is not None:
        report["families"] = check_families(families.records)
    return report


def _method_counts(records: Iterable[EntropyRecord]) -> dict[str, int]:
    out: dict[str, int] = {}
    for r in records:
        out[r.method] = out.get(r.method, 0) + 1
    return out
