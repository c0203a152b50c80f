"""Recoding Artin itineraries as Hurwitz itineraries with the same cylinder.

Two independent recoders are provided.  :func:`recode_by_tracking` follows the
exact Artin cylinder forward under the Hurwitz map and reads off the cells it
visits.  :func:`recode_by_blocks` is purely combinatorial: it rewrites the
exceptional blocks 3751, 3762, 6237 and 6248 and then fixes the last symbol
with the rank-two matching table.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .parry import (
    CylinderInterval,
    SymbolWord,
    _as_word,
    _require_admissible,
    artin,
    cylinder_interval,
    hurwitz,
    is_admissible,
)
from .projective import apply_cut, compose, inverse, psl_equal

__all__ = [
    "RecodingError",
    "RecodeResult",
    "EXCEPTIONAL_BLOCKS",
    "RANK2_MATCHING",
    "TAILS",
    "extend_forced_tail",
    "recode_by_tracking",
    "recode_by_blocks",
    "verify_rank2_table",
    "verify_block_identities",
    "verify_v_equality",
    "artin_words",
    "exhaustive_check",
]

TAILS = frozenset({1, 2, 7, 8})

EXCEPTIONAL_BLOCKS = {
    (3, 7, 5, 1): (3, 5, 1, 1),
    (3, 7, 6, 2): (3, 5, 1, 2),
    (6, 2, 3, 7): (6, 4, 8, 7),
    (6, 2, 4, 8): (6, 4, 8, 8),
}

# Artin rank-two word -> Hurwitz rank-two word with the same interval
RANK2_MATCHING = {
    (1, 1): (1, 1),
    (1, 2): (1, 2),
    (2, 3): (2, 3),
    (2, 4): (2, 4),
    (3, 7): (3, 5),
    (4, 8): (4, 8),
    (5, 1): (5, 1),
    (6, 2): (6, 4),
    (7, 5): (7, 5),
    (7, 6): (7, 6),
    (8, 7): (8, 7),
    (8, 8): (8, 8),
}

_TAIL_CLASS = {1: {1}, 8: {8}, 2: {2, 4}, 7: {5, 7}}


class RecodingError(AssertionError):
    """A recoding step broke an invariant that recoding must preserve."""


@dataclass(frozen=True)
class RecodeResult:
    omega: SymbolWord
    tau: SymbolWord
    interval: CylinderInterval
    tail_class: tuple[int, int] = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "tail_class", (self.omega.symbols[-1], self.tau.symbols[-1]))


def extend_forced_tail(word) -> SymbolWord:
    """Append the unique successor when the last Artin symbol has only one."""
    word = _as_word(word, "artin")
    r = _require_admissible(word)
    succ = r.successors(word.symbols[-1])
    if len(succ) == 1:
        return SymbolWord(word.symbols + (succ[0],), word.regime)
    return word


def _check_tail(word: SymbolWord) -> None:
    if word.symbols[-1] not in TAILS:
        raise ValueError(f"last symbol of {word} must be one of 1, 2, 7, 8")


def _validate(omega: SymbolWord, tau: SymbolWord, interval: CylinderInterval) -> RecodeResult:
    w, t = omega.symbols, tau.symbols
    if len(w) != len(t) or w[0] != t[0]:
        raise RecodingError(f"{omega} -> {tau}: length or first symbol changed")
    if not is_admissible("hurwitz", t):
        raise RecodingError(f"{tau} is not Hurwitz-admissible")
    if t[-1] not in _TAIL_CLASS[w[-1]]:
        raise RecodingError(f"tail {w[-1]} recoded as {t[-1]}")
    h = cylinder_interval("hurwitz", tau)
    if h.endpoints != interval.endpoints:
        raise RecodingError(f"I_A({omega}) != I_H({tau})")
    return RecodeResult(omega, tau, interval)


def recode_by_tracking(word) -> RecodeResult:
    omega = _as_word(word, "artin")
    _require_admissible(omega)
    _check_tail(omega)
    J = cylinder_interval("artin", omega)
    H = hurwitz()
    cells = H.cells
    lo, hi = J.endpoints
    tau = []
    for _ in omega.symbols:
        k = H.partition.locate(lo)
        clo, chi = cells[k]
        if not (clo <= lo and hi <= chi):
            raise RecodingError(f"[{lo}, {hi}] straddles cells while recoding {omega}")
        tau.append(k + 1)
        m = H.branches[k]
        lo, hi = apply_cut(m, lo, -1), apply_cut(m, hi, 1)
    return _validate(omega, SymbolWord(tuple(tau), "hurwitz"), J)


def _recode_symbols(w: tuple[int, ...]) -> tuple[int, ...]:
    """Induction on the first exceptional block: rewrite it and recurse on the
    suffix starting at its fourth symbol (which the rewrite keeps)."""
    for k in range(len(w) - 3):
        block = w[k : k + 4]
        if block in EXCEPTIONAL_BLOCKS:
            return w[:k] + EXCEPTIONAL_BLOCKS[block][:3] + _recode_symbols(w[k + 3 :])
    if len(w) < 2:
        return w
    if any(s in (3, 6) for s in w[:-2]):
        raise RecodingError(f"symbol 3 or 6 outside a block in {w}")
    return w[:-2] + RANK2_MATCHING[w[-2:]]


def recode_by_blocks(word) -> RecodeResult:
    omega = _as_word(word, "artin")
    _require_admissible(omega)
    _check_tail(omega)
    tau = SymbolWord(_recode_symbols(omega.symbols), "hurwitz")
    return _validate(omega, tau, cylinder_interval("artin", omega))


def verify_v_equality(result: RecodeResult) -> bool:
    v = artin().v
    return v[result.omega.symbols[-1] - 1] == v[result.tau.symbols[-1] - 1]


@dataclass
class Rank2Report:
    passed: bool
    matched: dict = field(default_factory=dict)
    mismatched: list = field(default_factory=list)


def verify_rank2_table() -> Rank2Report:
    """Pair every Artin rank-two interval with the Hurwitz one equal to it."""
    A, H = artin(), hurwitz()
    a_words = [(i, j) for i in range(1, 9) for j in A.successors(i)]
    h_by_interval = {
        cylinder_interval(H, (i, j)).endpoints: (i, j) for i in range(1, 9) for j in H.successors(i)
    }
    rep = Rank2Report(len(a_words) == len(h_by_interval) == 12)
    for w in a_words:
        match = h_by_interval.get(cylinder_interval(A, w).endpoints)
        rep.matched[w] = match
        if match is None or RANK2_MATCHING.get(w) != match:
            rep.passed = False
            rep.mismatched.append(w)
    return rep


@dataclass
class BlockReport:
    passed: bool
    intervals_equal: dict
    maps_equal: dict


def verify_block_identities() -> BlockReport:
    """Intervals and composed inverse branches agree for each exceptional block."""
    A, H = artin(), hurwitz()
    intervals, maps = {}, {}
    for a_word, h_word in EXCEPTIONAL_BLOCKS.items():
        intervals[a_word] = cylinder_interval(A, a_word).endpoints == cylinder_interval(H, h_word).endpoints
        ma = compose(compose(inverse(A.branches[a_word[0] - 1]), inverse(A.branches[a_word[1] - 1])),
                     inverse(A.branches[a_word[2] - 1]))
        mh = compose(compose(inverse(H.branches[h_word[0] - 1]), inverse(H.branches[h_word[1] - 1])),
                     inverse(H.branches[h_word[2] - 1]))
        maps[a_word] = psl_equal(ma, mh)
    return BlockReport(all(intervals.values()) and all(maps.values()), intervals, maps)


def artin_words(max_len: int, tails=TAILS) -> Iterator[tuple[int, ...]]:
    """All Artin-admissible words of length <= max_len ending in ``tails``,
    in lexicographic order within each length."""
    A = artin()
    frontier = [(s,) for s in range(1, 9)]
    for _ in range(max_len):
        for w in frontier:
            if w[-1] in tails:
                yield w
        frontier = [w + (s,) for w in frontier for s in A.successors(w[-1])]
        frontier.sort()


@dataclass
class ExhaustiveReport:
    passed: bool
    n_words: int
    failures: list = field(default_factory=list)


def exhaustive_check(max_len: int = 12) -> ExhaustiveReport:
    rep = ExhaustiveReport(True, 0)
    for w in artin_words(max_len):
        rep.n_words += 1
        try:
            t, b = recode_by_tracking(w), recode_by_blocks(w)
            ok = t.tau == b.tau and verify_v_equality(t)
        except RecodingError as exc:
            ok = False
            rep.failures.append((w, str(exc)))
        if not ok:
            rep.passed = False
            if not rep.failures or rep.failures[-1][0] != w:
                rep.failures.append((w, "recoders disagree or v differs"))
    return rep

