import math
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cfentropy.cfmap import validate_params
from cfentropy.markov import (
    NotMarkov,
    NotMarkovWithinBudget,
    TransitionMatrix,
    ZeroMatrix,
    build_partition,
    char_poly,
    cycle_witness,
    exact_right_eigenvector,
    markov_entropy,
    orbit_closure,
    refine_partition,
    right_eigenvector,
    seeds,
    slow_gauss_matrix,
    spectral_radius,
    transition_matrix,
)
from cfentropy.projective import INF, CutPoint, ProjPoint
from cfentropy.qsqrt5 import LAMBDA, golden_eigenvector
from cfentropy.verify import REFERENCE_M_A, REFERENCE_M_H, REFERENCE_M_MINUS1_0
from strategies import parameters
from test_cfmap import fab_oracle

F = Fraction
LOG_PHI = math.log((1 + math.sqrt(5)) / 2)
X = sympy.Symbol("x")


def closure_oracle(a, b, limit=5000):
    """Breadth-first forward closure of the seed set with Fraction arithmetic."""
    start = {a, b, a + 1, None if a == 0 else -1 / a, None if b == 0 else -1 / b, b - 1, None}
    if a < 0 < b:
        start.add(F(0))
    seen, todo = set(start), list(start)
    while todo:
        y = fab_oracle(a, b, todo.pop())
        if y not in seen:
            seen.add(y)
            todo.append(y)
            if len(seen) > limit:
                return None
    return seen


def matrix_oracle(a, b, ends):
    """M[i][j] = 1 iff the midpoint of cell j has a preimage inside cell i."""
    def mid(lo, hi):
        if lo is None:
            return hi - 1
        if hi is None:
            return lo + 1
        return (lo + hi) / 2

    cells = list(zip([None] + ends, ends + [None]))
    rows = []
    for lo, hi in cells:
        row = []
        for clo, chi in cells:
            y = mid(clo, chi)
            pre = [x for x in (y - 1, y + 1, -1 / y if y else None) if x is not None and fab_oracle(a, b, x) == y]
            row.append(int(any((lo is None or lo < x) and (hi is None or x < hi) for x in pre)))
        rows.append(row)
    return rows


def cut_values(partition):
    return [e.value for e in partition.endpoints[1:-1]]


def sympy_spectral_radius(M: TransitionMatrix) -> float:
    # the Perron root of a nonnegative matrix is its largest real eigenvalue
    poly = sympy.Poly(sympy.Matrix(M.entries).charpoly(X).as_expr(), X)
    return float(max(poly.real_roots()).evalf(30))


# ---------------------------------------------------------------------------
# orbit closure and partitions


def test_closure_minus1_0():
    pts = orbit_closure(validate_params(-1, 0))
    assert pts == [ProjPoint(-1, 1), ProjPoint(0, 1), ProjPoint(1, 1), INF]


def test_closure_hurwitz():
    pts = orbit_closure(validate_params(F(-1, 2), F(1, 2)))
    assert [p.value() for p in pts[:-1]] == [-2, -1, F(-1, 2), 0, F(1, 2), 1, 2]
    assert pts[-1] == INF


def test_seeds_include_zero_only_inside():
    assert ProjPoint(0, 1) in seeds(validate_params(F(-1, 2), F(3, 4)))
    assert len(seeds(validate_params(-1, 0))) == 7


def test_budget_exhaustion():
    with pytest.raises(NotMarkovWithinBudget):
        markov_entropy(validate_params(F(-4, 5), F(2, 5)), max_points=10, max_iter=10)


def test_partition_minus1_0():
    p = build_partition(validate_params(-1, 0), [-1, 0, 1, "inf"])
    assert len(p) == 4
    assert cut_values(p) == [-1, 0, 1]


def test_partition_artin_four_cells():
    assert len(build_partition(validate_params(-1, 1), [-1, 0, 1])) == 4


def test_refine_artin_to_shared_partition():
    params = validate_params(-1, 1)
    p4 = build_partition(params, [-1, 0, 1])
    p8 = refine_partition(params, p4, [-2, F(-1, 2), F(1, 2), 2])
    assert cut_values(p8) == [-2, -1, F(-1, 2), 0, F(1, 2), 1, 2]
    assert refine_partition(params, p4) == p4
    with pytest.raises(NotMarkov):
        refine_partition(params, p4, [F(1, 3)])


def test_partition_cutting_a_wall_is_not_markov():
    with pytest.raises(NotMarkov):
        build_partition(validate_params(-1, 1), [-1, 1])


# ---------------------------------------------------------------------------
# matrices


def test_reference_matrices():
    part8 = [-2, -1, F(-1, 2), 0, F(1, 2), 1, 2]
    pa, ph = validate_params(-1, 1), validate_params(F(-1, 2), F(1, 2))
    assert transition_matrix(pa, build_partition(pa, part8)) == REFERENCE_M_A
    assert transition_matrix(ph, build_partition(ph, part8)) == REFERENCE_M_H
    me = markov_entropy(validate_params(-1, 0))
    assert me.matrix == REFERENCE_M_MINUS1_0


def test_matrix_oracle_agrees_on_references():
    part8 = [-2, -1, F(-1, 2), 0, F(1, 2), 1, 2]
    assert matrix_oracle(F(-1), F(1), [F(e) for e in part8]) == [list(r) for r in REFERENCE_M_A.entries]


def test_slow_gauss_matrix():
    assert slow_gauss_matrix().entries == ((0, 1), (1, 1))


@pytest.mark.parametrize(
    "M, expected",
    [
        (REFERENCE_M_A, (X**2 - X - 1) * (X**2 - X + 1) * X**4),
        (REFERENCE_M_H, (X**2 - X - 1) * (X**2 - X + 1) * (X**4 - 1)),
        (TransitionMatrix.of([[1, 0, 0], [0, 1, 0], [0, 0, 1]]), (X - 1) ** 3),
    ],
)
def test_char_poly_examples(M, expected):
    assert char_poly(M) == tuple(int(c) for c in sympy.Poly(sympy.expand(expected), X).all_coeffs())


@given(st.integers(1, 9).flatmap(lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                                                     min_size=n, max_size=n)))
def test_char_poly_matches_sympy(rows):
    M = TransitionMatrix.of(rows)
    expected = sympy.Matrix(rows).charpoly(X).all_coeffs()
    assert char_poly(M) == tuple(int(c) for c in expected)


@given(st.integers(2, 10).flatmap(lambda n: st.lists(st.lists(st.integers(0, 1), min_size=n, max_size=n),
                                                      min_size=n, max_size=n)))
@settings(deadline=None)
def test_spectral_radius_brackets_sympy_roots(rows):
    M = TransitionMatrix.of(rows)
    rho = sympy_spectral_radius(M)
    if rho < 1e-9:
        with pytest.raises(ZeroMatrix):
            spectral_radius(M)
        return
    sp = spectral_radius(M)
    assert sp.rho_lower <= sp.rho_upper
    assert sp.rho_lower <= rho <= sp.rho_upper
    assert sp.rho_upper - sp.rho_lower <= 1e-9


def test_spectral_radius_examples():
    sp = spectral_radius(REFERENCE_M_A)
    assert abs(sp.rho - (1 + math.sqrt(5)) / 2) <= 1e-10
    sp = spectral_radius(slow_gauss_matrix())
    assert abs(sp.entropy - LOG_PHI) <= 1e-10
    sp = spectral_radius(REFERENCE_M_MINUS1_0)
    assert sp.rho_lower**3 - sp.rho_lower**2 - 1 <= 0 <= sp.rho_upper**3 - sp.rho_upper**2 - 1


def test_nilpotent_matrix():
    with pytest.raises(ZeroMatrix):
        spectral_radius(TransitionMatrix.of([[0, 1], [0, 0]]))


def test_right_eigenvectors():
    v = [float(e) for e in golden_eigenvector()]
    for M in (REFERENCE_M_A, REFERENCE_M_H):
        assert np.max(np.abs(right_eigenvector(M) - v)) <= 1e-10
        assert tuple(exact_right_eigenvector(M, LAMBDA)) == golden_eigenvector()
    swap = TransitionMatrix.of([[0, 1], [1, 0]])
    assert np.allclose(right_eigenvector(swap), [0.5, 0.5])
    assert exact_right_eigenvector(swap, F(1)) == [F(1, 2), F(1, 2)]


# ---------------------------------------------------------------------------
# cycle witnesses


def iterate(a, b, x, n):
    for _ in range(n):
        x = fab_oracle(a, b, x)
    return x


def test_cycle_witness_artin():
    w = cycle_witness(validate_params(-1, 1))
    assert (w.m_a, w.k_a, w.m_b, w.k_b) == (1, 0, 0, 2)


def test_cycle_witness_hurwitz_is_minimal():
    a, b = F(-1, 2), F(1, 2)
    w = cycle_witness(validate_params(a, b))
    sa, ta, sb, tib = -1 / a, a + 1, -1 / b, b - 1
    assert iterate(a, b, sa, w.m_a) == iterate(a, b, ta, w.k_a)
    assert iterate(a, b, tib, w.m_b) == iterate(a, b, sb, w.k_b)
    for total in range(w.m_a + w.k_a):
        for m in range(total + 1):
            assert iterate(a, b, sa, m) != iterate(a, b, ta, total - m)


def test_cycle_witness_minus1_0_has_only_the_a_side():
    w = cycle_witness(validate_params(-1, 0))
    assert (w.m_a, w.k_a) == (1, 0)
    assert w.m_b is None and not w.complete
    # T^-1 b = -1 falls into the cycle -1 -> 1 -> 0 while S b = inf is fixed
    assert iterate(F(-1), F(0), F(-1), 3) == F(-1)
    assert fab_oracle(F(-1), F(0), None) is None


# ---------------------------------------------------------------------------
# pipeline


def test_markov_entropy_examples():
    me = markov_entropy(validate_params(-1, 1))
    assert abs(me.entropy - LOG_PHI) <= 1e-10
    me = markov_entropy(validate_params(-1, 0))
    kappa = max(r for r in np.roots([1, -1, 0, -1]) if abs(r.imag) < 1e-12).real
    assert abs(me.entropy - math.log(kappa)) <= 1e-10
    me = markov_entropy(validate_params(F(-4, 5), F(2, 5)))
    assert len(me.partition) == 22
    assert me.uncertainty <= 1e-12


small_parameters = parameters(max_den=8).filter(lambda p: p.a >= -3 and p.b <= 3)


@given(small_parameters)
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_closure_and_matrix_match_oracles(params):
    try:
        me = markov_entropy(params, max_points=600, max_iter=600)
    except NotMarkovWithinBudget:
        return
    pts = closure_oracle(params.a, params.b)
    assert pts is not None
    assert sorted(p for p in pts if p is not None) == cut_values(me.partition)
    assert [list(r) for r in me.matrix.entries] == matrix_oracle(params.a, params.b, cut_values(me.partition))


@given(small_parameters)
@settings(max_examples=40, deadline=None, suppress_health_check=[HealthCheck.filter_too_much])
def test_every_cell_maps_onto_cells(params):
    try:
        me = markov_entropy(params, max_points=600, max_iter=600)
    except NotMarkovWithinBudget:
        return
    ends = set(me.partition.endpoints)
    for i, row in enumerate(me.matrix.entries):
        hit = [j for j, e in enumerate(row) if e]
        assert hit, f"cell {i} has no successor"
        # images are intervals of the cut line, so successors form one run
        assert hit == list(range(hit[0], hit[-1] + 1))
    assert CutPoint(-1) in ends and CutPoint(1) in ends
    assert me.uncertainty <= 1e-12
