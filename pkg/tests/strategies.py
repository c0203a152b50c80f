"""Shared hypothesis strategies."""

from fractions import Fraction

from hypothesis import strategies as st

from cfentropy.cfmap import validate_params

rationals = st.builds(
    Fraction,
    st.integers(min_value=-10_000, max_value=10_000),
    st.integers(min_value=1, max_value=500),
)

small_rationals = st.builds(
    Fraction,
    st.integers(min_value=-40, max_value=40),
    st.integers(min_value=1, max_value=12),
)



def _word_product(word):
    m = (1, 0, 0, 1)
    gens = {0: (1, 1, 0, 1), 1: (0, -1, 1, 0), 2: (1, -1, 0, 1), 3: (0, 1, 1, 0)}
    for g in word:
        a, b, c, d = m
        p, q, r, s = gens[g]
        m = (a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s)
    return m


# products of T, S, T^-1 and x -> 1/x cover GL(2, Z)
unimodular = st.lists(st.integers(0, 3), max_size=12).map(_word_product)
invertible = st.tuples(*[st.integers(-6, 6)] * 4).filter(lambda m: m[0] * m[3] - m[1] * m[2] != 0)


def _in_space(ab) -> bool:
    a, b = ab
    return a <= 0 <= b and b - a >= 1 and -a * b <= 1


def parameters(max_den: int = 12):
    """Rational (a, b) inside the parameter space."""
    den = st.integers(min_value=1, max_value=max_den)
    a = st.builds(Fraction, st.integers(-3 * max_den, 0), den)
    b = st.builds(Fraction, st.integers(0, 3 * max_den), den)
    return st.tuples(a, b).filter(_in_space).map(lambda ab: validate_params(*ab))
