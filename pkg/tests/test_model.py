import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from stoch2c.complex import EMPTY, from_maximal_simplices, full_simplex
from stoch2c.model import (ProbabilityTriple, complex_from_masks, draw_coupled,
                           enumerate_distribution, log_probability_of, lower_complex, lower_masks,
                           probability_of, sample_X, sample_Y)
from stoch2c.rng import uniforms

from conftest import complexes

HALF = ProbabilityTriple(Fraction(1, 2), Fraction(1, 2), Fraction(1, 2))
probs = st.floats(0, 1)
triples = st.tuples(probs, probs, probs)
fractions01 = st.fractions(0, 1, max_denominator=12)


def test_probability_triple_validation():
    with pytest.raises(ValueError):
        ProbabilityTriple(1.5, 0, 0)
    with pytest.raises(ValueError):
        ProbabilityTriple.from_alpha(10, (-1, 0, 0))
    p = ProbabilityTriple.from_alpha(100, (1, 0, 0.5))
    assert p == ProbabilityTriple(0.01, 1.0, 0.1)
    assert ProbabilityTriple(0, 0.5, 1) <= ProbabilityTriple(0.1, 0.5, 1)
    assert not ProbabilityTriple(0.2, 0, 0) <= ProbabilityTriple(0.1, 1, 1)
    assert HALF.is_exact() and not p.is_exact()


def test_draw_coupled_sizes_and_determinism():
    assert len(draw_coupled(3, 5)) == 7
    assert len(draw_coupled(4, 5)) == 14
    a, b = draw_coupled(6, 11), draw_coupled(6, 11)
    assert all(np.array_equal(x, y) for x, y in zip(a.u, b.u))
    assert dict(a.items()) == dict(b.items())
    with pytest.raises(ValueError):
        draw_coupled(0, 1)


def test_uniform_of_a_simplex_does_not_depend_on_n():
    small, large = draw_coupled(5, 3), draw_coupled(9, 3)
    for s in [(0,), (4,), (1, 3), (0, 2, 4)]:
        assert small.uniform(s) == large.uniform(s)
    with pytest.raises(KeyError):
        small.uniform((0, 7))


def test_sample_X_examples():
    c = draw_coupled(5, 0)
    assert sample_X(c, (1, 1, 1)) == set(full_simplex(5))
    assert sample_X(c, (0, 0, 0)) == set()
    assert sample_X(c, (1, 1, 0)) == {s for s in full_simplex(5) if len(s) < 3}


def test_lower_complex_examples():
    assert lower_complex([(0,), (1,), (0, 1)]) == from_maximal_simplices([(0, 1)])
    assert lower_complex([(0, 1)]) == EMPTY
    no_zero = [s for s in full_simplex(3) if s != (0,)]
    assert lower_complex(no_zero) == from_maximal_simplices([(1, 2)])


@given(complexes())
def test_lower_complex_fixes_complexes(c):
    assert lower_complex(c) == c


@given(st.integers(0, 10**6), st.integers(1, 9), triples)
def test_vectorised_lower_matches_bottom_up(seed, n, p):
    c = draw_coupled(n, seed)
    assert complex_from_masks(n, *lower_masks(c, p)) == lower_complex(sample_X(c, p))


@given(st.integers(0, 10**6), st.integers(1, 10), triples, triples)
def test_monotone_coupling(seed, n, p, q):
    lo = tuple(min(a, b) for a, b in zip(p, q))
    hi = tuple(max(a, b) for a, b in zip(p, q))
    c = draw_coupled(n, seed)
    assert sample_X(c, lo) <= sample_X(c, hi)
    assert sample_Y(n, lo, seed) <= sample_Y(n, hi, seed)


def test_sample_Y_examples():
    assert sample_Y(5, (1, 1, 1), 9) == full_simplex(5)
    assert sample_Y(5, (0, 1, 1), 9) == EMPTY
    y = sample_Y(6, (1, 1, 0), 9)
    assert y == from_maximal_simplices([e for e in full_simplex(6).edges])


def test_probability_of_examples():
    assert probability_of(EMPTY, 3, HALF) == Fraction(1, 8)
    assert probability_of(full_simplex(3), 3, HALF) == Fraction(1, 128)
    with pytest.raises(TypeError):
        probability_of(EMPTY, 3, (0.5, 0.5, 0.5))


def test_enumerate_distribution_n3():
    dist = enumerate_distribution(3, HALF)
    assert len(dist) == 19
    assert sum(dist.values()) == 1
    for y, w in dist.items():
        assert w == probability_of(y, 3, HALF)


def test_enumerate_distribution_point_masses():
    one = ProbabilityTriple(1, 1, 1)
    assert enumerate_distribution(3, one) == {full_simplex(3): 1}
    zero_vertices = ProbabilityTriple(0, Fraction(1, 3), Fraction(1, 2))
    assert enumerate_distribution(3, zero_vertices) == {EMPTY: 1}


def test_enumerate_distribution_limits():
    with pytest.raises(ValueError):
        enumerate_distribution(6, HALF)
    with pytest.raises(ValueError):
        enumerate_distribution(5, HALF)
    with pytest.raises(TypeError):
        enumerate_distribution(3, (0.5, 0.5, 0.5))


@given(fractions01, fractions01, fractions01)
def test_measure_identity_random_rationals_n3(p0, p1, p2):
    p = ProbabilityTriple(p0, p1, p2)
    dist = enumerate_distribution(3, p)
    assert sum(dist.values()) == 1
    for y, w in dist.items():
        assert w == probability_of(y, 3, p)


def test_log_probability_matches_exact():
    p = ProbabilityTriple(Fraction(1, 3), Fraction(2, 3), Fraction(1, 5))
    pf = tuple(float(x) for x in p)
    for y, w in enumerate_distribution(3, p).items():
        got = log_probability_of(y, 3, pf)
        assert math.isclose(got, math.log(w), rel_tol=1e-12)
    assert log_probability_of(full_simplex(3), 3, (1.0, 1.0, 1.0)) == 0.0
    assert log_probability_of(EMPTY, 3, (1.0, 0.5, 0.5)) == -math.inf


@pytest.mark.slow
def test_empirical_frequency_matches_exact_law():
    # 10^6 seeded draws on n = 3 against the exact law, total variation <= 0.005
    trials = 10**6
    dist = enumerate_distribution(3, HALF)
    tally: Counter = Counter()
    for seed in range(trials):
        v = uniforms(seed, 0, 3) < 0.5
        e = uniforms(seed, 1, 3) < 0.5
        t = uniforms(seed, 2, 1)[0] < 0.5
        # colex edge order: (0,1), (0,2), (1,2)
        e = e & np.array([v[0] & v[1], v[0] & v[2], v[1] & v[2]])
        tally[(tuple(v.tolist()), tuple(e.tolist()), bool(t and e.all()))] += 1
    tv = 0.0
    for (vm, em, tm), count in tally.items():
        y = complex_from_masks(3, np.array(vm), np.array(em), np.array([tm]))
        tv += abs(count / trials - float(dist[y]))
    tv += sum(float(w) for y, w in dist.items()
              if not any(complex_from_masks(3, np.array(a), np.array(b), np.array([c])) == y
                         for a, b, c in tally))
    assert tv / 2 <= 0.005
