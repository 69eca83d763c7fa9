from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from deformed_hecke.lattice import (
    Params, StandingAssumptionError, WeylWord, apply_permutation, cluster_blocks, cluster_coordinate,
    compose, descent_counts, inversion_set, is_dominant, q_factorial, q_integer, reflect,
    shortest_chamber_word, simple_root_value,
)
from deformed_hecke.scalar import ONE, ZERO, format_scalar, scalar

from conftest import points, rationals


def inversions(sigma):
    return sum(1 for i in range(len(sigma)) for j in range(i + 1, len(sigma)) if sigma[i] > sigma[j])


def brute_force_chamber(x):
    """All permutations sorting x, keeping the shortest ones."""
    k = len(x)
    sorting = [s for s in permutations(range(k)) if is_dominant(apply_permutation(s, x))]
    best = min(inversions(s) for s in sorting)
    return best, [s for s in sorting if inversions(s) == best]


# scalars and params

def test_scalar_rejects_floats_and_decimals():
    with pytest.raises(TypeError):
        scalar(0.5)
    with pytest.raises(ValueError):
        scalar("0.5")
    with pytest.raises(ZeroDivisionError):
        scalar("1/0")
    assert scalar("-6/4") == scalar("-3/2")
    assert format_scalar(scalar("6/3")) == "2"
    assert format_scalar(scalar("-6/4")) == "-3/2"


def test_scalar_lowest_terms_and_exact_division():
    x = scalar("-10/4")
    assert (x.numerator, x.denominator) == (-5, 2)
    with pytest.raises(ZeroDivisionError):
        ONE / ZERO


def test_params_q_is_derived():
    p = Params("2", "3", "5", "7", 1)
    assert p.q == 1 + 3 * 5 - 2 * 7


def test_params_standing_assumption():
    with pytest.raises(StandingAssumptionError):
        Params(1, 1, -1, 0, 2)  # 1 + beta*gamma*[1] = 0
    # [2] = 1 + q with q = 1 + 1*(-1/3) - 0 = 2/3: 1 - 1/3 * 5/3 != 0, fine
    Params(1, 1, "-1/3", 0, 3)


# q-integers

@pytest.mark.parametrize("n,q,expected", [(0, 5, 0), (1, 5, 1), (3, 2, 7), (4, 1, 4)])
def test_q_integer(n, q, expected):
    assert q_integer(n, scalar(q)) == expected


def test_q_factorial():
    q = scalar("1/2")
    assert q_factorial(0, q) == 1
    assert q_factorial(3, q) == 1 * (1 + q) * (1 + q + q * q)


# simple roots

def test_simple_root_value():
    assert simple_root_value(1, (3, 1)) == 2
    assert simple_root_value(1, (0, 0)) == 0
    assert simple_root_value(2, (0, 2, 1)) == 1
    with pytest.raises(IndexError):
        simple_root_value(2, (0, 1))
    with pytest.raises(IndexError):
        simple_root_value(0, (0, 1))


# chamber words

def test_chamber_word_dominant_is_identity():
    w = shortest_chamber_word((3, 3, 1, -2))
    assert w.letters == ()
    assert w.permutation == (0, 1, 2, 3)


def test_chamber_word_k2():
    w = shortest_chamber_word((1, 2))
    assert w.letters == (1,)
    assert w.permutation == (1, 0)
    assert w.act((1, 2)) == (2, 1)


def test_chamber_word_matches_brute_force_example():
    x = (0, 2, 1)
    w = shortest_chamber_word(x)
    best, minimal = brute_force_chamber(x)
    assert len(w) == best == 2
    assert minimal == [w.permutation]
    assert w.act(x) == (2, 1, 0)


@given(points(1, 5))
def test_chamber_word_is_the_unique_shortest(x):
    w = shortest_chamber_word(x)
    best, minimal = brute_force_chamber(x)
    assert is_dominant(w.act(x))
    assert len(w) == best == len(inversion_set(x))
    assert minimal == [w.permutation]
    # letters reproduce the permutation
    assert WeylWord.from_letters(w.letters, len(x)).permutation == w.permutation


@given(points(1, 5))
def test_coordinates_follow_sigma(x):
    w = shortest_chamber_word(x)
    y = w.act(x)
    assert all(x[i] == y[w.permutation[i]] for i in range(len(x)))


@given(points(2, 5))
def test_descent_counts_follow_sigma(x):
    w = shortest_chamber_word(x)
    dp, dm = descent_counts(x)
    dp_y, dm_y = descent_counts(w.act(x))
    for i in range(len(x)):
        assert dp[i] == dp_y[w.permutation[i]]
        assert dm[i] == dm_y[w.permutation[i]]


@settings(max_examples=200)
@given(points(2, 5, -2, 2), st.data())
def test_prop_2_1_inversion_sets_compose(v, data):
    k = len(v)
    v2 = data.draw(st.tuples(*[st.integers(-2, 2)] * k))
    if not inversion_set(v) <= inversion_set(v2):
        return
    wv = shortest_chamber_word(v)
    w_v2 = shortest_chamber_word(v2)
    w_rest = shortest_chamber_word(wv.act(v2))
    assert w_v2.permutation == compose(w_rest.permutation, wv.permutation)
    assert len(w_v2) == len(w_rest) + len(wv)


def test_prop_2_1_explicit_instance():
    v, v2 = (0, 1, 0), (0, 2, 1)
    assert inversion_set(v) <= inversion_set(v2)
    wv, w_v2 = shortest_chamber_word(v), shortest_chamber_word(v2)
    w_rest = shortest_chamber_word(wv.act(v2))
    assert w_v2.permutation == compose(w_rest.permutation, wv.permutation)
    assert len(w_v2) == len(w_rest) + len(wv)


# descent counts

def test_descent_counts_examples():
    assert descent_counts((3, 3, 1)) == ((1, 0, 0), (0, 1, 0))
    assert descent_counts((4, 2, 0)) == ((0, 0, 0), (0, 0, 0))
    assert descent_counts((0, 0, 0)) == ((2, 1, 0), (0, 1, 2))


@given(points(1, 6), rationals)
def test_q_descent_sum_identity(x, q):
    dp, dm = descent_counts(x)
    lhs = sum((q_integer(d, q) for d in dp), ZERO)
    rhs = sum((q ** a * b for a, b in zip(dm, dp)), ZERO)
    assert lhs == rhs


@given(points(2, 5))
def test_descent_counts_under_simple_reflection(x):
    """d_i^+-(s_j x) is d_{s_j(i)}^+-(x), except that the pair j, j+1 trade their mutual count."""
    dp, dm = descent_counts(x)
    for j in range(1, len(x)):
        dp_s, dm_s = descent_counts(reflect(j, x))
        for i in range(len(x)):
            src = {j - 1: j, j: j - 1}.get(i, i)
            if x[j - 1] == x[j] and i in (j - 1, j):
                # the two equal coordinates are swapped back into place
                assert (dp_s[i], dm_s[i]) == (dp[i], dm[i])
            else:
                assert (dp_s[i], dm_s[i]) == (dp[src], dm[src])


# clusters and inversions

def test_cluster_coordinate_examples():
    assert cluster_coordinate((3, 3, 3, 1, -2, -2)) == (3, 1, 2)
    assert cluster_coordinate((5, 5, 5)) == (3,)
    assert cluster_coordinate((4, 2, 1, 0)) == (1, 1, 1, 1)
    with pytest.raises(ValueError):
        cluster_coordinate((0, 1))


@given(points(1, 6).map(lambda x: tuple(sorted(x, reverse=True))))
def test_cluster_coordinate_sums_to_k(x):
    assert sum(cluster_coordinate(x)) == len(x)


def test_cluster_blocks():
    assert cluster_blocks((0, 2, 0, 2, 1)) == [(2, 4), (5,), (1, 3)]


def test_inversion_set_examples():
    assert inversion_set((2, 2, 1)) == frozenset()
    assert inversion_set((1, 2)) == {(1, 2)}
    assert inversion_set((0, 2, 1)) == {(1, 2), (1, 3)}


def test_apply_permutation_and_compose():
    sigma = (2, 0, 1)
    x = (7, 8, 9)
    assert apply_permutation(sigma, x) == (8, 9, 7)
    ident = (0, 1, 2)
    assert compose(sigma, ident) == sigma == compose(ident, sigma)
