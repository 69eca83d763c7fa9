import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from deformed_hecke.lattice import Params, WeylWord
from deformed_hecke.operators import (
    LatticeFunction, LaurentPolynomial, act_left, apply_T, apply_T_word, apply_X, apply_X_inv,
    delta_function, linear_combination, pairing, right_apply_T, right_apply_X, right_apply_X_inv,
)
from deformed_hecke.relations import check_left, check_right, defining_relations
from deformed_hecke.sampling import STRATA, random_params, random_point
from deformed_hecke.scalar import ONE, ZERO, scalar


def random_function(seed, k):
    """A dense pseudo-random rational function on the lattice, stable per point."""
    def evaluate(x):
        r = random.Random(f"{seed}:{x}")
        return scalar(f"{r.randint(-9, 9)}/{r.randint(1, 9)}")
    return LatticeFunction(k, evaluate)


# lattice functions

def test_delta_function():
    d = delta_function((1, -2))
    assert d((1, -2)) == 1
    assert d((2, -2)) == 0
    combo = linear_combination([(2, delta_function((0, 0))), (3, delta_function((1, 0)))])
    assert combo((1, 0)) == 3
    assert combo((0, 0)) == 2


def test_memoized_and_unmemoized_agree():
    f = random_function(1, 3)
    g = apply_T(1, apply_T(2, f, Params(1, 2, 3, 4, 3)), Params(1, 2, 3, 4, 3))
    pts = [random_point(random.Random(i), 3) for i in range(20)]
    first = [g(x) for x in pts]
    assert g.cache_size > 0
    assert [g.unmemoized()(x) for x in pts] == first == [g(x) for x in pts]


# X

def test_apply_X_shifts_support():
    y = (1, 0, -1)
    f = apply_X(2, delta_function(y))
    assert f((1, 1, -1)) == 1
    assert f(y) == 0


def test_X_commute_and_invert():
    f = random_function(2, 3)
    rng = random.Random(0)
    a, b = apply_X(1, apply_X(2, f)), apply_X(2, apply_X(1, f))
    c = apply_X_inv(3, apply_X(3, f))
    for _ in range(20):
        x = random_point(rng, 3)
        assert a(x) == b(x)
        assert c(x) == f(x)


def test_index_errors():
    f = delta_function((0, 0))
    with pytest.raises(IndexError):
        apply_X(3, f)
    with pytest.raises(IndexError):
        apply_T(2, f, Params(1, 1, 1, 1, 2))


# T

def test_T_identity_on_the_wall(params3):
    f = random_function(3, 3)
    for x in [(1, 1, 0), (-2, -2, 5), (0, 4, 4)]:
        i = 1 if x[0] == x[1] else 2
        assert apply_T(i, f, params3)(x) == f(x)


def test_T_hand_values(params2):
    al, be, ga, de = params2.as_tuple()
    f = delta_function((1, 0))
    assert apply_T(1, f, params2)((0, 1)) == 1 - al * de
    assert apply_T(1, f, params2)((1, 0)) == al * de


def test_T_hand_value_longer_string(params2):
    # x = (2, 0), s_1 x = (0, 2).  Root strings: alpha gamma at (1, 2), (2, 1); alpha delta + beta
    # gamma at (1, 1); beta delta at (0, 1), (1, 0).  Only the middle string meets (1, 1).
    al, be, ga, de = params2.as_tuple()
    f = delta_function((1, 1))
    assert apply_T(1, f, params2)((2, 0)) == al * de + be * ga


def test_T_touches_at_most_3a_plus_3_points(params3):
    touched = []
    f = LatticeFunction(3, lambda x: touched.append(x) or ONE, memoize=False)
    for x in [(5, 0, 1), (0, 4, -2), (-3, 3, 0)]:
        touched.clear()
        apply_T(1, f, params3)(x)
        assert len(touched) <= 3 * abs(x[0] - x[1]) + 3


def test_T_word_empty_and_single(params2):
    f = delta_function((1, 0))
    assert apply_T_word((), f, params2) is f
    g = apply_T_word((1,), f, params2)
    for x in [(0, 1), (1, 0), (2, -1)]:
        assert g(x) == apply_T(1, f, params2)(x)


def test_T_word_independent_of_reduced_expression(params3):
    assert WeylWord.from_letters((1, 2, 1), 3).permutation == WeylWord.from_letters((2, 1, 2), 3).permutation
    f = random_function(4, 3)
    a = apply_T_word((1, 2, 1), f, params3)
    b = apply_T_word((2, 1, 2), f, params3)
    rng = random.Random(1)
    for _ in range(30):
        x = random_point(rng, 3)
        assert a(x) == b(x)


@pytest.mark.parametrize("stratum", STRATA)
@pytest.mark.parametrize("k", [2, 3, 4])
def test_left_relations_on_deltas(k, stratum):
    rng = random.Random(f"left:{k}:{stratum}")
    for _ in range(4):
        params = random_params(rng, k, stratum)
        x = random_point(rng, k)
        y = tuple(v + rng.randint(-1, 1) for v in x)
        for rel in defining_relations(params, k):
            assert check_left(rel, params, y, x), rel.name


def test_quadratic_relation_on_dense_function(params3):
    q = params3.q
    f = random_function(5, 3)
    lhs = act_left([(1, (("T", 1), ("T", 1))), (q - 1, (("T", 1),)), (-q, ())], f, params3)
    rng = random.Random(2)
    for _ in range(30):
        assert lhs(random_point(rng, 3)) == 0


def test_braid_relation_on_dense_function():
    params = Params("3/2", "-1/2", "1/3", "2", 4)
    f = random_function(6, 4)
    rng = random.Random(3)
    for i in (1, 2):
        a = act_left([(1, (("T", i), ("T", i + 1), ("T", i)))], f, params)
        b = act_left([(1, (("T", i + 1), ("T", i), ("T", i + 1)))], f, params)
        for _ in range(15):
            x = random_point(rng, 4, -2, 2)
            assert a(x) == b(x)


# Laurent polynomials and the right action

def test_laurent_basics():
    one = LaurentPolynomial.constant(2)
    e1, e2 = LaurentPolynomial.variable(2, 1), LaurentPolynomial.variable(2, 2)
    assert (e1 + e2) * (e1 - e2) == e1 * e1 - e2 * e2
    assert e1 * e2 == e2 * e1
    assert not (e1 - e1)
    assert (e1 - e1).terms == {}
    assert LaurentPolynomial.monomial((1, 0), 0).terms == {}
    assert right_apply_X_inv(right_apply_X(e1 + one, 2), 2) == e1 + one


def test_right_X_examples():
    e1, e2 = LaurentPolynomial.variable(2, 1), LaurentPolynomial.variable(2, 2)
    one = LaurentPolynomial.constant(2)
    assert right_apply_X(e1, 1) == one
    assert right_apply_X(one, 2) == LaurentPolynomial.monomial((0, -1))
    assert right_apply_X(e1 + e2, 1) == one + LaurentPolynomial.monomial((-1, 1))


def test_right_T_examples(params2):
    al, be, ga, de = params2.as_tuple()
    one = LaurentPolynomial.constant(2)
    e1, e2 = LaurentPolynomial.variable(2, 1), LaurentPolynomial.variable(2, 2)
    assert right_apply_T(one, 1, params2) == one
    sym = e1 * e2 + e1 + e2 + LaurentPolynomial.monomial((-2, -2), 5)
    assert right_apply_T(sym, 1, params2) == sym
    expected = e2 + (al * e1 + be * one) * (ga * e2 + de * one)
    assert right_apply_T(e1, 1, params2) == expected


def test_division_by_root_is_exact():
    e1, e2 = LaurentPolynomial.variable(3, 1), LaurentPolynomial.variable(3, 2)
    P = LaurentPolynomial.monomial((3, -1, 2), 4) + LaurentPolynomial.monomial((-2, 1, 0), -1)
    anti = P - P.swap(1)
    assert anti.divide_by_root(1) * (e1 - e2) == anti


@pytest.mark.parametrize("k", [2, 3])
def test_right_relations_on_monomials(k):
    rng = random.Random(f"right:{k}")
    params = random_params(rng, k)
    rels = defining_relations(params, k)
    for e in itertools.product(range(-2, 3), repeat=k):
        for rel in rels:
            assert check_right(rel, params, e), (rel.name, e)


# pairing and duality

def test_pairing_examples():
    y, z = (1, 2), (0, -1)
    assert pairing(LaurentPolynomial.monomial(y), delta_function(y)) == 1
    assert pairing(LaurentPolynomial.monomial(y), delta_function(z)) == 0
    f = LatticeFunction(2, lambda x: scalar(x[0] + 10 * x[1]))
    P = LaurentPolynomial.monomial(y, 2) + LaurentPolynomial.monomial(z, 3)
    assert pairing(P, f) == 2 * f(y) + 3 * f(z)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 4), st.integers(0, 10 ** 6))
def test_duality(k, seed):
    rng = random.Random(seed)
    params = random_params(rng, k, STRATA[seed % len(STRATA)])
    e, y = random_point(rng, k), random_point(rng, k)
    P, f = LaurentPolynomial.monomial(e), delta_function(y)
    for i in range(1, k + 1):
        assert pairing(right_apply_X(P, i), f) == apply_X(i, f)(e)
    for i in range(1, k):
        assert pairing(right_apply_T(P, i, params), f) == apply_T(i, f, params)(e)
