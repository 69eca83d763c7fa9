import io
import json
import math
import random

import numpy as np
import pytest

from deformed_hecke.hamiltonian import apply_H, bethe_phi
from deformed_hecke.lattice import Params
from deformed_hecke.operators import LatticeFunction
from deformed_hecke.sampling import random_distinct_scalars, random_dominant_point, random_params
from deformed_hecke.scalar import ONE, ZERO, scalar
from deformed_hecke.stochastic import (
    OVERFLOW, StochasticParams, Trajectory, apply_generator, K_constant, jump_rate, psi_eigenvalue,
    psi_z, rate_table, simulate, simulate_many, specialize_H, total_variation,
    total_variation_vs_oracle, transitions, uniformization_distribution, write_occupation_csv,
)
from deformed_hecke.suites import sample_psi_setup

HALF = scalar("1/2")


def f_table(seed):
    def f(x):
        r = random.Random(f"{seed}:{tuple(x)}")
        return scalar(f"{r.randint(-9, 9)}/{r.randint(1, 9)}")
    return f


# rates

def test_jump_rate_examples():
    s, q = scalar("2/3"), scalar("1/3")
    sp = StochasticParams(s, q)
    assert jump_rate(1, 1, sp) == 1
    assert jump_rate(2, 2, sp) == s / (1 + s)
    assert jump_rate(2, 1, sp) == (1 + q) / (1 + s)
    with pytest.raises(ValueError):
        jump_rate(2, 3, sp)
    with pytest.raises(ValueError):
        jump_rate(2, 0, sp)


@pytest.mark.parametrize("q", ["1/10", "1/2", "9/10", "3"])
def test_s_zero_is_the_q_boson(q):
    q = scalar(q)
    sp = StochasticParams(0, q)
    for c in range(1, 8):
        assert jump_rate(c, 1, sp) == (1 - q ** c) / (1 - q)
        assert all(jump_rate(c, r, sp) == 0 for r in range(2, c + 1))


def test_rates_nonnegative_on_grid():
    for s in ("0", "1/4", "1", "4"):
        for q in ("1/10", "1/2", "9/10"):
            table = rate_table(12, StochasticParams(scalar(s), scalar(q)))
            assert len(table) == 78
            assert all(v >= 0 for v in table.values())


def test_nu():
    assert StochasticParams(1, HALF).nu == scalar("2/3")
    assert StochasticParams(0, HALF).nu == 0
    with pytest.raises(ZeroDivisionError):
        StochasticParams(HALF, scalar("3/2")).nu


# generator

def test_generator_k1():
    sp = StochasticParams(scalar("3/4"), HALF)
    f = f_table(1)
    for m in range(-3, 4):
        assert apply_generator(f, (m,), sp) == f((m - 1,)) - f((m,))


def test_generator_k2_origin():
    s, q = scalar("3/4"), HALF
    sp = StochasticParams(s, q)
    f = f_table(2)
    expected = (1 + q) / (1 + s) * (f((0, -1)) - f((0, 0))) + s / (1 + s) * (f((-1, -1)) - f((0, 0)))
    assert apply_generator(f, (0, 0), sp) == expected


def test_generator_kills_constants():
    rng = random.Random(3)
    for _ in range(30):
        sp = StochasticParams(scalar(f"{rng.randint(0, 9)}/{rng.randint(1, 9)}"), scalar(f"{rng.randint(1, 8)}/9"))
        x = random_dominant_point(rng, rng.randint(1, 5))
        assert apply_generator(lambda y: ONE, x, sp) == 0


def test_transitions_move_rightmost_indices():
    sp = StochasticParams(1, HALF)
    targets = {(n, r): y for n, r, y, _ in transitions((2, 2, 2, 0), sp)}
    assert targets[(0, 1)] == (2, 2, 1, 0)
    assert targets[(0, 3)] == (1, 1, 1, 0)
    assert targets[(1, 1)] == (2, 2, 2, -1)


# K constants

def test_K_small_values(params2):
    al, be, ga, de = params2.as_tuple()
    assert K_constant(1, params2) == 0
    assert K_constant(2, params2) == -(al + be) * (ga + de) / (1 + be * ga)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5])
def test_K_is_the_defect_of_H_on_constants(m):
    """Independent route: K_m = (H 1)(x) - m on a single cluster of size m."""
    rng = random.Random(f"K:{m}")
    for _ in range(5):
        params = random_params(rng, m)
        H1 = apply_H(LatticeFunction(m, lambda x: ONE), params)
        assert H1((0,) * m) - m == K_constant(m, params)


@pytest.mark.parametrize("branch", ["alpha_plus_beta_zero", "gamma_plus_delta_zero"])
def test_K_vanishes_on_both_branches(branch):
    rng = random.Random(branch)
    for _ in range(20):
        params = random_params(rng, 10, branch)
        assert all(K_constant(m, params) == 0 for m in range(1, 11))


def test_K2_nonzero_off_the_branches():
    rng = random.Random(4)
    for _ in range(50):
        params = random_params(rng, 2)
        if (params.alpha + params.beta) * (params.gamma + params.delta) != 0:
            assert K_constant(2, params) != 0


# specialization

def symmetric_delta(y):
    return LatticeFunction(len(y), lambda z: ONE if tuple(sorted(z, reverse=True)) == tuple(y) else ZERO)


@pytest.mark.parametrize("branch", ["alpha+beta=0", "gamma+delta=0"])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_specialization(branch, k):
    rng = random.Random(f"specialize:{branch}:{k}")
    stratum = "alpha_plus_beta_zero" if branch.startswith("alpha") else "gamma_plus_delta_zero"
    done = 0
    while done < 10:
        params = random_params(rng, k, stratum)
        sp = specialize_H(branch, params)
        try:
            rate_table(k, sp)
        except ZeroDivisionError:
            continue
        x = random_dominant_point(rng, k)
        y = tuple(sorted((v - rng.randint(0, 1) for v in x), reverse=True))
        for f in (symmetric_delta(y), symmetric_delta(x)):
            assert apply_H(f, params)(x) - k * f(x) == apply_generator(f, x, sp)
        done += 1


def test_specialization_values_and_errors():
    params = Params(2, -2, 3, 5, 2)
    q = params.q
    sp = specialize_H("alpha+beta=0", params)
    assert (sp.s, sp.q) == (2 * 5 / q, 1 / q)
    params = Params(2, 3, 5, -5, 2)
    sp = specialize_H("gamma+delta=0", params)
    assert (sp.s, sp.q) == (15, params.q)
    with pytest.raises(ValueError):
        specialize_H("alpha+beta=0", params)
    with pytest.raises(ValueError):
        specialize_H("nonsense", params)


def test_s_zero_branch_gives_q_boson():
    params = Params(3, 0, 2, -2, 3)
    sp = specialize_H("gamma+delta=0", params)
    assert sp.s == 0
    assert jump_rate(3, 1, sp) == 1 + sp.q + sp.q ** 2


# psi

def test_psi_k1():
    sp = StochasticParams(2, HALF)
    z = scalar("1/3")
    nu = sp.nu
    for m in range(-2, 3):
        assert psi_z([z], (m,), sp) == ((1 - nu * z) / (1 - z)) ** m
    sp0 = StochasticParams(0, HALF)
    assert psi_z([z], (3,), sp0) == (1 / (1 - z)) ** 3


@pytest.mark.parametrize("k", [1, 2, 3])
def test_psi_eigenrelation(k):
    rng = random.Random(f"psi:{k}")
    for _ in range(5):
        sp, z = sample_psi_setup(rng, k)
        E = psi_eigenvalue(z, sp)
        for _ in range(4):
            x = random_dominant_point(rng, k)
            assert apply_generator(lambda y: psi_z(z, y, sp), x, sp) == E * psi_z(z, x, sp)


def test_psi_errors():
    sp = StochasticParams(1, HALF)
    with pytest.raises(ValueError):
        psi_z([HALF, HALF], (0, 0), sp)
    with pytest.raises(ValueError):
        psi_z([ONE, HALF], (0, 0), sp)
    with pytest.raises(ValueError):
        psi_z([1 / sp.nu, HALF], (0, 0), sp)


def test_phi_and_psi_coincide_under_substitution():
    rng = random.Random(5)
    checked = 0
    while checked < 10:
        params = random_params(rng, 3, "gamma_plus_delta_zero")
        if params.alpha == 0:
            continue
        sp = specialize_H("gamma+delta=0", params)
        try:
            nu = sp.nu
        except ZeroDivisionError:
            continue
        z = random_distinct_scalars(rng, 3, nonzero=False, exclude=[ONE] + ([1 / nu] if nu else []))
        try:
            p = [(1 - v) / (1 + params.beta * v / params.alpha) for v in z]
        except ZeroDivisionError:
            continue
        if len(set(p)) < 3 or not all(p):
            continue
        x = random_dominant_point(rng, 3)
        assert bethe_phi(p, x, params) == psi_z(z, x, sp)
        checked += 1


# simulation

SP = StochasticParams(1, HALF)


def test_simulation_is_deterministic():
    a = simulate((0, 0, 0), 2.0, SP, seed=9)
    b = simulate((0, 0, 0), 2.0, SP, seed=9)
    assert a == b
    assert a.to_json_lines() == b.to_json_lines()
    assert simulate((0, 0, 0), 2.0, SP, seed=10) != a


def test_trajectory_invariants():
    for traj in simulate_many((1, 1, 0, 0), 3.0, SP, 50, seed=11):
        times = [ev.time for ev in traj.events]
        assert times == sorted(times) and len(set(times)) == len(times)
        assert all(0 < t <= 3.0 for t in times)
        configs = traj.configs()
        assert all(list(c) == sorted(c, reverse=True) for c in configs)
        assert sum(configs[0]) - sum(configs[-1]) == sum(ev.r for ev in traj.events)
        for rec, after in zip(traj.json_records(), configs[1:]):
            assert rec["config_after"] == list(after)


def test_event_site_is_the_cluster_coordinate():
    traj = simulate((0, 0), 5.0, SP, seed=12)
    x = traj.initial
    for ev, after in zip(traj.events, traj.configs()[1:]):
        assert ev.site in x
        x = after


def test_simulation_rejects_bad_input():
    with pytest.raises(ValueError):
        simulate((0, 1), 1.0, SP, 0)
    with pytest.raises(ValueError):
        simulate((0,), -1.0, SP, 0)
    with pytest.raises(ValueError):
        simulate((0, 0), 1.0, StochasticParams(-3, HALF), 0)


def test_k1_jump_count_mean():
    counts = [t.jump_count() for t in simulate_many((0,), 5.0, SP, 4000, seed=13)]
    assert abs(np.mean(counts) - 5.0) < 4 * math.sqrt(5.0 / 4000)


def test_first_jump_split():
    s, q = scalar(1), HALF
    # the split of the first jump does not depend on when it happens
    trajs = simulate_many((0, 0), 8.0, StochasticParams(s, q), 20000, seed=14)
    frac = np.mean([t.events[0].r == 2 for t in trajs if t.events])
    expected = float(s / (1 + q + s))
    assert abs(frac - expected) < 4 * math.sqrt(expected * (1 - expected) / 20000)


# uniformization

def test_uniformization_t0():
    dist = uniformization_distribution((1, 0), 0.0, SP, 4)
    assert dist.probabilities == {(1, 0): 1.0}
    assert dist.truncated_mass == 0


def test_uniformization_k1_is_poisson():
    t = 2.5
    dist = uniformization_distribution((3,), t, SP, 30)
    for n in range(10):
        expected = math.exp(-t) * t ** n / math.factorial(n)
        assert abs(dist.probabilities[(3 - n,)] - expected) < 1e-11


def test_uniformization_truncation_is_reported():
    with pytest.raises(ValueError):
        uniformization_distribution((0, 0), 1.0, SP, 2)
    dist = uniformization_distribution((0, 0), 1.0, SP, 2, max_truncated_mass=1.0)
    assert 0 < dist.truncated_mass < 1
    assert abs(sum(dist.with_overflow().values()) - 1) < 1e-9


def test_simulator_matches_uniformization_small():
    dist = uniformization_distribution((0, 0), 0.5, SP, 8, max_truncated_mass=1e-4)
    finals = [t.final for t in simulate_many((0, 0), 0.5, SP, 20000, seed=15)]
    assert total_variation_vs_oracle(finals, dist) < 0.03


def test_total_variation():
    assert total_variation({1: 0.5, 2: 0.5}, {1: 0.5, 2: 0.5}) == 0
    assert total_variation({1: 1.0}, {2: 1.0}) == 1
    assert OVERFLOW == "overflow"


# export

def test_occupation_csv_and_json():
    trajs = simulate_many((0, 0), 1.0, SP, 2, seed=16)
    buf = io.StringIO()
    write_occupation_csv(buf, trajs, [0.0, 1.0])
    lines = buf.getvalue().splitlines()
    assert lines[0] == "trajectory,t,site,occupation"
    assert lines[1] == "0,0.0,0,2"
    for traj in trajs:
        for line in traj.to_json_lines().splitlines():
            assert set(json.loads(line)) == {"t", "cluster_site", "r", "config_after"}


def test_trajectory_at():
    traj = simulate((0, 0), 3.0, SP, seed=17)
    assert traj.at(0.0) == (0, 0)
    assert traj.at(3.0) == traj.final
    if traj.events:
        first = traj.events[0].time
        assert traj.at(first) == traj.configs()[1]
