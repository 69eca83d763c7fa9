"""The (s, q) stochastic particle system: rates, generator, eigenfunctions and simulation.

A configuration of ``k`` bosonic particles on Z is a weakly decreasing tuple of
positions.  A cluster of ``c`` particles sharing a site sends ``r`` of them one
site to the left at rate ``jump_rate(c, r)``.
"""

import csv
import json
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations
from math import exp, lgamma, log

import numpy as np

from .lattice import Params, StandingAssumptionError, cluster_coordinate, is_dominant, q_integer
from .scalar import ONE, ZERO, Scalar, format_scalar, scalar
from .identities import elementary_symmetric

__all__ = [
    "StochasticParams", "Event", "Trajectory", "TransientDistribution", "jump_rate", "rate_table",
    "transitions", "apply_generator", "K_constant", "specialize_H", "psi_z", "psi_eigenvalue",
    "simulate", "simulate_many", "uniformization_distribution", "empirical_distribution",
    "total_variation", "occupation_rows", "write_occupation_csv",
    "total_variation_vs_oracle", "OVERFLOW", "RNG_NAME",
]

RNG_NAME = f"numpy.random.PCG64 (numpy {np.__version__})"


@dataclass(frozen=True)
class StochasticParams:
    """``(s, q)``; ``nu = s / (1 - q + s)``.

    Arbitrary rationals are allowed so that the generator can be compared with
    the specialized Hamiltonian off the stochastic region; :meth:`is_stochastic`
    reports whether all rates up to a cluster size are nonnegative.
    """

    s: Scalar
    q: Scalar

    def __post_init__(self):
        object.__setattr__(self, "s", scalar(self.s))
        object.__setattr__(self, "q", scalar(self.q))

    @property
    def nu(self) -> Scalar:
        denom = 1 - self.q + self.s
        if denom == 0:
            raise ZeroDivisionError("1 - q + s = 0: nu is undefined")
        return self.s / denom

    def qint(self, n: int) -> Scalar:
        return q_integer(n, self.q)

    def is_stochastic(self, c_max: int) -> bool:
        return all(jump_rate(c, r, self) >= 0 for c in range(1, c_max + 1) for r in range(1, c + 1))


def jump_rate(c: int, r: int, sp: StochasticParams) -> Scalar:
    """Rate at which ``r`` particles leave a cluster of ``c``:
    ``s^{r-1}/[r] * prod_{p<r} [c-p] / (1 + s[c-1-p])``."""
    if not 1 <= r <= c:
        raise ValueError(f"need 1 <= r <= c, got c={c}, r={r}")
    s = sp.s
    value = s ** (r - 1) / sp.qint(r)
    for p in range(r):
        denom = 1 + s * sp.qint(c - 1 - p)
        if denom == 0:
            raise ZeroDivisionError(f"1 + s[{c - 1 - p}] = 0")
        value *= sp.qint(c - p) / denom
    return value


def rate_table(c_max: int, sp: StochasticParams) -> dict:
    return {(c, r): jump_rate(c, r, sp) for c in range(1, c_max + 1) for r in range(1, c + 1)}


def _clusters(x):
    """``(start, size, site)`` per cluster, 0-based start index."""
    out, start = [], 0
    for size in cluster_coordinate(x):
        out.append((start, size, x[start]))
        start += size
    return out


def _move(x, start, size, r):
    # the r largest indices of the cluster step left; order is preserved
    y = list(x)
    for idx in range(start + size - r, start + size):
        y[idx] -= 1
    return tuple(y)


def transitions(x, sp: StochasticParams):
    """Outgoing transitions of ``x``: list of ``(cluster_index, r, target, rate)``."""
    out = []
    for n, (start, size, _) in enumerate(_clusters(x)):
        for r in range(1, size + 1):
            out.append((n, r, _move(x, start, size, r), jump_rate(size, r, sp)))
    return out


def apply_generator(f, x, sp: StochasticParams) -> Scalar:
    """``(H(s,q) f)(x) = sum_clusters sum_r rate(c, r) (f(x - moved) - f(x))``."""
    x = tuple(x)
    fx = f(x)
    total = ZERO
    for _, _, target, rate in transitions(x, sp):
        if rate:
            total += rate * (f(target) - fx)
    return total


def K_constant(m: int, params: Params) -> Scalar:
    """Diagonal defect ``K_m`` of ``H - k`` on a single cluster of size ``m``.

    Uses ``q^{-r(r-1)/2}`` in the ``r``-th term, which is what the cluster form
    of ``H_J`` produces on symmetric functions.
    """
    if m < 1:
        raise ValueError("m must be positive")
    al, be, ga, de = params.as_tuple()
    q = params.q
    value = scalar(-m)
    for d in range(1, m):
        denom = params.denominator(d)
        if denom == 0:
            raise StandingAssumptionError(f"1 + beta*gamma*[{d}] = 0")
        value -= al * ga * params.qint(d) / denom
    powers = [q ** j for j in range(m)]
    factorial = ONE
    for r in range(1, m + 1):
        if r > 1:
            factorial *= params.qint(r - 1)
        num = (-be * de) ** (r - 1) * factorial
        if not num:
            continue
        denom = ONE
        for p in range(r):
            d = params.denominator(m - 1 - p)
            if d == 0:
                raise StandingAssumptionError(f"1 + beta*gamma*[{m - 1 - p}] = 0")
            denom *= d
        value += num * q ** (-(r * (r - 1) // 2)) / denom * elementary_symmetric(r, powers)
    return value


def specialize_H(branch: str, params: Params) -> StochasticParams:
    """``(s, q)`` with ``(H - k)`` on symmetric functions equal to ``H(s, q)``.

    ``branch`` is ``"alpha+beta=0"`` (gives ``(alpha delta / q, 1/q)``) or
    ``"gamma+delta=0"`` (gives ``(beta gamma, q)``).
    """
    if branch in ("alpha+beta=0", "alpha_plus_beta_zero"):
        if params.alpha + params.beta != 0:
            raise ValueError("alpha + beta != 0")
        return StochasticParams(params.alpha * params.delta / params.q, 1 / params.q)
    if branch in ("gamma+delta=0", "gamma_plus_delta_zero"):
        if params.gamma + params.delta != 0:
            raise ValueError("gamma + delta != 0")
        return StochasticParams(params.beta * params.gamma, params.q)
    raise ValueError(f"unknown branch {branch!r}")


def _check_z(z, sp: StochasticParams):
    z = [scalar(v) for v in z]
    if len(set(z)) != len(z):
        raise ValueError("spectral parameters z must be pairwise distinct")
    nu = sp.nu
    for v in z:
        if v == 1 or nu * v == 1:
            raise ValueError(f"z = {v} hits a pole (z = 1 or nu z = 1)")
    return z


def psi_z(z, x, sp: StochasticParams) -> Scalar:
    """Symmetrized Bethe eigenfunction of ``H(s, q)`` at ``x`` in the chamber."""
    z = _check_z(z, sp)
    if len(z) != len(x):
        raise ValueError("need one spectral parameter per particle")
    if not is_dominant(x):
        raise ValueError(f"{tuple(x)} is not weakly decreasing")
    q, nu = sp.q, sp.nu
    one_particle = [(1 - nu * v) / (1 - v) for v in z]
    k = len(z)
    total = ZERO
    for sigma in permutations(range(k)):
        term = ONE
        for i in range(k):
            for j in range(i + 1, k):
                zi, zj = z[sigma[i]], z[sigma[j]]
                term *= (q * zi - zj) / (zi - zj)
        if not term:
            continue
        for i, m in enumerate(x):
            term *= one_particle[sigma[i]] ** m
        total += term
    return total


def psi_eigenvalue(z, sp: StochasticParams) -> Scalar:
    """``(nu - 1) sum_i z_i / (1 - nu z_i)``."""
    z = _check_z(z, sp)
    nu = sp.nu
    return (nu - 1) * sum((v / (1 - nu * v) for v in z), ZERO)


@dataclass(frozen=True)
class Event:
    time: float
    cluster: int  # 0-based cluster index, left to right in decreasing site order
    r: int
    site: int  # common coordinate of the cluster before the jump


@dataclass
class Trajectory:
    initial: tuple
    horizon: float
    events: list = field(default_factory=list)

    def configs(self):
        """Configurations after each event (the initial one first)."""
        x = self.initial
        out = [x]
        for ev in self.events:
            start, size, site = _clusters(x)[ev.cluster]
            if site != ev.site:
                raise ValueError("event does not match the replayed configuration")
            x = _move(x, start, size, ev.r)
            out.append(x)
        return out

    @property
    def final(self) -> tuple:
        return self.configs()[-1]

    def at(self, t: float) -> tuple:
        """Configuration at time ``t`` (right-continuous)."""
        configs = self.configs()
        n = sum(1 for ev in self.events if ev.time <= t)
        return configs[n]

    def jump_count(self) -> int:
        return len(self.events)

    def json_records(self) -> list:
        """One record per event: ``{t, cluster_site, r, config_after}``."""
        records = []
        for ev, after in zip(self.events, self.configs()[1:]):
            records.append({"t": ev.time, "cluster_site": ev.site, "r": ev.r, "config_after": list(after)})
        return records

    def to_json_lines(self) -> str:
        return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in self.json_records())


class _RateCache:
    """Float rate rows per cluster size, computed exactly then rounded once."""

    def __init__(self, sp: StochasticParams):
        self.sp = sp
        self.rows = {}

    def row(self, c):
        """``(rates for r = 1..c, their sum)`` as floats."""
        if c not in self.rows:
            exact = [jump_rate(c, r, self.sp) for r in range(1, c + 1)]
            if any(v < 0 for v in exact):
                raise ValueError(f"negative jump rate for cluster size {c}: not a stochastic system")
            row = [float(v) for v in exact]
            self.rows[c] = (row, sum(row))
        return self.rows[c]


def _as_generator(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.Generator(np.random.PCG64(seed))


def _validate_initial(initial):
    initial = tuple(int(v) for v in initial)
    if not initial or not is_dominant(initial):
        raise ValueError(f"initial configuration {initial} must be nonempty and weakly decreasing")
    return initial


def _run(initial, horizon, rng, rates: _RateCache) -> Trajectory:
    traj = Trajectory(initial, horizon)
    x, t = initial, 0.0
    while True:
        clusters = _clusters(x)
        total = 0.0
        for _, size, _ in clusters:
            total += rates.row(size)[1]
        t += rng.exponential(1.0 / total)
        if t > horizon:
            return traj
        target = rng.random() * total
        chosen = None
        for n, (start, size, site) in enumerate(clusters):
            row, _ = rates.row(size)
            for r, rate in enumerate(row, start=1):
                chosen = (n, start, size, site, r)
                target -= rate
                if target < 0:
                    break
            if target < 0:
                break
        # floating-point slack lands on the last event
        n, start, size, site, r = chosen
        traj.events.append(Event(t, n, r, site))
        x = _move(x, start, size, r)


def simulate(initial, horizon: float, sp: StochasticParams, seed) -> Trajectory:
    """Gillespie trajectory on ``[0, horizon]``; deterministic given ``seed``.

    ``seed`` is an int (seeding ``PCG64``) or an existing ``numpy`` generator.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    return _run(_validate_initial(initial), float(horizon), _as_generator(seed), _RateCache(sp))


def simulate_many(initial, horizon: float, sp: StochasticParams, n: int, seed) -> list:
    """``n`` independent trajectories drawn sequentially from one seeded stream."""
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    initial = _validate_initial(initial)
    rng, rates = _as_generator(seed), _RateCache(sp)
    return [_run(initial, float(horizon), rng, rates) for _ in range(n)]


OVERFLOW = "overflow"


@dataclass
class TransientDistribution:
    probabilities: dict  # configuration -> probability, displacement <= D
    escaped_mass: float  # probability of total displacement > D by time t
    poisson_tail: float  # uniformization series truncation error bound
    rate_bound: float  # uniformization constant
    steps: int

    @property
    def truncated_mass(self) -> float:
        return self.escaped_mass + self.poisson_tail

    def with_overflow(self) -> dict:
        """Probabilities plus an ``OVERFLOW`` bucket holding the truncated mass."""
        out = dict(self.probabilities)
        out[OVERFLOW] = self.truncated_mass
        return out


def _reachable(initial, max_displacement, sp):
    base = sum(initial)
    index, states, frontier = {initial: 0}, [initial], [initial]
    while frontier:
        nxt = []
        for x in frontier:
            for _, _, y, rate in transitions(x, sp):
                if rate and base - sum(y) <= max_displacement and y not in index:
                    index[y] = len(states)
                    states.append(y)
                    nxt.append(y)
        frontier = nxt
    return states, index


def uniformization_distribution(
    initial, t: float, sp: StochasticParams, max_displacement: int,
    max_truncated_mass: float = 1e-9, poisson_tol: float = 1e-12,
) -> TransientDistribution:
    """Transient law at time ``t`` restricted to total displacement ``<= max_displacement``.

    Uniformization with constant ``k * max_{c <= k} R(c)``, where ``R(c)`` is
    the total exit rate of a cluster of size ``c``.  Mass that would leave the
    truncated state set is tracked exactly as ``escaped_mass`` (displacement
    never decreases); the Poisson series stops once its tail is below
    ``poisson_tol``.  Raises ``ValueError`` if the total truncated mass exceeds
    ``max_truncated_mass``.
    """
    initial = _validate_initial(initial)
    k = len(initial)
    if t < 0:
        raise ValueError("t must be nonnegative")
    states, index = _reachable(initial, max_displacement, sp)
    n = len(states)
    generator = np.zeros((n, n))
    exit_rates = np.zeros(n)
    for a, x in enumerate(states):
        for _, _, y, rate in transitions(x, sp):
            rate = float(rate)
            if rate < 0:
                raise ValueError("negative jump rate: not a stochastic system")
            exit_rates[a] += rate
            b = index.get(y)
            if b is not None:
                generator[a, b] += rate
    cluster_totals = [sum(float(jump_rate(c, r, sp)) for r in range(1, c + 1)) for c in range(1, k + 1)]
    lam = k * max(cluster_totals)
    kernel = generator / lam
    kernel[np.diag_indices(n)] += 1.0 - exit_rates / lam

    vector = np.zeros(n)
    vector[0] = 1.0
    result = np.zeros(n)
    mean = lam * t
    weight_sum, steps = 0.0, 0
    while True:
        weight = exp(-mean + steps * log(mean) - lgamma(steps + 1)) if mean > 0 else float(steps == 0)
        result += weight * vector
        weight_sum += weight
        if 1.0 - weight_sum < poisson_tol or mean == 0:
            break
        vector = vector @ kernel
        steps += 1
    tail = max(0.0, 1.0 - weight_sum)
    escaped = max(0.0, 1.0 - tail - float(result.sum()))
    dist = TransientDistribution(
        {x: float(result[a]) for a, x in enumerate(states) if result[a] > 0}, escaped, tail, lam, steps
    )
    if dist.truncated_mass > max_truncated_mass:
        raise ValueError(
            f"truncated mass {dist.truncated_mass:.3g} exceeds {max_truncated_mass:.3g}; "
            f"increase max_displacement beyond {max_displacement}"
        )
    return dist


def occupation_rows(trajectories, sample_times) -> list:
    """Rows ``(trajectory, t, site, occupation)`` for every occupied site at each sample time."""
    rows = []
    for n, traj in enumerate(trajectories):
        for t in sample_times:
            for site, occ in sorted(Counter(traj.at(t)).items(), reverse=True):
                rows.append((n, t, site, occ))
    return rows


def write_occupation_csv(stream, trajectories, sample_times):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["trajectory", "t", "site", "occupation"])
    writer.writerows(occupation_rows(trajectories, sample_times))


def empirical_distribution(configs) -> dict:
    counts = Counter(configs)
    n = sum(counts.values())
    return {x: c / n for x, c in counts.items()}


def total_variation(p: dict, q: dict) -> float:
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(x, 0.0) - q.get(x, 0.0)) for x in keys)


def total_variation_vs_oracle(configs, dist: TransientDistribution) -> float:
    """TV distance between sampled configurations and ``dist``, lumping states outside it into one bucket."""
    lumped = [x if x in dist.probabilities else OVERFLOW for x in configs]
    return total_variation(empirical_distribution(lumped), dist.with_overflow())


def format_rate_table(table: dict) -> list:
    """Rows ``{c, r, exact, decimal}`` for printing."""
    return [
        {"c": c, "r": r, "exact": format_scalar(v), "decimal": float(v)}
        for (c, r), v in sorted(table.items())
    ]
