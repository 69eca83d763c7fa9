"""Exact random-point verification of the rational identities behind the rewriting of H.

Each identity is a pair of functions evaluating its two sides at a given
rational point.  A ``verify_*`` driver samples small random rationals (numerators
in [-9, 9], denominators in [1, 9]), retries points where a denominator
vanishes and reports exact equality per trial.  Retries are counted, never
silently skipped.

Agreement at many independent random points is strong evidence for a
rational-function identity of bounded degree (Schwartz-Zippel), not a proof.
"""

import random
from dataclasses import dataclass
from itertools import combinations

from .lattice import q_factorial, q_integer
from .scalar import ONE, ZERO, Scalar, random_scalar

__all__ = [
    "IdentityReport", "elementary_symmetric", "q_binomial_identity",
    "block_rewrite_lhs", "block_rewrite_rhs", "scalar_rewrite_lhs", "scalar_rewrite_rhs",
    "propagation_identity_lhs", "staircase_sum", "staircase_sum_closed", "J_sum", "J_sum_closed",
    "K_sum", "K_sum_closed", "shifted_subset_sum_lhs", "shifted_subset_sum_rhs", "geometric_esym_step",
    "K_rewritten", "K_difference",
    "verify_q_binomial", "verify_block_rewrite", "verify_scalar_rewrite", "verify_propagation_identity",
    "verify_staircase_sum", "verify_staircase_intermediates", "verify_K_recurrence",
]


def elementary_symmetric(r: int, values) -> Scalar:
    """``e_r(values)`` by the usual one-pass recurrence; ``e_0 = 1``."""
    values = list(values)
    if not 0 <= r <= len(values):
        raise ValueError(f"degree {r} out of range for {len(values)} values")
    e = [ONE] + [ZERO] * r
    for v in values:
        for j in range(r, 0, -1):
            e[j] += v * e[j - 1]
    return e[r]


def _esym(r, values):
    # e_r vanishes above the number of variables
    return elementary_symmetric(r, values) if r <= len(values) else ZERO


def _qint(n, q):
    return q_integer(n, q)


def _geometric(q, lo, hi):
    """``(q^lo, ..., q^hi)``."""
    return [q ** j for j in range(lo, hi + 1)]


def _staircase(z, q):
    """``(z_1, q z_2, ..., q^{m-1} z_m)``."""
    return [q ** j * v for j, v in enumerate(z)]


def q_binomial_identity(m: int, r: int, q):
    """Both sides of ``q^{-r(r-1)/2} e_r(1, q, ..., q^{m-1}) = prod_{p<r} [m-p] / [r]!``."""
    lhs = q ** (-(r * (r - 1) // 2)) * elementary_symmetric(r, _geometric(q, 0, m - 1))
    rhs = ONE
    for p in range(r):
        rhs *= _qint(m - p, q)
    return lhs, rhs / q_factorial(r, q)


def _q_of(alpha, beta, gamma, delta):
    return 1 + beta * gamma - alpha * delta


def block_rewrite_lhs(alpha, beta, gamma, delta, z) -> Scalar:
    q, bg, m = _q_of(alpha, beta, gamma, delta), beta * gamma, len(z)
    stair = _staircase(z, q)
    total = ZERO
    for r in range(1, m + 1):
        denom = ONE
        for p in range(r):
            denom *= 1 + bg * _qint(m - 1 - p, q)
        coefficient = (-beta * delta) ** (r - 1) * q_factorial(r - 1, q) * q ** (-(r * (r - 1) // 2))
        total += coefficient / denom * elementary_symmetric(r, stair)
    return total


def _rewritten_coefficients(beta, gamma, delta, q, m):
    """``(-delta)^{r-1} [r-1]! / prod_{p=1}^{r} (1 + beta gamma [p-1])`` for r = 1..m."""
    out = []
    denom = ONE
    for r in range(1, m + 1):
        denom *= 1 + beta * gamma * _qint(r - 1, q)
        out.append((-delta) ** (r - 1) * q_factorial(r - 1, q) / denom)
    return out


def block_rewrite_rhs(alpha, beta, gamma, delta, z) -> Scalar:
    q, m = _q_of(alpha, beta, gamma, delta), len(z)
    total = ZERO
    for r, coefficient in enumerate(_rewritten_coefficients(beta, gamma, delta, q, m), start=1):
        inner = ZERO
        for b in combinations(range(1, m + 1), r):
            prod = ONE
            for p, bp in enumerate(b):
                prod *= alpha + beta * q ** p * z[bp - 1]
            inner += q ** sum(bp - m for bp in b) * (prod - alpha ** r)
        total += coefficient * inner
    return total / beta


def scalar_rewrite_lhs(alpha, beta, gamma, delta, m: int) -> Scalar:
    q = _q_of(alpha, beta, gamma, delta)
    total = ZERO
    for r, coefficient in enumerate(_rewritten_coefficients(beta, gamma, delta, q, m), start=1):
        weights = sum((q ** sum(bp - m for bp in b) for b in combinations(range(1, m + 1), r)), ZERO)
        total += coefficient * alpha ** r * weights
    return total / beta


def scalar_rewrite_rhs(alpha, beta, gamma, delta, m: int) -> Scalar:
    q = _q_of(alpha, beta, gamma, delta)
    return alpha / beta * sum((1 / (1 + beta * gamma * _qint(d, q)) for d in range(m)), ZERO)


def propagation_identity_lhs(delta, q, z) -> Scalar:
    """``sum_r (-delta)^{r-1} [r-1]! sum_c q^{sum(c_a - m)} prod_a z_{c_a} prod_{c_a < i < c_{a+1}} (q^a + delta [a] z_i)``

    with ``c_{r+1} = m + 1``; the inner exponent is the block position ``a``.
    The identity states this equals ``sum_i z_i``.
    """
    m = len(z)
    total = ZERO
    for r in range(1, m + 1):
        coefficient = (-delta) ** (r - 1) * q_factorial(r - 1, q)
        if not coefficient:
            continue
        inner = ZERO
        for c in combinations(range(1, m + 1), r):
            bounds = c + (m + 1,)
            term = q ** sum(ca - m for ca in c)
            for a in range(1, r + 1):
                term *= z[bounds[a - 1] - 1]
                for i in range(bounds[a - 1] + 1, bounds[a]):
                    term *= q ** a + delta * _qint(a, q) * z[i - 1]
            inner += term
        total += coefficient * inner
    return total


def staircase_sum(m: int, s: int, x, y, q, z) -> Scalar:
    total = ZERO
    for r in range(0, m - s + 1):
        denom = ONE
        for a in range(1, r + s + 1):
            denom *= x + _qint(a - 1, q) * y
        inner = ZERO
        for b in combinations(range(1, m + 1), r + s):
            stair = [q ** a * z[ba - 1] for a, ba in enumerate(b)]
            inner += q ** sum(ba - m for ba in b) * elementary_symmetric(s, stair)
        total += q_factorial(r + s - 1, q) * ((q - 1) * x - y) ** r / denom * inner
    return total


def staircase_sum_closed(m: int, s: int, x, y, q, z) -> Scalar:
    denom = ONE
    for a in range(0, s):
        denom *= x + _qint(m - 1 - a, q) * y
    return (
        q_factorial(s - 1, q) * q ** (-(s * (s - 1) // 2)) / denom
        * elementary_symmetric(s, _staircase(z, q))
    )


def shifted_subset_sum_lhs(m: int, r: int, s: int, q, z) -> Scalar:
    total = ZERO
    for b in combinations(range(1, m + 1), r + s):
        stair = [q ** a * z[ba - 1] for a, ba in enumerate(b)]
        total += q ** sum(b) * elementary_symmetric(s, stair)
    return total


def shifted_subset_sum_rhs(m: int, r: int, s: int, q, z) -> Scalar:
    return (
        q ** (s * (s - 1) // 2)
        * elementary_symmetric(r, _geometric(q, s + 1, m))
        * elementary_symmetric(s, [q ** (j + 1) * v for j, v in enumerate(z[:m])])
    )


def geometric_esym_step(b: int, r: int, s: int, q):
    """``e_r(q^{s+1..b}) - q^b e_{r-1}(q^{s+1..b-1})`` and ``e_r(q^{s+1..b-1})``."""
    lhs = _esym(r, _geometric(q, s + 1, b)) - q ** b * _esym(r - 1, _geometric(q, s + 1, b - 1))
    return lhs, _esym(r, _geometric(q, s + 1, b - 1))


def J_sum(m: int, s: int, x, y, q) -> Scalar:
    total = ZERO
    roots = _geometric(q, s + 1, m)
    for r in range(0, m - s + 1):
        denom = ONE
        for a in range(1, r + s + 1):
            denom *= x + _qint(a - 1, q) * y
        total += (
            q_factorial(r + s - 1, q) * ((q - 1) * x - y) ** r * q ** (-m * r) / denom
            * elementary_symmetric(r, roots)
        )
    return total


def J_sum_closed(m: int, s: int, x, y, q) -> Scalar:
    denom = ONE
    for a in range(0, s):
        denom *= x + _qint(m - 1 - a, q) * y
    return q ** (-s * s + m * s) * q_factorial(s - 1, q) / denom


def K_sum(m: int, x, y, q) -> Scalar:
    total = ZERO
    roots = _geometric(q, 1, m)
    denom = ONE
    for r in range(1, m + 1):
        denom *= x + _qint(r - 1, q) * y
        total += (
            q_factorial(r - 1, q) * ((q - 1) * x - y) ** (r - 1) * q ** (-m * r) / denom
            * elementary_symmetric(r, roots)
        )
    return total


def K_sum_closed(m: int, x, y, q) -> Scalar:
    return sum((1 / (x + _qint(a, q) * y) for a in range(m)), ZERO)


def K_rewritten(m: int, alpha, beta, gamma, delta) -> Scalar:
    """``K_m`` after rewriting its block sum and scalar sum (``beta != 0``):

    ``-(1 + alpha/beta) m + (1/beta) sum_r (-delta)^{r-1} [r-1]! q^{-(m-1)r} e_r(1..q^{m-1})
    prod_{p=1}^r (alpha + beta q^{p-1}) / (1 + beta gamma [p-1])``.
    """
    q = _q_of(alpha, beta, gamma, delta)
    powers = _geometric(q, 0, m - 1)
    total = ZERO
    for r in range(1, m + 1):
        prod = ONE
        for p in range(1, r + 1):
            prod *= (alpha + beta * q ** (p - 1)) / (1 + beta * gamma * _qint(p - 1, q))
        total += (-delta) ** (r - 1) * q_factorial(r - 1, q) * q ** (-(m - 1) * r) * elementary_symmetric(r, powers) * prod
    return -(1 + alpha / beta) * m + total / beta


def K_difference(m: int, alpha, beta, gamma, delta) -> Scalar:
    """Closed form of ``K_m - K_{m-1}``, a multiple of ``(alpha + beta)(gamma + delta)``."""
    q = _q_of(alpha, beta, gamma, delta)
    powers = _geometric(q, 0, m - 2)
    total = ZERO
    for r in range(1, m):
        prod = ONE
        for p in range(2, r + 1):
            prod *= (alpha + beta * q ** (p - 1)) / (1 + beta * gamma * _qint(p, q))
        total += (-delta) ** (r - 1) * q_factorial(r, q) * q ** (-(m - 2) * r) * elementary_symmetric(r, powers) * prod
    return -(alpha + beta) * (gamma + delta) / (1 + beta * gamma) * total


@dataclass
class IdentityReport:
    identity: str
    m: int
    s: int = None
    trials: int = 0
    passed: int = 0
    retries: int = 0
    failures: list = None

    @property
    def ok(self) -> bool:
        return self.trials > 0 and self.passed == self.trials

    def record(self) -> dict:
        return {
            "identity": self.identity, "m": self.m, "s": self.s, "trials": self.trials,
            "retries": self.retries, "pass": self.ok,
        }


def _run_trials(name, m, s, trials, seed, sample_and_compare, max_retries=None):
    """Drive ``sample_and_compare(rng) -> (lhs, rhs)``; ZeroDivisionError triggers a counted retry."""
    rng = random.Random(f"{name}:{m}:{s}:{seed}")
    report = IdentityReport(name, m, s, failures=[])
    budget = max_retries if max_retries is not None else 50 * trials + 100
    while report.trials < trials:
        try:
            lhs, rhs = sample_and_compare(rng)
        except ZeroDivisionError:
            report.retries += 1
            if report.retries > budget:
                raise RuntimeError(f"{name}: no valid sample point after {report.retries} retries")
            continue
        report.trials += 1
        if lhs == rhs:
            report.passed += 1
        else:
            report.failures.append((lhs, rhs))
    return report


def _params(rng, need_beta=True):
    alpha, beta, gamma, delta = (random_scalar(rng) for _ in range(4))
    if need_beta and beta == 0:
        raise ZeroDivisionError("beta = 0")
    return alpha, beta, gamma, delta


def _zs(rng, m):
    return [random_scalar(rng) for _ in range(m)]


def verify_q_binomial(m: int, trials: int = 100, seed: int = 0) -> IdentityReport:
    def trial(rng):
        q = random_scalar(rng, nonzero=True)
        pairs = [q_binomial_identity(m, r, q) for r in range(0, m + 1)]
        return [a for a, _ in pairs], [b for _, b in pairs]

    return _run_trials("q_binomial", m, None, trials, seed, trial)


def verify_block_rewrite(m: int, trials: int = 100, seed: int = 0) -> IdentityReport:
    def trial(rng):
        params = _params(rng)
        z = _zs(rng, m)
        return block_rewrite_lhs(*params, z), block_rewrite_rhs(*params, z)

    return _run_trials("block_rewrite", m, None, trials, seed, trial)


def verify_scalar_rewrite(m: int, trials: int = 100, seed: int = 0) -> IdentityReport:
    def trial(rng):
        params = _params(rng)
        return scalar_rewrite_lhs(*params, m), scalar_rewrite_rhs(*params, m)

    return _run_trials("scalar_rewrite", m, None, trials, seed, trial)


def verify_propagation_identity(m: int, trials: int = 100, seed: int = 0) -> IdentityReport:
    def trial(rng):
        delta, q = random_scalar(rng), random_scalar(rng, nonzero=True)
        z = _zs(rng, m)
        return propagation_identity_lhs(delta, q, z), sum(z, ZERO)

    return _run_trials("propagation_identity", m, None, trials, seed, trial)


def verify_staircase_sum(m: int, s: int, trials: int = 100, seed: int = 0) -> IdentityReport:
    if not 1 <= s <= m:
        raise ValueError("need 1 <= s <= m")

    def trial(rng):
        x, y, q = random_scalar(rng), random_scalar(rng), random_scalar(rng, nonzero=True)
        z = _zs(rng, m)
        return staircase_sum(m, s, x, y, q, z), staircase_sum_closed(m, s, x, y, q, z)

    return _run_trials("staircase_sum", m, s, trials, seed, trial)


def verify_staircase_intermediates(trials: int = 100, m_max: int = 6, seed: int = 0) -> list:
    """The intermediate identities behind the staircase sum, all ``m <= m_max``:

    the shifted subset sum, the geometric ``e_r`` step, the closed form and
    recurrence of ``J_{m,s}``, and the closed form and recurrence of ``K(x, y)``.
    """
    reports = []
    for m in range(1, m_max + 1):
        def shifted(rng, m=m):
            q = random_scalar(rng, nonzero=True)
            z = _zs(rng, m)
            cases = [(r, s) for r in range(m + 1) for s in range(m + 1 - r)]
            return [shifted_subset_sum_lhs(m, r, s, q, z) for r, s in cases], [shifted_subset_sum_rhs(m, r, s, q, z) for r, s in cases]

        reports.append(_run_trials("shifted_subset_sum", m, None, trials, seed, shifted))

        def step(rng, b=m):
            q = random_scalar(rng, nonzero=True)
            cases = [(r, s) for s in range(0, b) for r in range(1, b - s + 1)]
            sides = [geometric_esym_step(b, r, s, q) for r, s in cases]
            return [a for a, _ in sides], [c for _, c in sides]

        reports.append(_run_trials("geometric_esym_step", m, None, trials, seed, step))

        def j_form(rng, m=m):
            x, y, q = random_scalar(rng), random_scalar(rng), random_scalar(rng, nonzero=True)
            lhs = [J_sum(m, s, x, y, q) for s in range(1, m + 1)]
            rhs = [J_sum_closed(m, s, x, y, q) for s in range(1, m + 1)]
            # J_{m,s}(x, y) = q^s J_{m-1,s}(x + y, q y) for m > s
            lhs += [J_sum(m, s, x, y, q) for s in range(1, m)]
            rhs += [q ** s * J_sum(m - 1, s, x + y, q * y, q) for s in range(1, m)]
            return lhs, rhs

        reports.append(_run_trials("J_closed_form", m, None, trials, seed, j_form))

        def k_sum(rng, m=m):
            x, y, q = random_scalar(rng), random_scalar(rng), random_scalar(rng, nonzero=True)
            lhs = [K_sum(m, x, y, q)]
            rhs = [K_sum_closed(m, x, y, q)]
            if m > 1:
                lhs.append(K_sum(m, x, y, q))
                rhs.append(1 / x + K_sum(m - 1, x + y, q * y, q))
            return lhs, rhs

        reports.append(_run_trials("K_sum", m, None, trials, seed, k_sum))
    return reports


def verify_K_recurrence(m: int, trials: int = 100, seed: int = 0) -> IdentityReport:
    """``K_m - K_{m-1}`` from the rewritten form equals its closed form, and the
    rewritten form agrees with the defining one."""
    from .lattice import Params
    from .stochastic import K_constant

    if m < 2:
        raise ValueError("need m >= 2")

    def trial(rng):
        alpha, beta, gamma, delta = _params(rng)
        q = _q_of(alpha, beta, gamma, delta)
        if q == 0 or any(1 + beta * gamma * _qint(n, q) == 0 for n in range(m + 1)):
            raise ZeroDivisionError("standing assumption violated")
        params = Params(alpha, beta, gamma, delta, 1)
        lhs = [
            K_rewritten(m, alpha, beta, gamma, delta) - K_rewritten(m - 1, alpha, beta, gamma, delta),
            K_rewritten(m, alpha, beta, gamma, delta),
        ]
        rhs = [K_difference(m, alpha, beta, gamma, delta), K_constant(m, params)]
        return lhs, rhs

    return _run_trials("K_recurrence", m, None, trials, seed, trial)
