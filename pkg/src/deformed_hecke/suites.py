"""Randomized exact verification suites producing JSON-ready records.

Every suite is a deterministic list of independent tasks; each task derives
its own ``random.Random`` from ``(suite, k, seed, trial)`` so results do not
depend on scheduling.  Tasks may run on a process pool (``DEFORMED_HECKE_WORKERS``);
records come back in task order.
"""

import itertools
import os
import random
from concurrent.futures import ProcessPoolExecutor

from .hamiltonian import (
    apply_Delta, apply_H, apply_H_beta_zero, apply_H_global, apply_H_rewritten, bethe_phi,
    bethe_phi_function, plane_wave_sum, propagate,
)
from .identities import (
    verify_staircase_sum, verify_staircase_intermediates, verify_K_recurrence, verify_block_rewrite,
    verify_scalar_rewrite, verify_q_binomial, verify_propagation_identity,
)
from .lattice import Params
from .operators import (
    LatticeFunction, LaurentPolynomial, apply_T, apply_X, delta_function, pairing, right_apply_T,
    right_apply_X,
)
from .relations import check_left, check_right, defining_relations
from .sampling import (
    STRATA, random_distinct_scalars, random_dominant_point, random_params, random_point,
)
from .scalar import ONE, ZERO, format_scalar, random_scalar, scalar
from .stochastic import (
    K_constant, StochasticParams, apply_generator, jump_rate, psi_eigenvalue, psi_z, rate_table,
    specialize_H,
)

SCHEMA = 1
WORKERS_ENV = "DEFORMED_HECKE_WORKERS"
SUITE_NAMES = ("algebra", "theorem", "bethe", "identities", "stochastic")


def worker_count() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _run(tasks):
    """Run ``(func, args)`` tasks, preserving order."""
    workers = worker_count()
    if workers == 1 or len(tasks) < 2:
        return [func(*args) for func, args in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(func, *args) for func, args in tasks]
        return [f.result() for f in futures]


def _rng(*parts):
    return random.Random(":".join(str(p) for p in parts))


def _fmt_params(params: Params):
    return [format_scalar(v) for v in params.as_tuple()]


def _stratum(trial):
    return STRATA[trial % len(STRATA)]


def _record(suite, check, ok, **fields):
    rec = {"schema": SCHEMA, "suite": suite, "check": check}
    rec.update(fields)
    rec["pass"] = bool(ok)
    return rec


# algebra -------------------------------------------------------------------

def _algebra_trial(k, params, seed, trial):
    rng = _rng("algebra", k, seed, trial)
    params = params or random_params(rng, k, _stratum(trial))
    y, x = random_point(rng, k), random_point(rng, k)
    if trial % 2:
        # keep the support close to the evaluation point so values are not trivially zero
        y = tuple(v + rng.randint(-1, 1) for v in x)
    failed = [rel.name for rel in defining_relations(params, k) if not check_left(rel, params, y, x)]
    # duality between the two actions
    exponent = random_point(rng, k)
    P, f = LaurentPolynomial.monomial(exponent), delta_function(y)
    for i in range(1, k + 1):
        if pairing(right_apply_X(P, i), f) != apply_X(i, f)(exponent):
            failed.append(f"duality(X{i})")
    for i in range(1, k):
        if pairing(right_apply_T(P, i, params), f) != apply_T(i, f, params)(exponent):
            failed.append(f"duality(T{i})")
    return _record("algebra", "left_relations_and_duality", not failed, k=k, trial=trial,
                   params=_fmt_params(params), y=list(y), x=list(x), failed=failed)


def _algebra_right(k, params, seed, trial):
    rng = _rng("algebra-right", k, seed, trial)
    params = params or random_params(rng, k, _stratum(trial))
    rels = defining_relations(params, k)
    failed = sorted({
        rel.name for rel in rels for e in itertools.product(range(-2, 3), repeat=k)
        if not check_right(rel, params, e)
    })
    return _record("algebra", "right_relations_all_monomials", not failed, k=k, trial=trial,
                   params=_fmt_params(params), monomials=5 ** k, failed=failed)


def algebra_tasks(ks, trials, seed, params=None):
    tasks = []
    for k in ks:
        if k < 2:
            continue
        p = params.with_k(k) if params else None
        tasks += [(_algebra_trial, (k, p, seed, t)) for t in range(trials)]
        if k <= 3:
            tasks += [(_algebra_right, (k, p, seed, t)) for t in range(min(trials, 2))]
    return tasks


# theorem -------------------------------------------------------------------

def sample_theorem_pair(rng, k, lo=-3, hi=3):
    """``(y, x)`` for the HG = G Delta check; half the draws put ``y`` next to the sorted ``x``."""
    x = random_point(rng, k, lo, hi)
    if rng.random() < 0.5:
        return random_point(rng, k, lo, hi), x
    base = sorted(x, reverse=True)
    y = [min(hi, max(lo, v + rng.randint(-1, 1))) for v in base]
    if rng.random() < 0.3:
        rng.shuffle(y)
    return tuple(y), x


def _theorem_trial(k, params, seed, trial):
    rng = _rng("theorem", k, seed, trial)
    params = params or random_params(rng, k, _stratum(trial))
    y, x = sample_theorem_pair(rng, k)
    f = delta_function(y)
    lhs = apply_H(propagate(f, params), params)(x)
    rhs = propagate(apply_Delta(f), params)(x)
    return _record("theorem", "HG=GDelta", lhs == rhs, k=k, trial=trial, params=_fmt_params(params),
                   y=list(y), x=list(x), value=format_scalar(lhs))


def _h_forms_trial(k, params, seed, trial):
    rng = _rng("h-forms", k, seed, trial)
    params = params or random_params(rng, k, _stratum(trial))
    x = random_point(rng, k, -1, 1)
    y = tuple(v - rng.randint(0, 1) for v in x) if trial % 2 else random_point(rng, k, -1, 1)
    f = delta_function(y)
    values = [apply_H(f, params)(x), apply_H_global(f, params)(x)]
    if params.beta != 0:
        values.append(apply_H_rewritten(f, params)(x))
    else:
        values.append(apply_H_beta_zero(f, params)(x))
    return _record("theorem", "H_forms_agree", len(set(values)) == 1, k=k, trial=trial,
                   params=_fmt_params(params), y=list(y), x=list(x), value=format_scalar(values[0]))


def theorem_tasks(ks, trials, seed, params=None):
    tasks = []
    for k in ks:
        p = params.with_k(k) if params else None
        tasks += [(_theorem_trial, (k, p, seed, t)) for t in range(trials)]
        tasks += [(_h_forms_trial, (k, p, seed, t)) for t in range(trials)]
    return tasks


# bethe ---------------------------------------------------------------------

def _bethe_trial(k, params, seed, trial):
    rng = _rng("bethe", k, seed, trial)
    params = params or random_params(rng, k, _stratum(trial))
    p = random_distinct_scalars(rng, k)
    failed = []
    phi = bethe_phi_function(p, params)
    x = random_dominant_point(rng, k)
    eigenvalue = sum(p, ZERO)
    if apply_H(phi, params)(x) != eigenvalue * phi(x):
        failed.append("H_Phi_eigen")
    h = LatticeFunction(k, lambda z: plane_wave_sum(p, z, params))
    z = random_point(rng, k)
    for i in range(1, k):
        if apply_T(i, h, params)(z) != h(z):
            failed.append(f"T{i}_h=h")
    if propagate(h, params)(z) != phi(z):
        failed.append("G_h=Phi")
    return _record("bethe", "Phi", not failed, k=k, trial=trial, params=_fmt_params(params),
                   p=[format_scalar(v) for v in p], x=list(x), eigenvalue=format_scalar(eigenvalue),
                   failed=failed)


def sample_psi_setup(rng, k):
    """Stochastic parameters and distinct ``z`` avoiding every pole of ``Psi_z`` and its eigenvalue."""
    while True:
        sp = StochasticParams(random_scalar(rng), random_scalar(rng))
        if 1 - sp.q + sp.s == 0:
            continue
        nu = sp.nu
        z = random_distinct_scalars(rng, k, nonzero=False, exclude=[ONE] + ([1 / nu] if nu else []))
        try:
            psi_eigenvalue(z, sp)
            for c in range(1, k + 1):
                for r in range(1, c + 1):
                    jump_rate(c, r, sp)
        except ZeroDivisionError:
            continue
        return sp, z


def _psi_trial(k, seed, trial):
    rng = _rng("psi", k, seed, trial)
    sp, z = sample_psi_setup(rng, k)
    x = random_dominant_point(rng, k)
    eigenvalue = psi_eigenvalue(z, sp)
    lhs = apply_generator(lambda y: psi_z(z, y, sp), x, sp)
    rhs = eigenvalue * psi_z(z, x, sp)
    return _record("bethe", "Psi", lhs == rhs, k=k, trial=trial, s=format_scalar(sp.s), q=format_scalar(sp.q),
                   z=[format_scalar(v) for v in z], x=list(x), eigenvalue=format_scalar(eigenvalue))


def _phi_psi_trial(k, seed, trial):
    rng = _rng("phi-psi", k, seed, trial)
    while True:
        params = random_params(rng, k, "gamma_plus_delta_zero")
        if params.alpha == 0 or params.gamma == 0:
            continue
        sp = specialize_H("gamma+delta=0", params)
        nu = sp.nu
        z = random_distinct_scalars(rng, k, nonzero=False, exclude=[ONE] + ([1 / nu] if nu else []))
        try:
            p = [(1 - v) / (1 + params.beta * v / params.alpha) for v in z]
        except ZeroDivisionError:
            continue
        if len(set(p)) == k and all(p):
            break
    x = random_dominant_point(rng, k)
    ok = bethe_phi(p, x, params) == psi_z(z, x, sp)
    return _record("bethe", "Phi_equals_Psi", ok, k=k, trial=trial, params=_fmt_params(params),
                   z=[format_scalar(v) for v in z], x=list(x))


def bethe_tasks(ks, trials, seed, params=None):
    tasks = []
    for k in ks:
        p = params.with_k(k) if params else None
        tasks += [(_bethe_trial, (k, p, seed, t)) for t in range(trials)]
        tasks += [(_psi_trial, (k, seed, t)) for t in range(trials)]
        tasks += [(_phi_psi_trial, (k, seed, t)) for t in range(trials)]
    return tasks


# identities ----------------------------------------------------------------

def _identity_task(name, m, s, trials, seed):
    if name == "block_rewrite":
        reports = [verify_block_rewrite(m, trials, seed)]
    elif name == "scalar_rewrite":
        reports = [verify_scalar_rewrite(m, trials, seed)]
    elif name == "propagation_identity":
        reports = [verify_propagation_identity(m, trials, seed)]
    elif name == "q_binomial":
        reports = [verify_q_binomial(m, trials, seed)]
    elif name == "staircase_sum":
        reports = [verify_staircase_sum(m, s, trials, seed)]
    elif name == "K_recurrence":
        reports = [verify_K_recurrence(m, trials, seed)]
    elif name == "intermediates":
        reports = verify_staircase_intermediates(trials, m, seed)
    else:
        raise ValueError(name)
    return [_record("identities", r.identity, r.ok, **{k: v for k, v in r.record().items() if k != "pass"})
            for r in reports]


def identity_tasks(m_max, trials, seed):
    tasks = []
    for m in range(1, m_max + 1):
        for name in ("q_binomial", "block_rewrite", "propagation_identity"):
            tasks.append((_identity_task, (name, m, None, trials, seed)))
        for s in range(1, m + 1):
            tasks.append((_identity_task, ("staircase_sum", m, s, trials, seed)))
    for m in range(1, max(m_max, 8) + 1):
        tasks.append((_identity_task, ("scalar_rewrite", m, None, trials, seed)))
    for m in range(2, max(m_max, 8) + 1):
        tasks.append((_identity_task, ("K_recurrence", m, None, trials, seed)))
    tasks.append((_identity_task, ("intermediates", m_max, None, trials, seed)))
    return tasks


# stochastic ----------------------------------------------------------------

def _K_vanishing_trial(seed, trial, m_max=10):
    rng = _rng("K-vanish", seed, trial)
    branch = ("alpha_plus_beta_zero", "gamma_plus_delta_zero")[trial % 2]
    params = random_params(rng, m_max, branch)
    nonzero = [m for m in range(1, m_max + 1) if K_constant(m, params) != 0]
    return _record("stochastic", "K_m_vanishes", not nonzero, trial=trial, branch=branch,
                   params=_fmt_params(params), nonzero_m=nonzero)


def _K2_necessity_trial(seed, trial):
    rng = _rng("K2", seed, trial)
    while True:
        params = random_params(rng, 2)
        if (params.alpha + params.beta) * (params.gamma + params.delta) != 0:
            break
    return _record("stochastic", "K_2_nonzero", K_constant(2, params) != 0, trial=trial,
                   params=_fmt_params(params))


def _symmetric_delta(y):
    y = tuple(y)
    return LatticeFunction(len(y), lambda z: ONE if tuple(sorted(z, reverse=True)) == y else ZERO)


def _specialization_trial(k, seed, trial):
    rng = _rng("specialize", k, seed, trial)
    branch = ("alpha_plus_beta_zero", "gamma_plus_delta_zero")[trial % 2]
    while True:
        params = random_params(rng, k, branch)
        sp = specialize_H(branch, params)
        try:
            rate_table(k, sp)  # [r] vanishes when q is a root of unity
            break
        except ZeroDivisionError:
            continue
    x = random_dominant_point(rng, k)
    y = tuple(sorted((v - rng.randint(0, 1) for v in x), reverse=True))
    f = _symmetric_delta(y)
    lhs = apply_H(f, params)(x) - k * f(x)
    rhs = apply_generator(f, x, sp)
    return _record("stochastic", "specialization", lhs == rhs, k=k, trial=trial, branch=branch,
                   params=_fmt_params(params), s=format_scalar(sp.s), q=format_scalar(sp.q),
                   x=list(x), y=list(y))


def _stochastic_fixed(k, seed):
    records = []
    # s = 0 gives the q-Boson rates [c] for r = 1 and nothing else
    ok = True
    for q in (scalar("1/10"), scalar("1/2"), scalar("9/10"), scalar("3/2")):
        sp = StochasticParams(0, q)
        for c in range(1, max(k, 6) + 1):
            ok &= jump_rate(c, 1, sp) == (1 - q ** c) / (1 - q)
            ok &= all(jump_rate(c, r, sp) == 0 for r in range(2, c + 1))
    records.append(_record("stochastic", "q_boson_reduction", ok))
    grid_ok = all(
        jump_rate(c, r, StochasticParams(scalar(s), scalar(q))) >= 0
        for s in ("0", "1/4", "1", "4") for q in ("1/10", "1/2", "9/10")
        for c in range(1, 13) for r in range(1, c + 1)
    )
    records.append(_record("stochastic", "rates_nonnegative", grid_ok))
    rng = _rng("constants", k, seed)
    const_ok = True
    for _ in range(20):
        sp = StochasticParams(random_scalar(rng), random_scalar(rng))
        try:
            const_ok &= apply_generator(lambda y: ONE, random_dominant_point(rng, k), sp) == 0
        except ZeroDivisionError:
            continue
    records.append(_record("stochastic", "generator_kills_constants", const_ok, k=k))
    return records


def stochastic_tasks(ks, trials, seed):
    tasks = [(_K_vanishing_trial, (seed, t)) for t in range(trials)]
    tasks += [(_K2_necessity_trial, (seed, t)) for t in range(trials)]
    for k in ks:
        tasks += [(_specialization_trial, (k, seed, t)) for t in range(trials)]
    tasks.append((_stochastic_fixed, (max(ks), seed)))
    return tasks


def suite_tasks(name, ks, trials, seed, params=None, m_max=6):
    if name == "algebra":
        return algebra_tasks(ks, trials, seed, params)
    if name == "theorem":
        return theorem_tasks(ks, trials, seed, params)
    if name == "bethe":
        return bethe_tasks(ks, trials, seed, params)
    if name == "identities":
        return identity_tasks(m_max, trials, seed)
    if name == "stochastic":
        return stochastic_tasks(ks, trials, seed)
    raise ValueError(f"unknown suite {name!r}")


def run_suite(name, ks, trials, seed, params=None, m_max=6) -> list:
    """All records of one suite, flattened, in deterministic order."""
    records = []
    for result in _run(suite_tasks(name, ks, trials, seed, params, m_max)):
        records.extend(result if isinstance(result, list) else [result])
    return records
