"""Discrete Hamiltonian, free operator, propagation operator and Bethe wave functions."""

from functools import lru_cache
from itertools import combinations, permutations

from .lattice import (
    Params, StandingAssumptionError, cluster_blocks, descent_counts, q_factorial,
    shortest_chamber_word,
)
from .operators import LatticeFunction, apply_T
from .scalar import ONE, ZERO, Scalar, scalar

__all__ = [
    "cluster_decomposition", "apply_H_J", "apply_H", "apply_H_global", "apply_H_J_rewritten",
    "apply_H_rewritten", "apply_H_beta_zero", "apply_Delta", "Propagator", "propagate",
    "plane_wave_sum", "bethe_phi", "bethe_phi_function",
]


def cluster_decomposition(x) -> list:
    """Index blocks ``J_1, ..., J_N`` of equal coordinates of ``x`` (1-based, sorted)."""
    return cluster_blocks(x)


def _check_denominator(params: Params, n: int) -> Scalar:
    value = params.denominator(n)
    if value == 0:
        raise StandingAssumptionError(f"1 + beta*gamma*[{n}] = 0")
    return value


@lru_cache(maxsize=None)
def _block_coefficients(params: Params, m: int):
    """Scalar term and the coefficients of ``e_r`` in ``H_J`` for ``|J| = m``."""
    q = params.q
    constant = ZERO
    for d in range(1, m):
        constant -= params.alpha * params.gamma * params.qint(d) / _check_denominator(params, d)
    coefficients = []
    for r in range(1, m + 1):
        denom = ONE
        for p in range(r):
            denom *= _check_denominator(params, m - 1 - p)
        num = (-params.beta * params.delta) ** (r - 1) * q_factorial(r - 1, q)
        coefficients.append(num * q ** (-(r * (r - 1) // 2)) / denom if num else ZERO)
    return constant, tuple(coefficients)


@lru_cache(maxsize=None)
def _weighted_subsets(J, q):
    """``e_r(X_{j_1}, q X_{j_2}, ..., q^{m-1} X_{j_m})`` expanded: per r, list of (weight, subset)."""
    m = len(J)
    by_degree = []
    for r in range(1, m + 1):
        terms = []
        for positions in combinations(range(m), r):
            weight = q ** sum(positions)
            terms.append((weight, tuple(J[p] for p in positions)))
        by_degree.append(tuple(terms))
    return tuple(by_degree)


def _shifted(x, indices):
    y = list(x)
    for j in indices:
        y[j - 1] -= 1
    return tuple(y)


def _block_value(J, f, x, params: Params) -> Scalar:
    constant, coefficients = _block_coefficients(params, len(J))
    total = constant * f(x) if constant else ZERO
    for coefficient, terms in zip(coefficients, _weighted_subsets(tuple(J), params.q)):
        if not coefficient:
            continue
        total += coefficient * sum((w * f(_shifted(x, subset)) for w, subset in terms), ZERO)
    return total


def apply_H_J(J, f: LatticeFunction, params: Params) -> LatticeFunction:
    """The block operator ``H_J`` for a nonempty index set ``J``."""
    J = tuple(sorted(J))
    if not J or J[0] < 1 or J[-1] > f.k:
        raise ValueError(f"invalid index set {J} for k={f.k}")
    _block_coefficients(params, len(J))  # surface standing-assumption failures eagerly
    return LatticeFunction(f.k, lambda x: _block_value(J, f, x, params), name=f"H_{J}")


def apply_H(f: LatticeFunction, params: Params) -> LatticeFunction:
    """``(Hf)(x) = sum_n (H_{J_n} f)(x)`` over the cluster decomposition of ``x``."""

    def evaluate(x):
        return sum((_block_value(J, f, x, params) for J in cluster_blocks(x)), ZERO)

    return LatticeFunction(f.k, evaluate, name="H")


def apply_H_global(f: LatticeFunction, params: Params) -> LatticeFunction:
    """``H`` from its defining double sum over index subsets, with ``d^+``, ``d^-`` and the
    coincidence indicator evaluated at the query point."""
    k = f.k
    q = params.q

    def evaluate(x):
        d_plus, d_minus = descent_counts(x)
        total = ZERO
        for j in range(k):
            total -= params.alpha * params.gamma * params.qint(d_plus[j]) / _check_denominator(params, d_plus[j])
        total *= f(x)
        for r in range(1, k + 1):
            prefactor = (-params.beta * params.delta) ** (r - 1) * q_factorial(r - 1, q)
            if not prefactor:
                continue
            prefactor *= q ** (-(r * (r - 1) // 2))
            for subset in combinations(range(k), r):
                if any(x[j] != x[subset[0]] for j in subset):
                    continue
                j1 = subset[0]
                denom = ONE
                for p in range(r):
                    denom *= _check_denominator(params, d_plus[j1] + d_minus[j1] - p)
                weight = q ** sum(d_minus[j] for j in subset)
                total += prefactor * weight / denom * f(_shifted(x, [j + 1 for j in subset]))
        return total

    return LatticeFunction(k, evaluate, name="H_global")


def apply_H_J_rewritten(J, f: LatticeFunction, params: Params) -> LatticeFunction:
    """``H_J`` in the form built from products of ``alpha + beta q^{p-1} X_j``; needs ``beta != 0``."""
    if params.beta == 0:
        raise ValueError("the rewritten form of H_J requires beta != 0")
    J = tuple(sorted(J))
    m = len(J)
    al, be, de, q = params.alpha, params.beta, params.delta, params.q
    # coefficient (-delta)^{r-1} [r-1]! / prod_{p=1}^r (1 + beta gamma [p-1]) per r
    coefficients = []
    for r in range(1, m + 1):
        denom = ONE
        for p in range(1, r + 1):
            denom *= _check_denominator(params, p - 1)
        coefficients.append((-de) ** (r - 1) * q_factorial(r - 1, q) / denom)

    def evaluate(x):
        total = -al / be * m * f(x)
        for r, coefficient in enumerate(coefficients, start=1):
            if not coefficient:
                continue
            inner = ZERO
            for b in combinations(range(1, m + 1), r):
                weight = q ** sum(bp - m for bp in b)
                # prod_p (alpha + beta q^{p-1} X_{j_{b_p}}) expanded over subsets of factors
                product_value = ZERO
                for size in range(r + 1):
                    for chosen in combinations(range(r), size):
                        c = al ** (r - size) * be ** size * q ** sum(chosen)
                        if c:
                            product_value += c * f(_shifted(x, [J[b[p] - 1] for p in chosen]))
                inner += weight * product_value
            total += coefficient * inner / be
        return total

    return LatticeFunction(f.k, evaluate, name=f"H'_{J}")


def apply_H_rewritten(f: LatticeFunction, params: Params) -> LatticeFunction:
    """``H`` assembled from the rewritten block operators (``beta != 0``)."""
    if params.beta == 0:
        raise ValueError("the rewritten form of H requires beta != 0")
    cache = {}

    def block(J):
        if J not in cache:
            cache[J] = apply_H_J_rewritten(J, f, params)
        return cache[J]

    def evaluate(x):
        return sum((block(J)(x) for J in cluster_blocks(x)), ZERO)

    return LatticeFunction(f.k, evaluate, name="H_rewritten")


def apply_H_beta_zero(f: LatticeFunction, params: Params) -> LatticeFunction:
    """Closed form ``sum_j q^{d_j^-} (X_j - alpha gamma d_j^+)``, valid when ``beta = 0``."""
    if params.beta != 0:
        raise ValueError("closed form only valid for beta = 0")
    q, ag = params.q, params.alpha * params.gamma

    def evaluate(x):
        d_plus, d_minus = descent_counts(x)
        total = ZERO
        for j in range(f.k):
            total += q ** d_minus[j] * (f(_shifted(x, [j + 1])) - ag * d_plus[j] * f(x))
        return total

    return LatticeFunction(f.k, evaluate, name="H_beta0")


def apply_Delta(f: LatticeFunction) -> LatticeFunction:
    """Free operator ``sum_i X_i``: ``x -> sum_i f(x - v_i)``."""
    k = f.k
    return LatticeFunction(
        k, lambda x: sum((f(_shifted(x, [i])) for i in range(1, k + 1)), ZERO), name="Delta"
    )


class Propagator:
    """``G(f)(x) = (T_{w_x} f)(w_x x)``.

    The partial products ``T_{i_j} ... T_{i_r} f`` are shared between query
    points through a cache keyed by the word suffix.
    """

    def __init__(self, f: LatticeFunction, params: Params):
        self.f = f
        self.params = params
        self._words = {(): f}
        self.function = LatticeFunction(f.k, self._evaluate, name="G")

    def word_function(self, letters) -> LatticeFunction:
        letters = tuple(letters)
        g = self._words.get(letters)
        if g is None:
            g = apply_T(letters[0], self.word_function(letters[1:]), self.params)
            self._words[letters] = g
        return g

    def _evaluate(self, x):
        word = shortest_chamber_word(x)
        return self.word_function(word.letters)(word.act(x))

    def __call__(self, x):
        return self.function(x)


def propagate(f: LatticeFunction, params: Params) -> LatticeFunction:
    return Propagator(f, params).function


def _check_spectral(p):
    p = [scalar(v) for v in p]
    if len(set(p)) != len(p):
        raise ValueError("spectral parameters must be pairwise distinct")
    if any(v == 0 for v in p):
        raise ValueError("spectral parameters must be nonzero")
    return p


@lru_cache(maxsize=None)
def _scattering_amplitudes(p: tuple, params: Params):
    """Per permutation sigma: prod_{i<j} (1 + (alpha + beta p_{σj})(gamma + delta p_{σi})/(p_{σj} - p_{σi}))."""
    al, be, ga, de = params.as_tuple()
    out = []
    for sigma in permutations(range(len(p))):
        amplitude = ONE
        for i in range(len(p)):
            for j in range(i + 1, len(p)):
                pi, pj = p[sigma[i]], p[sigma[j]]
                amplitude *= 1 + (al + be * pj) * (ga + de * pi) / (pj - pi)
        out.append((sigma, amplitude))
    return tuple(out)


def plane_wave_sum(p, x, params: Params) -> Scalar:
    """The Bethe sum evaluated at ``x`` as written, without symmetrizing ``x``."""
    p = tuple(_check_spectral(p))
    total = ZERO
    for sigma, amplitude in _scattering_amplitudes(p, params):
        if not amplitude:
            continue
        term = amplitude
        for i, m in enumerate(x):
            term *= p[sigma[i]] ** (-m)
        total += term
    return total


def bethe_phi(p, x, params: Params) -> Scalar:
    """Bethe wave function: the plane-wave sum on the chamber, extended by symmetry."""
    if len(p) != len(x):
        raise ValueError("need one spectral parameter per particle")
    return plane_wave_sum(p, tuple(sorted(x, reverse=True)), params)


def bethe_phi_function(p, params: Params) -> LatticeFunction:
    p = tuple(_check_spectral(p))
    return LatticeFunction(len(p), lambda x: bethe_phi(p, x, params), name="Phi")
