"""Seeded sampling of small rational parameters and lattice points for randomized checks."""

from .lattice import Params, StandingAssumptionError
from .scalar import ZERO, random_scalar

# parameter strata exercised by the randomized checks
STRATA = ("generic", "beta_zero", "gamma_zero", "alpha_plus_beta_zero", "gamma_plus_delta_zero")


def random_params(rng, k: int, stratum: str = "generic", num_bound: int = 9, den_bound: int = 9) -> Params:
    """Random ``Params`` with ``q != 0`` satisfying the standing assumption, resampled on violation.

    ``stratum`` pins a degenerate sub-family: ``beta_zero``, ``gamma_zero``,
    ``alpha_plus_beta_zero`` or ``gamma_plus_delta_zero``.  In the generic
    stratum ``beta`` is nonzero.
    """
    if stratum not in STRATA:
        raise ValueError(f"unknown stratum {stratum!r}")
    for _ in range(10_000):
        a, b, c, d = (random_scalar(rng, num_bound, den_bound) for _ in range(4))
        if stratum == "generic" and b == 0:
            continue
        if stratum == "beta_zero":
            b = ZERO
        elif stratum == "gamma_zero":
            c = ZERO
        elif stratum == "alpha_plus_beta_zero":
            b = -a
        elif stratum == "gamma_plus_delta_zero":
            d = -c
        try:
            params = Params(a, b, c, d, k)
        except StandingAssumptionError:
            continue
        if params.q != 0:
            return params
    raise RuntimeError(f"could not sample parameters in stratum {stratum!r}")


def random_point(rng, k: int, lo: int = -3, hi: int = 3) -> tuple:
    return tuple(rng.randint(lo, hi) for _ in range(k))


def random_dominant_point(rng, k: int, lo: int = -3, hi: int = 3) -> tuple:
    return tuple(sorted(random_point(rng, k, lo, hi), reverse=True))


def random_distinct_scalars(rng, n: int, nonzero: bool = True, exclude=()) -> list:
    """``n`` pairwise distinct small rationals, avoiding ``exclude`` (and zero if asked)."""
    values = []
    while len(values) < n:
        v = random_scalar(rng)
        if (nonzero and v == 0) or v in values or v in exclude:
            continue
        values.append(v)
    return values
