"""Exact rational scalars.

All algebraic quantities are exact rationals backed by ``gmpy2.mpq``, which is
kept in lowest terms with a positive denominator and raises
``ZeroDivisionError`` on division by zero.
"""

import re

import gmpy2

Scalar = type(gmpy2.mpq(0))

ZERO = gmpy2.mpq(0)
ONE = gmpy2.mpq(1)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


def scalar(value) -> Scalar:
    """Coerce ``value`` to an exact rational.

    Accepts ints, ``Fraction``/``mpq`` values and strings of the form
    ``"num"`` or ``"num/den"``. Floats and decimal strings are rejected, since a
    silent float conversion would make exact identity checks meaningless.
    """
    if isinstance(value, Scalar):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(value, int):
        return gmpy2.mpq(value)
    if isinstance(value, str):
        match = _RATIONAL_RE.match(value)
        if match is None:
            raise ValueError(f"not an exact rational 'num/den': {value!r}")
        num, den = match.groups()
        if den is not None and int(den) == 0:
            raise ZeroDivisionError(f"zero denominator in {value!r}")
        return gmpy2.mpq(int(num), int(den) if den else 1)
    if isinstance(value, float):
        raise TypeError("floats are not accepted as exact scalars")
    # fractions.Fraction and anything else with numerator/denominator
    try:
        return gmpy2.mpq(int(value.numerator), int(value.denominator))
    except AttributeError:
        raise TypeError(f"cannot convert {type(value).__name__} to a scalar") from None


def format_scalar(x: Scalar) -> str:
    """``"num/den"`` form, or ``"num"`` for integers."""
    x = scalar(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def random_scalar(rng, num_bound: int = 9, den_bound: int = 9, nonzero: bool = False) -> Scalar:
    """Small random rational: numerator in [-num_bound, num_bound], denominator in [1, den_bound]."""
    while True:
        num = rng.randint(-num_bound, num_bound)
        if nonzero and num == 0:
            continue
        return gmpy2.mpq(num, rng.randint(1, den_bound))
