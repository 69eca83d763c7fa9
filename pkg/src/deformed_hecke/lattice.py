"""The lattice Z^k, type A_{k-1} root combinatorics and the four-parameter deformation.

Conventions used throughout the package:

* lattice points are tuples of ``k`` ints; coordinate ``i`` (1-based) is
  ``x[i - 1]``;
* generator indices (``X_i``, ``T_i``, simple reflections ``s_i``) are 1-based;
* a permutation ``sigma`` is a tuple of 0-based images, ``sigma[i] = σ(i+1) - 1``,
  where ``w(v_i) = v_{σ(i)}``.  Hence ``(w x)[sigma[i]] == x[i]``.
"""

from dataclasses import dataclass
from itertools import combinations

from .scalar import ONE, ZERO, Scalar, scalar

__all__ = [
    "StandingAssumptionError", "Params", "WeylWord", "q_integer", "q_factorial",
    "simple_root_value", "reflect", "apply_permutation", "compose", "shortest_chamber_word",
    "inversion_set", "descent_counts", "is_dominant", "cluster_coordinate", "cluster_blocks",
]


class StandingAssumptionError(ValueError):
    """Raised when ``1 + beta*gamma*[n] == 0`` for some ``n`` the computation needs."""


def q_integer(n: int, q) -> Scalar:
    """``[n]_q = 1 + q + ... + q^(n-1)``; valid at ``q = 1`` and ``[0] = 0``."""
    if n < 0:
        raise ValueError(f"q-integer of negative n={n}")
    total, power = ZERO, ONE
    for _ in range(n):
        total += power
        power *= q
    return total


def q_factorial(n: int, q) -> Scalar:
    result = ONE
    for a in range(1, n + 1):
        result *= q_integer(a, q)
    return result


@dataclass(frozen=True)
class Params:
    """Deformation constants ``(alpha, beta, gamma, delta)`` for ``k`` particles.

    ``q = 1 + beta*gamma - alpha*delta`` is derived, never stored.  Construction
    checks the standing assumption ``1 + beta*gamma*[n]_q != 0`` for
    ``1 <= n <= k``.
    """

    alpha: Scalar
    beta: Scalar
    gamma: Scalar
    delta: Scalar
    k: int

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta"):
            object.__setattr__(self, name, scalar(getattr(self, name)))
        if self.k < 1:
            raise ValueError(f"k must be positive, got {self.k}")
        for n in range(1, self.k + 1):
            if self.denominator(n) == 0:
                raise StandingAssumptionError(f"1 + beta*gamma*[{n}] = 0 for {self}")

    @property
    def q(self) -> Scalar:
        return 1 + self.beta * self.gamma - self.alpha * self.delta

    def qint(self, n: int) -> Scalar:
        return q_integer(n, self.q)

    def denominator(self, n: int) -> Scalar:
        """``1 + beta*gamma*[n]``."""
        return 1 + self.beta * self.gamma * q_integer(n, self.q)

    def with_k(self, k: int) -> "Params":
        return Params(self.alpha, self.beta, self.gamma, self.delta, k)

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta)


def simple_root_value(i: int, x) -> int:
    """``a_i(x) = m_i - m_{i+1}``."""
    if not 1 <= i < len(x):
        raise IndexError(f"simple root index {i} out of range for k={len(x)}")
    return x[i - 1] - x[i]


def reflect(i: int, x) -> tuple:
    """``s_i x``: swap coordinates ``i`` and ``i+1``."""
    y = list(x)
    y[i - 1], y[i] = y[i], y[i - 1]
    return tuple(y)


def apply_permutation(sigma, x) -> tuple:
    """``w x`` for the Weyl element with ``w(v_i) = v_{σ(i)}``."""
    y = [0] * len(x)
    for i, image in enumerate(sigma):
        y[image] = x[i]
    return tuple(y)


def compose(outer, inner) -> tuple:
    """Permutation of the product ``outer * inner`` (``inner`` acts first)."""
    return tuple(outer[image] for image in inner)


@dataclass(frozen=True)
class WeylWord:
    """A reduced word ``s_{i_1} ... s_{i_r}`` together with its permutation."""

    letters: tuple
    permutation: tuple

    @classmethod
    def from_letters(cls, letters, k: int) -> "WeylWord":
        sigma = tuple(range(k))
        # s_{i_r} acts first
        for i in reversed(letters):
            sigma = compose(reflect(i, tuple(range(k))), sigma)
        return cls(tuple(letters), sigma)

    def __len__(self):
        return len(self.letters)

    def act(self, x) -> tuple:
        return apply_permutation(self.permutation, x)


def shortest_chamber_word(x) -> WeylWord:
    """The shortest ``w_x`` with ``w_x x`` weakly decreasing.

    Stable bubble sort; equal coordinates are never swapped, so the number of
    swaps equals the number of inversions and the word is reduced.
    """
    k = len(x)
    values = list(x)
    position = list(range(k))  # position[i]: where original index i currently sits
    owner = list(range(k))  # owner[p]: original index sitting at position p
    swaps = []
    for end in range(k - 1, 0, -1):
        for p in range(end):
            if values[p] < values[p + 1]:
                values[p], values[p + 1] = values[p + 1], values[p]
                a, b = owner[p], owner[p + 1]
                owner[p], owner[p + 1] = b, a
                position[a], position[b] = p + 1, p
                swaps.append(p + 1)
    return WeylWord(tuple(reversed(swaps)), tuple(position))


def inversion_set(x) -> frozenset:
    """Pairs ``(i, j)``, ``i < j`` (1-based), with ``m_i < m_j``."""
    return frozenset(
        (i + 1, j + 1) for i, j in combinations(range(len(x)), 2) if x[i] < x[j]
    )


def descent_counts(x):
    """``(d_plus, d_minus)``: numbers of equal coordinates to the right / left of each index."""
    k = len(x)
    d_plus = tuple(sum(1 for p in range(i + 1, k) if x[p] == x[i]) for i in range(k))
    d_minus = tuple(sum(1 for p in range(i) if x[p] == x[i]) for i in range(k))
    return d_plus, d_minus


def is_dominant(x) -> bool:
    return all(x[i] >= x[i + 1] for i in range(len(x) - 1))


def cluster_coordinate(x) -> tuple:
    """Run lengths of equal coordinates of a weakly decreasing point."""
    if not x:
        raise ValueError("empty lattice point")
    if not is_dominant(x):
        raise ValueError(f"{tuple(x)} is not weakly decreasing")
    sizes = [1]
    for i in range(1, len(x)):
        if x[i] == x[i - 1]:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return tuple(sizes)


def cluster_blocks(x) -> list:
    """Partition of ``{1..k}`` into sorted index tuples sharing a coordinate value.

    Blocks are ordered by decreasing coordinate value.
    """
    groups = {}
    for i, value in enumerate(x):
        groups.setdefault(value, []).append(i + 1)
    return [tuple(groups[value]) for value in sorted(groups, reverse=True)]
