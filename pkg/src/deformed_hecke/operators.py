"""Left action of the deformed algebra on lattice functions and right action on Laurent polynomials.

Lattice functions are lazy: applying ``T_i`` to a finitely supported function
yields infinite support, so a :class:`LatticeFunction` is an evaluator plus a
memo cache, and operators compose evaluators.
"""

from itertools import product

from .lattice import Params, WeylWord
from .scalar import ONE, ZERO, Scalar, scalar

__all__ = [
    "LatticeFunction", "delta_function", "linear_combination", "apply_X", "apply_X_inv",
    "apply_T", "apply_T_word", "LaurentPolynomial", "right_apply_X", "right_apply_X_inv",
    "right_apply_T", "pairing", "act_left", "act_right",
]


class LatticeFunction:
    """A map ``Z^k -> Q`` given by a pure evaluator, optionally memoized.

    Concurrent evaluation is safe: cache writes for a given point always store
    the same value, so racing inserts are idempotent.
    """

    __slots__ = ("k", "_evaluator", "_cache", "name")

    def __init__(self, k: int, evaluator, memoize: bool = True, name: str = ""):
        self.k = k
        self._evaluator = evaluator
        self._cache = {} if memoize else None
        self.name = name

    def __call__(self, x) -> Scalar:
        x = tuple(x)
        cache = self._cache
        if cache is None:
            return self._evaluator(x)
        try:
            return cache[x]
        except KeyError:
            value = self._evaluator(x)
            cache[x] = value
            return value

    def unmemoized(self) -> "LatticeFunction":
        return LatticeFunction(self.k, self._evaluator, memoize=False, name=self.name)

    @property
    def cache_size(self) -> int:
        return 0 if self._cache is None else len(self._cache)

    def __add__(self, other):
        return linear_combination([(ONE, self), (ONE, other)])

    def __sub__(self, other):
        return linear_combination([(ONE, self), (-ONE, other)])

    def __rmul__(self, c):
        c = scalar(c)
        return LatticeFunction(self.k, lambda x: c * self(x), name=f"{c}*{self.name}")

    def __repr__(self):
        return f"LatticeFunction(k={self.k}, {self.name or '?'})"


def delta_function(y) -> LatticeFunction:
    """Indicator of the single point ``y``."""
    y = tuple(y)
    return LatticeFunction(len(y), lambda x: ONE if x == y else ZERO, memoize=False, name=f"delta{y}")


def linear_combination(terms) -> LatticeFunction:
    """``sum c * f`` over ``(c, f)`` pairs."""
    terms = [(scalar(c), f) for c, f in terms]
    k = terms[0][1].k

    def evaluate(x):
        total = ZERO
        for c, f in terms:
            if c:
                total += c * f(x)
        return total

    return LatticeFunction(k, evaluate, name="lincomb")


def _shift(x, i, amount):
    y = list(x)
    y[i - 1] += amount
    return tuple(y)


def apply_X(i: int, f: LatticeFunction) -> LatticeFunction:
    """``(X_i f)(x) = f(x - v_i)``."""
    if not 1 <= i <= f.k:
        raise IndexError(f"X index {i} out of range for k={f.k}")
    return LatticeFunction(f.k, lambda x: f(_shift(x, i, -1)), memoize=False, name=f"X{i}")


def apply_X_inv(i: int, f: LatticeFunction) -> LatticeFunction:
    """``(X_i^{-1} f)(x) = f(x + v_i)``."""
    if not 1 <= i <= f.k:
        raise IndexError(f"X index {i} out of range for k={f.k}")
    return LatticeFunction(f.k, lambda x: f(_shift(x, i, 1)), memoize=False, name=f"X{i}^-1")


def apply_T(i: int, f: LatticeFunction, params: Params) -> LatticeFunction:
    """The integral-reflection operator ``T_i`` acting on ``f``.

    At ``x`` with ``a = a_i(x)`` the value reads ``f`` at ``s_i x`` and along
    the root string between ``x`` and ``s_i x`` (at most ``3|a| + 3`` points);
    for ``a = 0`` it is ``f(x)``.
    """
    k = f.k
    if not 1 <= i < k:
        raise IndexError(f"T index {i} out of range for k={k}")
    al, be, ga, de = params.as_tuple()
    ad, bg, ag, bd = al * de, be * ga, al * ga, be * de
    ad_bg = ad + bg
    lo = i - 1  # 0-based slot of v_i; v_{i+1} is slot i

    def evaluate(x):
        a = x[lo] - x[lo + 1]
        if a == 0:
            return f(x)
        head, tail = x[:lo], x[lo + 2:]
        u, w = x[lo + 1], x[lo]  # s_i x has (u, w) in slots (i, i+1)

        def at(ui, wi):
            return f(head + (ui, wi) + tail)

        if a > 0:
            total = ad * f(x) + (1 + bg) * at(u, w)
            # s_i x + j a_i^vee = (u + j, w - j)
            if ag:
                total += ag * sum((at(u + j, w - j + 1) for j in range(1, a + 1)), ZERO)
            if ad_bg:
                total += ad_bg * sum((at(u + j, w - j) for j in range(1, a)), ZERO)
            if bd:
                total += bd * sum((at(u + j, w - j - 1) for j in range(0, a)), ZERO)
            return total
        n = -a
        total = -bg * f(x) + (1 - ad) * at(u, w)
        if ag:
            total -= ag * sum((at(u - j, w + j + 1) for j in range(0, n)), ZERO)
        if ad_bg:
            total -= ad_bg * sum((at(u - j, w + j) for j in range(1, n)), ZERO)
        if bd:
            total -= bd * sum((at(u - j, w + j - 1) for j in range(1, n + 1)), ZERO)
        return total

    return LatticeFunction(k, evaluate, name=f"T{i}")


def apply_T_word(word, f: LatticeFunction, params: Params) -> LatticeFunction:
    """``T_w f = T_{i_1}( ... T_{i_r}(f))`` for a reduced word ``(i_1, ..., i_r)``."""
    letters = word.letters if isinstance(word, WeylWord) else tuple(word)
    for i in reversed(letters):
        f = apply_T(i, f, params)
    return f


class LaurentPolynomial:
    """Sparse Laurent polynomial in ``e^{v_1}, ..., e^{v_k}``.

    ``terms`` maps exponent tuples (possibly negative) to nonzero rationals.
    """

    __slots__ = ("k", "terms")

    def __init__(self, k: int, terms=None):
        self.k = k
        clean = {}
        for exponent, c in (terms or {}).items():
            c = scalar(c)
            if c:
                exponent = tuple(exponent)
                if len(exponent) != k:
                    raise ValueError(f"exponent {exponent} has wrong length for k={k}")
                clean[exponent] = c
        self.terms = clean

    @classmethod
    def monomial(cls, exponent, coefficient=1) -> "LaurentPolynomial":
        exponent = tuple(exponent)
        return cls(len(exponent), {exponent: coefficient})

    @classmethod
    def constant(cls, k: int, c=1) -> "LaurentPolynomial":
        return cls(k, {(0,) * k: c})

    @classmethod
    def variable(cls, k: int, i: int) -> "LaurentPolynomial":
        """``e^{v_i}``."""
        return cls.monomial(tuple(1 if j == i - 1 else 0 for j in range(k)))

    def _accumulate(self, out, other_terms, sign):
        for exponent, c in other_terms.items():
            value = out.get(exponent, ZERO) + sign * c
            if value:
                out[exponent] = value
            else:
                out.pop(exponent, None)

    def __add__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(self.k, other)
        out = dict(self.terms)
        self._accumulate(out, other.terms, 1)
        return LaurentPolynomial(self.k, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial(self.k, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(self.k, other)
        out = dict(self.terms)
        self._accumulate(out, other.terms, -1)
        return LaurentPolynomial(self.k, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, LaurentPolynomial):
            c = scalar(other)
            return LaurentPolynomial(self.k, {e: c * v for e, v in self.terms.items()})
        out = {}
        for (e1, c1), (e2, c2) in product(self.terms.items(), other.terms.items()):
            exponent = tuple(a + b for a, b in zip(e1, e2))
            out[exponent] = out.get(exponent, ZERO) + c1 * c2
        return LaurentPolynomial(self.k, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, LaurentPolynomial):
            other = LaurentPolynomial.constant(self.k, other)
        return self.k == other.k and self.terms == other.terms

    def __hash__(self):
        return hash((self.k, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = [f"{c}*e^{exp}" for exp, c in sorted(self.terms.items())]
        return " + ".join(parts)

    def swap(self, i: int) -> "LaurentPolynomial":
        """Right Weyl action ``P.s_i``: exchange the exponents of ``v_i`` and ``v_{i+1}``."""
        out = {}
        for exponent, c in self.terms.items():
            e = list(exponent)
            e[i - 1], e[i] = e[i], e[i - 1]
            out[tuple(e)] = c
        return LaurentPolynomial(self.k, out)

    def shift(self, i: int, amount: int) -> "LaurentPolynomial":
        """Multiply by ``e^{amount * v_i}``."""
        out = {}
        for exponent, c in self.terms.items():
            e = list(exponent)
            e[i - 1] += amount
            out[tuple(e)] = c
        return LaurentPolynomial(self.k, out)

    def divide_by_root(self, i: int) -> "LaurentPolynomial":
        """Exact quotient by ``e^{v_i} - e^{v_{i+1}}``.

        Terms are grouped by the remaining exponents and the total degree in
        ``(v_i, v_{i+1})``; inside a group, leading terms in ``e^{v_i}`` are
        eliminated one at a time.  Raises ``ArithmeticError`` if the remainder
        is nonzero.
        """
        lo = i - 1
        groups = {}
        for exponent, c in self.terms.items():
            key = (exponent[:lo], exponent[lo] + exponent[lo + 1], exponent[lo + 2:])
            groups.setdefault(key, {})[exponent[lo]] = c
        out = {}
        for (head, total, tail), coeffs in groups.items():
            if sum(coeffs.values(), ZERO) != 0:
                raise ArithmeticError(f"not divisible by e^v{i} - e^v{i + 1}")
            # u^p w^(total-p): eliminate from the top u-degree downwards
            remainder = dict(coeffs)
            bottom = min(remainder)
            p = max(remainder)
            while p > bottom:
                c = remainder.pop(p, ZERO)
                if c:
                    out[head + (p - 1, total - p) + tail] = c
                    remainder[p - 1] = remainder.get(p - 1, ZERO) + c
                p -= 1
            if remainder.get(bottom, ZERO) != 0:
                raise ArithmeticError(f"nonzero remainder dividing by e^v{i} - e^v{i + 1}")
        return LaurentPolynomial(self.k, out)


def right_apply_X(P: LaurentPolynomial, i: int) -> LaurentPolynomial:
    """``P X_i = e^{-v_i} P``."""
    if not 1 <= i <= P.k:
        raise IndexError(f"X index {i} out of range for k={P.k}")
    return P.shift(i, -1)


def right_apply_X_inv(P: LaurentPolynomial, i: int) -> LaurentPolynomial:
    if not 1 <= i <= P.k:
        raise IndexError(f"X index {i} out of range for k={P.k}")
    return P.shift(i, 1)


def right_apply_T(P: LaurentPolynomial, i: int, params: Params) -> LaurentPolynomial:
    """Lascoux-Schutzenberger operator: ``P.s_i + (a e^{v_i} + b)(c e^{v_{i+1}} + d) (P - P.s_i)/(e^{v_i} - e^{v_{i+1}})``."""
    k = P.k
    if not 1 <= i < k:
        raise IndexError(f"T index {i} out of range for k={k}")
    swapped = P.swap(i)
    quotient = (P - swapped).divide_by_root(i)
    if not quotient:
        return swapped
    left = LaurentPolynomial.variable(k, i) * params.alpha + params.beta
    right = LaurentPolynomial.variable(k, i + 1) * params.gamma + params.delta
    return swapped + left * right * quotient


def pairing(P: LaurentPolynomial, f) -> Scalar:
    """``(e^x, f) = f(x)``, extended bilinearly."""
    total = ZERO
    for exponent, c in P.terms.items():
        total += c * f(exponent)
    return total


# An algebra element is written as a list of (coefficient, word) pairs, where a
# word is a tuple of generators ("X", i), ("Xinv", i) or ("T", i) read as a
# product from left to right.

def act_left(element, f: LatticeFunction, params: Params) -> LatticeFunction:
    """Left action on ``F(L)``: the rightmost generator of each word acts first."""
    terms = []
    for c, word in element:
        g = f
        for name, i in reversed(word):
            if name == "X":
                g = apply_X(i, g)
            elif name == "Xinv":
                g = apply_X_inv(i, g)
            elif name == "T":
                g = apply_T(i, g, params)
            else:
                raise ValueError(f"unknown generator {name!r}")
        terms.append((c, g))
    if not terms:
        return LatticeFunction(f.k, lambda x: ZERO, memoize=False, name="0")
    return linear_combination(terms)


def act_right(P: LaurentPolynomial, element, params: Params) -> LaurentPolynomial:
    """Right action on Laurent polynomials: the leftmost generator of each word acts first."""
    total = LaurentPolynomial(P.k)
    for c, word in element:
        Q = P
        for name, i in word:
            if name == "X":
                Q = right_apply_X(Q, i)
            elif name == "Xinv":
                Q = right_apply_X_inv(Q, i)
            elif name == "T":
                Q = right_apply_T(Q, i, params)
            else:
                raise ValueError(f"unknown generator {name!r}")
        total = total + Q * c
    return total
