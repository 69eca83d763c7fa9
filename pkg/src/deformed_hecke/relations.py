"""Defining relations of the deformed algebra, written as pairs of algebra elements.

An element is a list of ``(coefficient, word)`` pairs as understood by
:func:`operators.act_left` and :func:`operators.act_right`.
"""

from dataclasses import dataclass
from itertools import combinations

from .lattice import Params
from .operators import LaurentPolynomial, act_left, act_right, delta_function


@dataclass(frozen=True)
class Relation:
    name: str
    lhs: tuple
    rhs: tuple


def _X(i):
    return ("X", i)


def _T(i):
    return ("T", i)


def _V_product(params: Params, i: int):
    """``(alpha + beta X_i)(gamma + delta X_{i+1})`` expanded."""
    al, be, ga, de = params.as_tuple()
    return [
        (al * ga, ()), (al * de, (_X(i + 1),)), (be * ga, (_X(i),)), (be * de, (_X(i), _X(i + 1))),
    ]


def _negate(element):
    return [(-c, w) for c, w in element]


def elementary_symmetric_X(r: int, k: int):
    return [(1, tuple(_X(i) for i in subset)) for subset in combinations(range(1, k + 1), r)]


def defining_relations(params: Params, k: int) -> list:
    """Every defining relation for ``k`` particles, plus centrality of ``e_r(X_1..X_k)``."""
    q = params.q
    rels = []
    for i in range(1, k):
        rels.append(Relation(
            f"quadratic(T{i})",
            ((1, (_T(i), _T(i))), (q - 1, (_T(i),)), (-q, ())),
            (),
        ))
        cross = tuple(_V_product(params, i))
        rels.append(Relation(
            f"cross_left({i})", ((1, (_X(i + 1), _T(i))), (-1, (_T(i), _X(i)))), cross,
        ))
        rels.append(Relation(
            f"cross_right({i})", ((1, (_T(i), _X(i + 1))), (-1, (_X(i), _T(i)))), cross,
        ))
    for i in range(1, k - 1):
        rels.append(Relation(
            f"braid({i})",
            ((1, (_T(i), _T(i + 1), _T(i))),),
            ((1, (_T(i + 1), _T(i), _T(i + 1))),),
        ))
    for i in range(1, k):
        for j in range(i + 2, k):
            rels.append(Relation(f"TT_commute({i},{j})", ((1, (_T(i), _T(j))),), ((1, (_T(j), _T(i))),)))
    for i in range(1, k + 1):
        rels.append(Relation(f"X_inverse({i})", ((1, (_X(i), ("Xinv", i))),), ((1, ()),)))
        for j in range(i + 1, k + 1):
            rels.append(Relation(f"XX_commute({i},{j})", ((1, (_X(i), _X(j))),), ((1, (_X(j), _X(i))),)))
        for j in range(1, k):
            if i not in (j, j + 1):
                rels.append(Relation(f"XT_commute({i},{j})", ((1, (_X(i), _T(j))),), ((1, (_T(j), _X(i))),)))
    for r in range(1, k + 1):
        e_r = elementary_symmetric_X(r, k)
        for i in range(1, k):
            rels.append(Relation(
                f"central(e{r},T{i})",
                tuple((c, w + (_T(i),)) for c, w in e_r),
                tuple((c, (_T(i),) + w) for c, w in e_r),
            ))
    return rels


def check_left(relation: Relation, params: Params, y, x) -> bool:
    """Both sides applied to ``delta_y`` agree at ``x``."""
    f = delta_function(y)
    lhs = act_left(list(relation.lhs), f, params)(x)
    rhs = act_left(list(relation.rhs), f, params)(x)
    return lhs == rhs


def check_right(relation: Relation, params: Params, exponent) -> bool:
    """Both sides acting on the monomial ``e^{exponent}`` give the same polynomial."""
    P = LaurentPolynomial.monomial(exponent)
    return act_right(P, list(relation.lhs), params) == act_right(P, list(relation.rhs), params)
