"""The Campbell-Hausdorff group on logarithmic coordinates.

Group elements are stored by their logarithms; the product is the truncated
Campbell-Hausdorff series, evaluated from its double-sum form over
compositions.  Unipotent matrices give an independent check through
``matrix_exp``/``matrix_log``.
"""
from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .exactnum import Field, FieldMismatch, FactorialNotInvertible, inv_factorial
from .linalg import identity, matmul, vec_add, vec_scale, vec_sub
from .liealg import LieAlgebra

__all__ = [
    "ch_terms",
    "ch_components",
    "ch_series",
    "GroupElement",
    "group_mul",
    "group_inv",
    "group_pow",
    "group_commutator",
    "ad_exp",
    "ad_exp_matrix",
    "matrix_exp",
    "matrix_log",
    "NotStrictlyUpperTriangular",
    "NotUnipotent",
    "tr0_algebra",
    "tr0_to_matrix",
    "tr0_from_matrix",
]


class NotStrictlyUpperTriangular(ValueError):
    pass


class NotUnipotent(ValueError):
    pass


def _compositions(total: int, parts: int):
    """Ordered tuples of ``parts`` non-negative ints summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _blocks(s_total: int, t_total: int, count: int):
    """``count`` pairs (s_i, t_i) with the given sums and s_i + t_i >= 1."""
    for ss in _compositions(s_total, count):
        for ts in _compositions(t_total, count):
            if all(a + b >= 1 for a, b in zip(ss, ts)):
                yield ss, ts


def _fact_prod(xs) -> int:
    out = 1
    for x in xs:
        out *= math.factorial(x)
    return out


def _normalize(word: tuple, coef: Fraction):
    """Rewrite a right-normed word so it ends in ``XY``; drop vanishing ones."""
    if len(word) == 1:
        return word, coef
    if word[-1] == word[-2]:
        return None
    if word[-2:] == ("Y", "X"):
        return word[:-2] + ("X", "Y"), -coef
    return word, coef


@lru_cache(maxsize=None)
def ch_terms(n: int) -> tuple:
    """Homogeneous degree-``n`` CH component as ``((coef, word), ...)``.

    A word ``(a_1, ..., a_k)`` over ``{"X", "Y"}`` stands for the
    right-normed bracket ``ad(a_1)...ad(a_{k-1})(a_k)``.  The two families
    of terms are

    * ``Z'_{s,t}``: ``ad(X)^{s_1} ad(Y)^{t_1} ... ad(X)^{s_m} (Y)`` with
      ``sum s_i = s``, ``sum_{i<m} t_i = t - 1``;
    * ``Z''_{s,t}``: ``ad(X)^{s_1} ad(Y)^{t_1} ... ad(Y)^{t_{m-1}} (X)``
      with ``sum s_i = s - 1``, ``sum t_i = t``;

    each weighted by ``(-1)^{m+1} / (m * prod s_i! t_i!)``, requiring
    ``s_i + t_i >= 1`` on every complete block, and
    ``Z_n = (1/n) sum_{s+t=n} (Z'_{s,t} + Z''_{s,t})``.
    """
    acc: dict[tuple, Fraction] = defaultdict(Fraction)
    for s in range(n + 1):
        t = n - s
        if t >= 1:
            # m - 1 complete blocks followed by ad(X)^{s_m}(Y)
            for m in range(1, n + 1):
                for sm in range(s + 1):
                    for ss, ts in _blocks(s - sm, t - 1, m - 1):
                        word = ()
                        for a, b in zip(ss, ts):
                            word += ("X",) * a + ("Y",) * b
                        word += ("X",) * sm + ("Y",)
                        coef = Fraction((-1) ** (m + 1), m * _fact_prod(ss + ts + (sm,)))
                        _accumulate(acc, word, coef)
        if s >= 1:
            for m in range(1, n + 1):
                for ss, ts in _blocks(s - 1, t, m - 1):
                    word = ()
                    for a, b in zip(ss, ts):
                        word += ("X",) * a + ("Y",) * b
                    word += ("X",)
                    coef = Fraction((-1) ** (m + 1), m * _fact_prod(ss + ts))
                    _accumulate(acc, word, coef)
    return tuple(sorted(((c / n, w) for w, c in acc.items() if c), key=lambda cw: cw[1]))


def _accumulate(acc, word, coef):
    norm = _normalize(word, coef)
    if norm is not None:
        acc[norm[0]] += norm[1]


def _coef(c: Fraction, field: Field):
    if field.is_finite and c.denominator % field.characteristic == 0:
        raise FactorialNotInvertible(
            f"CH coefficient {c} is not defined over F_{field.characteristic}"
        )
    return field(c)


def _eval_words(x, y, g: LieAlgebra, words) -> dict:
    """Evaluate right-normed words with shared suffixes computed once."""
    cache: dict[tuple, tuple] = {("X",): tuple(x), ("Y",): tuple(y)}

    def ev(word):
        if word not in cache:
            inner = ev(word[1:])
            cache[word] = g.bracket(cache[(word[0],)], inner)
        return cache[word]

    return {w: ev(w) for w in words}


def ch_components(x: Sequence, y: Sequence, g: LieAlgebra) -> list[tuple]:
    """``[Z_1, ..., Z_l]`` for ``l`` the nilpotency class of ``g``."""
    field = g.field
    x = tuple(field(c) for c in x)
    y = tuple(field(c) for c in y)
    comps = []
    for n in range(1, g.nilpotency_class + 1):
        terms = ch_terms(n)
        values = _eval_words(x, y, g, [w for _, w in terms])
        z = g.zero()
        for c, w in terms:
            z = vec_add(z, vec_scale(_coef(c, field), values[w]))
        comps.append(z)
    return comps


def ch_series(x: Sequence, y: Sequence, g: LieAlgebra) -> tuple:
    """``log(exp x * exp y)`` truncated at the nilpotency class."""
    z = g.zero()
    for comp in ch_components(x, y, g):
        z = vec_add(z, comp)
    return z


@dataclass(frozen=True)
class GroupElement:
    """``exp(log)`` in the CH group of ``algebra``."""

    algebra: LieAlgebra
    log: tuple

    def __post_init__(self):
        object.__setattr__(self, "log", self.algebra.vector(self.log))

    @classmethod
    def identity(cls, g: LieAlgebra) -> "GroupElement":
        return cls(g, g.zero())

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return group_mul(self, other)

    def inverse(self) -> "GroupElement":
        return group_inv(self)

    def __pow__(self, lam) -> "GroupElement":
        return group_pow(self, lam)

    def is_identity(self) -> bool:
        return not any(self.log)

    def __eq__(self, other):
        return isinstance(other, GroupElement) and other.algebra is self.algebra and other.log == self.log

    def __hash__(self):
        return hash(self.log)


def _same(x: GroupElement, y: GroupElement) -> LieAlgebra:
    if x.algebra is not y.algebra:
        if x.algebra.field != y.algebra.field:
            raise FieldMismatch(f"{x.algebra.field} vs {y.algebra.field}")
        raise ValueError("group elements belong to different algebras")
    return x.algebra


def group_mul(x: GroupElement, y: GroupElement) -> GroupElement:
    g = _same(x, y)
    return GroupElement(g, ch_series(x.log, y.log, g))


def group_inv(x: GroupElement) -> GroupElement:
    return GroupElement(x.algebra, tuple(-c for c in x.log))


def group_pow(x: GroupElement, lam) -> GroupElement:
    """``x^lam = exp(lam * log x)``."""
    g = x.algebra
    return GroupElement(g, vec_scale(g.field(lam), x.log))


def group_commutator(x: GroupElement, y: GroupElement) -> GroupElement:
    """``x y x^-1 y^-1``."""
    return group_mul(group_mul(group_mul(x, y), group_inv(x)), group_inv(y))


def ad_exp(x: Sequence, y: Sequence, g: LieAlgebra) -> tuple:
    """``Ad(exp x)(y) = sum_{n<=l} ad(x)^n(y) / n!``."""
    field = g.field
    x = tuple(field(c) for c in x)
    term = tuple(field(c) for c in y)
    out = term
    for n in range(1, g.nilpotency_class + 1):
        term = g.bracket(x, term)
        if not any(term):
            break
        out = vec_add(out, vec_scale(inv_factorial(n, field), term))
    return out


def ad_exp_matrix(x: Sequence, g: LieAlgebra) -> tuple:
    """Matrix of ``Ad(exp x)``; column ``j`` is the image of ``e_j``."""
    cols = [ad_exp(x, g.basis_vector(j), g) for j in range(g.dim)]
    return tuple(zip(*cols))


# -- unipotent matrices -------------------------------------------------------

def _check_strict_upper(m, field: Field):
    n = len(m)
    for i in range(n):
        if len(m[i]) != n:
            raise NotStrictlyUpperTriangular("matrix is not square")
        for j in range(i + 1):
            if field(m[i][j]):
                raise NotStrictlyUpperTriangular(f"nonzero entry at ({i}, {j})")


def _check_unipotent(m, field: Field):
    n = len(m)
    for i in range(n):
        if len(m[i]) != n:
            raise NotUnipotent("matrix is not square")
        for j in range(i + 1):
            want = field.one if i == j else field.zero
            if field(m[i][j]) != want:
                raise NotUnipotent(f"bad entry at ({i}, {j})")


def _mat(m, field):
    return tuple(tuple(field(c) for c in row) for row in m)


def matrix_exp(x, field: Field) -> tuple:
    """``sum_{k<n} X^k / k!`` for strictly upper triangular ``X``."""
    x = _mat(x, field)
    _check_strict_upper(x, field)
    n = len(x)
    out = identity(field, n)
    power = identity(field, n)
    for k in range(1, n):
        power = matmul(power, x, field)
        if not any(any(r) for r in power):
            break
        c = inv_factorial(k, field)
        out = tuple(vec_add(a, vec_scale(c, b)) for a, b in zip(out, power))
    return out


def matrix_log(u, field: Field) -> tuple:
    """``sum_{k>=1} (-1)^{k+1} (u - 1)^k / k`` for unipotent upper triangular ``u``."""
    u = _mat(u, field)
    _check_unipotent(u, field)
    n = len(u)
    nil = tuple(vec_sub(a, b) for a, b in zip(u, identity(field, n)))
    out = tuple((field.zero,) * n for _ in range(n))
    power = identity(field, n)
    for k in range(1, n):
        power = matmul(power, nil, field)
        if not any(any(r) for r in power):
            break
        c = field(Fraction((-1) ** (k + 1), k))
        out = tuple(vec_add(a, vec_scale(c, b)) for a, b in zip(out, power))
    return out


def _tr0_positions(n: int):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def tr0_algebra(n: int, field: Field) -> LieAlgebra:
    """Strictly upper triangular ``n x n`` matrices with the commutator bracket.

    Basis ``E_ij`` (``i < j``, 1-based labels ``E12``, ``E13``, ...), ordered
    row by row.
    """
    pos = _tr0_positions(n)
    index = {p: k for k, p in enumerate(pos)}
    brackets = {}
    for a, (i, j) in enumerate(pos):
        for b, (k, l) in enumerate(pos):
            if a >= b:
                continue
            # [E_ij, E_kl] = d_jk E_il - d_li E_kj
            coeffs = {}
            if j == k:
                coeffs[index[(i, l)]] = coeffs.get(index[(i, l)], 0) + 1
            if l == i:
                coeffs[index[(k, j)]] = coeffs.get(index[(k, j)], 0) - 1
            coeffs = {c: v for c, v in coeffs.items() if v}
            if coeffs:
                brackets[(a, b)] = coeffs
    labels = [f"E{i + 1}{j + 1}" for i, j in pos]
    return LieAlgebra(field, len(pos), brackets, basis=labels, name=f"tr0_{n}")


def tr0_to_matrix(v: Sequence, n: int, field: Field) -> tuple:
    m = [[field.zero] * n for _ in range(n)]
    for c, (i, j) in zip(v, _tr0_positions(n)):
        m[i][j] = field(c)
    return tuple(tuple(r) for r in m)


def tr0_from_matrix(m, field: Field) -> tuple:
    _check_strict_upper(_mat(m, field), field)
    return tuple(field(m[i][j]) for i, j in _tr0_positions(len(m)))
