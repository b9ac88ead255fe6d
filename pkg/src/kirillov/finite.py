"""Vectorized arithmetic for CH groups over F_p.

Vectors are int64 arrays reduced mod p.  Index ``k`` of a vector ``v`` is its
base-p numeral with ``v[0]`` most significant, so index order is
lexicographic order of coordinate tuples.
"""
from __future__ import annotations

import itertools
import math
from functools import cached_property

import numpy as np

from .chgroup import ch_terms
from .exactnum import FactorialNotInvertible
from .liealg import LieAlgebra

__all__ = ["EnumerationTooLarge", "FiniteBackend", "to_ints", "DEFAULT_BOUND"]

DEFAULT_BOUND = 625


class EnumerationTooLarge(ValueError):
    pass


def to_ints(vectors, p: int, n: int) -> np.ndarray:
    """Exact F_p vectors as an ``(len(vectors), n)`` int64 array."""
    return np.array([[int(c) % p for c in v] for v in vectors], dtype=np.int64).reshape(len(vectors), n)


class FiniteBackend:
    def __init__(self, g: LieAlgebra, bound: int = DEFAULT_BOUND):
        if not g.field.is_finite:
            raise ValueError("finite backend needs an algebra over F_p")
        self.algebra = g
        self.p = p = g.field.characteristic
        self.n = n = g.dim
        self.size = p**n
        if self.size > bound:
            raise EnumerationTooLarge(f"{p}^{n} = {self.size} exceeds bound {bound}")
        if g.nilpotency_class >= p:
            raise FactorialNotInvertible(f"class {g.nilpotency_class} >= p = {p}")
        c = np.zeros((n, n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                for k, v in g.bracket_basis(i, j):
                    c[i, j, k] = int(v)
        self.structure = c
        self._weights = p ** np.arange(n - 1, -1, -1, dtype=np.int64)

    @cached_property
    def vectors(self) -> np.ndarray:
        if self.n == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grid = itertools.product(range(self.p), repeat=self.n)
        return np.array(list(grid), dtype=np.int64)

    def encode(self, v: np.ndarray) -> np.ndarray:
        return (np.asarray(v) % self.p) @ self._weights

    def bracket(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.einsum("...i,...j,ijk->...k", x, y, self.structure) % self.p

    def _inv(self, num: int, den: int) -> int:
        if den % self.p == 0:
            raise FactorialNotInvertible(f"{num}/{den} undefined mod {self.p}")
        return num * pow(den, -1, self.p) % self.p

    def ch(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        """Batched CH product of log vectors."""
        x, y = np.broadcast_arrays(np.asarray(x) % self.p, np.asarray(y) % self.p)
        z = np.zeros(x.shape, dtype=np.int64)
        for deg in range(1, self.algebra.nilpotency_class + 1):
            cache = {("X",): x, ("Y",): y}

            def ev(word):
                if word not in cache:
                    cache[word] = self.bracket(cache[(word[0],)], ev(word[1:]))
                return cache[word]

            for coef, word in ch_terms(deg):
                c = self._inv(coef.numerator, coef.denominator)
                z = (z + c * ev(word)) % self.p
        return z

    def ad_matrices(self, x: np.ndarray) -> np.ndarray:
        """``ad(x)`` with ``ad(x)[k, j]`` the ``e_k`` coefficient of ``[x, e_j]``."""
        return np.einsum("...i,ijk->...kj", x, self.structure) % self.p

    def Ad_matrices(self, x: np.ndarray) -> np.ndarray:
        ad = self.ad_matrices(x)
        eye = np.broadcast_to(np.eye(self.n, dtype=np.int64), ad.shape)
        out = eye.copy()
        power = eye.copy()
        for m in range(1, self.algebra.nilpotency_class + 1):
            power = np.matmul(power, ad) % self.p
            out = (out + self._inv(1, math.factorial(m)) * power) % self.p
        return out

    @cached_property
    def coadjoint_all(self) -> np.ndarray:
        """``M[x]`` with ``Ad*(exp x) f = f @ M[x]`` for every element."""
        return self.Ad_matrices(-self.vectors % self.p)

    def coadjoint_act(self, f: np.ndarray, which=None) -> np.ndarray:
        """``Ad*(x) f`` for all (or the selected) group elements."""
        mats = self.coadjoint_all if which is None else self.coadjoint_all[which]
        return np.einsum("i,xij->xj", np.asarray(f) % self.p, mats) % self.p

    @cached_property
    def mul_table(self) -> np.ndarray:
        v = self.vectors
        xs = np.repeat(v, self.size, axis=0)
        ys = np.tile(v, (self.size, 1))
        return self.encode(self.ch(xs, ys)).reshape(self.size, self.size)

    @cached_property
    def inverse(self) -> np.ndarray:
        return self.encode(-self.vectors)

    def span_indices(self, basis: np.ndarray) -> np.ndarray:
        """Indices of every vector in the span of ``basis`` rows."""
        basis = np.asarray(basis, dtype=np.int64).reshape(-1, self.n)
        k = basis.shape[0]
        if k == 0:
            return np.zeros(1, dtype=np.int64)
        coeffs = np.array(list(itertools.product(range(self.p), repeat=k)), dtype=np.int64)
        return np.unique(self.encode(coeffs @ basis))

    def members(self, annihilator_basis: np.ndarray) -> np.ndarray:
        """Boolean mask of vectors killed by every row of ``annihilator_basis``."""
        ann = np.asarray(annihilator_basis, dtype=np.int64).reshape(-1, self.n)
        if ann.shape[0] == 0:
            return np.ones(self.size, dtype=bool)
        return ~((self.vectors @ ann.T) % self.p).any(axis=1)
