"""Dense exact linear algebra over a :class:`~kirillov.exactnum.Field`.

Vectors are tuples of scalars and matrices are tuples of row tuples.  Every
subspace is stored by its reduced row echelon basis, so two subspaces are
equal exactly when their stored bases are.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .exactnum import Field

__all__ = [
    "DimensionMismatch",
    "Subspace",
    "rref",
    "rank",
    "kernel",
    "solve",
    "sum_intersect",
    "matmul",
    "matvec",
    "vecmat",
    "transpose",
    "identity",
    "zeros",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "dot",
]

Vector = tuple
Matrix = tuple


class DimensionMismatch(ValueError):
    pass


def zeros(field: Field, rows: int, cols: int) -> Matrix:
    z = field.zero
    return tuple((z,) * cols for _ in range(rows))


def identity(field: Field, n: int) -> Matrix:
    z, o = field.zero, field.one
    return tuple(tuple(o if i == j else z for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m))


def vec_add(u, v) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v) -> Vector:
    return tuple(c * a for a in v)


def dot(u, v, field: Field):
    s = field.zero
    for a, b in zip(u, v):
        if a and b:
            s = s + a * b
    return s


def matvec(m, v, field: Field) -> Vector:
    return tuple(dot(row, v, field) for row in m)


def vecmat(v, m, field: Field) -> Vector:
    """Row vector times matrix."""
    return matvec(transpose(m), v, field) if m else ()


def matmul(a, b, field: Field) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col, field) for col in bt) for row in a)


def rref(rows: Iterable[Sequence], field: Field, ncols: int | None = None):
    """Reduced row echelon form.

    Returns ``(basis, pivots)`` where ``basis`` holds only the nonzero rows.
    """
    work = [list(map(field, r)) for r in rows]
    if ncols is None:
        ncols = len(work[0]) if work else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(work)) if work[i][c]), None)
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        inv = field.one / work[r][c]
        work[r] = [x * inv if x else x for x in work[r]]
        for i in range(len(work)):
            if i != r and work[i][c]:
                fac = work[i][c]
                work[i] = [x - fac * y if y else x for x, y in zip(work[i], work[r])]
        pivots.append(c)
        r += 1
        if r == len(work):
            break
    return tuple(tuple(row) for row in work[:r]), tuple(pivots)


def rank(m: Sequence[Sequence], field: Field) -> int:
    return len(rref(m, field)[0])


def kernel(m: Sequence[Sequence], field: Field, ncols: int | None = None) -> "Subspace":
    """Null space ``{v : m v = 0}``."""
    if ncols is None:
        if not m:
            raise DimensionMismatch("cannot infer column count of an empty matrix")
        ncols = len(m[0])
    basis, pivots = rref(m, field, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    vecs = []
    for fcol in free:
        v = [field.zero] * ncols
        v[fcol] = field.one
        for row, pc in zip(basis, pivots):
            v[pc] = -row[fcol]
        vecs.append(v)
    return Subspace.span(field, ncols, vecs)


def solve(m: Sequence[Sequence], rhs: Sequence, field: Field):
    """A particular solution of ``m x = rhs``, or ``None`` when inconsistent."""
    if len(m) != len(rhs):
        raise DimensionMismatch("rhs length does not match row count")
    ncols = len(m[0]) if m else 0
    aug = [tuple(row) + (b,) for row, b in zip(m, rhs)]
    basis, pivots = rref(aug, field, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    x = [field.zero] * ncols
    for row, pc in zip(basis, pivots):
        x[pc] = row[ncols]
    return tuple(x)


@dataclass(frozen=True)
class Subspace:
    field: Field
    ambient_dim: int
    basis: tuple
    pivots: tuple

    @classmethod
    def span(cls, field: Field, ambient_dim: int, vectors: Iterable[Sequence]) -> "Subspace":
        vectors = list(vectors)
        for v in vectors:
            if len(v) != ambient_dim:
                raise DimensionMismatch(f"vector of length {len(v)} in ambient dim {ambient_dim}")
        basis, pivots = rref(vectors, field, ambient_dim)
        return cls(field, ambient_dim, basis, pivots)

    @classmethod
    def zero(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, (), ())

    @classmethod
    def full(cls, field: Field, ambient_dim: int) -> "Subspace":
        return cls(field, ambient_dim, identity(field, ambient_dim), tuple(range(ambient_dim)))

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __len__(self):
        return self.dim

    def _check(self, other: "Subspace"):
        self.field.check(other.field)
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(f"{self.ambient_dim} vs {other.ambient_dim}")

    def reduce(self, v: Sequence) -> Vector:
        """Remainder of ``v`` after elimination against the echelon basis."""
        v = list(map(self.field, v))
        for row, pc in zip(self.basis, self.pivots):
            c = v[pc]
            if c:
                v = [a - c * b for a, b in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> Vector:
        """Coordinates of a member ``v`` in the echelon basis."""
        if v not in self:
            raise ValueError("vector is not in the subspace")
        return tuple(self.field(v[pc]) for pc in self.pivots)

    def combination(self, coeffs: Sequence) -> Vector:
        out = [self.field.zero] * self.ambient_dim
        for c, row in zip(coeffs, self.basis):
            if c:
                out = [a + c * b for a, b in zip(out, row)]
        return tuple(out)

    def issubset(self, other: "Subspace") -> bool:
        self._check(other)
        return all(b in other for b in self.basis)

    def __le__(self, other):
        return self.issubset(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.span(self.field, self.ambient_dim, self.basis + other.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        return sum_intersect(self, other)[1]

    def extend(self, vectors: Iterable[Sequence]) -> "Subspace":
        return Subspace.span(self.field, self.ambient_dim, self.basis + tuple(vectors))

    def annihilator(self) -> "Subspace":
        """``{g : g(v) = 0 for v in self}`` in dual coordinates."""
        if not self.basis:
            return Subspace.full(self.field, self.ambient_dim)
        return kernel(self.basis, self.field, self.ambient_dim)

    def complement_pivots(self) -> tuple:
        return tuple(c for c in range(self.ambient_dim) if c not in self.pivots)

    def elements(self):
        """Every vector of the subspace (finite fields only)."""
        if not self.field.is_finite:
            raise ValueError("cannot enumerate a subspace over an infinite field")
        scalars = self.field.elements()
        for coeffs in itertools.product(scalars, repeat=self.dim):
            yield self.combination(coeffs)

    def __repr__(self):
        rows = ", ".join("(" + ", ".join(str(x) for x in r) + ")" for r in self.basis)
        return f"Subspace(dim={self.dim}/{self.ambient_dim}, [{rows}])"


def sum_intersect(a: Subspace, b: Subspace):
    """Return ``(a + b, a ∩ b)``."""
    a._check(b)
    total = a + b
    if not a.basis or not b.basis:
        return total, Subspace.zero(a.field, a.ambient_dim)
    # columns a_1..a_r, -b_1..-b_s; kernel vectors give common elements
    cols = list(a.basis) + [tuple(-x for x in v) for v in b.basis]
    m = transpose(cols)
    ker = kernel(m, a.field, len(cols))
    r = a.dim
    common = [a.combination(k[:r]) for k in ker.basis]
    return total, Subspace.span(a.field, a.ambient_dim, common)

