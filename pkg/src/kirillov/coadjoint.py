"""Coadjoint action and coadjoint orbits."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .chgroup import GroupElement, ad_exp
from .exactnum import FieldMismatch
from .dualpol import Functional, bilinear_form
from .finite import DEFAULT_BOUND, FiniteBackend
from .linalg import rank
from .liealg import LieAlgebra

__all__ = [
    "BackendUnsupported",
    "CoadjointOrbit",
    "coadjoint_act",
    "orbit",
    "orbit_partition",
    "partition_summary",
]


class BackendUnsupported(ValueError):
    pass


@dataclass(frozen=True)
class CoadjointOrbit:
    """A coadjoint orbit.

    Over F_p ``points`` holds every functional (coordinate tuples of ints,
    sorted); over Q only ``tangent_dim`` is available.
    """

    representative: Functional
    backend: str
    points: tuple | None = None
    tangent_dim: int | None = None

    @property
    def size(self) -> int:
        if self.points is None:
            raise BackendUnsupported("orbit over Q is infinite")
        return len(self.points)

    def __contains__(self, f) -> bool:
        if self.points is None:
            raise BackendUnsupported("membership is only decidable on finite backends")
        coeffs = f.coeffs if isinstance(f, Functional) else f
        return tuple(int(c) for c in coeffs) in self._point_set

    @cached_property
    def _point_set(self):
        return frozenset(self.points)


def coadjoint_act(x: GroupElement, f: Functional) -> Functional:
    """``Ad*(x) f = f ∘ Ad(x^-1)``."""
    g = f.algebra
    if x.algebra is not g:
        if x.algebra.field != g.field:
            raise FieldMismatch(f"{x.algebra.field} vs {g.field}")
        raise ValueError("element and functional live on different algebras")
    neg = tuple(-c for c in x.log)
    return Functional(g, tuple(f(ad_exp(neg, g.basis_vector(j), g)) for j in range(g.dim)))


def _finite_orbit(f: Functional, be: FiniteBackend) -> CoadjointOrbit:
    fv = np.array([int(c) for c in f.coeffs], dtype=np.int64)
    pts = np.unique(be.encode(be.coadjoint_act(fv)))
    points = tuple(tuple(int(c) for c in be.vectors[k]) for k in pts)
    return CoadjointOrbit(f, "finite", points=points)


def orbit(f: Functional, backend: FiniteBackend | None = None, bound: int = DEFAULT_BOUND) -> CoadjointOrbit:
    g = f.algebra
    if g.field.is_finite:
        return _finite_orbit(f, backend or FiniteBackend(g, bound))
    return CoadjointOrbit(f, "rational", tangent_dim=rank(bilinear_form(f), g.field))


def orbit_partition(
    g: LieAlgebra, bound: int = DEFAULT_BOUND, backend: FiniteBackend | None = None
) -> list[CoadjointOrbit]:
    """All coadjoint orbits of a finite CH group, ordered by least point."""
    if not g.field.is_finite:
        raise BackendUnsupported("orbit partition requires F_p")
    be = backend or FiniteBackend(g, bound)
    seen = np.zeros(be.size, dtype=bool)
    out = []
    for k in range(be.size):
        if seen[k]:
            continue
        f = Functional(g, tuple(int(c) for c in be.vectors[k]))
        orb = _finite_orbit(f, be)
        seen[be.encode(np.array(orb.points, dtype=np.int64).reshape(-1, be.n))] = True
        out.append(orb)
    return out


def partition_summary(orbits: list[CoadjointOrbit]) -> dict:
    hist = Counter(o.size for o in orbits)
    return {
        "orbits": len(orbits),
        "functionals": sum(o.size for o in orbits),
        "size_histogram": {str(k): hist[k] for k in sorted(hist)},
    }
