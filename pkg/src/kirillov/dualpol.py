"""Functionals, subordinate subalgebras and the standard polarization.

All subalgebras, ideals and quotients in the recursion are kept as subspaces
of the ambient algebra; a quotient ``g_i / j_i`` is represented by
preimages containing ``j_i``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .chgroup import ad_exp_matrix
from .exactnum import Field
from .linalg import Subspace, kernel, rank, vec_sub, vecmat
from .liealg import (
    LieAlgebra,
    Subalgebra,
    _space,
    bracket_preimage,
    bracket_span,
    is_subalgebra,
    relative_largest_ideal,
    _echelon_in_order,
    relative_maximal_abelian,
)

__all__ = [
    "Functional",
    "PolarizationLevel",
    "PolarizationChain",
    "ExhaustiveTooLarge",
    "IdentityViolation",
    "bilinear_form",
    "radical",
    "is_subordinate",
    "is_polarizing",
    "annihilator",
    "standard_polarization",
    "standard_polarizations",
    "coadjoint_matrix",
    "check_orbit_identities",
]


class ExhaustiveTooLarge(ValueError):
    pass


class IdentityViolation(AssertionError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class Functional:
    """Row vector ``f`` with ``f(X) = sum f_i X_i``."""

    algebra: LieAlgebra
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", self.algebra.vector(self.coeffs))

    @classmethod
    def dual_basis(cls, g: LieAlgebra, label: str) -> "Functional":
        return cls(g, g.basis_vector(g.basis_labels.index(label)))

    def __call__(self, x: Sequence):
        field = self.algebra.field
        s = field.zero
        for a, b in zip(self.coeffs, x):
            if a and b:
                s = s + a * b
        return s

    def __add__(self, other: "Functional") -> "Functional":
        return Functional(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Functional") -> "Functional":
        return Functional(self.algebra, vec_sub(self.coeffs, other.coeffs))

    @property
    def kernel(self) -> Subspace:
        return kernel([self.coeffs], self.algebra.field, self.algebra.dim)

    def __eq__(self, other):
        return isinstance(other, Functional) and other.algebra is self.algebra and other.coeffs == self.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Functional({', '.join(map(str, self.coeffs))})"


def bilinear_form(f: Functional) -> tuple:
    """``B[i][j] = f([e_i, e_j])``."""
    g = f.algebra
    e = [g.basis_vector(i) for i in range(g.dim)]
    return tuple(tuple(f(g.bracket(e[i], e[j])) for j in range(g.dim)) for i in range(g.dim))


def radical(f: Functional) -> Subspace:
    """``{X : f([X, g]) = 0}``."""
    g = f.algebra
    return kernel(bilinear_form(f), g.field, g.dim) if g.dim else g.full()


def is_subordinate(f: Functional, h) -> bool:
    g = f.algebra
    basis = _space(h).basis
    return all(not f(g.bracket(x, y)) for i, x in enumerate(basis) for y in basis[i + 1:])


def annihilator(r) -> Subspace:
    return _space(r).annihilator()


def _subspaces_containing(base: Subspace):
    """Every subspace ``W ⊇ base`` (finite field), via RREF in the quotient."""
    field = base.field
    free = base.complement_pivots()
    k = len(free)
    scalars = field.elements()
    zero, one = field.zero, field.one
    for rk in range(k + 1):
        for piv in itertools.combinations(range(k), rk):
            slots = [(r, c) for r, pc in enumerate(piv) for c in range(pc + 1, k) if c not in piv]
            for vals in itertools.product(scalars, repeat=len(slots)):
                rows = [[zero] * k for _ in range(rk)]
                for r, pc in enumerate(piv):
                    rows[r][pc] = one
                for (r, c), v in zip(slots, vals):
                    rows[r][c] = v
                lifted = []
                for row in rows:
                    vec = [zero] * base.ambient_dim
                    for c, v in zip(free, row):
                        vec[c] = v
                    lifted.append(vec)
                yield base.extend(lifted)


def is_polarizing(f: Functional, r, mode: str = "dimension", max_dim: int = 5) -> bool:
    """Is ``r`` a maximal ``f``-subordinate subalgebra?

    ``dimension``: ``dim r == dim g - rank(B_f)/2``.  ``exhaustive`` (F_p only):
    no subalgebra strictly containing ``r`` is subordinate.
    """
    g = f.algebra
    space = _space(r)
    if not (is_subalgebra(g, space) and is_subordinate(f, space)):
        return False
    if mode == "dimension":
        return 2 * space.dim == 2 * g.dim - rank(bilinear_form(f), g.field)
    if mode != "exhaustive":
        raise ValueError(f"unknown mode {mode!r}")
    if not g.field.is_finite or g.dim > max_dim:
        raise ExhaustiveTooLarge(f"exhaustive mode needs F_p and dim <= {max_dim}")
    for w in _subspaces_containing(space):
        if w.dim > space.dim and is_subalgebra(g, w) and is_subordinate(f, w):
            return False
    return True


@dataclass(frozen=True)
class PolarizationLevel:
    algebra: Subspace  # g_i
    ideal: Subspace  # j_i, largest ideal of g_i in ker f
    center: Subspace  # preimage of z(g_i / j_i)
    abelian: Subspace | None  # preimage of a_i; None on the last level


@dataclass(frozen=True)
class PolarizationChain:
    functional: Functional
    levels: tuple
    r: Subspace
    order: tuple | None = dc_field(default=None, compare=False)

    @property
    def grade(self) -> int:
        return len(self.levels) - 1

    @property
    def subalgebra(self) -> Subalgebra:
        return Subalgebra(self.functional.algebra, self.r)


def standard_polarization(
    f: Functional, order: Sequence[int] | None = None, start=None
) -> PolarizationChain:
    """Run the recursion: largest ideal in ``ker f``, maximal abelian
    subalgebra of ``z_2`` of the quotient, centralizer, repeat.

    ``order`` fixes the tie-break for the maximal abelian choice;
    ``start`` begins from a subalgebra other than ``g``.
    """
    g = f.algebra
    gi = g.full() if start is None else _space(start)
    kf = f.kernel
    levels = []
    while True:
        j = relative_largest_ideal(g, gi, kf)
        z1 = bracket_preimage(g, gi, gi, j)
        if bracket_span(g, gi, gi).issubset(j):
            levels.append(PolarizationLevel(gi, j, z1, None))
            break
        a = relative_maximal_abelian(g, gi, j, order)
        levels.append(PolarizationLevel(gi, j, z1, a))
        gi = bracket_preimage(g, gi, a, j)
    return PolarizationChain(f, tuple(levels), gi, None if order is None else tuple(order))


def _basis_key(s: Subspace):
    return tuple(tuple(str(c) for c in row) for row in s.basis)


def _greedy_picks(c: Subspace, a: Subspace) -> set:
    """Every extension ``a + <v>`` the greedy step can take over all
    coordinate orders.

    An order fixes a pivot set ``S`` of ``c`` and a first pivot ``s`` in
    ``S``; every basis ``S`` of the column matroid and every ``s`` in it
    arises this way, so enumerate those pairs instead of the permutations.
    """
    n, k = c.ambient_dim, c.dim
    out = set()
    for cols in itertools.combinations(range(n), k):
        order = list(cols) + [j for j in range(n) if j not in cols]
        rows = _echelon_in_order(c, order)
        if any(not row[j] for row, j in zip(rows, cols)):
            continue  # cols is not a pivot set of c
        for row in rows:
            if row not in a:
                out.add(a.extend([row]))
    return out


def _abelian_choices(g: LieAlgebra, gi: Subspace, j: Subspace) -> list[Subspace]:
    """Maximal abelian preimages in ``z_2(gi/j)`` reachable by the greedy
    extension under some coordinate precedence."""
    z1 = bracket_preimage(g, gi, gi, j)
    z2 = bracket_preimage(g, gi, gi, z1)
    found, seen, stack = [], {z1}, [z1]
    while stack:
        a = stack.pop()
        c = bracket_preimage(g, z2, a, j)
        if c == a:
            found.append(a)
            continue
        nxt = {c} if c.dim == a.dim + 1 else _greedy_picks(c, a)
        for b in sorted(nxt, key=_basis_key):
            if b not in seen:
                seen.add(b)
                stack.append(b)
    return sorted(found, key=_basis_key)


def standard_polarizations(f: Functional, start=None) -> list[PolarizationChain]:
    """Every chain reachable by varying the maximal abelian tie-break
    (coordinate precedence) independently at each choice."""
    g = f.algebra
    kf = f.kernel
    out = []

    def walk(gi, levels):
        j = relative_largest_ideal(g, gi, kf)
        z1 = bracket_preimage(g, gi, gi, j)
        if bracket_span(g, gi, gi).issubset(j):
            out.append(PolarizationChain(f, tuple(levels + [PolarizationLevel(gi, j, z1, None)]), gi))
            return
        for a in _abelian_choices(g, gi, j):
            walk(bracket_preimage(g, gi, a, j), levels + [PolarizationLevel(gi, j, z1, a)])

    walk(g.full() if start is None else _space(start), [])
    return out


def coadjoint_matrix(x_log: Sequence, g: LieAlgebra) -> tuple:
    """Matrix ``M`` with ``Ad*(exp x) f = f M`` on row vectors."""
    return ad_exp_matrix(tuple(-c for c in x_log), g)


def _in_perp(h: Sequence, r: Subspace, field: Field) -> bool:
    return all(not sum((a * b for a, b in zip(h, v)), field.zero) for v in r.basis)


@dataclass
class OrbitIdentityReport:
    functional: Functional
    checked: int = 0
    stabilizer_size: int | None = None
    orbit_size: int | None = None
    converse_checked: int = 0
    ok: bool = True


def check_orbit_identities(
    f: Functional,
    pc: PolarizationChain,
    samples: int = 100,
    rng: random.Random | None = None,
    backend=None,
) -> OrbitIdentityReport:
    """Check ``R = {x : Ad*(x)f - f ∈ r^⊥}`` and ``Ad*(R)f = f + r^⊥``.

    Finite fields: full enumeration of the group.  Over Q: ``samples``
    random elements of ``r`` (must land in ``r^⊥``) and of ``g`` outside
    ``r`` (must not).
    """
    g = f.algebra
    field = g.field
    r = pc.r
    report = OrbitIdentityReport(f)
    if field.is_finite:
        _finite_orbit_identities(f, r, report, backend)
        return report
    rng = rng or random.Random(0)
    for _ in range(samples):
        coeffs = [Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(r.dim)]
        xv = r.combination([field(c) for c in coeffs])
        h = vec_sub(vecmat(f.coeffs, coadjoint_matrix(xv, g), field), f.coeffs)
        report.checked += 1
        if not _in_perp(h, r, field):
            raise IdentityViolation("Ad*(x)f - f not in r^perp for x in R", xv)
    if r.dim < g.dim:
        for _ in range(samples):
            xv = tuple(field(Fraction(rng.randint(-6, 6), rng.randint(1, 4))) for _ in range(g.dim))
            if xv in r:
                continue
            h = vec_sub(vecmat(f.coeffs, coadjoint_matrix(xv, g), field), f.coeffs)
            report.converse_checked += 1
            if _in_perp(h, r, field):
                raise IdentityViolation("Ad*(x)f - f in r^perp for x outside R", xv)
    return report


def _finite_orbit_identities(f, r, report, backend):
    from .finite import FiniteBackend, to_ints

    g = f.algebra
    be = backend or FiniteBackend(g)
    p, n = be.p, be.n
    fv = to_ints([f.coeffs], p, n)[0]
    moved = be.coadjoint_act(fv)
    rb = to_ints(r.basis, p, n)
    ann = to_ints(annihilator(r).basis, p, n)
    inside = ~(((moved - fv) @ rb.T) % p).any(axis=1) if r.dim else np.ones(be.size, dtype=bool)
    in_r = be.members(ann)
    report.checked = be.size
    bad = np.flatnonzero(inside != in_r)
    if bad.size:
        raise IdentityViolation("stabilizer-mod-perp set differs from R", tuple(be.vectors[bad[0]]))
    orbit_pts = set(be.encode(moved[inside]).tolist())
    expected = set(be.encode(be.vectors[be.span_indices(ann)] + fv).tolist())
    if orbit_pts != expected:
        raise IdentityViolation("Ad*(R)f differs from f + r^perp", min(orbit_pts ^ expected))
    report.stabilizer_size = int(inside.sum())
    report.orbit_size = len(orbit_pts)
