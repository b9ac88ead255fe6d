"""Brute-force characters of finite CH groups over F_p.

Character values are exact elements of Q(zeta_p); see :class:`Cyclotomic`.
"""
from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .coadjoint import CoadjointOrbit, orbit_partition
from .dualpol import Functional, PolarizationChain, annihilator, is_subordinate, standard_polarization, standard_polarizations
from .finite import DEFAULT_BOUND, FiniteBackend, to_ints
from .liealg import LieAlgebra, is_subalgebra

__all__ = [
    "Cyclotomic",
    "FiniteGroupTable",
    "ClassFunction",
    "NotASubgroup",
    "TableMismatch",
    "AuditFailure",
    "AuditReport",
    "build_table",
    "induced_character",
    "trivial_character",
    "inner_product",
    "orbit_sum_character",
    "kirillov_audit",
    "character_table",
    "character_table_csv",
]


class NotASubgroup(ValueError):
    pass


class TableMismatch(ValueError):
    pass


class AuditFailure(AssertionError):
    def __init__(self, clause: str, witness):
        super().__init__(f"audit clause {clause} failed: {witness}")
        self.clause = clause
        self.witness = witness


class Cyclotomic:
    """``sum_a c_a zeta^a`` in Q(zeta_p), with ``p`` rational coordinates.

    The coordinate of ``zeta^(p-1)`` is normalized to zero using
    ``1 + zeta + ... + zeta^(p-1) = 0``, which makes equality structural.
    """

    __slots__ = ("p", "coords")

    def __init__(self, p: int, coords):
        coords = [Fraction(c) for c in coords]
        if len(coords) != p:
            raise ValueError(f"need {p} coordinates")
        top = coords[-1]
        self.p = p
        self.coords = tuple(c - top for c in coords)

    @classmethod
    def rational(cls, p: int, q) -> "Cyclotomic":
        return cls(p, [q] + [0] * (p - 1))

    @classmethod
    def root(cls, p: int, a: int, scale=1) -> "Cyclotomic":
        c = [0] * p
        c[a % p] = scale
        return cls(p, c)

    def _check(self, other):
        if not isinstance(other, Cyclotomic):
            return Cyclotomic.rational(self.p, other)
        if other.p != self.p:
            raise ValueError("different cyclotomic fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return Cyclotomic(self.p, [a + b for a, b in zip(self.coords, other.coords)])

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return Cyclotomic(self.p, [a - b for a, b in zip(self.coords, other.coords)])

    def __neg__(self):
        return Cyclotomic(self.p, [-a for a in self.coords])

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.p, [a * other for a in self.coords])
        other = self._check(other)
        p = self.p
        out = [Fraction(0)] * p
        for i, a in enumerate(self.coords):
            if a:
                for j, b in enumerate(other.coords):
                    if b:
                        out[(i + j) % p] += a * b
        return Cyclotomic(p, out)

    __rmul__ = __mul__

    def __truediv__(self, q):
        return Cyclotomic(self.p, [a / q for a in self.coords])

    def conjugate(self) -> "Cyclotomic":
        return Cyclotomic(self.p, [self.coords[-i % self.p] for i in range(self.p)])

    def is_rational(self) -> bool:
        return not any(self.coords[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coords[0]

    def __complex__(self):
        z = complex(math.cos(2 * math.pi / self.p), math.sin(2 * math.pi / self.p))
        return sum(float(c) * z**a for a, c in enumerate(self.coords))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Cyclotomic.rational(self.p, other)
        if not isinstance(other, Cyclotomic):
            return NotImplemented
        return self.p == other.p and self.coords == other.coords

    def __hash__(self):
        return hash((self.p, self.coords))

    def __str__(self):
        terms = []
        for a, c in enumerate(self.coords):
            if not c:
                continue
            mono = "" if a == 0 else ("z" if a == 1 else f"z^{a}")
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return first + "".join(f" {s} {b}" for s, b in terms[1:])

    def __repr__(self):
        return f"Cyclotomic({self.p}, {str(self)!r})"


@dataclass(eq=False)
class FiniteGroupTable:
    """The finite CH group ``exp(g)`` for ``g`` over F_p.

    Element ``k`` is ``exp(v)`` with ``v = backend.vectors[k]``; classes are
    listed in order of their least element, which is also the representative.
    """

    algebra: LieAlgebra
    backend: FiniteBackend
    class_of: np.ndarray
    classes: list

    @property
    def order(self) -> int:
        return self.backend.size

    @property
    def elements(self) -> np.ndarray:
        return self.backend.vectors

    @property
    def mul_table(self) -> np.ndarray:
        return self.backend.mul_table

    @property
    def representatives(self) -> list[int]:
        return [int(c[0]) for c in self.classes]

    @cached_property
    def center(self) -> np.ndarray:
        return np.array(sorted(int(c[0]) for c in self.classes if len(c) == 1), dtype=np.int64)

    def element(self, k: int) -> tuple:
        return tuple(int(c) for c in self.backend.vectors[k])

    def index(self, v) -> int:
        return int(self.backend.encode(np.array([int(c) for c in v], dtype=np.int64)))


def build_table(g: LieAlgebra, bound: int = DEFAULT_BOUND, backend: FiniteBackend | None = None) -> FiniteGroupTable:
    be = backend or FiniteBackend(g, bound)
    mul, inv = be.mul_table, be.inverse
    xs = np.arange(be.size)
    class_of = np.full(be.size, -1, dtype=np.int64)
    classes = []
    for s in range(be.size):
        if class_of[s] >= 0:
            continue
        conj = np.unique(mul[mul[xs, s], inv[xs]])
        class_of[conj] = len(classes)
        classes.append(conj)
    return FiniteGroupTable(g, be, class_of, classes)


@dataclass(eq=False)
class ClassFunction:
    table: FiniteGroupTable
    values: tuple  # one Cyclotomic per conjugacy class
    label: str = ""
    meta: dict = dc_field(default_factory=dict)

    def __call__(self, k: int) -> Cyclotomic:
        return self.values[int(self.table.class_of[k])]

    @property
    def degree(self) -> Fraction:
        return self.values[int(self.table.class_of[0])].to_fraction()

    def __eq__(self, other):
        return isinstance(other, ClassFunction) and other.table is self.table and other.values == self.values

    def __hash__(self):
        return hash(self.values)


def trivial_character(t: FiniteGroupTable) -> ClassFunction:
    p = t.backend.p
    return ClassFunction(t, tuple(Cyclotomic.rational(p, 1) for _ in t.classes), "trivial")


def induced_character(f: Functional, pc: PolarizationChain, t: FiniteGroupTable) -> ClassFunction:
    """``chi(s) = |R|^-1 sum_{x in G, x^-1 s x in R} eps(f(log(x^-1 s x)))``."""
    g = t.algebra
    if f.algebra is not g or pc.functional.algebra is not g:
        raise NotASubgroup("polarization and table belong to different algebras")
    if not is_subalgebra(g, pc.r):
        raise NotASubgroup("r is not a subalgebra")
    if not is_subordinate(f, pc.r):
        raise ValueError("f is not subordinate to r; phi_f is not a character")
    be = t.backend
    p, n = be.p, be.n
    in_r = be.members(to_ints(annihilator(pc.r).basis, p, n))
    r_idx = np.flatnonzero(in_r)
    if not in_r[be.mul_table[np.ix_(r_idx, r_idx)]].all():
        raise NotASubgroup("exp(r) is not closed under multiplication")
    fv = to_ints([f.coeffs], p, n)[0]
    mul, inv = be.mul_table, be.inverse
    xs = np.arange(be.size)
    size_r = len(r_idx)
    values = []
    for rep in t.representatives:
        conj = mul[mul[inv[xs], rep], xs]
        hit = conj[in_r[conj]]
        phases = (be.vectors[hit] @ fv) % p
        counts = np.bincount(phases, minlength=p)
        values.append(Cyclotomic(p, [Fraction(int(c), size_r) for c in counts]))
    return ClassFunction(t, tuple(values), meta={"index": be.size // size_r})


def inner_product(chi: ClassFunction, psi: ClassFunction, t: FiniteGroupTable | None = None) -> Fraction:
    """``|G|^-1 sum_s chi(s) conj(psi(s))``, exact."""
    t = t or chi.table
    if chi.table is not t or psi.table is not t:
        raise TableMismatch("class functions from different tables")
    total = Cyclotomic.rational(t.backend.p, 0)
    for cls, a, b in zip(t.classes, chi.values, psi.values):
        total = total + (a * b.conjugate()) * len(cls)
    return (total / t.order).to_fraction()


def orbit_sum_character(orb: CoadjointOrbit, t: FiniteGroupTable) -> ClassFunction | None:
    """``|O|^-1/2 sum_{f in O} eps(f(X))``; ``None`` if ``|O|`` is not a square."""
    be = t.backend
    root = math.isqrt(orb.size)
    if root * root != orb.size:
        return None
    pts = np.array(orb.points, dtype=np.int64).reshape(-1, be.n)
    vals = []
    for rep in t.representatives:
        phases = (pts @ be.vectors[rep]) % be.p
        counts = np.bincount(phases, minlength=be.p)
        vals.append(Cyclotomic(be.p, [Fraction(int(c), root) for c in counts]))
    return ClassFunction(t, tuple(vals), "orbit-sum")


CLAUSES = {
    "i": "orbit count equals class count",
    "ii": "induced characters are irreducible",
    "iii": "distinct orbits give distinct characters",
    "iv": "sum of squared degrees equals |G|",
    "v": "independent of the standard polarization chosen",
    "vi": "degree equals [G:R] and orbit size equals [G:R]^2",
    "vii": "central character is phi_f on the center",
}


@dataclass
class AuditReport:
    algebra: str
    p: int
    dim: int
    group_order: int
    orbits: int
    classes: int
    degrees: dict
    sum_d2: int
    clauses: dict
    witnesses: dict
    polarizations_checked: int
    informational: dict

    @property
    def passed(self) -> bool:
        return all(self.clauses.values())

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "algebra": self.algebra,
            "field": {"Fp": self.p},
            "dim": self.dim,
            "group_order": self.group_order,
            "orbits": self.orbits,
            "classes": self.classes,
            "degrees": {str(k): v for k, v in sorted(self.degrees.items())},
            "sum_d2": self.sum_d2,
            "clauses": {k: {"description": CLAUSES[k], "pass": v} for k, v in self.clauses.items()},
            "witnesses": self.witnesses,
            "polarizations_checked": self.polarizations_checked,
            "informational": self.informational,
            "passed": self.passed,
        }


def character_table(g: LieAlgebra, bound: int = DEFAULT_BOUND):
    """``(table, orbits, chains, characters)`` with one character per orbit."""
    be = FiniteBackend(g, bound)
    t = build_table(g, backend=be)
    orbits = orbit_partition(g, backend=be)
    chains, chars = [], []
    for orb in orbits:
        f = orb.representative
        pc = standard_polarization(f)
        chi = induced_character(f, pc, t)
        chi.label = "f=(" + ",".join(str(int(c)) for c in f.coeffs) + ")"
        chains.append(pc)
        chars.append(chi)
    return t, orbits, chains, chars


def kirillov_audit(g: LieAlgebra, bound: int = DEFAULT_BOUND, strict: bool = True) -> AuditReport:
    """Check the orbit/irreducible-character correspondence by brute force.

    With ``strict`` the first failing clause raises :class:`AuditFailure`.
    """
    t, orbits, chains, chars = character_table(g, bound)
    be = t.backend
    p = be.p
    clauses = {k: True for k in CLAUSES}
    witnesses: dict = {}

    def fail(clause, witness):
        if strict:
            raise AuditFailure(clause, witness)
        if clauses[clause]:
            clauses[clause] = False
            witnesses[clause] = str(witness)

    if len(orbits) != len(t.classes):
        fail("i", f"{len(orbits)} orbits vs {len(t.classes)} classes")

    seen: dict = {}
    degrees: Counter = Counter()
    formula_agrees = True
    n_pols = 0
    for orb, pc, chi in zip(orbits, chains, chars):
        f = orb.representative
        if inner_product(chi, chi, t) != 1:
            fail("ii", chi.label)
        if chi.values in seen:
            fail("iii", f"{chi.label} and {seen[chi.values]}")
        seen[chi.values] = chi.label
        d = chi.degree
        degrees[int(d)] += 1
        for alt in standard_polarizations(f):
            n_pols += 1
            if induced_character(f, alt, t) != chi:
                fail("v", f"{chi.label} with r={alt.r.basis}")
        index = be.size // p ** pc.r.dim
        if d != index or orb.size != index * index:
            fail("vi", f"{chi.label}: degree {d}, index {index}, orbit size {orb.size}")
        fv = [int(c) for c in f.coeffs]
        for z in t.center:
            phase = sum(a * int(b) for a, b in zip(fv, be.vectors[z])) % p
            if chi(z) != Cyclotomic.root(p, phase, d):
                fail("vii", f"{chi.label} at central element {t.element(z)}")
        alt_formula = orbit_sum_character(orb, t)
        if alt_formula is None or alt_formula.values != chi.values:
            formula_agrees = False

    sum_d2 = sum(d * d * k for d, k in degrees.items())
    if sum_d2 != t.order:
        fail("iv", f"sum d^2 = {sum_d2} != {t.order}")

    return AuditReport(
        algebra=g.name,
        p=p,
        dim=g.dim,
        group_order=t.order,
        orbits=len(orbits),
        classes=len(t.classes),
        degrees=dict(degrees),
        sum_d2=sum_d2,
        clauses=clauses,
        witnesses=witnesses,
        polarizations_checked=n_pols,
        informational={"orbit_sum_formula_agrees": formula_agrees},
    )


def character_table_csv(g: LieAlgebra, bound: int = DEFAULT_BOUND) -> str:
    """Character table as CSV; values are polynomials in ``z = zeta_p``."""
    t, orbits, chains, chars = character_table(g, bound)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    reps = [g.format_vector(t.element(k)) for k in t.representatives]
    w.writerow(["character", "degree", "orbit_size"] + [f"{r} [{len(c)}]" for r, c in zip(reps, t.classes)])
    for orb, chi in zip(orbits, chars):
        w.writerow([chi.label, str(chi.degree), orb.size] + [str(v) for v in chi.values])
    return buf.getvalue()
