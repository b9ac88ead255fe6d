"""Nilpotent Lie algebras given by structure constants on a fixed basis."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterable, Sequence

from .exactnum import Field, FieldMismatch, field_from_spec
from .linalg import Subspace, kernel, rref, transpose

__all__ = [
    "LieAlgebra",
    "Subalgebra",
    "Ideal",
    "NotAnIdeal",
    "InvalidAlgebra",
    "bracket",
    "bracket_preimage",
    "lower_central_series",
    "upper_central_series",
    "center",
    "derived_subalgebra",
    "centralizer",
    "maximal_abelian_in_z2",
    "largest_ideal_in",
    "quotient",
    "is_subalgebra",
    "is_ideal",
    "load_algebra",
    "algebra_from_dict",
]


class InvalidAlgebra(ValueError):
    pass


class NotAnIdeal(ValueError):
    pass


class LieAlgebra:
    """Finite-dimensional nilpotent Lie algebra.

    ``brackets`` maps ``(i, j)`` with ``i < j`` to ``{k: c}`` meaning
    ``[e_i, e_j] = sum_k c e_k``; the remaining entries follow from
    antisymmetry.  Construction validates the Jacobi identity and nilpotency,
    and over F_p insists on nilpotency class < p.
    """

    def __init__(
        self,
        field: Field,
        dim: int,
        brackets: dict | None = None,
        basis: Sequence[str] | None = None,
        name: str = "",
        validate: bool = True,
    ):
        self.field = field
        self.dim = dim
        self.name = name
        self.basis_labels = tuple(basis) if basis is not None else tuple(f"e{i + 1}" for i in range(dim))
        if len(self.basis_labels) != dim:
            raise InvalidAlgebra("basis label count does not match dim")
        self._table: dict[tuple[int, int], tuple] = {}
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < j < dim):
                raise InvalidAlgebra(f"bracket index pair ({i}, {j}) must satisfy 0 <= i < j < dim")
            row = tuple((k, field(c)) for k, c in sorted(coeffs.items()) if field(c))
            if row:
                self._table[(i, j)] = row
                self._table[(j, i)] = tuple((k, -c) for k, c in row)
        if validate:
            self.validate()
        self.nilpotency_class = self._compute_class()
        if field.is_finite and self.nilpotency_class >= field.characteristic:
            raise InvalidAlgebra(
                f"class {self.nilpotency_class} is not below p={field.characteristic}"
            )

    # -- vectors ---------------------------------------------------------
    def zero(self) -> tuple:
        return (self.field.zero,) * self.dim

    def basis_vector(self, i: int) -> tuple:
        z, o = self.field.zero, self.field.one
        return tuple(o if k == i else z for k in range(self.dim))

    def vector(self, coords: Iterable) -> tuple:
        v = tuple(self.field(c) for c in coords)
        if len(v) != self.dim:
            raise ValueError(f"expected {self.dim} coordinates, got {len(v)}")
        return v

    def full(self) -> Subspace:
        return Subspace.full(self.field, self.dim)

    def span(self, vectors: Iterable[Sequence]) -> Subspace:
        return Subspace.span(self.field, self.dim, vectors)

    def span_labels(self, *labels: str) -> Subspace:
        return self.span(self.basis_vector(self.basis_labels.index(l)) for l in labels)

    def parse_vector(self, text: str) -> tuple:
        """Parse ``"e1 + 1/2 e3 - e4"`` or a comma list of coordinates."""
        text = text.strip()
        if "," in text or re.fullmatch(r"[-+]?\d+(/\d+)?", text):
            return self.vector(self.field.parse(t) for t in text.split(","))
        out = list(self.zero())
        labels = sorted(self.basis_labels, key=len, reverse=True)
        pattern = r"([+-]?)\s*([0-9]+(?:/[0-9]+)?)?\s*\*?\s*(" + "|".join(map(re.escape, labels)) + r")"
        pos = 0
        compact = text.replace(" ", "")
        for m in re.finditer(pattern, compact):
            if m.start() != pos:
                raise ValueError(f"cannot parse vector {text!r}")
            pos = m.end()
            sign, coef, label = m.groups()
            c = self.field(Fraction(coef)) if coef else self.field.one
            if sign == "-":
                c = -c
            k = self.basis_labels.index(label)
            out[k] = out[k] + c
        if pos != len(compact) or not compact:
            raise ValueError(f"cannot parse vector {text!r}")
        return tuple(out)

    def format_vector(self, v: Sequence, dual: bool = False) -> str:
        """``e1+e2+1/2 e3``; with ``dual`` the labels become ``e1*``, ``e2*``, ..."""
        terms = []
        for c, label in zip(v, self.basis_labels):
            label = label + "*" if dual else label
            c = self.field(c)
            if not c:
                continue
            if self.field.is_finite:
                s = str(c.residue)
                neg = False
            else:
                neg = c < 0
                s = str(abs(c))
            body = label if s == "1" else f"{s} {label}"
            if not terms:
                terms.append(("-" if neg else "") + body)
            else:
                terms.append(("-" if neg else "+") + body)
        return "".join(terms) if terms else "0"

    # -- bracket ---------------------------------------------------------
    def bracket_basis(self, i: int, j: int) -> tuple:
        return self._table.get((i, j), ())

    def bracket(self, x: Sequence, y: Sequence) -> tuple:
        out = [self.field.zero] * self.dim
        nzx = [(i, a) for i, a in enumerate(x) if a]
        nzy = [(j, b) for j, b in enumerate(y) if b]
        for i, a in nzx:
            for j, b in nzy:
                row = self._table.get((i, j))
                if row:
                    ab = a * b
                    for k, c in row:
                        out[k] = out[k] + ab * c
        return tuple(out)

    def ad_matrix(self, x: Sequence) -> tuple:
        """Matrix of ``ad(x)``: column ``j`` is ``[x, e_j]``."""
        cols = [self.bracket(x, self.basis_vector(j)) for j in range(self.dim)]
        return transpose(cols) if cols else ()

    def structure_constant(self, i: int, j: int, k: int):
        for kk, c in self._table.get((i, j), ()):
            if kk == k:
                return c
        return self.field.zero

    # -- validation ------------------------------------------------------
    def validate(self) -> None:
        """Assert antisymmetry and the Jacobi identity on all basis triples."""
        n = self.dim
        for i in range(n):
            if self._table.get((i, i)):
                raise InvalidAlgebra(f"[e{i},e{i}] != 0")
            for j in range(n):
                a = dict(self._table.get((i, j), ()))
                b = dict(self._table.get((j, i), ()))
                if any(a.get(k, 0) + b.get(k, 0) for k in set(a) | set(b)):
                    raise InvalidAlgebra(f"antisymmetry fails for ({i}, {j})")
        e = [self.basis_vector(i) for i in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                xy = self.bracket(e[i], e[j])
                for k in range(j + 1, n):
                    s = [
                        self.bracket(xy, e[k]),
                        self.bracket(self.bracket(e[j], e[k]), e[i]),
                        self.bracket(self.bracket(e[k], e[i]), e[j]),
                    ]
                    if any(a + b + c for a, b, c in zip(*s)):
                        raise InvalidAlgebra(f"Jacobi identity fails on ({i}, {j}, {k})")

    def _compute_class(self) -> int:
        series = lower_central_series(self)
        if series[-1].dim != 0:
            raise InvalidAlgebra("algebra is not nilpotent")
        return max(len(series) - 1, 1) if self.dim else 1

    # -- serialization ---------------------------------------------------
    def to_dict(self) -> dict:
        brackets = []
        for (i, j), row in sorted(self._table.items()):
            if i < j:
                brackets.append(
                    {"i": i, "j": j, "coeffs": {str(k): _scalar_text(self.field, c) for k, c in row}}
                )
        return {
            "name": self.name,
            "field": self.field.to_spec(),
            "dim": self.dim,
            "basis": list(self.basis_labels),
            "brackets": brackets,
        }

    def __repr__(self):
        return f"LieAlgebra({self.name or '?'}, dim={self.dim}, field={self.field}, class={self.nilpotency_class})"


def _scalar_text(field: Field, c) -> str:
    return field.format(c) if field.is_finite else str(c)


def algebra_from_dict(data: dict) -> LieAlgebra:
    field = field_from_spec(data["field"])
    dim = int(data["dim"])
    brackets: dict = {}
    for entry in data.get("brackets", []):
        i, j = int(entry["i"]), int(entry["j"])
        if not i < j:
            raise InvalidAlgebra(f"bracket entry requires i < j, got ({i}, {j})")
        if (i, j) in brackets:
            raise InvalidAlgebra(f"duplicate bracket entry ({i}, {j})")
        brackets[(i, j)] = {int(k): field.parse(str(v)) for k, v in entry["coeffs"].items()}
    return LieAlgebra(field, dim, brackets, basis=data.get("basis"), name=data.get("name", ""))


def load_algebra(path) -> LieAlgebra:
    return algebra_from_dict(json.loads(Path(path).read_text()))


@dataclass(frozen=True, eq=False, repr=False)
class Subalgebra:
    algebra: LieAlgebra
    space: Subspace

    def __post_init__(self):
        if not is_subalgebra(self.algebra, self.space):
            raise ValueError("space is not closed under the bracket")

    def __eq__(self, other):
        return isinstance(other, Subalgebra) and other.algebra is self.algebra and other.space == self.space

    def __hash__(self):
        return hash(self.space)

    @property
    def dim(self):
        return self.space.dim

    def __contains__(self, v):
        return v in self.space

    def __repr__(self):
        rows = ", ".join(self.algebra.format_vector(v) for v in self.space.basis)
        return f"{type(self).__name__}({self.algebra.name or '?'}: span({rows}))"


@dataclass(frozen=True, eq=False, repr=False)
class Ideal(Subalgebra):
    def __post_init__(self):
        if not is_ideal(self.algebra, self.space):
            raise NotAnIdeal("space is not an ideal")


def bracket(x: Sequence, y: Sequence, g: LieAlgebra) -> tuple:
    if len(x) != g.dim or len(y) != g.dim:
        raise ValueError("vector length does not match algebra dimension")
    for v in (x, y):
        for c in v:
            if not isinstance(c, int):
                g.field(c)  # raises FieldMismatch for foreign scalars
    return g.bracket(x, y)


def _space(s) -> Subspace:
    return s.space if isinstance(s, Subalgebra) else s


def bracket_preimage(g: LieAlgebra, u, w, v) -> Subspace:
    """``{X in u : [X, w] ⊆ v}`` for subspaces ``u, w, v`` of ``g``."""
    u, w, v = _space(u), _space(w), _space(v)
    if not u.basis:
        return u
    ann = v.annihilator().basis
    rows = []
    for wb in w.basis:
        images = [g.bracket(ub, wb) for ub in u.basis]
        for phi in ann:
            rows.append(tuple(_dot(phi, img, g.field) for img in images))
    if not rows:
        return u
    sol = kernel(rows, g.field, u.dim)
    return g.span(u.combination(c) for c in sol.basis)


def _dot(a, b, field):
    s = field.zero
    for x, y in zip(a, b):
        if x and y:
            s = s + x * y
    return s


def bracket_span(g: LieAlgebra, a, b) -> Subspace:
    """``[a, b]`` as a subspace."""
    a, b = _space(a), _space(b)
    return g.span(g.bracket(x, y) for x in a.basis for y in b.basis)


def is_subalgebra(g: LieAlgebra, s) -> bool:
    s = _space(s)
    return all(g.bracket(x, y) in s for i, x in enumerate(s.basis) for y in s.basis[i + 1:])


def is_ideal(g: LieAlgebra, s) -> bool:
    s = _space(s)
    return all(g.bracket(g.basis_vector(i), y) in s for i in range(g.dim) for y in s.basis)


def lower_central_series(g: LieAlgebra) -> list[Subspace]:
    """``g = C^1 ⊇ C^2 = [g, g] ⊇ ...`` down to the first repeated term."""
    series = [g.full()]
    while series[-1].dim:
        nxt = bracket_span(g, g.full(), series[-1])
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def center(g: LieAlgebra) -> Ideal:
    return Ideal(g, bracket_preimage(g, g.full(), g.full(), Subspace.zero(g.field, g.dim)))


def upper_central_series(g: LieAlgebra) -> list[Ideal]:
    """``[z^1, z^2, ..., z^l = g]`` with ``z^{i+1}/z^i`` the center of ``g/z^i``."""
    full = g.full()
    current = Subspace.zero(g.field, g.dim)
    out = []
    while current != full:
        nxt = bracket_preimage(g, full, full, current)
        if nxt == current:
            raise InvalidAlgebra("upper central series stalls: algebra is not nilpotent")
        out.append(Ideal(g, nxt))
        current = nxt
    if not out:
        out.append(Ideal(g, full))
    return out


def derived_subalgebra(g: LieAlgebra) -> Ideal:
    return Ideal(g, bracket_span(g, g.full(), g.full()))


def centralizer(g: LieAlgebra, s, within=None) -> Subalgebra:
    """``{X in within : [X, s] = 0}``; ``within`` defaults to ``g``."""
    within = g.full() if within is None else _space(within)
    return Subalgebra(g, bracket_preimage(g, within, s, Subspace.zero(g.field, g.dim)))


def _echelon_in_order(space: Subspace, order: Sequence[int] | None) -> tuple:
    """Echelon basis of ``space`` with pivot precedence given by ``order``."""
    if order is None:
        return space.basis
    perm = list(order)
    rows = [tuple(v[c] for c in perm) for v in space.basis]
    basis, _ = rref(rows, space.field, space.ambient_dim)
    inv = [0] * len(perm)
    for pos, c in enumerate(perm):
        inv[c] = pos
    return tuple(tuple(row[inv[c]] for c in range(len(perm))) for row in basis)


def relative_maximal_abelian(
    g: LieAlgebra, ambient, ideal, order: Sequence[int] | None = None
) -> Subspace:
    """Maximal abelian subalgebra of ``z_2(ambient/ideal)``, as a preimage.

    Greedy: start from the preimage of the center and add the first echelon
    vector (in ``order``) of the relative centralizer until it stabilizes.
    """
    ambient, ideal = _space(ambient), _space(ideal)
    z1 = bracket_preimage(g, ambient, ambient, ideal)
    z2 = bracket_preimage(g, ambient, ambient, z1)
    a = z1
    while True:
        c = bracket_preimage(g, z2, a, ideal)
        if c == a:
            return a
        pick = next(v for v in _echelon_in_order(c, order) if v not in a)
        a = a.extend([pick])


def maximal_abelian_in_z2(g: LieAlgebra, order: Sequence[int] | None = None) -> Subalgebra:
    """Maximal abelian subalgebra of ``z_2(g)`` containing the center.

    Deterministic: extends greedily over the echelon basis in pivot order,
    or in the coordinate precedence ``order`` when given.
    """
    zero = Subspace.zero(g.field, g.dim)
    return Subalgebra(g, relative_maximal_abelian(g, g.full(), zero, order))


def relative_largest_ideal(g: LieAlgebra, ambient, s) -> Subspace:
    """Largest ideal of the subalgebra ``ambient`` contained in ``s``."""
    ambient = _space(ambient)
    j = ambient & _space(s)
    while True:
        nxt = bracket_preimage(g, j, ambient, j)
        if nxt == j:
            return j
        j = nxt


def largest_ideal_in(g: LieAlgebra, s) -> Ideal:
    """The unique maximal ideal of ``g`` inside the subspace ``s``."""
    return Ideal(g, relative_largest_ideal(g, g.full(), s))


def quotient(g: LieAlgebra, j) -> tuple[LieAlgebra, Callable]:
    """``g/j`` on the non-pivot coordinates of ``j`` plus the projection map."""
    space = _space(j)
    if not is_ideal(g, space):
        raise NotAnIdeal("quotient requires an ideal")
    keep = space.complement_pivots()

    def project(v: Sequence) -> tuple:
        r = space.reduce(v)
        return tuple(r[c] for c in keep)

    brackets = {}
    for a, i in enumerate(keep):
        for b in range(a + 1, len(keep)):
            img = project(g.bracket(g.basis_vector(i), g.basis_vector(keep[b])))
            coeffs = {k: c for k, c in enumerate(img) if c}
            if coeffs:
                brackets[(a, b)] = coeffs
    q = LieAlgebra(
        g.field,
        len(keep),
        brackets,
        basis=[g.basis_labels[c] for c in keep],
        name=f"{g.name}/ideal" if g.name else "",
    )
    return q, project


def check_same_field(*algebras: LieAlgebra) -> None:
    f = algebras[0].field
    for a in algebras[1:]:
        if a.field != f:
            raise FieldMismatch(f"{f} vs {a.field}")
