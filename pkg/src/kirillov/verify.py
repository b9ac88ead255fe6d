"""The acceptance suite behind ``kirillov verify-all``.

Each ``criterion_*`` function runs one check from a seeded RNG and returns a
:class:`Outcome`.  Reports contain counts, never timings, so two runs with
the same seed serialize to the same bytes.
"""
from __future__ import annotations

import json
import random
import time
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .chgroup import ch_components, ch_series, matrix_exp, matrix_log, tr0_algebra, tr0_to_matrix
from .coadjoint import coadjoint_act, orbit_partition
from .chgroup import GroupElement
from .corpus import bundled_names, load_bundled
from .dualpol import (
    Functional,
    check_orbit_identities,
    is_polarizing,
    is_subordinate,
    standard_polarization,
    standard_polarizations,
)
from .finite import FiniteBackend
from .finrep import build_table, induced_character, kirillov_audit
from .linalg import matmul
from .liealg import LieAlgebra, derived_subalgebra, upper_central_series

__all__ = ["Outcome", "CRITERIA", "BUDGETS", "run_criterion", "verify_all", "render"]

BUDGETS = {1: 1.0, 2: 5.0, 3: 5.0, 4: 10.0, 5: 30.0, 6: 30.0, 7: 120.0, 8: 30.0}


class CheckFailed(AssertionError):
    pass


@dataclass
class Outcome:
    criterion: int
    title: str
    passed: bool
    detail: dict = dc_field(default_factory=dict)
    witness: str | None = None
    seconds: float = dc_field(default=0.0, compare=False)

    def to_dict(self) -> dict:
        out = {"criterion": self.criterion, "title": self.title, "pass": self.passed, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _require(cond, witness):
    if not cond:
        raise CheckFailed(witness)


def _rand_vector(g: LieAlgebra, rng: random.Random) -> tuple:
    if g.field.is_finite:
        return tuple(g.field(rng.randrange(g.field.characteristic)) for _ in range(g.dim))
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(g.dim))


def _algebras(pred=lambda g: True):
    out = []
    for name in bundled_names():
        g = load_bundled(name)
        if pred(g):
            out.append(g)
    return out


def _small_finite(bound):
    return _algebras(lambda g: g.field.is_finite and g.field.characteristic**g.dim <= bound)


# 1 ---------------------------------------------------------------------------

def criterion_1(rng, samples=100):
    """Z1 = X+Y, Z2 = [X,Y]/2, Z3 = ([X,[X,Y]] + [Y,[Y,X]])/12."""
    pairs = 0
    for g in _algebras():
        field = g.field
        half = field(Fraction(1, 2))
        for _ in range(samples):
            x, y = _rand_vector(g, rng), _rand_vector(g, rng)
            comps = ch_components(x, y, g) + [g.zero()] * 3
            xy = g.bracket(x, y)
            z3 = tuple(a + b for a, b in zip(g.bracket(x, xy), g.bracket(y, g.bracket(y, x))))
            if any(z3):  # over F_3 the class is < 3 and 1/12 is never needed
                z3 = tuple(field(Fraction(1, 12)) * c for c in z3)
            expect = [tuple(a + b for a, b in zip(g.vector(x), g.vector(y))), tuple(half * c for c in xy), z3]
            for k in range(3):
                _require(comps[k] == expect[k], f"{g.name}: Z{k + 1} at x={x}, y={y}")
            pairs += 1
    return {"algebras": len(bundled_names()), "pairs": pairs}


# 2 ---------------------------------------------------------------------------

def criterion_2(rng, samples=50):
    triples, names = 0, []
    for g in _algebras(lambda g: g.nilpotency_class <= 4):
        names.append(g.name)
        for _ in range(samples):
            x, y, w = (_rand_vector(g, rng) for _ in range(3))
            lhs = ch_series(ch_series(x, y, g), w, g)
            rhs = ch_series(x, ch_series(y, w, g), g)
            _require(lhs == rhs, f"{g.name}: x={x}, y={y}, w={w}")
            triples += 1
    return {"algebras": len(names), "triples": triples}


# 3 ---------------------------------------------------------------------------

def criterion_3(rng, samples=100):
    pairs = roundtrips = 0
    for n in (3, 4, 5):
        g = load_bundled(f"tr0_{n}_q")
        _require(g.to_dict()["brackets"] == tr0_algebra(n, g.field).to_dict()["brackets"], f"tr0_{n} corpus file")
        field = g.field
        for _ in range(samples):
            x, y = _rand_vector(g, rng), _rand_vector(g, rng)
            mx, my = tr0_to_matrix(x, n, field), tr0_to_matrix(y, n, field)
            ex, ey = matrix_exp(mx, field), matrix_exp(my, field)
            z = tr0_to_matrix(ch_series(x, y, g), n, field)
            _require(matrix_exp(z, field) == matmul(ex, ey, field), f"tr0_{n}: x={x}, y={y}")
            _require(matrix_log(ex, field) == mx, f"tr0_{n}: log(exp X) != X at {x}")
            u = tuple(
                tuple(field.one if i == j else (field(Fraction(rng.randint(-9, 9), rng.randint(1, 6))) if j > i else field.zero)
                      for j in range(n))
                for i in range(n)
            )
            _require(matrix_exp(matrix_log(u, field), field) == u, f"tr0_{n}: exp(log U) != U at {u}")
            pairs += 1
            roundtrips += 2
    return {"pairs": pairs, "roundtrips": roundtrips}


# 4 ---------------------------------------------------------------------------

def group_upper_central_series(be: FiniteBackend) -> list[np.ndarray]:
    """Boolean masks of ``Z_1(G) ⊂ Z_2(G) ⊂ ... = G`` from commutators."""
    mul, inv = be.mul_table, be.inverse
    comm = mul[mul[mul, inv[:, None]], inv[None, :]]
    current = np.zeros(be.size, dtype=bool)
    current[0] = True
    out = []
    while not current.all():
        nxt = current[comm].all(axis=1)
        if (nxt == current).all():
            raise CheckFailed("group upper central series stalls")
        out.append(nxt)
        current = nxt
    return out


def group_derived_subgroup(be: FiniteBackend) -> np.ndarray:
    """Mask of the subgroup generated by all commutators."""
    mul, inv = be.mul_table, be.inverse
    comm = mul[mul[mul, inv[:, None]], inv[None, :]]
    members = np.zeros(be.size, dtype=bool)
    members[np.unique(comm)] = True
    members[0] = True
    while True:
        idx = np.flatnonzero(members)
        grown = members.copy()
        grown[np.unique(mul[np.ix_(idx, idx)])] = True
        if (grown == members).all():
            return members
        members = grown


def _mask(be: FiniteBackend, space) -> np.ndarray:
    from .finite import to_ints

    m = np.zeros(be.size, dtype=bool)
    m[be.span_indices(to_ints(space.basis, be.p, be.n))] = True
    return m


def criterion_4(rng):
    detail = {}
    for name in ("heisenberg_f3", "n4_f5"):
        g = load_bundled(name)
        be = FiniteBackend(g)
        groups = group_upper_central_series(be)
        algs = upper_central_series(g)
        _require(len(groups) == len(algs), f"{name}: series lengths {len(groups)} vs {len(algs)}")
        for i, (a, b) in enumerate(zip(groups, algs)):
            _require((a == _mask(be, b.space)).all(), f"{name}: Z_{i + 1}")
        derived = group_derived_subgroup(be)
        _require((derived == _mask(be, derived_subalgebra(g).space)).all(), f"{name}: commutator subgroup")
        detail[name] = {"central_series": [int(m.sum()) for m in groups], "derived": int(derived.sum())}
    return detail


# 5 ---------------------------------------------------------------------------

def _functionals(g: LieAlgebra, rng, samples):
    if g.field.is_finite:
        be = FiniteBackend(g, bound=10**6)
        return [Functional(g, tuple(int(c) for c in v)) for v in be.vectors]
    out = [Functional(g, g.basis_vector(i)) for i in range(g.dim)]
    out += [Functional(g, _rand_vector(g, rng)) for _ in range(samples)]
    return out


def check_chain(f: Functional, pc, exhaustive: bool) -> None:
    kf = f.kernel
    r = pc.r
    m = pc.grade
    for i, lvl in enumerate(pc.levels):
        _require(r.issubset(lvl.algebra), f"{f}: r not inside g_{i}")
        _require(is_subordinate(f, r), f"{f}: r not subordinate at level {i}")
        _require((lvl.center & kf) == lvl.ideal, f"{f}: functional not faithful on the center at level {i}")
        again = standard_polarization(f, order=pc.order, start=lvl.algebra)
        if again.levels != pc.levels[i:]:
            tails = [c for c in standard_polarizations(f, start=lvl.algebra) if c.levels == pc.levels[i:]]
            _require(tails, f"{f}: chain tail from level {i} is not a standard polarization")
            again = tails[0]
        _require(again.grade == m - i and again.r == r, f"{f}: grade at level {i} is {again.grade}, want {m - i}")
    _require(is_polarizing(f, r, "dimension"), f"{f}: dimension criterion fails for r={r.basis}")
    if exhaustive:
        _require(is_polarizing(f, r, "exhaustive"), f"{f}: exhaustive check fails for r={r.basis}")


def criterion_5(rng, samples=20):
    pairs = exhaustive = 0
    grades: dict = {}
    for g in _algebras():
        ex = g.field.is_finite and g.dim <= 5
        for f in _functionals(g, rng, samples):
            pc = standard_polarization(f)
            check_chain(f, pc, ex)
            pairs += 1
            exhaustive += ex
            grades[pc.grade] = grades.get(pc.grade, 0) + 1
    return {"pairs": pairs, "exhaustive": exhaustive, "grades": {str(k): grades[k] for k in sorted(grades)}}


# 6 ---------------------------------------------------------------------------

def criterion_6(rng):
    detail = {}
    for g in _small_finite(243):
        be = FiniteBackend(g)
        count = 0
        for k in range(be.size):
            f = Functional(g, tuple(int(c) for c in be.vectors[k]))
            rep = check_orbit_identities(f, standard_polarization(f), backend=be)
            _require(rep.stabilizer_size * rep.orbit_size == be.size, f"{g.name}: |R|*|f+r^perp| at {f}")
            count += 1
        detail[g.name] = count
    return {"functionals": detail}


# 7 ---------------------------------------------------------------------------

EXPECTED_AUDITS = {
    "heisenberg_f3": {"orbits": 11, "degrees": {1: 9, 3: 2}, "sum_d2": 27},
    "heisenberg_f5": {"orbits": 29, "sum_d2": 125},
    "n4_f5": {"sum_d2": 625},
}


def criterion_7(rng):
    detail = {}
    for name, want in EXPECTED_AUDITS.items():
        rep = kirillov_audit(load_bundled(name), strict=False)
        failed = [k for k, v in rep.clauses.items() if not v]
        _require(not failed, f"{name}: clauses {failed} fail: {rep.witnesses}")
        _require(rep.orbits == rep.classes, f"{name}: {rep.orbits} orbits vs {rep.classes} classes")
        got = {"orbits": rep.orbits, "degrees": rep.degrees, "sum_d2": rep.sum_d2}
        for key, value in want.items():
            _require(got[key] == value, f"{name}: {key} = {got[key]}, want {value}")
        detail[name] = {
            "orbits": rep.orbits,
            "classes": rep.classes,
            "degrees": {str(k): rep.degrees[k] for k in sorted(rep.degrees)},
            "sum_d2": rep.sum_d2,
        }
    return detail


# 8 ---------------------------------------------------------------------------

def criterion_8(rng, name="heisenberg_f3"):
    g = load_bundled(name)
    t = build_table(g)
    cache: dict = {}

    def chi(f):
        if f not in cache:
            cache[f] = induced_character(f, standard_polarization(f), t)
        return cache[f]

    elements = [GroupElement(g, tuple(int(c) for c in v)) for v in t.elements]
    checked = 0
    for v in t.elements:
        f = Functional(g, tuple(int(c) for c in v))
        base = chi(f)
        for x in elements:
            moved = coadjoint_act(x, f)
            _require(chi(moved) == base, f"{name}: f={f}, x={x.log}")
            checked += 1
    return {"pairs": checked, "distinct_functionals": len(cache), "orbits": len(orbit_partition(g))}


CRITERIA = {
    1: ("CH components Z1..Z3", criterion_1),
    2: ("CH associativity", criterion_2),
    3: ("Tr0 matrix oracle and exp/log roundtrips", criterion_3),
    4: ("central series and commutator correspondence", criterion_4),
    5: ("polarization recursion", criterion_5),
    6: ("orbit identities", criterion_6),
    7: ("orbit/character audit", criterion_7),
    8: ("orbit constancy of the induced character", criterion_8),
}


def run_criterion(k: int, seed: int = 0, **kwargs) -> Outcome:
    title, fn = CRITERIA[k]
    rng = random.Random(f"{seed}:{k}")
    start = time.perf_counter()
    try:
        detail = fn(rng, **kwargs)
        out = Outcome(k, title, True, detail)
    except CheckFailed as exc:
        out = Outcome(k, title, False, witness=str(exc))
    out.seconds = time.perf_counter() - start
    return out


def verify_all(seed: int = 0, samples: int = 100) -> list[Outcome]:
    """Criteria 1-8, then 9: rerun under the same seed and compare bytes."""
    kw = {1: {"samples": samples}, 2: {"samples": max(1, samples // 2)}, 3: {"samples": samples}}
    outcomes = [run_criterion(k, seed, **kw.get(k, {})) for k in CRITERIA]
    first = render(outcomes, "json")
    again = render([run_criterion(k, seed, **kw.get(k, {})) for k in CRITERIA], "json")
    same = first == again
    outcomes.append(Outcome(9, "determinism", same, {"bytes": len(first)}, None if same else "reports differ"))
    return outcomes


def render(outcomes: list[Outcome], fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps({"schema": 1, "criteria": [o.to_dict() for o in outcomes]}, indent=2, sort_keys=True) + "\n"
    lines = []
    for o in outcomes:
        status = "PASS" if o.passed else "FAIL"
        info = o.witness if o.witness else json.dumps(o.detail, sort_keys=True)
        lines.append(f"criterion {o.criterion} [{status}] {o.title}: {info}")
    return "\n".join(lines) + "\n"
