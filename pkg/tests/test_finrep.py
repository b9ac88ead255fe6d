import cmath
import csv
import io
import random
from fractions import Fraction

import pytest

import kirillov.finrep as finrep
from kirillov.chgroup import GroupElement
from kirillov.coadjoint import coadjoint_act, orbit_partition
from kirillov.corpus import bundled_names, load_bundled
from kirillov.dualpol import Functional, PolarizationChain, standard_polarization
from kirillov.finrep import (
    AuditFailure,
    Cyclotomic,
    NotASubgroup,
    TableMismatch,
    build_table,
    character_table,
    character_table_csv,
    induced_character,
    inner_product,
    kirillov_audit,
    trivial_character,
)
from kirillov.linalg import Subspace
from kirillov.liealg import center

SMALL_FINITE = [
    n for n in bundled_names()
    if (g := load_bundled(n)).field.is_finite and g.field.characteristic**g.dim <= 625
]


def test_cyclotomic_arithmetic():
    z = Cyclotomic.root(3, 1)
    one = Cyclotomic.rational(3, 1)
    assert z * z * z == one
    assert one + z + z * z == 0
    assert z.conjugate() == z * z
    assert abs(complex(z) - cmath.exp(2j * cmath.pi / 3)) < 1e-12
    assert str(Cyclotomic.root(3, 2, 3)) == "-3 - 3*z"
    w = Cyclotomic.root(5, 2) + Cyclotomic.rational(5, Fraction(1, 2))
    assert w * w.conjugate() == (w.conjugate() * w)
    assert (w * w.conjugate()).coords == (w * w.conjugate()).conjugate().coords
    with pytest.raises(ValueError):
        z.to_fraction()
    with pytest.raises(ValueError):
        z + Cyclotomic.root(5, 1)


def test_cyclotomic_matches_complex():
    rng = random.Random(0)
    for p in (3, 5, 7):
        for _ in range(50):
            a = Cyclotomic(p, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(p)])
            b = Cyclotomic(p, [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(p)])
            assert abs(complex(a * b) - complex(a) * complex(b)) < 1e-9
            assert abs(complex(a + b) - (complex(a) + complex(b))) < 1e-9
            assert abs(complex(a.conjugate()) - complex(a).conjugate()) < 1e-9


def test_build_table_examples():
    t = build_table(load_bundled("abelian_f3"))
    assert t.order == 9 and len(t.classes) == 9 and all(len(c) == 1 for c in t.classes)
    t = build_table(load_bundled("heisenberg_f3"))
    assert t.order == 27 and len(t.classes) == 11
    t = build_table(load_bundled("heisenberg_f5"))
    assert t.order == 125 and len(t.classes) == 29


@pytest.mark.parametrize("name", SMALL_FINITE)
def test_table_invariants(name):
    g = load_bundled(name)
    t = build_table(g)
    assert sum(len(c) for c in t.classes) == t.order == t.backend.p**g.dim
    assert t.representatives == [int(min(c)) for c in t.classes]
    assert t.representatives == sorted(t.representatives)
    z = center(g).space
    assert sorted(t.center.tolist()) == sorted(t.index(v) for v in z.elements())


def test_induced_character_examples(h3f3):
    t = build_table(h3f3)
    p = 3
    f = Functional.dual_basis(h3f3, "Z")
    chi = induced_character(f, standard_polarization(f), t)
    assert chi.degree == 3
    for k in range(t.order):
        a, b, c = t.element(k)
        if a == 0 and b == 0:
            assert chi(k) == Cyclotomic.root(p, c, 3)
        else:
            assert chi(k) == 0
    fx = Functional.dual_basis(h3f3, "X")
    pcx = standard_polarization(fx)
    assert pcx.r == h3f3.full()
    lin = induced_character(fx, pcx, t)
    for k in range(t.order):
        assert lin(k) == Cyclotomic.root(p, t.element(k)[0])
    assert inner_product(trivial_character(t), trivial_character(t)) == 1
    assert inner_product(chi, chi) == 1
    assert inner_product(chi, trivial_character(t)) == 0


def test_grade_zero_is_linear_character():
    g = load_bundled("l5_f3")
    t = build_table(g)
    f = Functional(g, (1, 2, 0, 0, 0))
    pc = standard_polarization(f)
    assert pc.grade == 0 and pc.r == g.full()
    chi = induced_character(f, pc, t)
    for k in range(t.order):
        phase = sum(a * b for a, b in zip(f.coeffs, t.element(k)))
        assert chi(k) == Cyclotomic.root(3, int(phase))


def test_guards(h3f3):
    t = build_table(h3f3)
    f = Functional.dual_basis(h3f3, "Z")
    pc = standard_polarization(f)
    other = load_bundled("heisenberg_f5")
    with pytest.raises(NotASubgroup):
        induced_character(Functional.dual_basis(other, "Z"), standard_polarization(Functional.dual_basis(other, "Z")), t)
    not_sub = PolarizationChain(f, pc.levels, h3f3.span_labels("X", "Y"))
    with pytest.raises(NotASubgroup):
        induced_character(f, not_sub, t)
    not_subordinate = PolarizationChain(f, pc.levels, h3f3.full())
    with pytest.raises(ValueError):
        induced_character(f, not_subordinate, t)
    t2 = build_table(h3f3)
    with pytest.raises(TableMismatch):
        inner_product(trivial_character(t), trivial_character(t2))


def test_audit_examples():
    rep = kirillov_audit(load_bundled("abelian_f3"))
    assert rep.orbits == 9 and rep.degrees == {1: 9} and rep.passed
    rep = kirillov_audit(load_bundled("heisenberg_f3"))
    assert rep.orbits == rep.classes == 11
    assert rep.degrees == {1: 9, 3: 2} and rep.sum_d2 == 27 == 9 * 1 + 2 * 9
    d = rep.to_dict()
    assert d["schema"] == 1 and d["orbits"] == 11 and all(c["pass"] for c in d["clauses"].values())
    rep = kirillov_audit(load_bundled("n4_f5"))
    assert rep.passed and rep.orbits == rep.classes and rep.sum_d2 == 5**4


@pytest.mark.parametrize("name", SMALL_FINITE)
def test_all_clauses_every_small_algebra(name):
    rep = kirillov_audit(load_bundled(name))
    assert rep.passed, rep.witnesses
    assert set(rep.clauses) == {"i", "ii", "iii", "iv", "v", "vi", "vii"}
    assert rep.polarizations_checked >= rep.orbits


def test_audit_reports_first_failure(monkeypatch):
    g = load_bundled("heisenberg_f3")

    def broken(f, start=None):
        return [PolarizationChain(f, (), Subspace.zero(g.field, g.dim))]

    monkeypatch.setattr(finrep, "standard_polarizations", broken)
    with pytest.raises(AuditFailure) as exc:
        kirillov_audit(g)
    assert exc.value.clause == "v"
    rep = kirillov_audit(g, strict=False)
    assert not rep.clauses["v"] and "v" in rep.witnesses and not rep.passed


@pytest.mark.parametrize("name", ["heisenberg_f5", "n4_f5", "l5_f3"])
def test_conjugation_equivariance(name):
    g = load_bundled(name)
    t = build_table(g)
    rng = random.Random(9)
    for o in rng.sample(orbit_partition(g), 6):
        f = o.representative
        chi = induced_character(f, standard_polarization(f), t)
        for k in rng.sample(range(t.order), 5):
            moved = coadjoint_act(GroupElement(g, t.element(k)), f)
            assert induced_character(moved, standard_polarization(moved), t) == chi


@pytest.mark.parametrize("name", ["heisenberg_f3", "heisenberg_f5", "l5_f3", "n4_f5"])
def test_column_orthogonality(name):
    t, orbits, chains, chars = character_table(load_bundled(name))
    p = t.backend.p
    k = len(t.classes)
    for a in range(k):
        for b in range(a, k):
            s = Cyclotomic.rational(p, 0)
            for chi in chars:
                s = s + chi.values[a] * chi.values[b].conjugate()
            expect = Fraction(t.order, len(t.classes[a])) if a == b else 0
            assert s == expect


def test_orbit_sum_formula_is_informational():
    rep = kirillov_audit(load_bundled("heisenberg_f5"))
    assert "orbit_sum_formula_agrees" in rep.informational


def test_chartable_csv(h3f3):
    text = character_table_csv(h3f3)
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0][:3] == ["character", "degree", "orbit_size"]
    assert len(rows) == 1 + 11 and all(len(r) == 3 + 11 for r in rows)
    degrees = sorted(int(r[1]) for r in rows[1:])
    assert degrees == [1] * 9 + [3] * 2
    assert text == character_table_csv(h3f3)
