import itertools
import random
from fractions import Fraction

import pytest

from kirillov.chgroup import GroupElement
from kirillov.coadjoint import coadjoint_act
from kirillov.corpus import bundled_names, load_bundled
from kirillov.dualpol import (
    ExhaustiveTooLarge,
    Functional,
    IdentityViolation,
    PolarizationChain,
    annihilator,
    bilinear_form,
    check_orbit_identities,
    is_polarizing,
    is_subordinate,
    radical,
    standard_polarization,
    standard_polarizations,
)
from kirillov.exactnum import QQ
from kirillov.finite import FiniteBackend
from kirillov.linalg import Subspace, kernel, rank
from kirillov.verify import check_chain


def star(g, label):
    return Functional.dual_basis(g, label)


def functionals(g, rng, count=15):
    if g.field.is_finite:
        return [Functional(g, tuple(int(c) for c in v)) for v in FiniteBackend(g).vectors]
    out = [Functional(g, g.basis_vector(i)) for i in range(g.dim)]
    out += [Functional(g, tuple(Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(g.dim))) for _ in range(count)]
    return out


def test_bilinear_form_examples(h3):
    assert bilinear_form(Functional(h3, h3.zero())) == ((0, 0, 0),) * 3
    assert bilinear_form(star(h3, "Z")) == ((0, 1, 0), (-1, 0, 0), (0, 0, 0))


def test_radical_n4(n4):
    # f = e4*: the only pairing is f([e1, e3]) = 1, so the radical is span(e2, e4)
    assert radical(star(n4, "e4")) == n4.span_labels("e2", "e4")


def test_form_properties(rng):
    for name in bundled_names():
        g = load_bundled(name)
        fs = functionals(g, rng)
        for f in fs[:200]:
            B = bilinear_form(f)
            assert all(B[i][j] == -B[j][i] for i in range(g.dim) for j in range(g.dim))
            assert rank(B, g.field) % 2 == 0
            ad_rows = [[f(g.bracket(g.basis_vector(i), g.basis_vector(j))) for j in range(g.dim)] for i in range(g.dim)]
            coadj = kernel(ad_rows, g.field, g.dim)
            assert radical(f) == coadj


def test_is_subordinate_examples(h3):
    f = star(h3, "Z")
    assert is_subordinate(f, Subspace.zero(QQ, 3))
    assert is_subordinate(f, h3.span_labels("Y", "Z"))
    assert not is_subordinate(f, h3.full())


def test_is_polarizing_examples(h3, h3f3):
    ab = load_bundled("abelian_q2")
    assert is_polarizing(Functional(ab, (3, -1)), ab.full())
    f3 = star(h3f3, "Z")
    r = h3f3.span_labels("Y", "Z")
    assert is_polarizing(f3, r, "dimension") and is_polarizing(f3, r, "exhaustive")
    assert not is_polarizing(star(h3, "Z"), h3.span_labels("Z"))
    assert not is_polarizing(f3, h3f3.span_labels("Z"), "exhaustive")
    with pytest.raises(ExhaustiveTooLarge):
        is_polarizing(star(h3, "Z"), h3.span_labels("Y", "Z"), "exhaustive")
    with pytest.raises(ValueError):
        is_polarizing(f3, r, "sideways")


def test_annihilator_examples(h3):
    assert annihilator(Subspace.zero(QQ, 3)) == h3.full()
    assert annihilator(h3.full()).dim == 0
    assert annihilator(h3.span_labels("Y", "Z")) == h3.span_labels("X")


def test_standard_polarization_examples(h3):
    ab = load_bundled("abelian_q2")
    pc = standard_polarization(Functional(ab, (1, 2)))
    assert pc.r == ab.full() and pc.grade == 0
    pc = standard_polarization(star(h3, "Z"))
    assert pc.grade == 1
    assert pc.r == h3.span_labels("X", "Z")
    lvl0 = pc.levels[0]
    assert lvl0.ideal.dim == 0 and lvl0.abelian == h3.span_labels("X", "Z")
    pcx = standard_polarization(star(h3, "X"))
    assert pcx.grade == 0 and pcx.r == h3.full()
    assert pcx.levels[0].ideal == h3.span_labels("Y", "Z")


def test_alternative_polarizations_h3(h3):
    rs = {pc.r for pc in standard_polarizations(star(h3, "Z"))}
    assert rs == {h3.span_labels("X", "Z"), h3.span_labels("Y", "Z")}
    assert standard_polarization(star(h3, "Z"), order=(1, 0, 2)).r == h3.span_labels("Y", "Z")


def test_chain_invariants_every_algebra(rng):
    for name in bundled_names():
        g = load_bundled(name)
        exhaustive = g.field.is_finite and g.dim <= 4
        for f in functionals(g, rng, count=5)[:60]:
            pc = standard_polarization(f)
            check_chain(f, pc, exhaustive)
            for alt in standard_polarizations(f):
                check_chain(f, alt, False)


def test_dimension_criterion_matches_exhaustive():
    for name in ("heisenberg_f3", "heisenberg_f5", "l5_f3", "abelian_f3"):
        g = load_bundled(name)
        for f in functionals(g, None):
            pc = standard_polarization(f)
            B = bilinear_form(f)
            assert 2 * pc.r.dim == 2 * g.dim - rank(B, g.field)
            assert is_polarizing(f, pc.r, "exhaustive")


def test_polarization_is_deterministic(n4):
    f = Functional(n4, (1, Fraction(2, 3), 0, 5))
    a, b = standard_polarization(f), standard_polarization(f)
    assert a == b and a.levels == b.levels


def test_orbit_identities_abelian():
    g = load_bundled("abelian_f3")
    f = Functional(g, (1, 2))
    rep = check_orbit_identities(f, standard_polarization(f))
    assert rep.stabilizer_size == 9 and rep.orbit_size == 1


def test_orbit_identities_h3f3(h3f3):
    f = star(h3f3, "Z")
    rep = check_orbit_identities(f, standard_polarization(f))
    assert rep.stabilizer_size == 9 and rep.orbit_size == 3 and rep.checked == 27


def test_orbit_identities_h3_over_q(h3):
    f = star(h3, "Z")
    pc_y = standard_polarization(f, order=(1, 0, 2))
    assert pc_y.r == h3.span_labels("Y", "Z")
    moved = coadjoint_act(GroupElement(h3, h3.basis_vector(1)), f)
    delta = tuple(a - b for a, b in zip(moved.coeffs, f.coeffs))
    assert delta == (1, 0, 0)  # Ad*(exp Y) Z* - Z* = X* with Ad*(x) f = f o Ad(x^-1)
    assert delta in annihilator(pc_y.r)
    rep = check_orbit_identities(f, pc_y, samples=50, rng=random.Random(0))
    assert rep.checked == 50 and rep.converse_checked > 0
    rep = check_orbit_identities(f, standard_polarization(f), samples=50)
    assert rep.ok


def test_orbit_identity_violation_detected(h3f3):
    f = star(h3f3, "Z")
    good = standard_polarization(f)
    bogus = PolarizationChain(f, good.levels, h3f3.span_labels("Z"))
    with pytest.raises(IdentityViolation) as exc:
        check_orbit_identities(f, bogus)
    assert exc.value.witness is not None


def test_start_subalgebra_grades(n4):
    for f in [star(n4, "e4"), Functional(n4, (1, 1, 1, 1)), star(n4, "e3")]:
        pc = standard_polarization(f)
        for i, lvl in enumerate(pc.levels):
            again = standard_polarization(f, start=lvl.algebra)
            assert again.grade == pc.grade - i and again.r == pc.r


@pytest.mark.parametrize("order", list(itertools.permutations(range(3))))
def test_every_order_gives_polarization(h3f3, order):
    for f in functionals(h3f3, None):
        pc = standard_polarization(f, order=order)
        assert is_polarizing(f, pc.r, "exhaustive")


@pytest.mark.parametrize("name,step", [("heisenberg_f5", 1), ("n4_f5", 25)])
def test_alternatives_cover_every_coordinate_order(name, step):
    g = load_bundled(name)
    for f in functionals(g, None)[::step]:
        alts = {pc.r for pc in standard_polarizations(f)}
        for order in itertools.permutations(range(g.dim)):
            assert standard_polarization(f, order=order).r in alts
