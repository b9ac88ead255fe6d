from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kirillov.chgroup import (
    GroupElement,
    NotStrictlyUpperTriangular,
    NotUnipotent,
    _coef,
    ad_exp,
    ad_exp_matrix,
    ch_components,
    ch_series,
    ch_terms,
    group_commutator,
    group_inv,
    group_mul,
    group_pow,
    matrix_exp,
    matrix_log,
    tr0_algebra,
    tr0_from_matrix,
    tr0_to_matrix,
)
from kirillov.corpus import bundled_names, load_bundled
from kirillov.exactnum import GF, QQ, FactorialNotInvertible, FieldMismatch
from kirillov.finite import FiniteBackend
from kirillov.linalg import identity, matmul, matvec


def rvec(g, rng):
    if g.field.is_finite:
        return g.vector(rng.randrange(g.field.characteristic) for _ in range(g.dim))
    return g.vector(Fraction(rng.randint(-6, 6), rng.randint(1, 4)) for _ in range(g.dim))


def test_ch_series_examples(h3, n4):
    X, Y, Z = (h3.basis_vector(i) for i in range(3))
    assert ch_series(X, h3.zero(), h3) == X
    assert ch_series(X, Y, h3) == (1, 1, Fraction(1, 2))
    e1, e2 = n4.basis_vector(0), n4.basis_vector(1)
    assert ch_series(e1, e2, n4) == (1, 1, Fraction(1, 2), Fraction(1, 12))
    assert n4.format_vector(ch_series(e1, e2, n4)) == "e1+e2+1/2 e3+1/12 e4"


def test_ch_terms_low_degrees():
    assert ch_terms(1) == ((Fraction(1), ("X",)), (Fraction(1), ("Y",)))
    assert dict((w, c) for c, w in ch_terms(2)) == {("X", "Y"): Fraction(1, 2)}
    assert dict((w, c) for c, w in ch_terms(3)) == {
        ("X", "X", "Y"): Fraction(1, 12),
        ("Y", "X", "Y"): Fraction(-1, 12),
    }


def test_degree_four_component_tr0_5(rng):
    g = load_bundled("tr0_5_q")
    assert g.nilpotency_class == 4
    for _ in range(30):
        x, y = rvec(g, rng), rvec(g, rng)
        z4 = ch_components(x, y, g)[3]
        expected = g.bracket(y, g.bracket(x, g.bracket(x, y)))
        assert z4 == tuple(Fraction(-1, 24) * c for c in expected)


def test_components_are_homogeneous(rng):
    g = load_bundled("tr0_5_q")
    x, y = rvec(g, rng), rvec(g, rng)
    t = Fraction(3, 7)
    base = ch_components(x, y, g)
    scaled = ch_components(tuple(t * c for c in x), tuple(t * c for c in y), g)
    for n, (a, b) in enumerate(zip(base, scaled), 1):
        assert b == tuple(t**n * c for c in a)


def test_coefficient_not_defined_mod_p():
    with pytest.raises(FactorialNotInvertible):
        _coef(Fraction(1, 12), GF(3))
    assert _coef(Fraction(1, 12), GF(5)) == GF(5)(3)


def test_group_examples(h3):
    X, Y, Z = (GroupElement(h3, h3.basis_vector(i)) for i in range(3))
    x = GroupElement(h3, (2, Fraction(-1, 3), 5))
    assert group_mul(x, group_inv(x)).is_identity()
    assert group_pow(x, 1) == x
    xy, yx = group_mul(X, Y), group_mul(Y, X)
    assert xy != yx
    assert group_mul(yx, Z) == xy
    assert group_commutator(x, x).is_identity()
    assert group_commutator(X, Y) == Z
    assert (X * Y) == xy and X.inverse() == group_inv(X) and (X**2).log == (2, 0, 0)


def test_group_field_mismatch(h3, h3f3):
    with pytest.raises(FieldMismatch):
        group_mul(GroupElement(h3, h3.zero()), GroupElement(h3f3, h3f3.zero()))


def test_commuting_pairs_commute(rng):
    for name in ("n4_q", "stress6_q"):
        g = load_bundled(name)
        for _ in range(30):
            x = rvec(g, rng)
            k = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            y = tuple(k * c for c in x)
            assert group_commutator(GroupElement(g, x), GroupElement(g, y)).is_identity()


@pytest.mark.parametrize("name", [n for n in bundled_names() if n.endswith(("_f3", "_f5"))])
def test_commutator_trivial_iff_bracket_zero(name):
    g = load_bundled(name)
    be = FiniteBackend(g)
    mul, inv = be.mul_table, be.inverse
    comm = mul[mul[mul, inv[:, None]], inv[None, :]]
    br = be.bracket(be.vectors[:, None, :], be.vectors[None, :, :])
    assert ((comm == 0) == ~br.any(axis=2)).all()


def test_ad_exp_examples(h3, n4):
    X, Y, Z = (h3.basis_vector(i) for i in range(3))
    assert ad_exp(h3.zero(), Y, h3) == Y
    assert ad_exp(X, Y, h3) == tuple(a + b for a, b in zip(Y, h3.bracket(X, Y)))
    assert ad_exp(n4.basis_vector(0), n4.basis_vector(1), n4) == (0, 1, 1, Fraction(1, 2))


def test_ad_is_a_homomorphism(rng):
    for name in ("n4_q", "stress6_q", "tr0_5_q", "n4_f5", "l5_f3"):
        g = load_bundled(name)
        for _ in range(25):
            x, x2, w = rvec(g, rng), rvec(g, rng), rvec(g, rng)
            assert ad_exp(ch_series(x, x2, g), w, g) == ad_exp(x, ad_exp(x2, w, g), g)


def test_ad_exp_matrix_columns(n4, rng):
    x = rvec(n4, rng)
    m = ad_exp_matrix(x, n4)
    for j in range(4):
        assert tuple(row[j] for row in m) == ad_exp(x, n4.basis_vector(j), n4)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_ad_is_matrix_conjugation(n, rng):
    g = tr0_algebra(n, QQ)
    for _ in range(20):
        x, y = rvec(g, rng), rvec(g, rng)
        ex = matrix_exp(tr0_to_matrix(x, n, QQ), QQ)
        ex_inv = matrix_exp(tr0_to_matrix(tuple(-c for c in x), n, QQ), QQ)
        ey = matrix_exp(tr0_to_matrix(y, n, QQ), QQ)
        conj = matmul(matmul(ex, ey, QQ), ex_inv, QQ)
        assert matrix_exp(tr0_to_matrix(ad_exp(x, y, g), n, QQ), QQ) == conj


def test_power_laws(rng):
    for name in ("n4_q", "tr0_4_q", "n4_f5"):
        g = load_bundled(name)
        for _ in range(30):
            x = GroupElement(g, rvec(g, rng))
            if g.field.is_finite:
                lam, mu = g.field(rng.randrange(5)), g.field(rng.randrange(5))
            else:
                lam, mu = Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4))
            assert group_mul(x**lam, x**mu) == x ** (lam + mu)
            assert (x**lam) ** mu == x ** (lam * mu)


def test_integer_powers_are_repeated_products(n4):
    x = GroupElement(n4, (1, 2, Fraction(1, 3), -1))
    acc = GroupElement.identity(n4)
    for k in range(1, 5):
        acc = acc * x
        assert acc == x**k


def test_matrix_exp_examples():
    z = tuple(tuple(QQ.zero for _ in range(3)) for _ in range(3))
    assert matrix_exp(z, QQ) == identity(QQ, 3)
    e12 = tuple(tuple(QQ.one if (i, j) == (0, 1) else QQ.zero for j in range(3)) for i in range(3))
    assert matrix_exp(e12, QQ) == tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(identity(QQ, 3), e12))


def test_matrix_exp_log_errors():
    with pytest.raises(NotStrictlyUpperTriangular):
        matrix_exp(((1, 0), (0, 0)), QQ)
    with pytest.raises(NotStrictlyUpperTriangular):
        matrix_exp(((0, 0), (1, 0)), QQ)
    with pytest.raises(NotUnipotent):
        matrix_log(((2, 0), (0, 1)), QQ)
    with pytest.raises(NotStrictlyUpperTriangular):
        tr0_from_matrix(((1, 0), (0, 0)), QQ)


def test_log_exp_roundtrip_tr0_4(rng):
    g = tr0_algebra(4, QQ)
    for _ in range(100):
        x = tr0_to_matrix(rvec(g, rng), 4, QQ)
        assert matrix_log(matrix_exp(x, QQ), QQ) == x


def test_tr0_matches_corpus():
    for n in (3, 4, 5):
        assert tr0_algebra(n, QQ).to_dict()["brackets"] == load_bundled(f"tr0_{n}_q").to_dict()["brackets"]


def test_tr0_bracket_is_commutator(rng):
    n = 4
    g = tr0_algebra(n, QQ)
    for _ in range(20):
        x, y = rvec(g, rng), rvec(g, rng)
        mx, my = tr0_to_matrix(x, n, QQ), tr0_to_matrix(y, n, QQ)
        comm = tuple(
            tuple(a - b for a, b in zip(r1, r2))
            for r1, r2 in zip(matmul(mx, my, QQ), matmul(my, mx, QQ))
        )
        assert tr0_from_matrix(comm, QQ) == g.bracket(x, y)


def test_matrix_log_over_fp():
    F = GF(5)
    g = tr0_algebra(3, F)
    for v in [(1, 2, 3), (4, 0, 1), (0, 3, 3)]:
        m = tr0_to_matrix(v, 3, F)
        assert matrix_log(matrix_exp(m, F), F) == m
    # exp(E12 + E23) = I + E12 + E23 + E13/2, and 1/2 = 3 in F_5
    u = matrix_exp(tr0_to_matrix((1, 0, 1), 3, F), F)
    assert matvec(u, (0, 0, 1), F) == (3, 1, 1)
    assert g.nilpotency_class == 2


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-4, 4), min_size=4, max_size=4),
    st.lists(st.integers(-4, 4), min_size=4, max_size=4),
    st.lists(st.integers(-4, 4), min_size=4, max_size=4),
)
def test_associativity_n4(a, b, c):
    g = load_bundled("n4_q")
    assert ch_series(ch_series(a, b, g), c, g) == ch_series(a, ch_series(b, c, g), g)


def test_finite_backend_matches_exact_ch(rng):
    for name in ("n4_f5", "l5_f3", "heisenberg_f5"):
        g = load_bundled(name)
        be = FiniteBackend(g)
        xs = be.vectors[rng.sample(range(be.size), 20)]
        ys = be.vectors[rng.sample(range(be.size), 20)]
        batch = be.ch(xs, ys)
        for x, y, z in zip(xs, ys, batch):
            exact = ch_series(tuple(int(c) for c in x), tuple(int(c) for c in y), g)
            assert tuple(int(c) for c in exact) == tuple(int(c) for c in z)
        assert (be.mul_table[np.arange(be.size), be.inverse] == 0).all()
