import math
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import study_det
from quatcusp.matmob import (
    DecompositionError,
    H5Point,
    NotUnimodular,
    QuatMat2,
    bg_all,
    bg_check,
    compose_factors,
    diagonal,
    dieudonne_det_sq,
    generators,
    h5_distance,
    identity_like,
    inversion_matrix,
    iwasawa_compose,
    iwasawa_decompose,
    moebius_apply,
    moebius_decompose,
    poincare_extend,
    projective_normal_form,
    sl2_inverse,
    solve_inverse,
    translation,
)
from quatcusp.quadfield import QQ, QuadraticField
from quatcusp.quatalg import INFINITY, FloatQuaternion, Quaternion, quat

H = Fraction(1, 2)
ONE = quat(QQ, 1)
I_Q, J_Q = quat(QQ, 0, 1), quat(QQ, 0, 0, 1)


def rand_fq(rng, s=1.0):
    return FloatQuaternion(*(rng.gauss(0, s) for _ in range(4)))


def rand_word(rng, gens, maxlen=12):
    w = identity_like(gens[0].a)
    for _ in range(rng.randint(1, maxlen)):
        w = w @ rng.choice(gens)
    return w


def iwasawa_sample(rng):
    lam = math.exp(rng.uniform(-2, 2))
    om = rand_fq(rng)
    om = FloatQuaternion(0.0, om.x1, om.x2, om.x3)
    a, b = rand_fq(rng), rand_fq(rng)
    b = b - a * ((b * a.conj()).real() / a.nrd())
    s = math.sqrt(a.nrd() + b.nrd())
    return iwasawa_compose(lam, om, a * (1 / s), b * (1 / s))


# --- products and determinants ------------------------------------------------------


def test_trivial_products():
    I = identity_like(ONE)
    J = inversion_matrix(ONE)
    assert J @ J == I
    assert translation(I_Q) @ translation(J_Q) == translation(I_Q + J_Q)
    g = QuatMat2(I_Q, J_Q, ONE, ONE)
    assert g @ I == g == I @ g
    with pytest.raises(TypeError):
        g @ g.to_float()


def test_det_examples():
    assert dieudonne_det_sq(identity_like(ONE)) == 1
    assert dieudonne_det_sq(inversion_matrix(ONE)) == 1
    assert dieudonne_det_sq(diagonal(quat(QQ, 2), quat(QQ, H))) == 1


exact_entries = st.lists(st.integers(-3, 3), min_size=4, max_size=4).map(lambda c: quat(QQ, *c))
exact_mats = st.builds(QuatMat2, exact_entries, exact_entries, exact_entries, exact_entries)


@given(exact_mats, exact_mats)
def test_det_multiplicative(g, h):
    assert dieudonne_det_sq(g @ h) == dieudonne_det_sq(g) * dieudonne_det_sq(h)


def test_det_multiplicative_over_k():
    F = QuadraticField(2)
    rng = random.Random(7)
    for _ in range(50):
        g, h = (QuatMat2(*(Quaternion([F(rng.randint(-2, 2), rng.randint(-2, 2)) for _ in range(4)], F) for _ in range(4))) for _ in range(2))
        assert dieudonne_det_sq(g @ h) == dieudonne_det_sq(g) * dieudonne_det_sq(h)


def test_det_matches_study_determinant():
    rng = random.Random(11)
    for _ in range(300):
        g = QuatMat2(*(rand_fq(rng) for _ in range(4)))
        ref = study_det(g)
        assert abs(dieudonne_det_sq(g) - ref) <= 1e-9 * abs(ref)


# --- inverse ----------------------------------------------------------------------


def test_inverse_examples():
    b = quat(QQ, 1, 2, H, H)
    assert sl2_inverse(translation(b)) == translation(-b)
    J = inversion_matrix(ONE)
    assert sl2_inverse(J) == J


@pytest.mark.parametrize("zero", ["a", "b", "c", "d", None])
def test_inverse_zero_patterns(zero, hurwitz_q):
    rng = random.Random(hash(zero) & 0xFFFF)
    gens = [g.matrix for g in generators(hurwitz_q)]
    seen = 0
    for _ in range(3000):
        w = rand_word(rng, gens, 8)
        is_zero = {k: getattr(w, k).is_zero() for k in "abcd"}
        if (zero is None and any(is_zero.values())) or (zero is not None and not is_zero[zero]):
            continue
        inv = sl2_inverse(w)
        I = identity_like(ONE)
        assert w @ inv == I and inv @ w == I
        assert inv == solve_inverse(w)
        assert all(e in hurwitz_q for e in inv.entries)
        seen += 1
        if seen == 20:
            break
    assert seen > 0


def test_inverse_requires_det_one():
    with pytest.raises(NotUnimodular):
        sl2_inverse(diagonal(quat(QQ, 2)))


def test_float_inverse():
    rng = random.Random(2)
    for _ in range(50):
        g = iwasawa_sample(rng)
        inv = sl2_inverse(g)
        assert (g @ inv).max_dist(identity_like(FloatQuaternion())) < 1e-8


def test_inverse_over_real_quadratic_field():
    F = QuadraticField(2)
    eps = F(1, 1)
    g = diagonal(quat(F, eps), quat(F, eps.inverse())) @ translation(quat(F, 0, F.theta)) @ inversion_matrix(quat(F, 1))
    inv = sl2_inverse(g)
    assert g @ inv == identity_like(quat(F, 1))


# --- BG conditions and Iwasawa ------------------------------------------------------------


def test_bg_examples():
    assert bg_all(inversion_matrix(ONE)) == (True, True, True)
    assert bg_all(QuatMat2(ONE, I_Q, quat(QQ), ONE)) == (True, True, True)
    assert bg_all(QuatMat2(ONE, ONE, quat(QQ), ONE)) == (False, False, False)
    with pytest.raises(ValueError):
        bg_check(inversion_matrix(ONE), 4)


def test_bg_variants_agree():
    rng = random.Random(5)
    for _ in range(300):
        g = iwasawa_sample(rng)
        assert bg_all(g) == (True, True, True)
        bad = QuatMat2(g.a + rand_fq(rng, 1e-3), g.b, g.c, g.d)
        assert bg_all(bad) == (False, False, False)


def test_bg_exact_words(hurwitz_q):
    rng = random.Random(6)
    bg_gens = [g.matrix for g in generators(hurwitz_q) if all(bg_all(g.matrix))]
    assert len(bg_gens) == 6  # all but the real translations T_1 and T_xi
    for _ in range(100):
        assert bg_all(rand_word(rng, bg_gens)) == (True, True, True)


def test_iwasawa_examples():
    f = iwasawa_decompose(diagonal(FloatQuaternion(2.0), FloatQuaternion(0.5)))
    assert (f.lam, f.omega, f.alpha, f.beta) == (2.0, FloatQuaternion(), FloatQuaternion(1.0), FloatQuaternion())
    f = iwasawa_decompose(QuatMat2(ONE, I_Q, quat(QQ), ONE))
    assert f.lam == 1.0 and f.omega == FloatQuaternion(0, 1.0) and f.beta.is_zero()
    f = iwasawa_decompose(inversion_matrix(ONE))
    assert f.alpha.is_zero() and f.beta == FloatQuaternion(1.0)
    assert f.matrix().max_dist(inversion_matrix(ONE)) == 0


def test_iwasawa_round_trip():
    rng = random.Random(8)
    for _ in range(300):
        g = iwasawa_sample(rng)
        f = iwasawa_decompose(g)
        assert f.matrix().max_dist(g) < 1e-9
        assert abs(f.alpha.nrd() + f.beta.nrd() - 1) < 1e-9
        assert abs((f.alpha * f.beta.conj()).real()) < 1e-9
        assert abs(f.omega.real()) < 1e-9


def test_iwasawa_rejects_non_bg():
    with pytest.raises(DecompositionError):
        iwasawa_decompose(QuatMat2(ONE, ONE, quat(QQ), ONE))


# --- Moebius action -----------------------------------------------------------------------


def test_moebius_examples():
    q = FloatQuaternion(0.3, -1.0, 2.0, 0.5)
    b = quat(QQ, 1, 2, 0, H)
    assert moebius_apply(translation(b), q) == q + b.to_float()
    assert moebius_apply(inversion_matrix(ONE), q).dist(q.inverse()) < 1e-15
    g = QuatMat2(I_Q, quat(QQ), quat(QQ, 2), -I_Q)
    assert moebius_apply(g, INFINITY) == FloatQuaternion(0, 0.5)
    assert moebius_apply(translation(b), INFINITY).is_infinite
    # the pole -c^-1 d goes to infinity
    assert moebius_apply(QuatMat2(ONE, ONE, ONE, I_Q), FloatQuaternion(0, -1.0)).is_infinite


def test_moebius_composition_order():
    # (a u + b v)(c u + d v)^-1 with u v^-1 = F_h(q) shows F_{g h} = F_g o F_h
    rng = random.Random(9)
    reversed_ok = True
    for _ in range(50):
        g, h = iwasawa_sample(rng), iwasawa_sample(rng)
        q = rand_fq(rng)
        lhs = moebius_apply(g @ h, q)
        rhs = moebius_apply(g, moebius_apply(h, q))
        assert lhs.dist(rhs) < 1e-8 * (1 + lhs.abs())
        other = moebius_apply(h, moebius_apply(g, q))
        reversed_ok &= lhs.dist(other) < 1e-8 * (1 + lhs.abs())
    assert not reversed_ok


def test_decomposition():
    rng = random.Random(10)
    J = inversion_matrix(FloatQuaternion())
    kinds = moebius_decompose(J)
    assert [k.kind for k in kinds] == ["T", "h", "I", "h", "T"]
    assert kinds[0].param.is_zero() and kinds[1].param == FloatQuaternion(1.0)
    for _ in range(50):
        g = QuatMat2(*(rand_fq(rng) for _ in range(4)))
        factors = moebius_decompose(g)
        for _ in range(20):
            q = rand_fq(rng)
            assert compose_factors(factors, q).dist(moebius_apply(g, q)) < 1e-9 * (1 + moebius_apply(g, q).abs())
    affine = QuatMat2(rand_fq(rng), rand_fq(rng), FloatQuaternion(), rand_fq(rng))
    factors = moebius_decompose(affine)
    assert [f.kind for f in factors] == ["h", "hr", "T"]
    q = rand_fq(rng)
    assert compose_factors(factors, q).dist(moebius_apply(affine, q)) < 1e-9 * (1 + q.abs())


# --- Poincare extension -------------------------------------------------------------------------


def test_poincare_examples():
    p = H5Point(FloatQuaternion(0.2, 0.1, -0.3, 0.4), 0.7)
    assert poincare_extend(identity_like(FloatQuaternion()), p) == p
    assert poincare_extend(inversion_matrix(ONE), H5Point(FloatQuaternion(), 1.0)) == H5Point(FloatQuaternion(), 1.0)
    moved = poincare_extend(translation(I_Q), p)
    assert moved.t == p.t and moved.q.dist(p.q + FloatQuaternion(0, 1.0)) < 1e-15
    with pytest.raises(ValueError):
        H5Point(FloatQuaternion(), 0.0)


def test_poincare_isometry(hurwitz_q):
    rng = random.Random(12)
    gens = [g.matrix for g in generators(hurwitz_q)]
    for _ in range(100):
        g = rand_word(rng, gens)
        p1 = H5Point(rand_fq(rng), rng.uniform(0.1, 3))
        p2 = H5Point(rand_fq(rng), rng.uniform(0.1, 3))
        d0 = h5_distance(p1, p2)
        assert abs(h5_distance(poincare_extend(g, p1), poincare_extend(g, p2)) - d0) < 1e-7 * max(1, d0)


def test_boundary_limit():
    rng = random.Random(13)
    g = QuatMat2(*(rand_fq(rng) for _ in range(4)))
    g = QuatMat2(g.a, g.b, FloatQuaternion(1.0, 0.5), g.d)
    q = rand_fq(rng)
    target = moebius_apply(g, q)
    errs = [poincare_extend(g, H5Point(q, t)).q.dist(target) for t in (1e-2, 1e-3, 1e-4)]
    assert errs[0] > errs[1] > errs[2]
    for e1, e2 in zip(errs, errs[1:]):
        assert 50 < e1 / e2 < 200  # quadratic in t


# --- generators -------------------------------------------------------------------------------


def test_hurwitz_generators(hurwitz_q):
    gens = generators(hurwitz_q)
    assert [g.name for g in gens] == ["I", "T_1", "T_i", "T_j", "T_xi", "D_i", "D_xi", "D_tau"]
    assert gens[4].matrix.b == quat(QQ, H, H, H, H)
    assert gens[7].matrix.a == quat(QQ, H, H, H, -H)
    assert all(dieudonne_det_sq(g.matrix) == 1 for g in gens)


def test_generators_need_rational_field():
    from quatcusp.orders import make_named_order

    with pytest.raises(ValueError):
        generators(make_named_order("hurwitz", QuadraticField(2)))


def test_custom_order_generators():
    from quatcusp.orders import Order

    O = Order(QQ, [quat(QQ, 1), quat(QQ, 0, 1), quat(QQ, 0, 0, 1), quat(QQ, H, H, H, H)])
    gens = generators(O)
    assert gens[0].name == "I" and all(dieudonne_det_sq(g.matrix) == 1 for g in gens)


def test_projective_normal_form():
    g = QuatMat2(-I_Q, ONE, quat(QQ), -I_Q)
    assert projective_normal_form(g) == projective_normal_form(-g) == -g
