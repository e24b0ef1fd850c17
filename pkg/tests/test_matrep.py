import random

import pytest

from quasifix.freegroup import FreeEndo, Word, word_evaluate
from quasifix.gf import field_create
from quasifix.matrep import (
    Mat2,
    MatTuple,
    ProjPoint,
    SingularMatrixError,
    find_periodic_orbit,
    flatten_tuple,
    frobenius_tuple,
    pgl_dynamics_step,
    phi_lift,
    phi_lift_polynomials,
    pi_w,
    proj_normalize,
    random_projpoint,
)
from quasifix.poly import MPoly, PolyMap


def rand_mat(field, rng):
    return Mat2.from_entries(field, [field.from_int(rng.randrange(field.order))
                                     for _ in range(4)])


def rand_sl2(field, rng):
    """Random determinant-1 matrix as a product of elementary matrices."""
    m = Mat2.identity(field)
    for _ in range(4):
        x = field.from_int(rng.randrange(field.order))
        if rng.random() < 0.5:
            e = Mat2.from_entries(field, [field.one(), x, field.zero(), field.one()])
        else:
            e = Mat2.from_entries(field, [field.one(), field.zero(), x, field.one()])
        m = m * e
    return m


def test_adjugate_and_cayley():
    f5 = field_create(5, 1)
    assert Mat2.identity(f5).adj() == Mat2.identity(f5)
    rng = random.Random(1)
    for _ in range(50):
        m = rand_mat(f5, rng)
        prod = m * m.adj()
        expected = Mat2.identity(f5).scale(m.det())
        assert prod == expected


def test_det_multiplicative():
    f7 = field_create(7, 1)
    rng = random.Random(2)
    for _ in range(50):
        a, b = rand_mat(f7, rng), rand_mat(f7, rng)
        assert (a * b).det() == a.det() * b.det()


def test_pi_w_examples():
    f5 = field_create(5, 1)
    rng = random.Random(3)
    t = MatTuple((rand_mat(f5, rng), rand_mat(f5, rng)))
    assert pi_w(Word.parse("a", 2), t) == t[0]
    cancel = pi_w(Word(list((1,)) + list((-1,)), 2), t)  # unreduced input reduces
    assert cancel == Mat2.identity(f5)
    # the formal a*adj(a) value, evaluated without free reduction
    direct = t[0] * t[0].adj()
    assert direct == Mat2.identity(f5).scale(t[0].det())


def test_pi_w_agrees_with_true_inverses_on_sl2():
    rng = random.Random(4)
    for p in (5, 7):
        field = field_create(p, 1)
        for _ in range(30):
            t = MatTuple((rand_sl2(field, rng), rand_sl2(field, rng)))
            for text in ("abA", "aBa", "ba", "AbaB"):
                w = Word.parse(text, 2)
                via_adj = pi_w(w, t)
                via_inv = word_evaluate(w, t.mats, lambda x, y: x * y,
                                        lambda x: x.inverse(), Mat2.identity(field))
                assert via_adj == via_inv


def test_phi_lift_examples():
    f3 = field_create(3, 1)
    rng = random.Random(5)
    ident = FreeEndo.identity(2)
    t = MatTuple((rand_mat(f3, rng), rand_mat(f3, rng)))
    assert phi_lift(ident, t) == t

    square = FreeEndo.parse(["aa"], 1)
    single = MatTuple((rand_mat(f3, rng),))
    assert phi_lift(square, single)[0] == single[0] * single[0]

    swapmix = FreeEndo.parse(["ab", "ba"], 2)
    lifted = phi_lift(swapmix, t)
    assert lifted[0] == t[0] * t[1]
    assert lifted[1] == t[1] * t[0]


def test_phi_lift_polynomials_identity():
    ident = FreeEndo.identity(1)
    pmap = phi_lift_polynomials(ident, 3)
    assert pmap == PolyMap.identity(4, 3)


def test_phi_lift_polynomials_symbolic_square():
    square = FreeEndo.parse(["aa"], 1)
    pmap = phi_lift_polynomials(square, 5)
    # first coordinate of the symbolic square: a11^2 + a12*a21
    x = [MPoly.var(i, 4, 5) for i in range(1, 5)]
    assert pmap.coords[0] == x[0] * x[0] + x[1] * x[2]
    assert pmap.coords[1] == x[0] * x[1] + x[1] * x[3]


def test_phi_lift_polynomials_agree_pointwise_random():
    rng = random.Random(6)
    f5 = field_create(5, 1)
    phi = FreeEndo.parse(["ab", "bA"], 2)
    pmap = phi_lift_polynomials(phi, 5)
    for _ in range(100):
        t = MatTuple((rand_mat(f5, rng), rand_mat(f5, rng)))
        symbolic = pmap.apply(flatten_tuple(t))
        direct = flatten_tuple(phi_lift(phi, t))
        assert symbolic == direct


def test_phi_lift_polynomials_agree_exhaustive_f2():
    f2 = field_create(2, 1)
    phi = FreeEndo.parse(["aa"], 1)
    pmap = phi_lift_polynomials(phi, 2)
    for code in range(16):
        entries = [f2.from_int((code >> i) & 1) for i in range(4)]
        t = MatTuple((Mat2.from_entries(f2, entries),))
        assert pmap.apply(flatten_tuple(t)) == flatten_tuple(phi_lift(phi, t))


def test_frobenius_tuple_prime_field_fixed():
    f5 = field_create(5, 1)
    rng = random.Random(7)
    t = MatTuple((rand_mat(f5, rng), rand_mat(f5, rng)))
    assert frobenius_tuple(t, 1) == t


def test_frobenius_equivariance():
    rng = random.Random(8)
    phi = FreeEndo.parse(["ab", "bA"], 2)
    for p, m in ((2, 2), (3, 2)):
        field = field_create(p, m)
        for _ in range(30):
            t = MatTuple((rand_mat(field, rng), rand_mat(field, rng)))
            for e in (1, 2):
                assert phi_lift(phi, frobenius_tuple(t, e)) == frobenius_tuple(phi_lift(phi, t), e)


def test_proj_normalize_examples():
    f5 = field_create(5, 1)
    two = f5.scalar(2)
    doubled = Mat2.identity(f5).scale(two)
    point = proj_normalize(MatTuple((doubled,)))
    assert point.tuple[0] == Mat2.identity(f5)

    rng = random.Random(9)
    for _ in range(30):
        t = MatTuple((rand_sl2(f5, rng), rand_sl2(f5, rng)))
        once = proj_normalize(t)
        again = proj_normalize(once.tuple)
        assert once == again


def test_proj_normalize_rejects_singular():
    f5 = field_create(5, 1)
    singular = Mat2.from_entries(f5, [f5.one(), f5.zero(), f5.zero(), f5.zero()])
    with pytest.raises(SingularMatrixError):
        proj_normalize(MatTuple((singular,)))


def test_normalize_commutes_with_dynamics():
    rng = random.Random(10)
    f7 = field_create(7, 1)
    phi = FreeEndo.parse(["ab", "ba"], 2)
    for _ in range(30):
        t = MatTuple((rand_sl2(f7, rng), rand_sl2(f7, rng)))
        scaled = MatTuple((t[0].scale(f7.scalar(3)), t[1].scale(f7.scalar(2))))
        assert proj_normalize(phi_lift(phi, t)) == proj_normalize(phi_lift(phi, scaled))


def test_identity_endo_every_point_period_one():
    f5 = field_create(5, 1)
    rng = random.Random(11)
    ident = FreeEndo.identity(2)
    for _ in range(10):
        h = random_projpoint(f5, 2, rng)
        res = find_periodic_orbit(ident, h, budget=100)
        assert res.found and res.period == 1 and res.point == h


def test_squaring_orbit_over_f7():
    f7 = field_create(7, 1)
    square = FreeEndo.parse(["aa"], 1)
    start = proj_normalize(MatTuple((Mat2.from_entries(
        f7, [f7.scalar(3), f7.zero(), f7.zero(), f7.one()]),)))
    res = find_periodic_orbit(square, start, budget=1000)
    assert res.found
    point, n = res.point, res.period
    # exact periodicity
    cur = point
    for _ in range(n):
        cur = pgl_dynamics_step(square, cur)
    assert cur == point
    # minimality: no proper divisor of n closes the cycle
    for d in range(1, n):
        if n % d == 0:
            cur = point
            for _ in range(d):
                cur = pgl_dynamics_step(square, cur)
            assert cur != point
    # hand iteration: diag(3,1) ~ diag(1,5); 5^2=4, 4^2=2, 2^2=4: cycle (4 2)
    assert n == 2


def test_orbit_budget_exhaustion():
    f7 = field_create(7, 1)
    phi = FreeEndo.parse(["ab", "ba"], 2)
    rng = random.Random(12)
    h = random_projpoint(f7, 2, rng)
    res = find_periodic_orbit(phi, h, budget=1)
    assert not res.found and res.reason == "budget" and res.point is None


def test_projpoint_hash_consistency():
    f5 = field_create(5, 1)
    rng = random.Random(13)
    pts = [random_projpoint(f5, 2, rng) for _ in range(20)]
    for p in pts:
        assert ProjPoint(p.tuple) == p
        assert hash(ProjPoint(p.tuple)) == hash(p)
