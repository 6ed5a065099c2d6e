import random

import pytest

from morava.coeff import CoeffContext
from morava.padic import PrecisionError


@pytest.fixture
def ctx22():
    return CoeffContext(2, 2, N=16, D=8)


def test_vcode_roundtrip():
    ctx = CoeffContext(2, 3, N=8, D=5)
    for exps in [(0, 0), (3, 1), (5, 0), (2, 3), (0, 5)]:
        assert ctx.vexps(ctx.vcode(exps)) == exps
    with pytest.raises(ValueError):
        ctx.vcode((4, 3))  # total degree 7 > 5


def test_vcode_addition_matches_exponent_addition():
    ctx = CoeffContext(3, 3, N=8, D=6)
    a, b = (2, 1), (1, 2)
    ca, cb = ctx.vcode(a), ctx.vcode(b)
    assert ctx.vexps(ca + cb) == (3, 3)


def test_unit_monomial(ctx22):
    x = ctx22.u_mono(3)
    assert ctx22.is_unit(x)
    assert ctx22.unit_leading_uexp(x) == 3
    inv = ctx22.invert(x)
    assert ctx22.eq_to(ctx22.mul(x, inv), ctx22.one(), 16)


def test_p_is_not_a_unit(ctx22):
    assert not ctx22.is_unit(ctx22.from_int(2))
    assert not ctx22.is_unit(ctx22.v_gen(1))
    assert not ctx22.is_unit(ctx22.zero())


def test_unit_plus_v_is_unit(ctx22):
    x = ctx22.add(ctx22.u_mono(1), ctx22.v_gen(1))
    assert ctx22.is_unit(x)
    inv = ctx22.invert(x)
    assert ctx22.eq_to(ctx22.mul(x, inv), ctx22.one(), 16)


def test_invert_one_plus_v_alternating(ctx22):
    x = ctx22.add(ctx22.one(), ctx22.v_gen(1))
    inv = ctx22.invert(x)
    # 1/(1+v) = 1 - v + v^2 - ... up to the v-degree cap
    for b in range(ctx22.D + 1):
        c = ctx22.coeff_at(inv, 0, ctx22.vcode((b,)))
        assert ctx22.padic.residue(c, 10) == ((-1) ** b) % 2 ** 10


def test_sum_with_negation_is_zero(ctx22):
    x = ctx22.add(ctx22.u_mono(2, 3), ctx22.scalar_mul(ctx22.padic.from_int(5), ctx22.v_gen(1)))
    z = ctx22.add(x, ctx22.neg(x))
    assert ctx22.is_zero_to(z, 16)


def test_mul_respects_vcap():
    ctx = CoeffContext(2, 2, N=8, D=3)
    v = ctx.v_gen(1)
    v2 = ctx.mul(v, v)
    v4 = ctx.mul(v2, v2)
    assert v4.is_zero() and v4.trunc
    v3 = ctx.mul(v2, v)
    assert not v3.trunc
    assert ctx.vexps(next(iter(v3.t))[1]) == (3,)


def test_trunc_flag_sticky():
    ctx = CoeffContext(2, 2, N=8, D=2)
    v = ctx.v_gen(1)
    deep = ctx.mul(ctx.mul(v, v), v)  # falls off the cap
    assert deep.trunc
    y = ctx.add(deep, ctx.one())
    assert y.trunc
    assert ctx.mul(y, ctx.one()).trunc


def test_distributivity_randomized():
    ctx = CoeffContext(3, 2, N=12, D=4, floor=1)
    rng = random.Random(7)

    def rand_elem():
        e = ctx.zero()
        for _ in range(rng.randint(1, 4)):
            c = ctx.padic.from_int(rng.randint(-40, 40))
            ue = rng.randint(-2, 2)
            vc = ctx.vcode((rng.randint(0, 2),))
            e = ctx.add(e, ctx.from_scalar(c, ue, vc))
        return e

    for _ in range(60):
        a, b, c = rand_elem(), rand_elem(), rand_elem()
        lhs = ctx.mul(a, ctx.add(b, c))
        rhs = ctx.add(ctx.mul(a, b), ctx.mul(a, c))
        assert ctx.eq_to(lhs, rhs, 12)
        assert ctx.eq_to(ctx.mul(a, b), ctx.mul(b, a), 12)


def test_invert_randomized_units():
    # randomized unit coefficients must roundtrip through inversion; random
    # digit collisions make relative precision dip arbitrarily, so relax the
    # floor and let the depth-12 verdict perform the honesty check
    ctx = CoeffContext(2, 2, N=24, D=4, floor=1)
    rng = random.Random(11)
    for _ in range(1000):
        lead_ue = rng.randint(-2, 2)
        x = ctx.u_mono(lead_ue, 1 + 2 * rng.randint(0, 15))
        for _ in range(rng.randint(0, 3)):
            c = ctx.padic.from_int(rng.randint(-30, 30))
            term = ctx.from_scalar(c, rng.randint(-2, 2), ctx.vcode((rng.randint(1, 4),)))
            x = ctx.add(x, term)
        for _ in range(rng.randint(0, 2)):
            c = ctx.padic.from_int(2 * rng.randint(-15, 15))
            x = ctx.add(x, ctx.from_scalar(c, rng.randint(-2, 2), 0))
        if not ctx.is_unit(x):
            continue
        inv = ctx.invert(x)
        assert ctx.eq_to(ctx.mul(x, inv), ctx.one(), 12)


def test_homogeneity():
    ctx = CoeffContext(2, 2, N=8, D=4, floor=4)
    # u has degree -2, v_1 has degree -2(p-1) = -2
    x = ctx.add(ctx.u_mono(1), ctx.v_gen(1))
    assert ctx.homogeneous_degree(x) == -2
    y = ctx.add(x, ctx.one())
    assert ctx.homogeneous_degree(y) is None
    prod = ctx.mul(x, x)
    assert ctx.homogeneous_degree(prod) == -4


def test_homogeneity_preserved_under_mul():
    # at p=3: deg u^3 = -6 and deg u*v_1 = -2 - 4 = -6
    ctx = CoeffContext(3, 2, N=10, D=6)
    h = ctx.add(ctx.u_mono(3), ctx.int_mul(3, ctx.shift_u(ctx.v_gen(1), 1)))
    assert ctx.homogeneous_degree(h) == -6
    assert ctx.homogeneous_degree(ctx.mul(h, h)) == -12


def test_shallow_marker_blocks_deep_verdict():
    ctx = CoeffContext(2, 2, N=8, D=4, floor=2)
    a = ctx.padic.from_int(1)
    b = ctx.padic.from_int(-1)
    marker = ctx.padic.add(a, b)  # exact cancellation: zero through 8 digits
    z = ctx.from_scalar(marker)
    assert ctx.is_zero_to(z, 8)
    with pytest.raises(PrecisionError):
        ctx.is_zero_to(z, 9)


def test_reduce_mod_pv(ctx22):
    x = ctx22.add(ctx22.u_mono(2, 3), ctx22.add(ctx22.from_int(2, 5), ctx22.v_gen(1)))
    red = ctx22.reduce_mod_pv(x)
    assert red == {2: 1}


def test_height_one_has_no_v():
    ctx = CoeffContext(5, 1, N=10, D=8)
    assert ctx.ncodes == 1
    with pytest.raises(ValueError):
        ctx.v_gen(1)
    # 2u^{-1} + 35 reduces to the monomial 2u^{-1} mod 5, hence is a unit
    x = ctx.add(ctx.u_mono(-1, 2), ctx.from_int(35))
    assert ctx.eq_to(ctx.mul(x, ctx.invert(x)), ctx.one(), 10)
