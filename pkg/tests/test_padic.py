from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from morava.padic import EXACT, PadicContext, PadicScaled, PrecisionError


def test_invert_three_five_digits():
    # frozen: 3^{-1} mod 2^5 is 11, since 3*11 = 33 = 1 + 32
    ctx = PadicContext(2, N=5, floor=1)
    inv = ctx.invert(ctx.from_int(3))
    assert inv.val == 0
    assert inv.unit == 11
    assert (3 * inv.unit) % 32 == 1


def test_one_plus_one():
    ctx = PadicContext(2, N=8, floor=2)
    s = ctx.add(ctx.one(), ctx.one())
    assert s.val == 1 and s.unit == 1


def test_exact_cancellation():
    ctx = PadicContext(3, N=10, floor=4)
    x = ctx.from_int(7)
    z = ctx.add(x, ctx.neg(x))
    assert z.is_zero()
    assert z.val == 10  # pinned through the full working window


def test_true_zero_marker():
    ctx = PadicContext(5, N=6)
    z = ctx.from_int(0)
    assert z.is_zero() and z.val == EXACT
    assert ctx.is_zero_to(z, 10 ** 6)


def test_partial_cancellation_floor():
    ctx = PadicContext(2, N=8, floor=6)
    a = ctx.from_int(1)
    b = ctx.from_int(-1 + 2 ** 5)  # agree through 5 digits, 3 would survive
    with pytest.raises(PrecisionError) as ei:
        ctx.add(a, b)
    assert ei.value.needed_extra == 3
    # the raw path still reports the exact valuation
    r = ctx.add_raw(a, b)
    assert r.val == 5 and r.prec == 3


def test_from_fraction():
    ctx = PadicContext(2, N=8)
    x = ctx.from_fraction(3, 4)
    # 3/4 = 2^{-2} * 3
    assert x.val == -2 and x.unit == 3
    y = ctx.from_fraction(1, 3)
    assert ctx.residue(ctx.mul(y, ctx.from_int(3)), 8) == 1


def test_invert_zero_raises():
    ctx = PadicContext(2, N=6)
    with pytest.raises(ZeroDivisionError):
        ctx.invert(ctx.zero())
    with pytest.raises(PrecisionError):
        ctx.invert(ctx.zero_known_to(4))


def test_is_zero_to_approximate_zero():
    ctx = PadicContext(2, N=8)
    z = ctx.zero_known_to(5)
    assert ctx.is_zero_to(z, 5)
    with pytest.raises(PrecisionError) as ei:
        ctx.is_zero_to(z, 9)
    assert ei.value.needed_extra == 4


def test_residue():
    ctx = PadicContext(3, N=6)
    assert ctx.residue(ctx.from_int(14), 2) == 14 % 9
    assert ctx.residue(ctx.from_int(27), 2) == 0
    with pytest.raises(ValueError):
        ctx.residue(ctx.from_fraction(1, 3), 1)


def test_units_stored_reduced():
    ctx = PadicContext(2, N=4)
    x = ctx.from_int(3 + 2 ** 7)
    assert x.unit == (3 + 128) % 16
    y = ctx.mul(ctx.from_int(35), ctx.from_int(11))
    assert y.unit == (35 * 11) % 16


nz = st.integers(min_value=-10 ** 6, max_value=10 ** 6).filter(lambda m: m != 0)


def _val(p, m):
    v = 0
    while m % p == 0:
        m //= p
        v += 1
    return v


@settings(derandomize=True, max_examples=200)
@given(a=nz, b=nz, p=st.sampled_from([2, 3, 5]))
def test_valuation_multiplicative(a, b, p):
    ctx = PadicContext(p, N=40)
    x = ctx.mul(ctx.from_int(a), ctx.from_int(b))
    assert x.val == _val(p, a * b)
    if 0 <= x.val <= 40:
        assert (x.unit * ctx.ppow(x.val)) % ctx.pN == (a * b) % ctx.pN


@settings(derandomize=True, max_examples=200)
@given(a=nz, b=nz, p=st.sampled_from([2, 3, 5]))
def test_valuation_ultrametric(a, b, p):
    ctx = PadicContext(p, N=40, floor=1)
    s = ctx.add_raw(ctx.from_int(a), ctx.from_int(b))
    lo = min(_val(p, a), _val(p, b))
    if a + b == 0:
        assert s.is_zero()
    else:
        assert s.val == _val(p, a + b)
        assert s.val >= lo
        if _val(p, a) != _val(p, b):
            assert s.val == lo


@settings(derandomize=True, max_examples=150)
@given(a=nz, p=st.sampled_from([2, 3, 5]))
def test_invert_roundtrip(a, p):
    ctx = PadicContext(p, N=30)
    x = ctx.from_int(a)
    prod = ctx.mul(x, ctx.invert(x))
    assert prod.val == 0 and prod.unit == 1


@settings(derandomize=True, max_examples=150)
@given(num=nz, den=nz, p=st.sampled_from([2, 3]))
def test_from_fraction_agrees_with_exact(num, den, p):
    # multiply the approximate fraction by den: must recover num mod p^N
    ctx = PadicContext(p, N=25, floor=1)
    f = Fraction(num, den)
    x = ctx.from_fraction(f.numerator, f.denominator)
    back = ctx.mul(x, ctx.from_int(f.denominator))
    d = ctx.add_raw(back, ctx.neg(ctx.from_int(f.numerator)))
    # numerator has nonnegative valuation, so 25 digits survive the roundtrip
    assert ctx.is_zero_to(d, 25)
