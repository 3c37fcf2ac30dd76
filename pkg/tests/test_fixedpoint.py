import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cordic_kit.fixedpoint import Fx, QFormat, add, asr, from_real, neg, sub, to_real

Q213 = QFormat(16, 13)


def test_qformat_validation():
    assert str(QFormat(8, 5)) == "Q2.5"
    assert QFormat.default(16) == Q213
    with pytest.raises(ValueError):
        QFormat(3, 0)
    with pytest.raises(ValueError):
        QFormat(16, 14)  # only 1 integer bit


def test_from_real_examples():
    assert from_real(0.0, Q213).raw == 0
    assert from_real(1.0, Q213).raw == 8192
    # round(pi/4 * 2**13) from a 40-digit mpmath evaluation
    assert from_real(math.pi / 4, Q213).raw == 6434


def test_from_real_ties_to_even():
    q = QFormat(8, 1)
    assert from_real(0.25, q).raw == 0
    assert from_real(0.75, q).raw == 2
    assert from_real(-0.25, q).raw == 0


def test_from_real_overflow():
    with pytest.raises(OverflowError):
        from_real(4.0, Q213)
    assert from_real(-4.0, Q213).raw == -32768
    with pytest.raises(OverflowError):
        from_real(float("nan"), Q213)


def test_to_real_examples():
    assert to_real(Fx(8192, Q213)) == 1.0
    assert to_real(Fx(-8192, Q213)) == -1.0
    assert to_real(Fx(6434, Q213)) == 0.785400390625


def test_add_sub_examples():
    assert add(Fx(5, Q213), Fx(-5, Q213)).raw == 0
    assert sub(Fx(0, Q213), Fx(1, Q213)).raw == -1
    with pytest.raises(OverflowError):
        add(Fx(Q213.max_raw, Q213), Fx(1, Q213))
    with pytest.raises(OverflowError):
        neg(Fx(Q213.min_raw, Q213))
    with pytest.raises(ValueError):
        add(Fx(1, Q213), Fx(1, QFormat(16, 12)))


def test_asr_examples():
    assert asr(Fx(8, Q213), 2).raw == 2
    assert asr(Fx(-1, Q213), 5).raw == -1
    assert asr(Fx(-7, Q213), 1).raw == -4
    assert asr(Fx(-7, Q213), 40).raw == -1
    assert asr(Fx(7, Q213), 40).raw == 0
    with pytest.raises(ValueError):
        asr(Fx(1, Q213), -1)


def test_hex_twos_complement():
    assert Fx(-1, Q213).hex() == "0xFFFF"
    assert Fx(42, QFormat(8, 5)).hex() == "0x2A"
    assert Fx(-8, QFormat(8, 5)).hex() == "0xF8"


formats = st.builds(lambda w, f: QFormat(w, min(f, w - 3)),
                    st.integers(4, 40), st.integers(0, 37))


@st.composite
def fx_values(draw, fmt=None):
    fmt = fmt or draw(formats)
    return Fx(draw(st.integers(fmt.min_raw, fmt.max_raw)), fmt)


@given(formats, st.floats(-1.0, 1.0))
def test_round_trip_within_half_lsb(fmt, u):
    v = u * 2 ** (fmt.width - fmt.frac - 2)  # stays inside the range
    assert abs(to_real(from_real(v, fmt)) - v) <= 2.0 ** (-fmt.frac - 1)


@given(fx_values(), st.integers(0, 50), st.integers(0, 50))
def test_asr_composes(a, j, k):
    assert asr(a, j + k) == asr(asr(a, j), k)


@given(fx_values(), st.integers(0, 50))
def test_asr_is_floor(a, k):
    scaled = Fraction(a.raw, 1 << k)
    assert asr(a, k).raw == math.floor(scaled)


@given(st.data())
def test_add_sub_exact(data):
    fmt = data.draw(formats)
    a = data.draw(fx_values(fmt))
    b = data.draw(fx_values(fmt))
    for op, f in ((add, lambda p, q: p + q), (sub, lambda p, q: p - q)):
        exact = f(a.raw, b.raw)
        if fmt.fits(exact):
            assert to_real(op(a, b)) == f(to_real(a), to_real(b))
        else:
            with pytest.raises(OverflowError):
                op(a, b)
