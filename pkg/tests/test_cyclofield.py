from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from modunits.cyclofield import CycNumber, embed_complex, root_of_unity
from modunits.torsion import Level

L5, L7, L25 = Level(5), Level(7), Level(5, 2)
LEVELS = [L5, L7, L25]


def z(level, k=1):
    return root_of_unity(level, k)


small_q = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def cyc(draw, level=None, nonzero=False):
    level = level or draw(st.sampled_from(LEVELS))
    coeffs = draw(st.lists(small_q, min_size=level.phi, max_size=level.phi))
    x = CycNumber(level, coeffs)
    if nonzero and x.is_zero():
        x = x + 1
    return x


def test_root_of_unity_examples():
    assert z(L5, 0) == 1
    assert z(L5, 4).coeffs == (-1, -1, -1, -1)
    expected = [0] * 20
    for j in (0, 5, 10, 15):
        expected[j] = -1
    assert z(L25, 20) == CycNumber(L25, expected)


def test_arithmetic_examples():
    one = CycNumber.one(L5)
    assert z(L5) * z(L5, 4) == one
    assert z(L5) + CycNumber.zero(L5) == z(L5)
    assert (1 + z(L5)) * (1 - z(L5)) == 1 - z(L5, 2)


def test_invert_examples():
    assert CycNumber.one(L5).invert() == 1
    assert z(L5).invert() == z(L5, 4)
    assert CycNumber.rational(L5, 2).invert() == Fraction(1, 2)
    with pytest.raises(ZeroDivisionError):
        CycNumber.zero(L5).invert()


def test_level_mismatch_rejected():
    with pytest.raises(ValueError):
        z(L5) + z(L7)
    with pytest.raises(ValueError):
        z(L5) * z(L25)


def test_long_input_is_reduced():
    # 1 + z + ... + z^4 = 0 at level 5
    assert CycNumber(L5, [1, 1, 1, 1, 1]).is_zero()


@pytest.mark.parametrize("level", LEVELS)
def test_minimal_polynomial_identity(level):
    q = level.p ** (level.f - 1)
    total = sum((z(level, j * q) for j in range(level.p)), CycNumber.zero(level))
    assert total.is_zero()


@pytest.mark.parametrize("level", LEVELS)
def test_roots_have_order_ell(level):
    for k in range(-level.ell, 2 * level.ell):
        assert z(level, k) ** level.ell == 1


@given(st.sampled_from(LEVELS), st.integers(-100, 100), st.integers(-100, 100))
def test_root_product_rule(level, a, b):
    assert z(level, a) * z(level, b) == z(level, (a + b) % level.ell)


@settings(max_examples=200)
@given(cyc(nonzero=True))
def test_invert_is_inverse(x):
    assert x * x.invert() == 1


@given(st.data())
def test_field_laws(data):
    level = data.draw(st.sampled_from(LEVELS))
    x, y, w = (data.draw(cyc(level)) for _ in range(3))
    assert x * y == y * x
    assert (x * y) * w == x * (y * w)
    assert x * (y + w) == x * y + x * w
    assert x - x == 0
    if not y.is_zero():
        assert (x / y) * y == x


@given(st.data())
def test_conjugation_is_automorphism(data):
    level = data.draw(st.sampled_from(LEVELS))
    x, y = data.draw(cyc(level)), data.draw(cyc(level))
    assert (x * y).conjugate() == x.conjugate() * y.conjugate()
    assert x.conjugate().conjugate() == x


def test_embed_examples():
    assert embed_complex(CycNumber.one(L5)) == 1
    mp = mpmath.MPContext()
    mp.prec = 200
    # e(1/5) in radicals, independent of the power table
    re = (mp.sqrt(5) - 1) / 4
    im = mp.sqrt(10 + 2 * mp.sqrt(5)) / 4
    w = embed_complex(z(L5), 128)
    assert abs(w.real - re) < mpmath.mpf(2) ** -126
    assert abs(w.imag - im) < mpmath.mpf(2) ** -126
    assert abs(float(w.real) - 0.309017) < 1e-6 and abs(float(w.imag) - 0.951057) < 1e-6
    s = sum((z(L5, k) for k in range(5)), CycNumber.zero(L5))
    assert abs(embed_complex(s + 0, 128)) < 1e-25


def test_embed_unreduced_sum_is_small():
    # evaluate the five roots separately and add in floating point
    total = sum(embed_complex(z(L5, k), 128) for k in range(5))
    assert abs(total) < 1e-25


@given(st.data())
def test_embed_is_ring_homomorphism(data):
    level = data.draw(st.sampled_from(LEVELS))
    x, y = data.draw(cyc(level)), data.draw(cyc(level))
    ex, ey = embed_complex(x, 128), embed_complex(y, 128)
    scale = 1 + abs(ex) * abs(ey) + abs(ex) + abs(ey)
    assert abs(embed_complex(x * y, 128) - ex * ey) < 1e-30 * scale * 100
    assert abs(embed_complex(x + y, 128) - (ex + ey)) < 1e-30 * scale * 100
    assert abs(embed_complex(x.conjugate(), 128) - ex.conjugate()) < 1e-30 * scale * 100


def test_embed_rejects_low_precision():
    with pytest.raises(ValueError):
        embed_complex(z(L5), 32)


@given(cyc())
def test_json_roundtrip(x):
    data = x.to_json()
    assert len(data) == x.level.phi and all("/" in c for c in data)
    assert CycNumber.from_json(x.level, data) == x


def test_galois_action():
    assert z(L7, 2).galois(3) == z(L7, 6)
    with pytest.raises(ValueError):
        z(L25).galois(5)
