import math

import mpmath
import pytest

from modunits.bounds import b2_double_loop, bound_chain, envelope_scan, slack
from modunits.unitvec import ExponentVector

from conftest import L5, battery


def test_bound_chain_examples(V0):
    r4 = bound_chain(V0, 4)
    assert r4.abs_c == 60 and r4.b2 == 3300 and r4.chain_ok and r4.b3 is None
    r1 = bound_chain(V0, 1)
    assert r1.abs_c == 60 and r1.b1 == 60 and r1.b2 == 300 and r1.chain_ok


def test_bound_chain_empty_vector():
    for n in (1, 7, 30):
        r = bound_chain(ExponentVector(L5), n)
        assert r.abs_c == 0 and r.b1 == 0 and r.b2 == 0 and r.chain_ok
        assert r.b3 is None or r.b3 == 0


def test_b1_by_hand(V0):
    # n = 4: pairs (d, k) with |t_{4/dk}(k)|: k = 1 -> 60 (d = 1, 2, 4), k = 2 -> 0, k = 4 -> 240
    assert bound_chain(V0, 4).b1 == mpmath.mpf(60 * 3 + 240) / 4


def test_b3_only_from_16(V0):
    assert bound_chain(V0, 15).b3 is None
    r = bound_chain(V0, 16)
    assert abs(float(r.b3) - 4 * 5 * 60 * math.log(math.log(16)) ** 2) < 1e-9


@pytest.mark.parametrize("name", ["V0", "V1", "V4", "L7"])
def test_b2_two_ways(name):
    v = battery()[name]
    for n in range(1, 201):
        assert bound_chain(v, n).b2 == b2_double_loop(v, n)


def test_slack_default():
    assert slack(3, 128) == mpmath.mpf(3) * mpmath.mpf(2) ** -100


@pytest.mark.parametrize("name", ["V0", "V4", "V1"])
def test_envelope_scan(name):
    scan = envelope_scan(battery()[name], 200)
    assert len(scan.reports) == 200
    assert scan.violations == [] and scan.chain_failures == []
    if name == "V0":
        assert scan.argmax % 5 in (1, 4)


def test_envelope_scan_requires_16(V0):
    with pytest.raises(ValueError):
        envelope_scan(V0, 15)
