import itertools
import json
import random
import warnings

import pytest
from hypothesis import given, strategies as st

from modunits.torsion import ResidueClass, ResidueKind, canonicalize, order, representatives
from modunits.unitvec import (
    ExponentVector,
    MergeWarning,
    VectorFormatError,
    load_vector,
    lookup,
    max_abs,
    search_valid,
    validate,
)

from conftest import L5, L7, L25, vec


def pts(level, *rs):
    return [canonicalize(level, r, s)[0] for r, s in rs]


def test_validate_examples():
    assert validate(vec(L5, (1, 0, 60))).valid
    rep = validate(vec(L5, (1, 0, 12)))
    assert not rep.valid and rep.sum_r2 == 2 and rep.sum_m == 0
    assert validate(vec(L5, (1, 0, 60), (2, 0, -60))).valid
    rep = validate(vec(L5, (1, 0, 5)))
    assert rep.sum_r2 == 0 and rep.sum_m == 5 and not rep.valid


@pytest.mark.parametrize("level", [L5, L7, L25])
def test_classical_siegel_units_valid(level):
    for a in representatives(level):
        assert ExponentVector(level, {a: 12 * level.ell}).valid


def test_report_fields_on_mixed_vector():
    v = vec(L7, (1, 2, 3), (3, 1, 5))
    r = validate(v)
    assert r.sum_r2 == (3 * 1 + 5 * 9) % 7
    assert r.sum_s2 == (3 * 4 + 5 * 1) % 7
    assert r.sum_rs == (3 * 2 + 5 * 3) % 7
    assert r.sum_m == 8


@given(st.lists(st.tuples(st.integers(0, 24), st.integers(0, 24), st.integers(-50, 50)), max_size=6))
def test_validity_independent_of_orbit_member(triples):
    good = [(r, s, m) for r, s, m in triples if order(L25, r, s) == 25]
    flipped = [(-r, -s, m) for r, s, m in good]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", MergeWarning)
        a = ExponentVector.from_entries(L25, good)
        b = ExponentVector.from_entries(L25, flipped)
    assert a == b and a.report == b.report


def test_noncanonical_entries_merge_with_warning():
    with pytest.warns(MergeWarning):
        v = ExponentVector.from_entries(L5, [(1, 0, 60), (4, 0, 60)])
    assert {(a.r, a.s): m for a, m in v} == {(1, 0): 120}
    with pytest.warns(MergeWarning):
        v = ExponentVector.from_entries(L5, [(1, 0, 60), (4, 0, -60)])
    assert len(v) == 0


def test_direct_construction_requires_canonical_keys():
    from modunits.torsion import Sector, TorsionPoint

    with pytest.raises(ValueError):
        ExponentVector(L5, {TorsionPoint(4, 0, Sector.UNIT_R): 60})
    with pytest.raises(ValueError):
        ExponentVector(L5, {canonicalize(L5, 1, 0)[0]: 0})


def test_lookup_examples(V0):
    assert lookup(V0, ResidueClass(ResidueKind.COPRIME, 1), 0) == 60
    assert lookup(V0, ResidueClass(ResidueKind.COPRIME, 2), 0) == 0
    assert lookup(V0, ResidueClass(ResidueKind.ELL_DIVIDES), 1) == 0


def test_lookup_preconditions():
    v = vec(L25, (5, 1, 300))
    assert lookup(v, ResidueClass(ResidueKind.P_DIVIDES_NOT_ELL, 5), 1) == 300
    with pytest.raises(ValueError):
        lookup(v, ResidueClass(ResidueKind.P_DIVIDES_NOT_ELL, 5), 10)
    with pytest.raises(ValueError):
        lookup(v, ResidueClass(ResidueKind.ELL_DIVIDES), 13)
    with pytest.raises(ValueError):
        lookup(v, ResidueClass(ResidueKind.COPRIME, 1), 25)


def test_max_abs():
    assert max_abs(vec(L5, (1, 0, 60))) == 60
    assert max_abs(vec(L5, (1, 0, 60), (2, 0, -60))) == 60
    assert max_abs(vec(L5, (1, 1, -24), (2, 3, 12))) == 24
    with pytest.raises(ValueError):
        max_abs(ExponentVector(L5))


def brute_valid(level, support, bound, step):
    """Independent scan: every assignment in step*Z, congruences checked on raw ints."""
    ell = level.ell
    vals = [m for m in range(-bound, bound + 1) if m % step == 0]
    out = []
    for ms in itertools.product(vals, repeat=len(support)):
        if not any(ms):
            continue
        r2 = sum(m * a.r**2 for m, a in zip(ms, support))
        s2 = sum(m * a.s**2 for m, a in zip(ms, support))
        rs = sum(m * a.r * a.s for m, a in zip(ms, support))
        if r2 % ell == s2 % ell == rs % ell == 0 and sum(ms) % 12 == 0:
            out.append(ms)
    return out


def as_tuple(v, support):
    return tuple(v.get(a.r, a.s) for a in support)


def test_search_single_point():
    support = pts(L5, (1, 0))
    found = [as_tuple(v, support) for v in search_valid(L5, support, 60)]
    assert found == [(-60,), (60,)]
    # no integer at all (step 1) other than +-60 and 0 works
    assert brute_valid(L5, support, 60, 1) == [(-60,), (60,)]


def test_search_two_points_contains_pair():
    support = pts(L5, (1, 0), (2, 0))
    found = [as_tuple(v, support) for v in search_valid(L5, support, 60)]
    assert (60, -60) in found and (-60, 60) in found


@pytest.mark.parametrize(
    "level, rs, bound",
    [
        (L5, [(1, 1), (2, 3), (0, 1)], 60),
        (L7, [(1, 1), (2, 3), (0, 1)], 84),
        (L25, [(5, 1), (1, 3)], 120),
        (L5, [(1, 0), (1, 1), (2, 2), (0, 2)], 48),
    ],
)
def test_search_matches_brute_force(level, rs, bound):
    support = pts(level, *rs)
    found = [as_tuple(v, support) for v in search_valid(level, support, bound)]
    assert found == brute_valid(level, support, bound, 12)
    assert all(v.valid for v in search_valid(level, support, bound))


def test_search_edge_cases():
    assert search_valid(L5, pts(L5, (1, 0)), 0) == []
    assert search_valid(L5, [], 60) == []
    with pytest.raises(ValueError):
        search_valid(L5, pts(L5, (1, 0)), 121)
    with pytest.raises(ValueError):
        search_valid(L7, representatives(L7)[:7], 12)


def test_validity_is_linear():
    found = search_valid(L5, pts(L5, (1, 1), (2, 3), (0, 1), (1, 4)), 48)
    rng = random.Random(7)
    for _ in range(100):
        a, b = rng.choice(found), rng.choice(found)
        s = a + b
        assert s.valid
        assert (max_abs(s) if len(s) else 0) <= max_abs(a) + max_abs(b)


def test_json_roundtrip(tmp_path):
    v = vec(L25, (5, 1, 300), (1, 3, -300), (0, 2, 300))
    path = tmp_path / "v.json"
    path.write_text(json.dumps(v.to_json()))
    assert load_vector(path) == v


@pytest.mark.parametrize(
    "data, needle",
    [
        ({"entries": []}, "level"),
        ({"level": {"p": 4, "f": 1}, "entries": []}, "level"),
        ({"level": {"p": 5, "f": 1}, "entries": {}}, "entries"),
        ({"level": {"p": 5, "f": 1}, "entries": [{"r": 1, "s": 0}]}, "entry 0"),
        ({"level": {"p": 5, "f": 1}, "entries": [{"r": 1, "s": 0, "m": 1}, {"r": 1, "s": 0, "m": 1.5}]}, "entry 1"),
        ({"level": {"p": 5, "f": 1}, "entries": [{"r": 5, "s": 0, "m": 60}]}, "order"),
        ([], "object"),
    ],
)
def test_from_json_errors(data, needle):
    with pytest.raises(VectorFormatError, match=needle):
        ExponentVector.from_json(data)


def test_load_vector_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(VectorFormatError):
        load_vector(path)
