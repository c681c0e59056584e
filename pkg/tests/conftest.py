import functools

import pytest

from modunits import ExponentVector, Level, canonicalize, search_valid

L5, L7, L25 = Level(5), Level(7), Level(5, 2)

_acceptance_lines: list[str] = []


def record_acceptance(label: str, ok: bool, detail: str = "") -> None:
    tag = "PASS" if ok else "FAIL"
    _acceptance_lines.append(f"{tag}  {label}" + (f"  [{detail}]" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)


def vec(level, *triples):
    return ExponentVector.from_entries(level, triples)


@functools.lru_cache(maxsize=None)
def battery() -> dict[str, ExponentVector]:
    """The acceptance battery; the level-7 member comes from search_valid."""
    support = [canonicalize(L7, r, s)[0] for r, s in [(1, 1), (2, 3), (0, 1)]]
    found = search_valid(L7, support, 84)
    v7 = next(
        v for v in found
        if len(v) == 3 and min(v.entries.values()) < 0 < max(v.entries.values())
    )
    return {
        "V0": vec(L5, (1, 0, 60)),
        "V1": vec(L5, (1, 1, 60)),
        "V4": vec(L5, (1, 0, 60), (2, 0, -60)),
        "L7": v7,
        "L25": vec(L25, (5, 1, 300), (1, 3, -300), (0, 2, 300), (10, 7, 300)),
    }


@pytest.fixture(scope="session")
def bat():
    return battery()


@pytest.fixture
def V0():
    return battery()["V0"]


@pytest.fixture
def V1():
    return battery()["V1"]


@pytest.fixture
def V4():
    return battery()["V4"]
