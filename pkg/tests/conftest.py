from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from pervmat.arrangement import boolean, concurrent_lines, enumerate_faces, points_on_line, three_lines
from pervmat.catalog import index_for
from pervmat.strata import ProductIndex

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    """Remember a verdict for the end-of-run acceptance summary and print it."""
    ACCEPTANCE[criterion] = (ok, detail)
    print(f"ACCEPTANCE {criterion:2d} {'PASS' if ok else 'FAIL'}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"ACCEPTANCE {n:2d} {'PASS' if ok else 'FAIL'}: {detail}")


TEST_ARRANGEMENTS = {
    "line": boolean(1),
    "boolean2": boolean(2),
    "three_lines": three_lines(),
    "boolean3": boolean(3),
    "four_lines": concurrent_lines(4),
}


@pytest.fixture(scope="session")
def posets():
    return {name: enumerate_faces(arr) for name, arr in TEST_ARRANGEMENTS.items()}


@pytest.fixture(scope="session")
def line():
    return index_for("line")


@pytest.fixture(scope="session")
def boolean2():
    return index_for("boolean2")


@pytest.fixture(scope="session")
def three():
    return index_for("three_lines")


@pytest.fixture(scope="session")
def affine01():
    return index_for("affine01")


@pytest.fixture(scope="session")
def central_indexes(line, boolean2, three):
    return {"line": line, "boolean2": boolean2, "three_lines": three}


@pytest.fixture(scope="session")
def affine_indexes(affine01):
    return {"affine01": affine01, "affine_three": ProductIndex.of(points_on_line([-1, 0, 2]))}
