import pytest

from orbitlab.arith import build_spf

ACCEPTANCE = {}


@pytest.fixture(scope="session")
def table_small():
    return build_spf(10**5 + 2)


@pytest.fixture(scope="session")
def table_1e6():
    return build_spf(10**6 + 2)


@pytest.fixture(scope="session")
def table_1e7():
    return build_spf(10**7 + 2)


def record(number, ok, detail):
    ACCEPTANCE[number] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
