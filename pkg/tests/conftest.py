import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from quechuakb import builtin_geometry, builtin_profile, builtin_table  # noqa: E402


@pytest.fixture(scope="session")
def quechua():
    return builtin_profile("quechua")


@pytest.fixture(scope="session")
def quechua_table():
    return builtin_table("quechua")


@pytest.fixture(scope="session")
def ansi32():
    return builtin_geometry("ansi32")


ACCEPTANCE = []


@pytest.fixture
def record():
    def _record(number, ok, detail):
        ACCEPTANCE.append((number, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, ok, detail in sorted(ACCEPTANCE, key=lambda r: r[0]):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
