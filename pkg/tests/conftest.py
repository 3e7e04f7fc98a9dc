import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from code_forge import AdditiveCode, field_create  # noqa: E402

# Small F_2 code (k=3, s=2, n=4) shared by the design and decoding tests.
# The encoders are frozen literally so the expected values below do not
# depend on the random generator.
TINY_ENCODERS = [
    [[0, 1, 1], [1, 0, 0]],
    [[1, 1, 0], [0, 1, 0]],
    [[0, 1, 0], [0, 1, 1]],
    [[0, 0, 1], [1, 1, 1]],
]


@pytest.fixture(scope="session")
def F2():
    return field_create(2)


@pytest.fixture(scope="session")
def F3():
    return field_create(3)


@pytest.fixture(scope="session")
def F4():
    return field_create(2, 2)


@pytest.fixture(scope="session")
def F16():
    return field_create(2, 4)


@pytest.fixture(scope="session")
def tiny_code(F2):
    return make_tiny_code()


def make_tiny_code():
    return AdditiveCode(field_create(2), 3, 2, 4, TINY_ENCODERS, {"kind": "rlc"})


# --- acceptance summary -------------------------------------------------------------
# tests/test_acceptance.py names each test test_ac<NN>_...; one line per criterion
# is printed at the end of the session.

_ACCEPTANCE: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance.py" not in report.nodeid or not name.startswith("test_ac"):
        return
    key = "AC-" + str(int(name[7:9]))
    if report.when == "call" or report.failed:
        prev = _ACCEPTANCE.get(key, ("PASS", 0.0))
        status = "FAIL" if report.failed or prev[0] == "FAIL" else "PASS"
        _ACCEPTANCE[key] = (status, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(_ACCEPTANCE, key=lambda k: int(k[3:])):
        status, secs = _ACCEPTANCE[key]
        terminalreporter.write_line(f"{key}: {status} ({secs:.2f} s)")
