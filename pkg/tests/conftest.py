import numpy as np
import pytest

from usbp_dg.operators import lgl_usbp

_ACCEPTANCE = {}


@pytest.fixture
def report_criterion():
    """Record ``(passed, detail)`` for an acceptance criterion.

    The terminal summary prints one line per recorded criterion. A criterion
    split over several tests passes only if every part passed.
    """

    def record(number, passed, detail):
        prev = _ACCEPTANCE.get(number)
        if prev is not None:
            passed = passed and prev[0]
            detail = prev[1] + "; " + detail
        _ACCEPTANCE[number] = (bool(passed), detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number}: {'PASS' if passed else 'FAIL'} | {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


@pytest.fixture(scope="session")
def pair_cache():
    cache = {}

    def get(N, lam):
        if (N, lam) not in cache:
            cache[N, lam] = lgl_usbp(N, lam)
        return cache[N, lam]

    return get
