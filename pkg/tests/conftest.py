import pytest

from fibercpp.ff_core import field_of_order, is_prime

ACCEPTANCE_RESULTS = {}


def primes_one_mod(modulus, hi, lo=2):
    return [q for q in range(lo, hi + 1) if is_prime(q) and q % modulus == 1]


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_RESULTS


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, desc = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key:>2}: {'PASS' if ok else 'FAIL'}  {desc}")


@pytest.fixture(scope="session")
def f109():
    return field_of_order(109)


@pytest.fixture(scope="session")
def f343():
    return field_of_order(343)
