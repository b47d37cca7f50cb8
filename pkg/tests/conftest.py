import pytest

from syncword import sequences, synchro

# criterion number -> (passed, detail); filled in by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture(scope="session")
def tm():
    return sequences.load_dfao("thue_morse")


@pytest.fixture(scope="session")
def pf():
    return sequences.load_dfao("paperfolding")


@pytest.fixture(scope="session")
def pd():
    return sequences.load_dfao("period_doubling")


@pytest.fixture(scope="session")
def c2():
    return sequences.load_dfao("powers_of_two_char")


@pytest.fixture(scope="session")
def rho_tm(tm):
    return synchro.build_rho_sync(tm)
