import pytest

from qecost import load_algorithm, load_technology, resolve_spec_path

TECH_NAMES = ("superconductors", "ion_traps", "neutral_atoms")

# Filled by test_acceptance; echoed once at the end of the run.
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(scope="session")
def shor():
    return load_algorithm(resolve_spec_path("shor1024"))


@pytest.fixture(scope="session")
def techs():
    return {name: load_technology(resolve_spec_path(name)) for name in TECH_NAMES}


@pytest.fixture(scope="session")
def sc(techs):
    return techs["superconductors"]


@pytest.fixture(scope="session")
def ion(techs):
    return techs["ion_traps"]


@pytest.fixture(scope="session")
def na(techs):
    return techs["neutral_atoms"]


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
