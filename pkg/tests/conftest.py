import os

import pytest

from entangle_census.family import builtin, from_config
from entangle_census.lattice import enumerate_F
from entangle_census.poly import HomogeneousPoly as H


def synthetic_families():
    """Three small valid families with squarefree gcd and no real common root."""
    C1 = H(2, [1, 0, 1])
    C3 = H(2, [1, 1, 1])
    return [
        from_config(H(0, [-1]) * C1, H(1, [0, 1]) * C1, name="S1"),
        from_config(H(2, [-2, 0, -1]) * C1, H(4, [1, 1, 0, 0, 2]) * C1, name="S2"),
        from_config(H(2, [-3, 0, 1]) * C3, H(4, [1, 1, 0, 0, 1]) * C3, name="S3"),
    ]


def synthetic_c2_family():
    """A valid family with ``C^2 | B``, where the closed-form density applies."""
    C = H(2, [1, 0, 1])
    return from_config(H(2, [-2, 0, -1]) * C, H(2, [3, 0, 1]) * C * C, name="S4")


@pytest.fixture(scope="session", autouse=True)
def _isolated_cache(tmp_path_factory):
    # keep density and LMFDB caches out of the user's home
    old = os.environ.get("ENTANGLE_CACHE_DIR")
    os.environ["ENTANGLE_CACHE_DIR"] = str(tmp_path_factory.mktemp("cache"))
    yield
    if old is None:
        os.environ.pop("ENTANGLE_CACHE_DIR", None)
    else:
        os.environ["ENTANGLE_CACHE_DIR"] = old


@pytest.fixture(scope="session")
def F1():
    return builtin("F1")


@pytest.fixture(scope="session")
def F2():
    return builtin("F2")


@pytest.fixture(scope="session")
def synthetic():
    return synthetic_families()


@pytest.fixture(scope="session")
def synthetic_c2():
    return synthetic_c2_family()


@pytest.fixture(scope="session")
def records_F1():
    return list(enumerate_F(builtin("F1"), 10 ** 45))


@pytest.fixture(scope="session")
def records_F2():
    return list(enumerate_F(builtin("F2"), 10 ** 60))


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
