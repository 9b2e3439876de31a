import sys
from pathlib import Path

import pytest

from recspec.graphs import enumerate_universe

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture(scope="session")
def u_a1():
    return enumerate_universe(["a"], 1)


@pytest.fixture(scope="session")
def u_ab1():
    return enumerate_universe(["a", "b"], 1)


@pytest.fixture(scope="session")
def u_a2():
    return enumerate_universe(["a"], 2)


@pytest.fixture(scope="session")
def u_ab2():
    return enumerate_universe(["a", "b"], 2)
