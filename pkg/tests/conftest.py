import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from cait.frontend.parser import parse_model, parse_network  # noqa: E402
from cait.gen import gen_universe  # noqa: E402
from cait.laws import law_universe  # noqa: E402


@pytest.fixture(scope="session")
def gu():
    return gen_universe()


@pytest.fixture(scope="session")
def lu():
    return law_universe()


@pytest.fixture
def net_in():
    """Parse a network against a universe: ``net_in(u, text)``."""
    return lambda u, text: parse_network(text, u)


SIMPLE = """\
location h k
dist h k 1
delta 1
channel c range inf domain {0, 1}
channel d range 0 domain {0, 1}
sensor s node domain {0, 1}
sensor t location domain {0, 1}
actuator a domain {0, 1}
actuator b domain {0, 1}
network
  0
"""


@pytest.fixture(scope="session")
def su():
    return parse_model(SIMPLE)[0]
