import json
import os

import pytest

from ekkit.lattice import tau_lattice

TAUS = [1j, 0.5 + 1j, -0.25 + 1.1j]
ORACLE_PATH = os.path.join(os.path.dirname(__file__), "oracles", "frozen.json")


@pytest.fixture(scope="session")
def frozen():
    with open(ORACLE_PATH) as fh:
        return json.load(fh)


@pytest.fixture(params=TAUS, ids=["i", "half+i", "skew"])
def lat(request):
    return tau_lattice(request.param)
