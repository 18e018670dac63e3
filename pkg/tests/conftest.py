from __future__ import annotations

import numpy as np
import pytest

from qcat.category import build_category
from qcat.fixtures import ising_category, trivial_category, z2_category
from qcat.frobenius import ising_q, trivial_qsystem_in


@pytest.fixture(scope="session")
def ising():
    return build_category(ising_category())


@pytest.fixture(scope="session")
def z2():
    return build_category(z2_category())


@pytest.fixture(scope="session")
def trivial():
    return build_category(trivial_category())


@pytest.fixture(scope="session")
def iq(ising):
    return ising_q(ising)


@pytest.fixture(scope="session")
def tq(ising):
    return trivial_qsystem_in(ising)


@pytest.fixture(scope="session")
def ising_s():
    s = np.sqrt(2.0)
    return np.array([[1, 1, s], [1, 1, -s], [s, -s, 0]]) / 2.0
