from __future__ import annotations

import numpy as np

from qcat.frobenius import QSystem
from qcat.morphisms import Morphism, compose, random_morphism, tensor


def random_gauge(cat, theta, rng):
    """A Haar-ish random unitary in End(theta)."""
    u = random_morphism(cat, theta, theta, rng)
    blocks = {}
    for c, b in u.blocks.items():
        uu, _, vh = np.linalg.svd(b)
        blocks[c] = uu @ vh
    return Morphism(cat, theta, theta, blocks)


def gauge_qsystem(cat, q, u):
    """Transport a Q-system along a unitary of its object."""
    return QSystem(
        cat,
        q.theta,
        compose(u, q.w),
        compose(tensor(u, u), compose(q.x, u.adjoint())),
    )
