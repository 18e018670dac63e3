from __future__ import annotations

import numpy as np
import pytest

from qcat.decompose import (
    central_decomposition,
    check_intermediate,
    direct_sum_qsystems,
    irreducible_decomposition,
    reduced_qsystem,
)
from qcat.errors import ConditionError, NotProjectionError, NotSimpleError
from qcat.frobenius import check_qsystem, matrix_qsystem, qsystems_equivalent
from qcat.morphisms import ObjectExpr, compose, identity, inclusion, random_morphism


def _summand_projection(cat, theta, idxs):
    p = None
    for i in idxs:
        inc = inclusion(cat, theta, i)
        term = compose(inc, inc.adjoint())
        p = term if p is None else p + term
    return p


def test_trivial_projection_is_intermediate(ising, iq):
    red = check_intermediate(ising, iq, identity(ising, iq.theta))
    assert check_qsystem(ising, red.child).ok
    assert abs(red.child.d - iq.d) < 1e-9


def test_not_projection_rejected(ising, iq):
    bad = 0.5 * random_morphism(ising, iq.theta, iq.theta, np.random.default_rng(0))
    with pytest.raises(NotProjectionError):
        reduced_qsystem(ising, iq, bad)


def test_incompatible_projection_rejected(ising, iq, tq):
    # projecting a direct sum onto one block discards part of the unit, so it
    # cannot cut out an intermediate Q-system
    total = direct_sum_qsystems(ising, [tq, iq])
    p = _summand_projection(ising, total.theta, [1])
    with pytest.raises(ConditionError):
        check_intermediate(ising, total, p)


def test_direct_sum_round_trip(ising, iq, tq):
    total = direct_sum_qsystems(ising, [tq, iq])
    assert check_qsystem(ising, total).ok
    parts = central_decomposition(ising, total)
    assert len(parts) == 2
    ds = sorted(red.child.d for _, red in parts)
    assert np.allclose(ds, sorted([tq.d, iq.d]), atol=1e-8)
    for _, red in parts:
        assert check_qsystem(ising, red.child).ok
        target = tq if abs(red.child.d - tq.d) < 1e-6 else iq
        assert qsystems_equivalent(ising, red.child, target)


def test_simple_qsystem_has_trivial_centre(ising, iq):
    parts = central_decomposition(ising, iq)
    assert len(parts) == 1


def test_irreducible_decomposition_of_matrix_qsystem(ising):
    q = matrix_qsystem(ising, ObjectExpr(((), ("sig",))))
    parts = irreducible_decomposition(ising, q)
    assert len(parts) == 2
    ds = sorted(red.child.d for _, _, _, red in parts)
    assert np.allclose(ds, [1.0, np.sqrt(2.0)], atol=1e-8)
    for _, _, _, red in parts:
        assert check_qsystem(ising, red.child).ok


def test_irreducible_decomposition_requires_simple(ising, iq, tq):
    total = direct_sum_qsystems(ising, [tq, iq])
    with pytest.raises(NotSimpleError):
        irreducible_decomposition(ising, total)


def test_non_scalar_n_p_is_reported(ising):
    """The diagonal subalgebra of the (1 + sig) matrix Q-system has unequal
    corner dimensions: its n_P is non-scalar and the report must say so."""
    q = matrix_qsystem(ising, ObjectExpr(((), ("sig",))))
    p = _summand_projection(ising, q.theta, [0, 3])
    red = check_intermediate(ising, q, p)
    assert not red.n_p_scalar
    assert max(red.n_p_spectrum) - min(red.n_p_spectrum) > 0.1
    # the deformed child is nevertheless a genuine Q-system
    assert check_qsystem(ising, red.child).ok


@pytest.mark.parametrize("seed", range(100))
def test_direct_sum_decomposition_property(ising, iq, tq, seed):
    """Random direct sums decompose back into their parts (by dimension)."""
    rng = np.random.default_rng(seed)
    pool = [tq, iq]
    picks = [pool[rng.integers(0, 2)] for _ in range(int(rng.integers(2, 4)))]
    total = direct_sum_qsystems(ising, picks)
    assert check_qsystem(ising, total).ok
    parts = central_decomposition(ising, total, seed=int(seed))
    assert len(parts) == len(picks)
    assert np.allclose(
        sorted(red.child.d for _, red in parts),
        sorted(p.d for p in picks),
        atol=1e-7,
    )
