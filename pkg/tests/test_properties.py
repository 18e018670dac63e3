from __future__ import annotations

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from qcat.category import build_category
from qcat.fixtures import ising_category
from qcat.morphisms import ObjectExpr, compose, random_morphism, tensor, trace

CAT = build_category(ising_category())
X = ObjectExpr.word("sig", "sig")


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), a=st.complex_numbers(max_magnitude=10, allow_nan=False))
def test_trace_linear_and_cyclic(seed, a):
    rng = np.random.default_rng(seed)
    f = random_morphism(CAT, X, X, rng)
    g = random_morphism(CAT, X, X, rng)
    assert abs(trace(CAT, a * f + g) - (a * trace(CAT, f) + trace(CAT, g))) < 1e-8 * (1 + abs(a))
    assert abs(trace(CAT, compose(f, g)) - trace(CAT, compose(g, f))) < 1e-8


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_trace_multiplicative_over_tensor(seed):
    rng = np.random.default_rng(seed)
    f = random_morphism(CAT, X, X, rng)
    g = random_morphism(CAT, X, X, rng)
    lhs = trace(CAT, tensor(f, g))
    rhs = trace(CAT, f) * trace(CAT, g)
    assert abs(lhs - rhs) < 1e-7 * (1.0 + abs(rhs))
