from __future__ import annotations

import numpy as np
import pytest

from qcat.morphisms import (
    ObjectExpr,
    braiding,
    compose,
    endo_power,
    engine,
    hom_basis,
    identity,
    inclusion,
    left_trace,
    morphism_from_json,
    obj_dim,
    random_morphism,
    range_isometry,
    right_trace,
    sector_isometry,
    standard_pair,
    tensor,
    trace,
)

SIG2 = ObjectExpr.word("sig", "sig")
SSS = ObjectExpr.word("sig", "sig", "sig")


def test_identity_and_compose(ising):
    f = random_morphism(ising, SIG2, SSS, np.random.default_rng(0))
    assert (compose(identity(ising, SSS), f) - f).max_abs() == 0.0
    assert (compose(f, identity(ising, SIG2)) - f).max_abs() == 0.0


def test_tensor_functorial(ising):
    rng = np.random.default_rng(1)
    a = random_morphism(ising, SIG2, SIG2, rng)
    b = random_morphism(ising, SIG2, SIG2, rng)
    c = random_morphism(ising, SSS, SSS, rng)
    d = random_morphism(ising, SSS, SSS, rng)
    lhs = compose(tensor(a, c), tensor(b, d))
    rhs = tensor(compose(a, b), compose(c, d))
    assert (lhs - rhs).max_abs() < 1e-12


def test_braiding_unitary_and_inverse(ising):
    for sign in ("+", "-"):
        eps = braiding(ising, SIG2, SSS, sign)
        assert (compose(eps, eps.adjoint()) - identity(ising, SSS @ SIG2)).max_abs() < 1e-12
    plus = braiding(ising, SIG2, SSS, "+")
    minus = braiding(ising, SSS, SIG2, "-")
    assert (minus - plus.adjoint()).max_abs() < 1e-12


def test_braiding_naturality(ising):
    rng = np.random.default_rng(2)
    f = random_morphism(ising, SIG2, SSS, rng)
    g = random_morphism(ising, SIG2, SIG2, rng)
    lhs = compose(braiding(ising, SSS, SIG2, "+"), tensor(f, g))
    rhs = compose(tensor(g, f), braiding(ising, SIG2, SIG2, "+"))
    assert (lhs - rhs).max_abs() < 1e-10


def test_standard_pair_zigzag(ising):
    for x in (SIG2, SSS, ObjectExpr.word("eps", "sig")):
        pair = standard_pair(ising, x)
        idx = identity(ising, x)
        idc = identity(ising, pair.conj)
        zig = compose(tensor(pair.rbar.adjoint(), idx), tensor(idx, pair.r))
        zag = compose(tensor(pair.r.adjoint(), idc), tensor(idc, pair.rbar))
        assert (zig - idx).max_abs() < 1e-10
        assert (zag - idc).max_abs() < 1e-10
        d = obj_dim(ising, x)
        assert abs(compose(pair.r.adjoint(), pair.r).scalar() - d) < 1e-10


@pytest.mark.parametrize("seed", range(100))
def test_trace_properties(ising, seed):
    rng = np.random.default_rng(seed)
    f = random_morphism(ising, SIG2, SIG2, rng)
    g = random_morphism(ising, SIG2, SIG2, rng)
    assert abs(trace(ising, compose(f, g)) - trace(ising, compose(g, f))) < 1e-9
    assert trace(ising, compose(f.adjoint(), f)).real > -1e-12
    assert abs(trace(ising, identity(ising, SIG2)) - obj_dim(ising, SIG2)) < 1e-10


@pytest.mark.parametrize("seed", range(100))
def test_left_equals_right_trace_standard(ising, seed):
    rng = np.random.default_rng(1000 + seed)
    f = random_morphism(ising, SIG2 @ SIG2, SIG2 @ SIG2, rng)
    lt = right_trace(ising, f, SIG2, SIG2, SIG2)
    rt = left_trace(ising, f, SIG2, SIG2, SIG2)
    assert abs(trace(ising, lt) - trace(ising, rt)) < 1e-9
    full = trace(ising, f)
    assert abs(trace(ising, lt) - full) < 1e-9


def test_partial_traces_of_full_swap_agree(ising):
    rng = np.random.default_rng(7)
    f = random_morphism(ising, SIG2 @ SIG2, SIG2 @ SIG2, rng)
    lt = left_trace(ising, f, SIG2, SIG2, SIG2)
    rt = right_trace(ising, f, SIG2, SIG2, SIG2)
    # both are genuine conditional expectations onto the remaining leg
    assert lt.dom == SIG2 and rt.dom == SIG2


def test_deformed_pair_breaks_left_right(ising):
    """With a zig-zag pair that is not standard, left and right loop traces of
    the same endomorphism disagree."""
    x = SIG2
    pair = standard_pair(ising, x)
    lam = 2.0
    r = lam * pair.r
    rbar = (1.0 / lam) * pair.rbar
    idx = identity(ising, x)
    idc = identity(ising, pair.conj)
    # zig-zag still holds for the deformed pair
    zig = compose(tensor(rbar.adjoint(), idx), tensor(idx, r))
    assert (zig - idx).max_abs() < 1e-10
    rng = np.random.default_rng(11)
    f = random_morphism(ising, x, x, rng)
    lt = compose(r.adjoint(), compose(tensor(identity(ising, pair.conj), f), r))
    rt = compose(rbar.adjoint(), compose(tensor(f, idc), rbar))
    assert abs(lt.scalar() - rt.scalar()) > 1e-2 * abs(lt.scalar())


def test_range_isometry_and_inclusion(ising):
    rng = np.random.default_rng(3)
    f = random_morphism(ising, SIG2, SIG2, rng)
    p_raw = compose(f.adjoint(), f)
    # spectral projection onto the top eigenvalue block via powers
    p = endo_power(p_raw, 0.0)
    obj, s = range_isometry(ising, p)
    assert (compose(s, s.adjoint()) - p).max_abs() < 1e-9
    assert (compose(s.adjoint(), s) - identity(ising, obj)).max_abs() < 1e-9
    x = ObjectExpr(SIG2.summands + SSS.summands)
    for i in range(2):
        inc = inclusion(ising, x, i)
        assert (compose(inc.adjoint(), inc) - identity(ising, ObjectExpr((x.summands[i],)))).max_abs() < 1e-12


def test_hom_basis_and_json_round_trip(ising):
    basis = hom_basis(ising, SIG2, SIG2)
    assert len(basis) == 2  # channels 1 and eps
    f = random_morphism(ising, SIG2, SSS, np.random.default_rng(4))
    back = morphism_from_json(ising, f.as_json())
    assert (back - f).max_abs() < 1e-14


def test_sector_isometry_orthonormal(ising):
    x = SIG2 @ SIG2
    eng = engine(ising)
    for c in ising.labels:
        n = eng.obj_sector_dim(x, c)
        for i in range(n):
            ti = sector_isometry(ising, x, c, i)
            for j in range(n):
                tj = sector_isometry(ising, x, c, j)
                val = compose(ti.adjoint(), tj)
                want = 1.0 if i == j else 0.0
                got = val.scalar() if c == ising.unit else (
                    val.blocks.get(c, np.zeros((1, 1)))[0, 0] if val.blocks else 0.0
                )
                assert abs(got - want) < 1e-10
