from __future__ import annotations

import json

import numpy as np
import pytest

from qcat.category import (
    build_category,
    deligne_product,
    load_category,
    modular_data,
    pair_label,
    split_label,
    validate_category,
)
from qcat.errors import ParseError
from qcat.fixtures import ising_category, z2_category


def test_ising_validates(ising):
    rep = validate_category(ising)
    assert rep.ok
    assert rep.pentagon < 1e-9
    assert max(rep.hexagon_plus, rep.hexagon_minus) < 1e-9
    assert rep.f_unitarity < 1e-9
    assert rep.dim_residual < 1e-9


def test_z2_and_trivial_validate(z2, trivial):
    assert validate_category(z2).ok
    assert validate_category(trivial).ok


def test_broken_f_symbol_fails_pentagon():
    data = ising_category()
    for entry in data["F"]:
        if entry["abc_d"] == ["sig", "sig", "sig", "sig"]:
            entry["re"].reverse()  # swap rows: still unitary, breaks pentagon
    cat = build_category(data)
    rep = validate_category(cat)
    assert not rep.ok
    assert rep.pentagon > 1e-3


def test_schema_errors():
    data = ising_category()
    del data["fusion"]
    with pytest.raises(ParseError):
        load_category(data)
    with pytest.raises(ParseError):
        load_category("{not json")


def test_ising_dims_and_global_dim(ising):
    md = modular_data(ising)
    assert np.allclose(sorted(md.dims), [1.0, 1.0, np.sqrt(2.0)], atol=1e-9)
    assert abs(md.global_dim - 4.0) < 1e-9
    assert abs(ising.global_dim - 4.0) < 1e-9


def test_ising_twists_and_omega(ising):
    md = modular_data(ising)
    tw = dict(zip(md.labels, md.twists))
    assert abs(tw["1"] - 1.0) < 1e-9
    assert abs(tw["eps"] + 1.0) < 1e-9
    assert abs(tw["sig"] - np.exp(1j * np.pi / 8)) < 1e-9


def test_ising_s_matrix(ising, ising_s):
    md = modular_data(ising)
    order = [md.labels.index(a) for a in ("1", "eps", "sig")]
    s = md.s_matrix[np.ix_(order, order)]
    assert np.max(np.abs(s - ising_s)) < 1e-9


def test_modular_relations(ising):
    md = modular_data(ising)
    s, t, c = md.s_matrix, md.t_matrix, md.charge_conjugation
    n = len(md.labels)
    assert np.max(np.abs(s @ s.conj().T - np.eye(n))) < 1e-9
    st = s @ np.linalg.inv(t)
    assert np.max(np.abs(np.linalg.matrix_power(st, 3) - s @ s)) < 1e-9
    assert np.max(np.abs(np.linalg.matrix_power(s, 4) - np.eye(n))) < 1e-9
    assert np.max(np.abs(s @ s - c)) < 1e-9
    assert md.is_modular


def test_z2_not_modular(z2):
    md = modular_data(z2)
    assert not md.is_modular


def test_deligne_product_validates(ising):
    prod = deligne_product(ising, ising, reverse_right=True)
    assert len(prod.labels) == 9
    assert abs(prod.global_dim - 16.0) < 1e-9
    a, b = split_label(pair_label("sig", "eps"))
    assert (a, b) == ("sig", "eps")


def test_product_braiding_reversed_on_right(ising):
    # the right factor of the product carries the opposite braiding:
    # its twist is conjugated relative to the left factor
    prod = deligne_product(ising, ising, reverse_right=True)
    md = modular_data(prod)
    tw = dict(zip(md.labels, md.twists))
    assert abs(tw[pair_label("sig", "1")] - np.exp(1j * np.pi / 8)) < 1e-9
    assert abs(tw[pair_label("1", "sig")] - np.exp(-1j * np.pi / 8)) < 1e-9
