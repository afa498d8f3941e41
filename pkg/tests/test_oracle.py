import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import steadybounds.oracle as oracle
from steadybounds.model import builtin_model, model_from_dict
from steadybounds.operators import LocalOperator, partial_trace
from steadybounds.oracle import (
    Geometry,
    apply_lindbladian,
    exact_steady_states,
    extremal_expectation,
    fixture_rows,
    lindbladian,
    marginal,
    mean_field_steady,
    translation_average,
)
from steadybounds.relaxation import observable_from_label

from conftest import random_state

OBS = {lab: observable_from_label(lab) for lab in "XYZ"}
OBS2 = {lab: observable_from_label(lab, 2) for lab in "XYZ"}

DECAY = {
    "name": "decay",
    "lattice": {"kind": "chain_ti", "qudit_dim": 2},
    "parameters": {},
    "hamiltonian": [],
    "jumps": [{"label": "down", "sites": [0], "pauli": {"-": 1}}],
}


def test_single_qubit_decay():
    sset = exact_steady_states(model_from_dict(DECAY), 1)
    assert sset.kernel_dim == 1
    assert np.allclose(sset.state(), np.diag([0, 1]))
    assert extremal_expectation(sset, OBS["Z"]) == pytest.approx((-1, -1))


def test_dicke_g0_two_dark_states():
    sset = exact_steady_states(builtin_model("dicke_1d", g=0.0), 4)
    assert sset.kernel_dim == 2
    dark = np.zeros(16)
    dark[-1] = 1.0  # |1111>
    psi = np.zeros(16)
    for n in range(4):
        idx = 15 - (1 << (3 - n))  # site n excited (|0>), others dark
        psi[idx] = (-1) ** n
    psi /= np.linalg.norm(psi)
    span = np.array([K.ravel() for K in sset.basis]).T
    for v in (dark, psi):
        P = np.outer(v, v).ravel()
        coef, *_ = np.linalg.lstsq(span, P, rcond=None)
        assert np.linalg.norm(span @ coef - P) < 1e-9
    lo, hi = extremal_expectation(sset, OBS["Z"])
    assert lo == pytest.approx(-1, abs=1e-9) and hi == pytest.approx(-0.5, abs=1e-9)


@pytest.mark.parametrize("N,geometry,dim", [(3, "ring", 1), (5, "ring", 1), (6, "ring", 2), (4, "open", 4)])
def test_dicke_g0_kernel_dimensions(N, geometry, dim):
    assert exact_steady_states(builtin_model("dicke_1d", g=0.0), N, geometry).kernel_dim == dim


def test_identity_range():
    sset = exact_steady_states(builtin_model("dicke_1d", g=0.0), 4)
    lo, hi = extremal_expectation(sset, LocalOperator.identity([0]))
    assert lo == pytest.approx(1) and hi == pytest.approx(1)


def test_unique_kernel_gives_point_interval():
    sset = exact_steady_states(builtin_model("ising_1d"), 4)
    lo, hi = extremal_expectation(sset, OBS["X"])
    assert lo == hi


def test_sector_matches_full_space():
    model = builtin_model("ising_1d")
    sec = exact_steady_states(model, 4)
    full = exact_steady_states(model, 4, sector="full")
    assert full.kernel_dim == 1
    for op in OBS.values():
        assert extremal_expectation(sec, op)[0] == pytest.approx(extremal_expectation(full, op)[0], abs=1e-10)


def test_dense_and_shift_invert_paths_agree(monkeypatch):
    model = builtin_model("dicke_1d", g=0.7)
    dense = exact_steady_states(model, 5)
    monkeypatch.setattr(oracle, "DENSE_SVD_MAX", 0)
    lu = exact_steady_states(model, 5)
    assert dense.method == "dense-svd" and lu.method == "dense-lu-shift-invert"
    for op in OBS.values():
        assert extremal_expectation(dense, op)[0] == pytest.approx(extremal_expectation(lu, op)[0], abs=1e-10)


def test_sparse_path_agrees(monkeypatch):
    model = builtin_model("ising_1d")
    ref = exact_steady_states(model, 4, "open")
    monkeypatch.setattr(oracle, "DENSE_SVD_MAX", 0)
    monkeypatch.setattr(oracle, "DENSE_LU_MAX", 0)
    sp_set = exact_steady_states(model, 4, "open")
    assert sp_set.method == "sparse-lu-shift-invert"
    assert np.allclose(sp_set.state(), ref.state(), atol=1e-9)


def test_steady_state_is_stationary_and_ti():
    model = builtin_model("ising_1d")
    sset = exact_steady_states(model, 6)
    rho = sset.state()
    assert np.abs(apply_lindbladian(model, rho, 6)).max() < 1e-9
    geo = Geometry("ring", (6,))
    assert np.allclose(translation_average(rho, geo), rho, atol=1e-10)
    assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_lindbladian_preserves_trace():
    L = lindbladian(builtin_model("dicke_1d", g=0.4), 3)
    tr = np.eye(8).reshape(-1, order="F")
    assert np.abs(tr @ L.toarray()).max() < 1e-12


@given(st.integers(0, 2**31 - 1), st.lists(st.integers(0, 3), min_size=1, max_size=3, unique=True))
def test_marginal_matches_partial_trace(seed, keep):
    rho = random_state(np.random.default_rng(seed), 16)
    ref = partial_trace(LocalOperator(range(4), rho), [s for s in range(4) if s not in keep])
    assert np.allclose(marginal(rho, sorted(keep), 4), ref.toarray())


# frozen values -----------------------------------------------------------------

def _fixture_map(rows):
    return {(r["model"], r["parameters"], r["geometry"], r["size"], r["observable"]): r for r in rows}


@pytest.mark.parametrize("name,params,sizes,geometry,site_resolved", [
    ("ising_1d", {}, [4, 5, 6], "ring", False),
    ("ising_1d", {}, [6], "open", True),
    ("dicke_1d", {"g": 0.0}, [4], "ring", False),
    ("dicke_2d", {"g": 1.0}, [(3, 2)], None, False),
])
def test_regenerated_fixtures_match(oracle_fixtures, name, params, sizes, geometry, site_resolved):
    model = builtin_model(name, **params)
    obs = OBS2 if name == "dicke_2d" else OBS
    frozen = _fixture_map(oracle_fixtures)
    rows = fixture_rows(model, sizes, obs, geometry, site_resolved)
    assert rows
    for row in rows:
        ref = frozen[tuple(row[:5])]
        assert float(row[5]) == pytest.approx(float(ref["lower"]), abs=1e-9)
        assert float(row[6]) == pytest.approx(float(ref["upper"]), abs=1e-9)
        assert row[7] == ref["kernel_dim"]


# mean field ------------------------------------------------------------------------

def test_mean_field_dark_state():
    res = mean_field_steady(builtin_model("dicke_2d"), g=0.0)
    assert res.converged
    assert res.bloch == pytest.approx((0, 0, -1), abs=1e-9)


def test_mean_field_matches_fixture(oracle_fixtures):
    res = mean_field_steady(builtin_model("dicke_2d"), g=1.0)
    frozen = {r["observable"]: float(r["lower"]) for r in oracle_fixtures
              if r["geometry"] == "mean_field" and r["parameters"] == "g=1;gamma=1"}
    assert res.converged
    for lab, v in zip("XYZ", res.bloch):
        assert v == pytest.approx(frozen[lab], abs=1e-8)


@settings(max_examples=5)
@given(st.floats(0.0, 2.0))
def test_mean_field_inside_bloch_ball(g):
    res = mean_field_steady(builtin_model("dicke_2d"), g=g)
    assert sum(v * v for v in res.bloch) <= 1 + 1e-9
