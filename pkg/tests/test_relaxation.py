import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import random_hermitian, random_state
from steadybounds.lattice import rectangle
from steadybounds.model import builtin_model
from steadybounds.operators import LocalOperator
from steadybounds.relaxation import (
    build_cluster_2d,
    build_nonti_chain,
    build_ti_1d,
    centered_shift,
    embed_hermitian,
    extract_hermitian,
    feasible_set_monotonicity_audit,
    observable_from_label,
    read_sdpa,
    write_sdpa,
)
from steadybounds.solver import OPTIMAL, bound_observable, solve

ISING = builtin_model("ising_1d")


# realification ---------------------------------------------------------------

def test_embed_identity():
    assert np.allclose(embed_hermitian(np.eye(3)), np.eye(6))


def test_embed_sigma_y_spectrum():
    Y = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(np.sort(np.linalg.eigvalsh(embed_hermitian(Y))), [-1, -1, 1, 1])


def test_embed_plus_projector_spectrum():
    plus = np.array([1, 1]) / np.sqrt(2)
    assert np.allclose(np.sort(np.linalg.eigvalsh(embed_hermitian(np.outer(plus, plus)))), [0, 0, 1, 1])


def test_embed_rejects_non_hermitian():
    with pytest.raises(ValueError):
        embed_hermitian(np.array([[0, 1], [0, 0]]))


@given(st.integers(1, 5), st.integers(0, 2**31 - 1))
def test_embedding_doubles_eigenvalues(n, seed):
    H = random_hermitian(np.random.default_rng(seed), n)
    T = embed_hermitian(H)
    assert np.allclose(T, T.T)
    assert np.allclose(np.sort(np.linalg.eigvalsh(T)), np.sort(np.repeat(np.linalg.eigvalsh(H), 2)))
    assert np.allclose(extract_hermitian(T), H)


@given(st.integers(0, 2**31 - 1))
def test_embedding_preserves_inner_products(seed):
    rng = np.random.default_rng(seed)
    A, B = random_hermitian(rng, 3), random_hermitian(rng, 3)
    assert abs(np.sum(embed_hermitian(A) * embed_hermitian(B)) - 2 * np.trace(A @ B).real) < 1e-10


# one-dimensional TI ------------------------------------------------------------

def test_ising_k3_row_counts():
    p = build_ti_1d(ISING, 3, observable_from_label("X"), "X")
    rep = p.rank_report
    assert rep["stationarity_interior"] == 3
    assert rep["generated"]["lti"] == 16
    assert rep["zero"] == 1  # the identity LTI row is implied by normalization
    assert rep["rows"] == p.n_rows == 28
    assert [b.dim for b in p.blocks] == [16]


def test_lti_rows_have_one_redundancy():
    p = build_ti_1d(ISING, 3, observable_from_label("X"), "X", rank_check=False)
    lti = [i for i, name in enumerate(p.row_labels) if name.startswith("LTI")]
    assert len(lti) == 15
    assert np.linalg.matrix_rank(p.moment_rows[lti].toarray()) == 15


@pytest.mark.parametrize("k", [2, 3, 4])
def test_identity_bounds(k):
    res = bound_observable(build_ti_1d(ISING, k, observable_from_label("I"), "I"))
    assert abs(res.raw_lower - 1) < 1e-6 and abs(res.raw_upper - 1) < 1e-6


def test_centered_placement():
    assert centered_shift([0], 5) == 2
    assert centered_shift([0, 1], 5) == 1
    assert centered_shift([0], 4) == 1
    with pytest.raises(ValueError):
        centered_shift([0, 1, 2], 2)


def test_observable_must_fit():
    with pytest.raises(ValueError):
        build_ti_1d(ISING, 2, observable_from_label("XXX"), "XXX")


def test_rank_check_does_not_change_bounds():
    a = bound_observable(build_ti_1d(ISING, 3, observable_from_label("Y"), "Y", rank_check=True))
    b = bound_observable(build_ti_1d(ISING, 3, observable_from_label("Y"), "Y", rank_check=False))
    assert abs(a.raw_upper - b.raw_upper) < 1e-6 and abs(a.raw_lower - b.raw_lower) < 1e-6


@settings(max_examples=10)
@given(st.integers(0, 2**31 - 1))
def test_product_of_steady_site_states_satisfy_lti(seed):
    # any translation-invariant product state satisfies normalization and LTI rows
    rng = np.random.default_rng(seed)
    rho1 = random_state(rng, 2)
    rho = np.kron(np.kron(rho1, rho1), rho1)
    p = build_ti_1d(ISING, 3, observable_from_label("X"), "X", rank_check=False)
    res = p.residuals([rho])
    for i, name in enumerate(p.row_labels):
        if name.startswith("LTI") or name.startswith("Tr"):
            assert abs(res[i]) < 1e-10


# non-TI chain --------------------------------------------------------------------

def test_block_count_linear_in_n():
    p = build_nonti_chain(ISING, 4, 10, observable_from_label("Z"), 3, "Z")
    assert len(p.blocks) == 7


def test_single_window_has_no_consistency_rows():
    p = build_nonti_chain(ISING, 4, 4, observable_from_label("Z"), 0, "Z")
    assert len(p.blocks) == 1
    assert "consistency" not in p.rank_report["generated"]
    assert "lti" not in p.rank_report["generated"]


def test_nonti_rejects_short_chain():
    with pytest.raises(ValueError):
        build_nonti_chain(ISING, 4, 3, observable_from_label("Z"), 0, "Z")


# two-dimensional clusters ----------------------------------------------------------

DICKE2 = builtin_model("dicke_2d", g=1.0)


def test_single_site_cluster_problem():
    p = build_cluster_2d(DICKE2, rectangle(1, 1), observable_from_label("Z", 2), "Z")
    assert [b.dim for b in p.blocks] == [8]
    assert p.rank_report["generated"]["stationarity"] == 3


def test_two_by_two_cluster_problem():
    p = build_cluster_2d(DICKE2, rectangle(2, 2), observable_from_label("Z", 2), "Z")
    assert [b.dim for b in p.blocks] == [64]
    assert p.rank_report["generated"]["stationarity"] == 255


def test_cluster_identity_bounds():
    res = bound_observable(build_cluster_2d(DICKE2, rectangle(1, 1), observable_from_label("I", 2), "I"))
    assert abs(res.raw_lower - 1) < 1e-6 and abs(res.raw_upper - 1) < 1e-6


def test_cluster_must_be_rectangle():
    with pytest.raises(ValueError):
        build_cluster_2d(DICKE2, [(0, 0), (1, 1)], observable_from_label("Z", 2), "Z")


# audit ---------------------------------------------------------------------------------

def test_audit_single_k_is_trivially_nested():
    rep = feasible_set_monotonicity_audit(ISING, observable_from_label("X"), [3])
    assert rep["nested"] and rep["incidents"] == []


def test_audit_ising_widths_decrease():
    rep = feasible_set_monotonicity_audit(ISING, observable_from_label("X"), [2, 3, 4, 5], label="X")
    assert rep["nested"]
    w = rep["widths"]
    assert all(b <= a + 1e-6 for a, b in zip(w, w[1:]))


def test_audit_dicke_nested():
    rep = feasible_set_monotonicity_audit(builtin_model("dicke_1d", g=1.0), observable_from_label("Y"), [3, 4, 5])
    assert rep["nested"]


def test_audit_rejects_unsorted():
    with pytest.raises(ValueError):
        feasible_set_monotonicity_audit(ISING, observable_from_label("X"), [4, 3])


# SDPA export ---------------------------------------------------------------------------

def test_sdpa_round_trip(tmp_path):
    for sense in ("max", "min"):
        p = build_ti_1d(ISING, 3, observable_from_label("Z"), "Z", sense=sense)
        path = tmp_path / f"z_{sense}.dat-s"
        write_sdpa(p, path)
        q = read_sdpa(path)
        assert q.sense == sense and [b.dim for b in q.blocks] == [16]
        assert abs(solve(q).value - solve(p).value) < 1e-7


def test_sdpa_is_deterministic(tmp_path):
    p = build_ti_1d(ISING, 3, observable_from_label("X"), "X")
    write_sdpa(p, tmp_path / "a")
    write_sdpa(p, tmp_path / "b")
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()
