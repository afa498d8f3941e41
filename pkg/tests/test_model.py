import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import random_hermitian, random_state
from steadybounds.lattice import finite_chain
from steadybounds.model import (
    ModelSchemaError,
    adjoint_expansion,
    adjoint_lindblad,
    boundary_decompose,
    boundary_expansions,
    builtin_model,
    evaluate_coefficient,
    load_model,
    model_from_dict,
    model_to_json,
)
from steadybounds.operators import LocalOperator, embed, qubit_matrix, to_expansion
from steadybounds.oracle import apply_lindbladian

X, Y, Z, I2, SM = (qubit_matrix(c) for c in "XYZI-")
MODELS = ["ising_1d", "dicke_1d", "dicke_2d"]


def kron(*ms):
    out = np.eye(1)
    for m in ms:
        out = np.kron(out, m)
    return out


def test_builtin_benchmark_point():
    m = builtin_model("ising_1d")
    assert m.parameters == {"J": 0.5, "g": 0.5, "gamma": 1.0}
    assert {t.label for t in m.hamiltonian_terms} == {"ZZ", "X"}
    assert [t.label for t in m.jump_operators] == ["decay"]


def test_builtin_aliases_and_overrides():
    m = builtin_model("dicke", g=0.3)
    assert m.name == "dicke_1d" and m.parameters["g"] == 0.3
    with pytest.raises(ModelSchemaError):
        builtin_model("dicke_1d", J=1.0)
    with pytest.raises(ModelSchemaError):
        builtin_model("heisenberg")


def test_dicke_2d_has_two_jump_directions():
    m = builtin_model("dicke_2d", g=1.0)
    sites = {t.label: t.sites for t in m.jump_operators}
    assert sites == {"horizontal": ((0, 0), (0, 1)), "vertical": ((0, 0), (1, 0))}


def test_jump_prefactors():
    ising = builtin_model("ising_1d", gamma=4.0)
    assert np.allclose(ising.jump_operators[0].operator.toarray(), 2.0 * SM)
    printed = builtin_model("ising_1d", jump_coeff="sqrt(gamma)/2", gamma=4.0)
    assert np.allclose(printed.jump_operators[0].operator.toarray(), SM)
    dicke = builtin_model("dicke_1d", gamma=2.0)
    assert np.allclose(dicke.jump_operators[0].operator.toarray(), 2.0 * (kron(SM, I2) + kron(I2, SM)))


@pytest.mark.parametrize("name", MODELS)
def test_adjoint_of_identity_vanishes(name):
    m = builtin_model(name)
    site = (0, 0) if name == "dicke_2d" else 0
    out = adjoint_lindblad(m, LocalOperator.identity([site]))
    assert out.matrix.nnz == 0


def test_ising_sigma_x_support():
    out = adjoint_lindblad(builtin_model("ising_1d"), LocalOperator.from_letters("X", [0]))
    assert out.support == (-1, 0, 1)


def _dense_adjoint(H, jumps, Xop):
    out = 1j * (H @ Xop - Xop @ H)
    for L in jumps:
        Ld = L.conj().T
        out += Ld @ Xop @ L - 0.5 * (Ld @ L @ Xop + Xop @ Ld @ L)
    return out


def test_ising_sigma_z_explicit():
    # independent dense evaluation on sites (-1, 0, 1) with all terms touching site 0
    J = g = 0.5
    H = J * (kron(Z, Z, I2) + kron(I2, Z, Z)) + g * kron(I2, X, I2) + g * kron(X, I2, I2) + g * kron(I2, I2, X)
    jumps = [kron(SM, I2, I2), kron(I2, SM, I2), kron(I2, I2, SM)]
    Xop = kron(I2, Z, I2)
    ref = _dense_adjoint(H, jumps, Xop)
    out = adjoint_lindblad(builtin_model("ising_1d"), LocalOperator.from_letters("Z", [0]))
    full = embed(out, [-1, 0, 1]).toarray()
    assert np.allclose(full, ref)
    # only the on-site field and decay act: L*(Z) = -(I + Z) + 2 g Y
    assert np.allclose(ref, kron(I2, -I2 - Z + 2 * g * Y, I2))


def test_boundary_decompose_single_site_2d():
    m = builtin_model("dicke_2d", g=1.0)
    Xop = LocalOperator.from_letters("Z", [(0, 0)])
    terms = boundary_decompose(m, Xop)
    extras = [t.extra_site for t in terms]
    assert sorted(e for e in extras if e is not None) == [(-1, 0), (0, -1), (0, 1), (1, 0)]
    assert extras.count(None) == 1
    total = terms[0].operator
    for t in terms[1:]:
        total = total + t.operator
    assert total.allclose(adjoint_lindblad(m, Xop))


def test_boundary_decompose_identity():
    m = builtin_model("dicke_2d")
    terms = boundary_decompose(m, LocalOperator.identity([(0, 0)]))
    assert all(t.operator.matrix.nnz == 0 for t in terms)


letters = st.text(alphabet="IXYZ", min_size=1, max_size=3)


@pytest.mark.parametrize("name", ["ising_1d", "dicke_1d"])
@given(word=letters, start=st.integers(-2, 2))
def test_string_route_matches_matrix_route(name, word, start):
    m = builtin_model(name, g=0.7)
    Xop = LocalOperator.from_letters(word, list(range(start, start + len(word))))
    dense = adjoint_lindblad(m, Xop)
    fast = adjoint_expansion(m, to_expansion(Xop))
    assert to_expansion(dense).keys() == fast.keys()
    for k, v in fast.items():
        assert abs(to_expansion(dense)[k] - v) < 1e-12


@given(word=st.text(alphabet="IXYZ", min_size=1, max_size=2), r=st.integers(-1, 1), c=st.integers(-1, 1))
def test_boundary_groups_sum_to_adjoint_2d(word, r, c):
    m = builtin_model("dicke_2d", g=0.4)
    sites = [(r, c + i) for i in range(len(word))]
    exp = to_expansion(LocalOperator.from_letters(word, sites))
    groups = boundary_expansions(m, exp, base_support=set(sites))
    total = {}
    for part in groups.values():
        for k, v in part.items():
            total[k] = total.get(k, 0.0) + v
    ref = adjoint_expansion(m, exp)
    keys = set(total) | set(ref)
    assert all(abs(total.get(k, 0.0) - ref.get(k, 0.0)) < 1e-12 for k in keys)


@pytest.mark.parametrize("name", ["ising_1d", "dicke_1d"])
@given(seed=st.integers(0, 2**31 - 1), lo=st.integers(0, 3), width=st.integers(1, 3))
def test_forward_adjoint_duality(name, seed, lo, width):
    N = 4
    sites = [s for s in range(lo, lo + width) if s < N]
    rng = np.random.default_rng(seed)
    model = builtin_model(name, g=0.8).with_lattice(finite_chain(N))
    Xop = LocalOperator(sites, random_hermitian(rng, 2 ** len(sites)))
    rho = random_state(rng, 2 ** N)
    lhs = np.trace(embed(Xop, range(N)).toarray() @ apply_lindbladian(model, rho, N, "open"))
    LX = adjoint_lindblad(model, Xop)
    rhs = np.trace(embed(LX, range(N)).toarray() @ rho) if LX.support else LX.toarray()[0, 0] * np.trace(rho)
    assert abs(lhs - rhs) < 1e-10


# JSON schema ---------------------------------------------------------------

def test_json_round_trip(tmp_path):
    for name in MODELS:
        m = builtin_model(name, g=0.3)
        path = tmp_path / f"{name}.json"
        path.write_text(model_to_json(m))
        back = load_model(path)
        assert model_to_json(back) == model_to_json(m)
        assert back.fingerprint == m.fingerprint


def test_json_matrix_entries(tmp_path):
    spec = {
        "name": "decay",
        "lattice": {"kind": "chain_ti", "qudit_dim": 2},
        "parameters": {"w": 0.5},
        "hamiltonian": [{"label": "field", "sites": [0], "matrix": [[["w", 0], [0, 0]], [[0, 0], ["-w", 0]]]}],
        "jumps": [{"label": "down", "sites": [0], "matrix": [[[0, 0], [0, 0]], [[1, 0], [0, 0]]]}],
    }
    m = model_from_dict(spec)
    assert np.allclose(m.hamiltonian_terms[0].operator.toarray(), 0.5 * Z)
    assert np.allclose(m.jump_operators[0].operator.toarray(), SM)


def test_malformed_json_reports_position(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"name": "x",\n  "lattice": }')
    with pytest.raises(ModelSchemaError, match="line 2"):
        load_model(path)


@pytest.mark.parametrize("mutate,msg", [
    (lambda s: s.pop("lattice"), "lattice"),
    (lambda s: s["hamiltonian"][0].update(pauli={"ZZ": "unknown"}), "unknown"),
    (lambda s: s["hamiltonian"][0].update(pauli={"Z": 1}), "letters"),
])
def test_schema_errors_name_the_field(mutate, msg):
    spec = json.loads(model_to_json(builtin_model("ising_1d")))
    mutate(spec)
    with pytest.raises(ModelSchemaError, match=msg):
        model_from_dict(spec)


def test_non_hermitian_hamiltonian_rejected():
    spec = json.loads(model_to_json(builtin_model("ising_1d")))
    spec["hamiltonian"][1]["pauli"] = {"+": 1}
    with pytest.raises(ModelSchemaError, match="Hermitian"):
        model_from_dict(spec)


def test_coefficient_evaluator():
    assert evaluate_coefficient("sqrt(gamma)/2", {"gamma": 4.0}) == 1.0
    assert abs(evaluate_coefficient("2*pi", {}) - 2 * np.pi) < 1e-15
    with pytest.raises(ModelSchemaError):
        evaluate_coefficient("__import__('os')", {})
