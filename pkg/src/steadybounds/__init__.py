"""Semidefinite bounds on local observables in steady states of lattice Lindblad equations."""
from .lattice import Lattice, SymmetryElement, chain, finite_chain, square
from .model import (
    BoundaryTerm,
    LindbladModel,
    ModelSchemaError,
    adjoint_lindblad,
    boundary_decompose,
    builtin_model,
    load_model,
    model_from_dict,
    model_to_json,
)
from .operators import LocalOperator, embed, hermitian_basis, multiply, partial_trace
from .oracle import SteadyStateSet, exact_steady_states, extremal_expectation, mean_field_steady
from .relaxation import (
    ConicProblem,
    build_cluster_2d,
    build_nonti_chain,
    build_ti_1d,
    embed_hermitian,
    feasible_set_monotonicity_audit,
    observable_from_label,
    read_sdpa,
    write_sdpa,
)
from .solver import BoundsResult, SolverOptions, bound_observable, solve

__version__ = "0.1.0"

__all__ = [
    "BoundaryTerm", "BoundsResult", "ConicProblem", "Lattice", "LindbladModel", "LocalOperator",
    "ModelSchemaError", "SolverOptions", "SteadyStateSet", "SymmetryElement", "adjoint_lindblad",
    "boundary_decompose", "bound_observable", "build_cluster_2d", "build_nonti_chain", "build_ti_1d",
    "builtin_model", "chain", "embed", "embed_hermitian", "exact_steady_states", "extremal_expectation",
    "feasible_set_monotonicity_audit", "finite_chain", "hermitian_basis", "load_model", "mean_field_steady",
    "model_from_dict", "model_to_json", "multiply", "observable_from_label", "partial_trace", "read_sdpa",
    "solve", "square", "write_sdpa", "__version__",
]
