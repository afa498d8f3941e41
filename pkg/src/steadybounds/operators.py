"""Sparse operator algebra on finite collections of qudits.

A :class:`LocalOperator` is a complex matrix attached to an explicit, ordered
set of lattice sites.  Sites are either integers (chains) or ``(row, col)``
tuples (square lattice); inside a support they are always kept in canonical
(sorted, i.e. row-major) order and the Kronecker factors of the matrix follow
that order.

Qubit conventions
-----------------
``sigma_z |0> = +|0>`` and the lowering operator is ``sigma_minus = |1><0|``,
so ``|1>`` is the decayed ("dark") state and ``<sigma_z> = -1`` there.

Hermitian string basis
----------------------
The single-site basis is ``g_0 = I`` followed by the generalized Gell-Mann
matrices rescaled so that ``Tr(g_a g_b) = d delta_ab``; for qubits this is
exactly ``(I, X, Y, Z)``.  Tensor products ("strings") on ``n`` sites then
satisfy ``Tr(G_a G_b) = d**n delta_ab``.  A Hermitian operator is stored in
this basis as an :data:`Expansion`: a dict mapping a string key, the tuple of
``(site, index)`` pairs with non-identity index, to a real coefficient.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Dict, Hashable, Iterable, Sequence, Tuple

import numpy as np
import scipy.sparse as sp

Site = Hashable
StringKey = Tuple[Tuple[Site, int], ...]
Expansion = Dict[StringKey, float]

HERMITIAN_TOL = 1e-12
ZERO_TOL = 1e-12

PAULI_LABELS = "IXYZ"


def _canonical(sites: Iterable[Site]) -> tuple:
    return tuple(sorted(sites))


# --------------------------------------------------------------------------
# single-site matrices
# --------------------------------------------------------------------------

@lru_cache(maxsize=None)
def local_basis(d: int) -> Tuple[np.ndarray, ...]:
    """Identity plus rescaled generalized Gell-Mann matrices for one qudit."""
    if d < 2:
        raise ValueError("qudit dimension must be at least 2")
    mats = [np.eye(d, dtype=complex)]
    scale = np.sqrt(d / 2.0)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = m[k, j] = 1.0
            mats.append(scale * m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(scale * m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(scale * np.sqrt(2.0 / (l * (l + 1))) * np.diag(diag).astype(complex))
    for m in mats:
        m.setflags(write=False)
    return tuple(mats)


SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_PLUS = SIGMA_MINUS.T.copy()

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": SIGMA_X,
    "Y": SIGMA_Y,
    "Z": SIGMA_Z,
    "-": SIGMA_MINUS,
    "+": SIGMA_PLUS,
}


def qubit_matrix(letter: str) -> np.ndarray:
    """Single-qubit matrix for one of ``I X Y Z + -``."""
    try:
        return _SINGLE_QUBIT[letter]
    except KeyError:
        raise ValueError(f"unknown qubit operator letter {letter!r}") from None


# --------------------------------------------------------------------------
# index helpers
# --------------------------------------------------------------------------

def _permute_legs(mat: sp.spmatrix, d: int, n: int, order: Sequence[int]) -> sp.csr_matrix:
    """Reorder tensor factors: new factor ``i`` is old factor ``order[i]``."""
    coo = sp.coo_matrix(mat)
    dims = (d,) * n
    rows = np.stack(np.unravel_index(coo.row, dims))[list(order)]
    cols = np.stack(np.unravel_index(coo.col, dims))[list(order)]
    D = d**n
    new_r = np.ravel_multi_index(tuple(rows), dims) if n else np.zeros_like(coo.row)
    new_c = np.ravel_multi_index(tuple(cols), dims) if n else np.zeros_like(coo.col)
    return sp.csr_matrix((coo.data, (new_r, new_c)), shape=(D, D))


# --------------------------------------------------------------------------
# LocalOperator
# --------------------------------------------------------------------------

class LocalOperator:
    """A complex matrix acting on an ordered set of sites.

    The constructor accepts the support in any order and permutes the tensor
    factors so that the stored support is canonical.  Instances are treated
    as immutable.
    """

    __slots__ = ("_support", "_dim", "_matrix")

    def __init__(self, support: Iterable[Site], matrix, dim: int = 2):
        support = tuple(support)
        if len(set(support)) != len(support):
            raise ValueError(f"duplicate sites in support {support}")
        if dim < 2:
            raise ValueError("qudit dimension must be at least 2")
        D = dim ** len(support)
        mat = sp.csr_matrix(matrix, dtype=complex)
        if mat.shape != (D, D):
            raise ValueError(
                f"matrix shape {mat.shape} does not match {len(support)} sites of dimension {dim}"
            )
        order = sorted(range(len(support)), key=lambda i: support[i])
        if order != list(range(len(support))):
            mat = _permute_legs(mat, dim, len(support), order)
            support = tuple(support[i] for i in order)
        mat.eliminate_zeros()
        self._support = support
        self._dim = dim
        self._matrix = mat

    # construction helpers ------------------------------------------------
    @classmethod
    def identity(cls, support: Iterable[Site] = (), dim: int = 2) -> "LocalOperator":
        support = tuple(support)
        return cls(support, sp.identity(dim ** len(support), dtype=complex, format="csr"), dim)

    @classmethod
    def from_letters(cls, letters: str, sites: Sequence[Site], coeff: complex = 1.0) -> "LocalOperator":
        """Qubit product operator, e.g. ``from_letters("ZX", [0, 1])``."""
        if len(letters) != len(sites):
            raise ValueError("need one letter per site")
        mat = sp.identity(1, dtype=complex, format="csr")
        for ch in letters:
            mat = sp.kron(mat, sp.csr_matrix(qubit_matrix(ch)), format="csr")
        return cls(sites, coeff * mat, 2)

    @classmethod
    def on_site(cls, matrix, site: Site) -> "LocalOperator":
        matrix = np.asarray(matrix)
        return cls((site,), matrix, matrix.shape[0])

    # basic properties ---------------------------------------------------
    @property
    def support(self) -> tuple:
        return self._support

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def matrix(self) -> sp.csr_matrix:
        return self._matrix

    @property
    def n_sites(self) -> int:
        return len(self._support)

    def toarray(self) -> np.ndarray:
        return self._matrix.toarray()

    def trace(self) -> complex:
        return complex(self._matrix.diagonal().sum())

    def dagger(self) -> "LocalOperator":
        return LocalOperator(self._support, self._matrix.conj().T, self._dim)

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        diff = self._matrix - self._matrix.conj().T
        return diff.nnz == 0 or np.abs(diff.data).max() <= tol

    def norm(self) -> float:
        """Frobenius norm."""
        return float(sp.linalg.norm(self._matrix)) if self._matrix.nnz else 0.0

    def scaled(self, c: complex) -> "LocalOperator":
        return LocalOperator(self._support, c * self._matrix, self._dim)

    def relabeled(self, mapping) -> "LocalOperator":
        """Move the operator to new sites; ``mapping`` is a callable or dict."""
        f = mapping if callable(mapping) else mapping.__getitem__
        return LocalOperator([f(s) for s in self._support], self._matrix, self._dim)

    # arithmetic ---------------------------------------------------------
    def _check_dim(self, other: "LocalOperator") -> None:
        if self._dim != other._dim:
            raise ValueError(f"qudit dimension mismatch: {self._dim} vs {other._dim}")

    def __add__(self, other: "LocalOperator") -> "LocalOperator":
        self._check_dim(other)
        target = _canonical(set(self._support) | set(other._support))
        return LocalOperator(target, embed(self, target)._matrix + embed(other, target)._matrix, self._dim)

    def __sub__(self, other: "LocalOperator") -> "LocalOperator":
        return self + other.scaled(-1.0)

    def __neg__(self) -> "LocalOperator":
        return self.scaled(-1.0)

    def __mul__(self, c) -> "LocalOperator":
        if isinstance(c, LocalOperator):
            return multiply(self, c)
        return self.scaled(c)

    __rmul__ = scaled

    def __matmul__(self, other: "LocalOperator") -> "LocalOperator":
        return multiply(self, other)

    def allclose(self, other: "LocalOperator", atol: float = 1e-10) -> bool:
        """Equality up to trivially-acting sites."""
        if self._dim != other._dim:
            return False
        diff = self - other
        return diff._matrix.nnz == 0 or np.abs(diff._matrix.data).max() <= atol

    def __repr__(self) -> str:
        return f"LocalOperator(support={self._support}, dim={self._dim}, nnz={self._matrix.nnz})"


def embed(op: LocalOperator, target_support: Iterable[Site]) -> LocalOperator:
    """Return ``op`` tensored with identities on the extra sites of ``target_support``."""
    target = _canonical(target_support)
    if len(set(target)) != len(target):
        raise ValueError("duplicate sites in target support")
    missing = set(op.support) - set(target)
    if missing:
        raise ValueError(f"sites {sorted(missing)} of the operator are not in the target support")
    if target == op.support:
        return op
    extra = [s for s in target if s not in op.support]
    d = op.dim
    mat = sp.kron(op.matrix, sp.identity(d ** len(extra), dtype=complex, format="csr"), format="csr")
    current = list(op.support) + extra
    pos = {s: i for i, s in enumerate(current)}
    order = [pos[s] for s in target]
    return LocalOperator(target, _permute_legs(mat, d, len(target), order), d)


def multiply(a: LocalOperator, b: LocalOperator) -> LocalOperator:
    """Operator product ``a b`` on the union of the supports."""
    a._check_dim(b)
    target = _canonical(set(a.support) | set(b.support))
    return LocalOperator(target, embed(a, target).matrix @ embed(b, target).matrix, a.dim)


def partial_trace(op: LocalOperator, traced_sites: Iterable[Site]) -> LocalOperator:
    """Trace out ``traced_sites`` from ``op``."""
    traced = set(traced_sites)
    missing = traced - set(op.support)
    if missing:
        raise ValueError(f"cannot trace sites {sorted(missing)} not in support {op.support}")
    if not traced:
        return op
    d, n = op.dim, op.n_sites
    keep = [i for i, s in enumerate(op.support) if s not in traced]
    drop = [i for i, s in enumerate(op.support) if s in traced]
    coo = op.matrix.tocoo()
    dims = (d,) * n
    rd = np.stack(np.unravel_index(coo.row, dims)) if n else np.zeros((0, 0), int)
    cd = np.stack(np.unravel_index(coo.col, dims)) if n else np.zeros((0, 0), int)
    mask = np.all(rd[drop] == cd[drop], axis=0)
    kdims = (d,) * len(keep)
    Dk = d ** len(keep)
    if keep:
        r = np.ravel_multi_index(tuple(rd[keep][:, mask]), kdims)
        c = np.ravel_multi_index(tuple(cd[keep][:, mask]), kdims)
    else:
        r = c = np.zeros(int(mask.sum()), dtype=int)
    mat = sp.csr_matrix((coo.data[mask], (r, c)), shape=(Dk, Dk))
    mat.sum_duplicates()
    return LocalOperator([op.support[i] for i in keep], mat, d)


# --------------------------------------------------------------------------
# Hermitian string basis
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class HermitianBasis:
    """All Hermitian basis strings on a region; element 0 is the identity.

    Normalization: ``Tr(G_a G_b) = d**len(region) * delta_ab``.
    """

    region: tuple
    dim: int
    elements: tuple
    includes_identity: bool = True

    @property
    def normalization(self) -> int:
        return self.dim ** len(self.region)

    def __len__(self) -> int:
        return len(self.elements)

    def labels(self) -> list:
        if self.dim != 2:
            return [str(idx) for idx in product(range(self.dim**2), repeat=len(self.region))]
        return ["".join(PAULI_LABELS[i] for i in idx) for idx in product(range(4), repeat=len(self.region))]


@lru_cache(maxsize=16)
def _local_entries(d: int) -> tuple:
    out = []
    for g in local_basis(d):
        r, c = np.nonzero(g)
        out.append((r, c, g[r, c]))
    return tuple(out)


def string_entries(indices: Sequence[int], d: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nonzero ``(rows, cols, values)`` of the basis string with the given local indices."""
    loc = _local_entries(d)
    rows = np.zeros(1, dtype=np.int64)
    cols = np.zeros(1, dtype=np.int64)
    vals = np.ones(1, dtype=complex)
    for a in indices:
        r, c, v = loc[a]
        rows = (rows[:, None] * d + r[None, :]).ravel()
        cols = (cols[:, None] * d + c[None, :]).ravel()
        vals = (vals[:, None] * v[None, :]).ravel()
    return rows, cols, vals


def string_matrix(indices: Sequence[int], d: int) -> sp.csr_matrix:
    basis = local_basis(d)
    mat = sp.identity(1, dtype=complex, format="csr")
    for a in indices:
        mat = sp.kron(mat, sp.csr_matrix(basis[a]), format="csr")
    return mat


def hermitian_basis(region: Iterable[Site], d: int = 2) -> HermitianBasis:
    """Tensor-product Hermitian basis (Pauli strings for qubits), ``d**(2n)`` elements."""
    region = _canonical(region)
    elements = tuple(
        LocalOperator(region, string_matrix(idx, d), d)
        for idx in product(range(d * d), repeat=len(region))
    )
    return HermitianBasis(region, d, elements)


@lru_cache(maxsize=32)
def _basis_tensor(d: int) -> np.ndarray:
    # g[a, j, i] = (g_a)[j, i]
    return np.stack(local_basis(d))


def coefficient_tensor(matrix: np.ndarray, n: int, d: int) -> np.ndarray:
    """``c[a_1..a_n] = Tr(G_a M) / d**n`` for a dense ``d**n`` square matrix."""
    D = d**n
    t = np.asarray(matrix, dtype=complex).reshape((d,) * (2 * n))
    g = _basis_tensor(d)
    # layout after s steps: (a_0..a_{s-1}, i_s..i_{n-1}, j_s..j_{n-1});
    # Tr(g_a M) = sum_ij g_a[j, i] M[i, j]
    for s in range(n):
        t = np.tensordot(g, t, axes=([2, 1], [s, n]))
        t = np.moveaxis(t, 0, s)
    return t.reshape((d * d,) * n) / D


def expansion_coefficients(op: LocalOperator, region: Iterable[Site] | None = None) -> np.ndarray:
    """Flattened ``Tr(G_a op) / D`` over the string basis of ``region``.

    The ordering matches :func:`hermitian_basis`.  Complex in general; real
    for Hermitian ``op``.
    """
    region = op.support if region is None else _canonical(region)
    full = embed(op, region)
    n = len(region)
    return coefficient_tensor(full.toarray(), n, op.dim).reshape(-1)


def to_expansion(op: LocalOperator, tol: float = ZERO_TOL) -> Expansion:
    """Sparse string expansion of a Hermitian operator."""
    if not op.is_hermitian(1e-10):
        raise ValueError("string expansions are defined for Hermitian operators only")
    coef = expansion_coefficients(op)
    out: Expansion = {}
    n = op.n_sites
    d2 = op.dim**2
    for flat in np.flatnonzero(np.abs(coef) > tol):
        idx = np.unravel_index(flat, (d2,) * n) if n else ()
        key = tuple((op.support[s], int(a)) for s, a in enumerate(idx) if a)
        out[key] = float(coef[flat].real)
    return out


def expansion_support(expansion: Expansion) -> tuple:
    return _canonical({s for key in expansion for s, _ in key})


def from_expansion(expansion: Expansion, d: int = 2, support: Iterable[Site] | None = None) -> LocalOperator:
    support = expansion_support(expansion) if support is None else _canonical(support)
    pos = {s: i for i, s in enumerate(support)}
    D = d ** len(support)
    mat = sp.csr_matrix((D, D), dtype=complex)
    for key, c in expansion.items():
        idx = [0] * len(support)
        for s, a in key:
            idx[pos[s]] = a
        mat = mat + c * string_matrix(idx, d)
    return LocalOperator(support, mat, d)


def relabel_expansion(expansion: Expansion, mapping) -> Expansion:
    f = mapping if callable(mapping) else mapping.__getitem__
    out: Expansion = {}
    for key, c in expansion.items():
        new = tuple(sorted((f(s), a) for s, a in key))
        out[new] = out.get(new, 0.0) + c
    return out


def prune(op: LocalOperator, tol: float = ZERO_TOL) -> LocalOperator:
    """Drop sites on which ``op`` acts as the identity."""
    n, d = op.n_sites, op.dim
    if n == 0:
        return op
    coef = coefficient_tensor(op.toarray(), n, d)
    mags = np.abs(coef)
    keep = []
    for s in range(n):
        nontrivial = np.take(mags, range(1, d * d), axis=s)
        if nontrivial.size and nontrivial.max() > tol:
            keep.append(op.support[s])
    if len(keep) == n:
        return op
    traced = [s for s in op.support if s not in keep]
    return partial_trace(op, traced).scaled(1.0 / d ** len(traced))


def apply_symmetry(op: LocalOperator, g, allowed_sites: Iterable[Site] | None = None) -> LocalOperator:
    """``U_g op U_g^dagger`` for a lattice symmetry acting by site relabeling.

    ``allowed_sites`` restricts the image (finite lattices).
    """
    image = [g(s) for s in op.support]
    if allowed_sites is not None:
        allowed = set(allowed_sites)
        outside = [s for s in image if s not in allowed]
        if outside:
            raise ValueError(f"symmetry image {outside} leaves the lattice")
    return LocalOperator(image, op.matrix, op.dim)
