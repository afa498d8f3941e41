"""Exact steady states of small systems and a mean-field baseline.

The forward generator is assembled term by term on the full Hilbert space
of ``N`` sites (ring, open chain or torus), reduced to the sector invariant
under the geometry's translations, and written in a real basis of Hermitian
operators.  Its kernel holds the steady states.  Vectorization stacks
columns: ``vec(A X B) = (B^T kron A) vec(X)``.
"""
from __future__ import annotations

import csv
import logging
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.integrate import solve_ivp
from scipy.optimize import root

from .lattice import SQUARE_TI
from .model import HAMILTONIAN, LindbladModel
from .operators import LocalOperator, embed, local_basis

log = logging.getLogger(__name__)

RING, OPEN, TORUS = "ring", "open", "torus"
DENSE_SVD_MAX = 1024
DENSE_LU_MAX = 9000
KERNEL_TOL = 1e-9
GAP_RATIO = 1e6


class OracleError(RuntimeError):
    """Kernel extraction failed; carries the residuals seen."""


# --------------------------------------------------------------------------
# geometry
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Geometry:
    kind: str
    shape: Tuple[int, ...]  # (N,) for chains, (R, C) for tori

    @property
    def n_sites(self) -> int:
        return int(np.prod(self.shape))

    def index(self, site) -> int:
        if self.kind == TORUS:
            r, c = site
            return (r % self.shape[0]) * self.shape[1] + (c % self.shape[1])
        if self.kind == RING:
            return site % self.shape[0]
        return site

    def shifts(self) -> list:
        if self.kind == TORUS:
            return [(a, b) for a in range(self.shape[0]) for b in range(self.shape[1])]
        return list(range(self.shape[0]))

    def symmetry_permutations(self) -> List[np.ndarray]:
        """Site permutations of the translation group (identity only for open chains)."""
        n = self.n_sites
        if self.kind == OPEN:
            return [np.arange(n)]
        out = []
        if self.kind == RING:
            for s in range(n):
                out.append((np.arange(n) + s) % n)
        else:
            R, C = self.shape
            for a, b in self.shifts():
                out.append(np.array([((r + a) % R) * C + (c + b) % C for r in range(R) for c in range(C)]))
        return out


def geometry_for(model: LindbladModel, size, geometry: str | None = None) -> Geometry:
    if model.lattice.kind == SQUARE_TI:
        if geometry not in (None, TORUS):
            raise ValueError("square-lattice models use the torus geometry")
        R, C = size
        return Geometry(TORUS, (int(R), int(C)))
    geometry = geometry or RING
    if geometry not in (RING, OPEN):
        raise ValueError(f"chains use 'ring' or 'open', got {geometry!r}")
    return Geometry(geometry, (int(size),))


def term_instances(model: LindbladModel, geo: Geometry) -> List[Tuple[int, Tuple[int, ...]]]:
    """All placed terms ``(template index, site indices)`` on the finite geometry."""
    out = []
    for ti, term in enumerate(model.terms):
        for shift in geo.shifts():
            if geo.kind == TORUS:
                sites = [(s[0] + shift[0], s[1] + shift[1]) for s in term.sites]
            else:
                sites = [s + shift for s in term.sites]
                if geo.kind == OPEN and not all(0 <= s < geo.n_sites for s in sites):
                    continue
            idx = tuple(geo.index(s) for s in sites)
            if len(set(idx)) != len(idx):
                raise ValueError(f"term {term.label!r} wraps onto itself on geometry {geo.shape}")
            out.append((ti, idx))
    return out


def full_operator(op: LocalOperator, n_sites: int) -> sp.csr_matrix:
    return embed(op, tuple(range(n_sites))).matrix


def _placed(model: LindbladModel, ti: int, idx: tuple, n_sites: int) -> sp.csr_matrix:
    term = model.terms[ti]
    local = LocalOperator(idx, _reorder(term.operator, idx), term.operator.dim)
    return full_operator(local, n_sites)


def _reorder(op: LocalOperator, idx: tuple) -> sp.csr_matrix:
    """Matrix of ``op`` with its legs ordered by the target indices ``idx``."""
    order = np.argsort(idx)
    if np.all(order == np.arange(len(idx))):
        return op.matrix
    from .operators import _permute_legs

    return _permute_legs(op.matrix, op.dim, len(idx), order)


def system_operators(model: LindbladModel, geo: Geometry):
    """Full-space Hamiltonian and jump operators."""
    n = geo.n_sites
    D = model.qudit_dim ** n
    H = sp.csr_matrix((D, D), dtype=complex)
    jumps = []
    for ti, idx in term_instances(model, geo):
        op = _placed(model, ti, idx, n)
        if model.terms[ti].kind == HAMILTONIAN:
            H = H + op
        else:
            jumps.append(op)
    return H, jumps


def superoperator(H: sp.spmatrix, jumps: Sequence[sp.spmatrix]) -> sp.csr_matrix:
    """Column-stacked forward generator ``vec(L(rho)) = S vec(rho)``."""
    D = H.shape[0]
    I = sp.identity(D, dtype=complex, format="csr")
    S = -1j * (sp.kron(I, H) - sp.kron(H.T, I))
    for L in jumps:
        LdL = (L.conj().T @ L).tocsr()
        S = S + sp.kron(L.conj(), L) - 0.5 * sp.kron(I, LdL) - 0.5 * sp.kron(LdL.T, I)
    return S.tocsr()


def lindbladian(model: LindbladModel, size, geometry: str | None = None) -> sp.csr_matrix:
    geo = geometry_for(model, size, geometry)
    return superoperator(*system_operators(model, geo))


def apply_lindbladian(model: LindbladModel, rho: np.ndarray, size, geometry: str | None = None) -> np.ndarray:
    """Forward generator applied to a dense state."""
    geo = geometry_for(model, size, geometry)
    H, jumps = system_operators(model, geo)
    out = -1j * (H @ rho - (H.T @ rho.T).T)
    for L in jumps:
        Ld = L.conj().T
        LdL = Ld @ L
        out = out + L @ (Ld.T @ rho.T).T - 0.5 * (LdL @ rho) - 0.5 * (LdL.T @ rho.T).T
    return np.asarray(out)


# --------------------------------------------------------------------------
# symmetric, Hermitian sector
# --------------------------------------------------------------------------

def _state_permutation(perm: np.ndarray, n: int, d: int) -> np.ndarray:
    """Basis-state map induced by moving site ``i`` to ``perm[i]``."""
    D = d ** n
    digits = np.array(np.unravel_index(np.arange(D), (d,) * n)).T  # (D, n)
    moved = np.empty_like(digits)
    moved[:, perm] = digits
    return np.ravel_multi_index(moved.T, (d,) * n)


def sector_basis(geo: Geometry, d: int) -> sp.csc_matrix:
    """Orthonormal columns spanning translation-invariant Hermitian operators (complex vectors).

    The real span of these columns is exactly that space, so a Lindbladian
    reduced onto them is real.
    """
    n = geo.n_sites
    D = d ** n
    idx = np.arange(D)
    label = None
    for perm in geo.symmetry_permutations():
        p = _state_permutation(perm, n, d)
        # vec index of (i, j) is i + D j; take the orbit minimum
        v = (p[:, None] + D * p[None, :]).T.reshape(-1)  # position i + D j
        label = v if label is None else np.minimum(label, v)
    uniq, inv, cnt = np.unique(label, return_inverse=True, return_counts=True)
    pos = np.arange(D * D)
    i_of, j_of = pos % D, pos // D
    adj_label = label[j_of + D * i_of]  # label of the transposed pair
    adj_orbit = np.searchsorted(uniq, adj_label)
    rows, cols, vals = [], [], []
    col = 0
    n_orb = len(uniq)
    # representative per orbit: first member
    first = np.full(n_orb, -1)
    first[inv[::-1]] = pos[::-1]
    partner = adj_orbit[first]
    members = [[] for _ in range(n_orb)]
    order = np.argsort(inv, kind="stable")
    bounds = np.concatenate([[0], np.cumsum(cnt)])
    for o in range(n_orb):
        members[o] = order[bounds[o]:bounds[o + 1]]
    done = np.zeros(n_orb, dtype=bool)
    for o in range(n_orb):
        if done[o]:
            continue
        q = partner[o]
        w = 1 / np.sqrt(cnt[o])
        if q == o:
            rows.append(members[o])
            cols.append(np.full(cnt[o], col))
            vals.append(np.full(cnt[o], w, dtype=complex))
            col += 1
        else:
            s = w / np.sqrt(2)
            rows += [members[o], members[q]]
            cols += [np.full(cnt[o], col), np.full(cnt[q], col)]
            vals += [np.full(cnt[o], s, dtype=complex), np.full(cnt[q], s, dtype=complex)]
            rows += [members[o], members[q]]
            cols += [np.full(cnt[o], col + 1), np.full(cnt[q], col + 1)]
            vals += [np.full(cnt[o], 1j * s), np.full(cnt[q], -1j * s)]
            col += 2
            done[q] = True
        done[o] = True
    return sp.csc_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(D * D, col)
    )


# --------------------------------------------------------------------------
# kernel
# --------------------------------------------------------------------------

@dataclass
class SteadyStateSet:
    model_name: str
    geometry: Geometry
    qudit_dim: int
    kernel_dim: int
    basis: List[np.ndarray]  # Hermitian D x D operators, orthonormal under Tr(A B)
    residuals: List[float]
    method: str
    spectrum: np.ndarray = field(repr=False, default_factory=lambda: np.zeros(0))
    gap_ratio: float = float("inf")
    cache: Dict[str, Tuple[float, float]] = field(default_factory=dict, repr=False)

    @property
    def n_sites(self) -> int:
        return self.geometry.n_sites

    def state(self) -> np.ndarray:
        """A physical steady state (the unique one when ``kernel_dim == 1``)."""
        if self.kernel_dim == 1:
            K = self.basis[0]
            return K / np.trace(K).real
        rho, _ = _extreme_state(self, np.eye(self.basis[0].shape[0]), "max")
        return rho


def _kernel_dense(Lr: np.ndarray):
    U, s, Vt = np.linalg.svd(Lr)
    s_asc = s[::-1]
    V = Vt[::-1].T
    return s_asc, V


def _kernel_dimension(vals: np.ndarray, scale: float):
    """Number of near-zero magnitudes (ascending input) and the gap ratio after them."""
    tiny = vals <= 1e-8 * scale
    kd = int(np.sum(tiny))
    if kd == 0:
        return 0, 0.0
    nxt = vals[kd] if kd < len(vals) else np.inf
    ratio = nxt / max(vals[kd - 1], 1e-300)
    return kd, float(ratio)


def exact_steady_states(model: LindbladModel, size, geometry: str | None = None, sector: str = "translation",
                        n_eigs: int = 8) -> SteadyStateSet:
    """Kernel of the forward generator on a small system.

    ``size`` is ``N`` for chains and ``(R, C)`` for tori.  With
    ``sector="translation"`` only translation-invariant operators are kept;
    ``sector="full"`` keeps everything (open chains are always full).
    """
    geo = geometry_for(model, size, geometry)
    d = model.qudit_dim
    t0 = time.perf_counter()
    S = superoperator(*system_operators(model, geo))
    if sector == "full":
        geo_sec = Geometry(OPEN, (geo.n_sites,))
        B = sector_basis(geo_sec, d)
    else:
        B = sector_basis(geo, d)
    Lr = (B.conj().T @ S @ B).tocsc()
    if abs(Lr.imag).max() > 1e-9 if Lr.nnz else False:
        raise OracleError("reduced generator is not real; the model breaks the chosen symmetry")
    Lr = sp.csc_matrix(Lr.real)
    n = Lr.shape[0]
    scale = float(abs(Lr).max()) if Lr.nnz else 1.0
    if n <= DENSE_SVD_MAX:
        vals, V = _kernel_dense(Lr.toarray())
        kd, ratio = _kernel_dimension(vals, scale)
        vecs = V[:, :kd]
        method = "dense-svd"
        spectrum = vals[: kd + 4]
    else:
        sigma = 1e-3
        if n <= DENSE_LU_MAX:
            lu = sla.lu_factor(Lr.toarray() - sigma * np.eye(n), check_finite=False)
            solve = lambda x: sla.lu_solve(lu, x, check_finite=False)
            method = "dense-lu-shift-invert"
        else:
            lu = spla.splu(Lr - sigma * sp.identity(n, format="csc"))
            solve = lu.solve
            method = "sparse-lu-shift-invert"
        op = spla.LinearOperator((n, n), matvec=solve, dtype=float)
        k = min(n_eigs, n - 2)
        while True:
            mu, W = spla.eigs(op, k=k, which="LM", v0=np.ones(n) / np.sqrt(n), tol=1e-12)
            lam = sigma + 1.0 / mu
            order = np.argsort(np.abs(lam))
            lam, W = lam[order], W[:, order]
            mags = np.abs(lam)
            kd, ratio = _kernel_dimension(mags, scale)
            if kd < k or k >= n - 2:
                break
            k = min(2 * k, n - 2)
        # real kernel basis from real and imaginary parts
        cand = np.concatenate([W[:, :kd].real, W[:, :kd].imag], axis=1)
        U, s, _ = np.linalg.svd(cand, full_matrices=False)
        vecs = U[:, s > 1e-8 * s[0]][:, :kd] if kd else U[:, :0]
        spectrum = mags
    if kd == 0:
        raise OracleError(f"no kernel found (smallest magnitudes {spectrum[:4]})")
    if ratio < GAP_RATIO:
        log.warning("kernel gap ratio %.2e below %.0e", ratio, GAP_RATIO)
    vecs, _ = np.linalg.qr(vecs)
    res = [float(np.linalg.norm(Lr @ vecs[:, i])) for i in range(vecs.shape[1])]
    if max(res) > KERNEL_TOL * max(1.0, scale):
        raise OracleError(f"kernel residuals too large: {res}")
    D = d ** geo.n_sites
    basis = []
    for i in range(vecs.shape[1]):
        K = np.asarray(B @ vecs[:, i]).reshape(D, D, order="F")
        basis.append(0.5 * (K + K.conj().T))
    log.info("kernel of %s on %s: dim %d via %s in %.1fs", model.name, geo, len(basis), method,
             time.perf_counter() - t0)
    return SteadyStateSet(model.name, geo, d, len(basis), basis, res, method, np.asarray(spectrum), ratio)


# --------------------------------------------------------------------------
# expectations
# --------------------------------------------------------------------------

def site_operator(op: LocalOperator, geo: Geometry, anchor=0) -> sp.csr_matrix:
    """Full-space matrix of ``op`` shifted so that its first site sits at ``anchor``."""
    if geo.kind == TORUS:
        support = [s if isinstance(s, tuple) else (0, s) for s in op.support]
        anchor = anchor if isinstance(anchor, tuple) else (0, anchor)
        first = min(support)
        shift = (anchor[0] - first[0], anchor[1] - first[1])
        idx = tuple(geo.index((s[0] + shift[0], s[1] + shift[1])) for s in support)
    else:
        shift = anchor - min(op.support)
        idx = tuple(geo.index(s + shift) for s in op.support)
    local = LocalOperator(idx, _reorder(op, idx), op.dim)
    return full_operator(local, geo.n_sites)


def averaged_operator(op: LocalOperator, geo: Geometry) -> sp.csr_matrix:
    """Translation average of ``op`` over the geometry (plain placement for open chains)."""
    if geo.kind == OPEN:
        return site_operator(op, geo, 0)
    mats = [site_operator(op, geo, s) for s in geo.shifts()]
    return sum(mats[1:], mats[0]) / len(mats)


def expectation(rho: np.ndarray, op_full: sp.spmatrix) -> float:
    return float(np.real(np.sum(op_full.T.multiply(rho)) if sp.issparse(op_full) else np.trace(op_full @ rho)))


def _extreme_state(sset: SteadyStateSet, O_full, sense: str):
    """State in the kernel span maximizing or minimizing ``Tr(O rho)``."""
    from .solver import SolverOptions, _IPM, _Space

    K = sset.basis
    if len(K) == 1:
        rho = K[0] / np.trace(K[0]).real
        return rho, expectation(rho, O_full)
    # joint range of the kernel elements
    stack = np.concatenate(K, axis=1)
    U, s, _ = np.linalg.svd(stack, full_matrices=False)
    V = U[:, s > 1e-9 * s[0]]
    Kt = [V.conj().T @ k @ V for k in K]
    r = V.shape[1]
    tr = np.array([np.trace(k).real for k in K])
    obj = np.array([expectation(k, O_full) for k in K])
    # eliminate the trace constraint: x = x0 + N z
    x0 = tr / (tr @ tr)
    N = sla.null_space(tr[None, :])

    class _B:
        def __init__(self, dim):
            self.dim, self.complex, self.label = dim, True, "kernel"

    space = _Space([_B(2 * r)])
    coords = space.to_coords(0, np.stack(Kt))  # (kd, r*r)
    C = x0 @ coords
    A = -(N.T @ coords)
    sign = 1.0 if sense == "max" else -1.0
    b = sign * (N.T @ obj)
    ipm = _IPM(space, A, b, C, [np.arange(A.shape[0])], SolverOptions(tol=1e-10, max_iter=200))
    out = ipm.solve()
    z = out["y"]
    x = x0 + N @ z
    rho = sum(xi * k for xi, k in zip(x, K))
    return rho, float(obj @ x)


def extremal_expectation(sset: SteadyStateSet, observable: LocalOperator | sp.spmatrix, averaged: bool = True,
                         anchor=0) -> Tuple[float, float]:
    """Range of ``Tr(O rho)`` over physical states in the kernel span."""
    if isinstance(observable, LocalOperator):
        key = f"{observable.support}|{observable.toarray().tobytes().hex()}|{averaged}|{anchor}"
        O_full = averaged_operator(observable, sset.geometry) if averaged else site_operator(observable, sset.geometry, anchor)
    else:
        key = None
        O_full = observable
    if key is not None and key in sset.cache:
        return sset.cache[key]
    if sset.kernel_dim == 1:
        v = expectation(sset.basis[0] / np.trace(sset.basis[0]).real, O_full)
        out = (v, v)
    else:
        out = (_extreme_state(sset, O_full, "min")[1], _extreme_state(sset, O_full, "max")[1])
    if key is not None:
        sset.cache[key] = out
    return out


def marginal(rho: np.ndarray, keep: Sequence[int], n_sites: int, d: int = 2) -> np.ndarray:
    """Reduced state on the listed site indices (in the given order)."""
    keep = list(keep)
    rest = [i for i in range(n_sites) if i not in keep]
    t = rho.reshape((d,) * (2 * n_sites))
    perm = keep + rest + [n_sites + i for i in keep] + [n_sites + i for i in rest]
    t = t.transpose(perm)
    dk, dr = d ** len(keep), d ** len(rest)
    t = t.reshape(dk, dr, dk, dr)
    return np.einsum("ajbj->ab", t)


def translation_average(rho: np.ndarray, geo: Geometry, d: int = 2) -> np.ndarray:
    n = geo.n_sites
    out = np.zeros_like(rho)
    perms = geo.symmetry_permutations()
    for perm in perms:
        p = _state_permutation(perm, n, d)
        out += rho[np.ix_(p, p)]
    return out / len(perms)


# --------------------------------------------------------------------------
# mean field
# --------------------------------------------------------------------------

@dataclass
class MeanFieldResult:
    state: np.ndarray
    bloch: Tuple[float, ...]
    converged: bool
    residual: float
    oscillating: bool
    message: str = ""


def _mf_generator(model: LindbladModel):
    """``f(rho) = d rho / dt`` under the translation-invariant product ansatz."""
    d = model.qudit_dim
    origin = (0, 0) if model.lattice.ndim == 2 else 0
    insts = model.placements([origin])
    pieces = []
    for ti, inst in insts:
        op = model.instance(ti, inst)
        pos = op.support.index(origin)
        pieces.append((model.terms[ti].kind, op.toarray(), op.n_sites, pos))

    def f(rho):
        out = np.zeros((d, d), dtype=complex)
        for kind, M, n, pos in pieces:
            full = rho
            for _ in range(n - 1):
                full = np.kron(full, rho)
            if kind == HAMILTONIAN:
                img = -1j * (M @ full - full @ M)
            else:
                Md = M.conj().T
                img = M @ full @ Md - 0.5 * (Md @ M @ full + full @ Md @ M)
            t = img.reshape((d,) * (2 * n))
            keep = [pos, n + pos]
            others = [i for i in range(n) if i != pos]
            perm = keep[:1] + others + keep[1:] + [n + i for i in others]
            t = t.transpose(perm).reshape(d, d ** (n - 1), d, d ** (n - 1))
            out += np.einsum("ajbj->ab", t)
        return out

    return f


def mean_field_steady(model: LindbladModel, g: float | None = None, gamma: float | None = None,
                      t_max: float = 400.0, tol: float = 1e-10) -> MeanFieldResult:
    """Self-consistent product-state fixed point, reached by time evolution and polished by root finding."""
    params = {}
    if g is not None:
        params["g"] = g
    if gamma is not None:
        params["gamma"] = gamma
    if params:
        model = model.with_parameters(**params)
    d = model.qudit_dim
    basis = local_basis(d)[1:]
    f = _mf_generator(model)

    def to_rho(r):
        return np.eye(d) / d + sum(ri * g_ for ri, g_ in zip(r, basis)) / d

    def rhs(_, r):
        dr = f(to_rho(r))
        return np.array([np.trace(g_ @ dr).real for g_ in basis])

    r0 = np.zeros(len(basis))
    sol = solve_ivp(rhs, (0, t_max), r0, method="DOP853", rtol=1e-10, atol=1e-12, dense_output=True)
    r_end = sol.y[:, -1]
    tail = sol.sol(np.linspace(0.8 * t_max, t_max, 50))
    spread = float(np.ptp(tail, axis=1).max())
    res = root(lambda r: rhs(0, r), r_end, method="hybr", tol=1e-14)
    r_fin = res.x
    residual = float(np.linalg.norm(rhs(0, r_fin)))
    rho = to_rho(r_fin)
    physical = np.linalg.eigvalsh(0.5 * (rho + rho.conj().T))[0] > -1e-9
    converged = residual <= tol and physical and np.linalg.norm(r_fin - r_end) < 1e-3 + 10 * spread
    oscillating = not converged and spread > 1e-6
    msg = "converged" if converged else ("oscillating" if oscillating else "not converged")
    if not converged:
        log.warning("mean-field iteration %s (residual %.2e, tail spread %.2e)", msg, residual, spread)
        rho, r_fin = to_rho(r_end), r_end
        residual = float(np.linalg.norm(rhs(0, r_end)))
    bloch = tuple(float(np.trace(g_ @ rho).real) for g_ in basis) if d == 2 else tuple(r_fin)
    return MeanFieldResult(rho, bloch, converged, residual, oscillating, msg)


# --------------------------------------------------------------------------
# fixtures
# --------------------------------------------------------------------------

FIXTURE_HEADER = ["model", "parameters", "geometry", "size", "observable", "lower", "upper", "kernel_dim"]


def fixture_rows(model: LindbladModel, sizes, observables: Dict[str, LocalOperator], geometry: str | None = None,
                 site_resolved: bool = False):
    """Exact expectation ranges per size and observable, as CSV rows.

    Translation-invariant geometries report site averages; with
    ``site_resolved`` every anchor site gets its own row (label ``X@s``).
    """
    rows = []
    params = ";".join(f"{k}={v:g}" for k, v in sorted(model.parameters.items()))
    for size in sizes:
        sset = exact_steady_states(model, size, geometry)
        size_txt = "x".join(str(v) for v in sset.geometry.shape)
        for label, op in observables.items():
            if site_resolved:
                ranges = [(f"{label}@{s}", extremal_expectation(sset, op, averaged=False, anchor=s))
                          for s in range(sset.n_sites - _extent(op))]
            else:
                ranges = [(label, extremal_expectation(sset, op))]
            for name, (lo, hi) in ranges:
                rows.append([model.name, params, sset.geometry.kind, size_txt, name, fixture_number(lo),
                             fixture_number(hi), str(sset.kernel_dim)])
    return rows


def fixture_number(v: float) -> str:
    """12 significant digits; round-off below 1e-12 is written as 0."""
    v = float(v)
    return "0" if abs(v) < 1e-12 else f"{v:.12g}"


def _extent(op: LocalOperator) -> int:
    return max(op.support) - min(op.support)


def write_fixtures(path, rows) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIXTURE_HEADER)
        w.writerows(rows)


def read_fixtures(path) -> List[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))
