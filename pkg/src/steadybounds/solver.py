"""Primal-dual interior-point solver for the standard-form problems.

Problems come in the real exchange form of :class:`~steadybounds.relaxation.ConicProblem`::

    optimize  <c, X>   s.t.  <A_i, X> = b_i,   X = diag(X_1, ..., X_p) >= 0

Blocks flagged ``complex`` hold realified Hermitian matrices ``T(H)``.  The
solver works on the Hermitian matrices themselves (half the dimension), in
an orthonormal real coordinate system of the Hermitian matrices, which makes
the realified central path exact and the linear algebra eight times cheaper.

Two equivalent formulations are available and the smaller one is chosen:

* ``equality``: the problem as given, ``m`` equality rows.
* ``lmi``: the equalities are eliminated, ``X = X_0 + sum_i y_i N_i`` with an
  orthonormal null-space basis ``N``, leaving ``dim - rank`` free variables.

Both are handed to the same HKM predictor-corrector method for the pair::

    (P) min <C, X>  s.t. <A_i, X> = b_i, X >= 0
    (D) max b.y     s.t. Z = C - sum_i y_i A_i >= 0
"""
from __future__ import annotations

import hashlib
import logging
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

log = logging.getLogger(__name__)

OPTIMAL = "optimal"
NEAR_OPTIMAL = "near_optimal"
INFEASIBLE = "infeasible_detected"
FAILURE = "numerical_failure"

MIN_MARGIN = 1e-6


@dataclass
class SolverOptions:
    tol: float = 1e-8
    max_iter: int = 100
    backend: str = "ipm"  # or "cvxpy"
    form: str = "auto"  # "auto", "equality" or "lmi"
    near_tol: float = 1e-6
    verbose: bool = False


@dataclass
class Diagnostics:
    status: str
    primal_residual: float = float("nan")
    dual_residual: float = float("nan")
    gap: float = float("nan")
    iterations: int = 0
    wall_time: float = 0.0
    form: str = ""
    primal_value: float = float("nan")
    dual_value: float = float("nan")
    log: List[str] = field(default_factory=list, repr=False)


@dataclass
class Solution:
    value: float  # conservative optimum of the user objective
    diagnostics: Diagnostics
    blocks: Optional[List[np.ndarray]] = None  # Hermitian (or real) block matrices


@dataclass
class BoundsResult:
    observable: str
    lower: float
    upper: float
    raw_lower: float
    raw_upper: float
    report_margin: float
    diagnostics: dict

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def status(self) -> str:
        ranks = [OPTIMAL, NEAR_OPTIMAL, INFEASIBLE, FAILURE]
        return max((d.status for d in self.diagnostics.values()), key=ranks.index)

    def contains(self, value: float, slack: float = 0.0) -> bool:
        return self.lower - slack <= value <= self.upper + slack


# --------------------------------------------------------------------------
# Hermitian coordinates
# --------------------------------------------------------------------------

class _Space:
    """Orthonormal coordinates of a direct sum of Hermitian / real symmetric blocks.

    Basis per block: ``E_jj``, ``(E_jk + E_kj)/sqrt2`` and, for complex blocks,
    ``i(E_jk - E_kj)/sqrt2`` (``j < k``), orthonormal for ``Re Tr(A B)``.
    """

    def __init__(self, blocks):
        self.dims, self.cplx, self.sizes, self.raw_dims = [], [], [], []
        for blk in blocks:
            n = int(blk.dim)
            if blk.complex:
                if n % 2:
                    raise ValueError(f"realified block {blk.label!r} has odd dimension")
                D = n // 2
                size = D * D
            else:
                D = n
                size = D * (D + 1) // 2
            self.dims.append(D)
            self.cplx.append(bool(blk.complex))
            self.sizes.append(size)
            self.raw_dims.append(n)
        self.offsets = np.concatenate([[0], np.cumsum(self.sizes)]).astype(int)
        self.raw_offsets = np.concatenate([[0], np.cumsum([n * n for n in self.raw_dims])]).astype(int)
        self.dim = int(self.offsets[-1])
        self.degree = int(sum(self.dims))
        self._idx = [np.triu_indices(D, 1) for D in self.dims]

    def block_slice(self, j) -> slice:
        return slice(self.offsets[j], self.offsets[j + 1])

    def dtype(self, j):
        return complex if self.cplx[j] else float

    def embedding(self, j) -> sp.csr_matrix:
        """Sparse ``E`` with ``vec(H) = E @ coords`` (row-major vec, complex for complex blocks)."""
        cache = self.__dict__.setdefault("_emb", {})
        if j in cache:
            return cache[j]
        D = self.dims[j]
        iu, ju = self._idx[j]
        no = len(iu)
        s = 1 / np.sqrt(2)
        di = np.arange(D)
        rows = [di * D + di, iu * D + ju, ju * D + iu]
        cols = [di, D + np.arange(no), D + np.arange(no)]
        vals = [np.ones(D), np.full(no, s), np.full(no, s)]
        if self.cplx[j]:
            rows += [iu * D + ju, ju * D + iu]
            cols += [D + no + np.arange(no)] * 2
            vals += [np.full(no, 1j * s), np.full(no, -1j * s)]
        E = sp.csr_matrix(
            (np.concatenate(vals).astype(self.dtype(j)), (np.concatenate(rows), np.concatenate(cols))),
            shape=(D * D, self.sizes[j]),
        )
        cache[j] = (E, E.conj().T.tocsr())
        return cache[j]

    # one block, batched over a leading axis
    def to_mats(self, j, coords: np.ndarray) -> np.ndarray:
        coords = np.atleast_2d(coords)
        E, _ = self.embedding(j)
        D = self.dims[j]
        return np.ascontiguousarray((E @ coords.T).T).reshape(coords.shape[0], D, D)

    def to_coords(self, j, mats: np.ndarray) -> np.ndarray:
        """Coordinates of the Hermitian parts of a stack of matrices."""
        mats = np.asarray(mats)
        if mats.ndim == 2:
            mats = mats[None]
        _, Eh = self.embedding(j)
        D = self.dims[j]
        flat = mats.reshape(mats.shape[0], D * D)
        return np.real(Eh @ flat.T).T

    def raw_map(self) -> sp.csr_matrix:
        """Sparse ``P`` with column ``e`` = row-major vec of the realified basis element ``e``."""
        rows, cols, vals = [], [], []
        for j in range(len(self.dims)):
            D, n, roff, coff = self.dims[j], self.raw_dims[j], self.raw_offsets[j], self.offsets[j]
            iu, ju = self._idx[j]
            no = len(iu)
            s = 1 / np.sqrt(2)

            def put(e, r, c, v):
                rows.append(roff + r * n + c)
                cols.append(coff + e)
                vals.append(v)

            for a in range(D):
                put(a, a, a, 1.0)
                if self.cplx[j]:
                    put(a, a + D, a + D, 1.0)
            for t in range(no):
                a, b = int(iu[t]), int(ju[t])
                e = D + t
                for (r, c) in ((a, b), (b, a)):
                    put(e, r, c, s)
                    if self.cplx[j]:
                        put(e, r + D, c + D, s)
                if self.cplx[j]:
                    # T(iE_ab - iE_ba) / sqrt2: A = 0, B = E_ab - E_ba -> [[0, -B], [B, 0]]
                    e = D + no + t
                    put(e, a + D, b, s)
                    put(e, b + D, a, -s)
                    put(e, a, b + D, -s)
                    put(e, b, a + D, s)
        shape = (int(self.raw_offsets[-1]), self.dim)
        return sp.csr_matrix((vals, (rows, cols)), shape=shape)

    def realify(self, j, H: np.ndarray) -> np.ndarray:
        if not self.cplx[j]:
            return np.asarray(H.real, dtype=float)
        A, B = H.real, H.imag
        return np.block([[A, -B], [B, A]])


# --------------------------------------------------------------------------
# reduced problem
# --------------------------------------------------------------------------

@dataclass
class _Reduced:
    space: _Space
    form: str
    A: np.ndarray  # rows over coordinates (m x dim); lmi: columns of -N as rows
    b: np.ndarray
    C: np.ndarray  # coordinates of C (equality: filled per solve)
    x0: Optional[np.ndarray] = None
    N: Optional[np.ndarray] = None
    inconsistent: float = 0.0
    rank: int = 0
    row_blocks: Optional[list] = None  # per block: row indices touching it


_CACHE: "OrderedDict[str, tuple]" = OrderedDict()
_CACHE_SIZE = 6


def _fingerprint(problem) -> str:
    h = hashlib.sha1()
    A = sp.csr_matrix(problem.A)
    A.sort_indices()
    for arr in (A.data, A.indices, A.indptr, np.asarray(problem.b, dtype=float)):
        h.update(np.ascontiguousarray(arr).tobytes())
    h.update(repr([(blk.dim, blk.complex) for blk in problem.blocks]).encode())
    return h.hexdigest()


def _coordinate_rows(problem, space: _Space):
    P = space.raw_map()
    A = (sp.csr_matrix(problem.A) @ P).toarray()
    b = np.asarray(problem.b, dtype=float).copy()
    return A, b, P


def _reduce(problem, options: SolverOptions) -> _Reduced:
    key = _fingerprint(problem) + options.form
    if key in _CACHE:
        _CACHE.move_to_end(key)
        space, form, A, b, x0, N, incons, rank = _CACHE[key]
        return _Reduced(space, form, A, b, None, x0, N, incons, rank, _row_blocks(space, A))
    space = _Space(problem.blocks)
    A, b, _ = _coordinate_rows(problem, space)
    norms = np.linalg.norm(A, axis=1)
    keep = norms > 1e-14
    if np.any(~keep & (np.abs(b) > 1e-12)):
        incons = float(np.abs(b[~keep]).max())
    else:
        incons = 0.0
    A, b, norms = A[keep], b[keep], norms[keep]
    A /= norms[:, None]
    b = b / norms
    m, n = A.shape
    form = options.form
    checked = bool(getattr(problem, "rank_report", {}).get("rank_checked"))
    if checked and form != "lmi" and (form == "equality" or 2 * m <= n):
        # rows already certified independent by the builder
        _CACHE[key] = (space, "equality", A, b, None, None, incons, m)
        return _Reduced(space, "equality", A, b, None, None, None, incons, m, _row_blocks(space, A))
    # rank and null space through a pivoted QR of A^T
    Q, R, piv = sla.qr(A.T, mode="full", pivoting=True)
    diag = np.abs(np.diag(R)) if m else np.zeros(0)
    rank = int(np.sum(diag > 1e-10 * max(1.0, diag[0] if len(diag) else 1.0)))
    if form == "auto":
        form = "lmi" if n - rank < rank else "equality"
    # particular solution; its residual exposes inconsistent rows
    z = sla.solve_triangular(R[:rank, :rank], b[piv[:rank]], trans="T") if rank else np.zeros(0)
    x0 = Q[:, :rank] @ z
    incons = max(incons, float(np.abs(A @ x0 - b).max(initial=0.0)))
    N = None
    if form == "lmi":
        N = np.ascontiguousarray(Q[:, rank:])
        Ared, bred = -N.T.copy(), None
    else:
        sel = np.sort(piv[:rank])
        Ared, bred = A[sel], b[sel]
        x0 = None
    del Q, R
    _CACHE[key] = (space, form, Ared, bred, x0, N, incons, rank)
    if len(_CACHE) > _CACHE_SIZE:
        _CACHE.popitem(last=False)
    return _Reduced(space, form, Ared, bred, None, x0, N, incons, rank, _row_blocks(space, Ared))


def _row_blocks(space: _Space, A: np.ndarray):
    out = []
    for j in range(len(space.dims)):
        blk = A[:, space.block_slice(j)]
        out.append(np.flatnonzero(np.abs(blk).max(axis=1, initial=0.0) > 0))
    return out


# --------------------------------------------------------------------------
# HKM predictor-corrector
# --------------------------------------------------------------------------

def _herm(M):
    return 0.5 * (M + M.conj().T)


class _IPM:
    def __init__(self, space: _Space, A: np.ndarray, b: np.ndarray, C: np.ndarray, row_blocks, options: SolverOptions):
        self.sp, self.A, self.b, self.C, self.opt = space, A, b, C, options
        self.row_blocks = row_blocks
        self.nb = len(space.dims)
        self.Ablocks = [A[:, space.block_slice(j)] for j in range(self.nb)]
        self.Cmats = [space.to_mats(j, C[space.block_slice(j)])[0] for j in range(self.nb)]
        self.log: List[str] = []

    # linear maps
    def Aop(self, mats) -> np.ndarray:
        out = np.zeros(self.A.shape[0])
        for j in range(self.nb):
            out += self.Ablocks[j] @ self.sp.to_coords(j, mats[j])[0]
        return out

    def Aadj(self, y) -> list:
        return [self.sp.to_mats(j, self.Ablocks[j].T @ y)[0] for j in range(self.nb)]

    def inner(self, X, Y) -> float:
        return float(sum(np.real(np.vdot(x, y)) for x, y in zip(X, Y)))

    def schur(self, X, Zinv) -> np.ndarray:
        """``M_ij = Re Tr(A_i X A_j Z^-1)`` as a Gram matrix of ``R^H A_i S``.

        Here ``X = R R^H`` and ``Z^-1 = S S^H``.
        """
        m = self.A.shape[0]
        M = np.zeros((m, m))
        for j in range(self.nb):
            rows = self.row_blocks[j]
            if len(rows) == 0:
                continue
            D = self.sp.dims[j]
            R = np.linalg.cholesky(X[j])
            S = np.linalg.cholesky(Zinv[j])
            Rh = np.ascontiguousarray(R.conj().T)
            Ab = self.Ablocks[j][rows]
            width = 2 * D * D if self.sp.cplx[j] else D * D
            V = np.empty((len(rows), width))
            chunk = max(1, int(2e6 // (D * D)))
            for s in range(0, len(rows), chunk):
                mats = self.sp.to_mats(j, Ab[s:s + chunk])
                c = mats.shape[0]
                T = (mats.reshape(c * D, D) @ S).reshape(c, D, D)
                U = (Rh @ T.transpose(1, 0, 2).reshape(D, c * D)).reshape(D, c, D).transpose(1, 0, 2)
                U = np.ascontiguousarray(U).reshape(c, D * D)
                V[s:s + c] = U.view(float) if self.sp.cplx[j] else U
            G = sla.blas.dsyrk(1.0, V.T, trans=1)  # upper triangle of V V^T
            if len(rows) == m:
                M += G
            else:
                M[np.ix_(rows, rows)] += G
        return np.triu(M) + np.triu(M, 1).T

    def initial_point(self):
        X, Z = [], []
        for j in range(self.nb):
            D = self.sp.dims[j]
            Ab = self.Ablocks[j]
            anorm = np.linalg.norm(Ab, axis=1)
            nrm_b = (1 + np.abs(self.b)) / (1 + anorm)
            xi = max(10.0, np.sqrt(D), np.sqrt(D) * float(nrm_b.max(initial=0.0)))
            eta = max(10.0, np.sqrt(D), float(anorm.max(initial=0.0)), np.linalg.norm(self.Cmats[j]))
            eta = (1 + eta) / np.sqrt(D)
            X.append(xi * np.eye(D, dtype=self.sp.dtype(j)))
            Z.append(eta * np.eye(D, dtype=self.sp.dtype(j)))
        return X, np.zeros(self.A.shape[0]), Z

    @staticmethod
    def _max_step(X, dX) -> float:
        alpha = np.inf
        for x, d in zip(X, dX):
            try:
                L = np.linalg.cholesky(x)
            except np.linalg.LinAlgError:
                return 0.0
            S = sla.solve_triangular(L, d, lower=True)
            S = sla.solve_triangular(L, S.conj().T, lower=True)
            lam = np.linalg.eigvalsh(_herm(S))[0]
            if lam < 0:
                alpha = min(alpha, -1.0 / lam)
        return float(alpha)

    def solve(self):
        opt = self.opt
        X, y, Z = self.initial_point()
        n = self.sp.degree
        bnorm = 1 + np.linalg.norm(self.b)
        cnorm = 1 + np.sqrt(sum(np.linalg.norm(c) ** 2 for c in self.Cmats))
        status, best = FAILURE, None
        it = 0
        stall = 0
        prev_score = np.inf
        for it in range(opt.max_iter + 1):
            AX = self.Aop(X)
            rp = self.b - AX
            ATy = self.Aadj(y)
            Rd = [_herm(C - Zb - a) for C, Zb, a in zip(self.Cmats, Z, ATy)]
            pobj = self.inner(self.Cmats, X)
            dobj = float(self.b @ y)
            mu = self.inner(X, Z) / n
            pinf = np.linalg.norm(rp) / bnorm
            dinf = np.sqrt(sum(np.linalg.norm(r) ** 2 for r in Rd)) / cnorm
            relgap = abs(pobj - dobj) / (1 + abs(pobj) + abs(dobj))
            line = f"{it:3d} pobj={pobj:+.10e} dobj={dobj:+.10e} gap={relgap:.2e} pinf={pinf:.2e} dinf={dinf:.2e} mu={mu:.2e}"
            self.log.append(line)
            if opt.verbose:
                log.info(line)
            score = max(pinf, dinf, relgap)
            if best is None or score < best[0]:
                best = (score, [x.copy() for x in X], y.copy(), [z.copy() for z in Z], pobj, dobj, pinf, dinf, relgap)
            if score <= opt.tol:
                status = OPTIMAL
                break
            if it == opt.max_iter:
                break
            if score > 0.5 * prev_score:
                stall += 1
            else:
                stall = 0
            prev_score = min(prev_score, score)
            if stall >= 8:
                break
            if max(np.abs(x).max() for x in X) > 1e12 or max(np.abs(z).max() for z in Z) > 1e12:
                break
            try:
                Zinv = []
                for z in Z:
                    L = np.linalg.cholesky(z)
                    Li = sla.solve_triangular(L, np.eye(len(z)), lower=True)
                    Zinv.append(_herm(Li.conj().T @ Li))
                M = self.schur(X, Zinv)
                M[np.diag_indices_from(M)] *= 1 + 1e-14
                try:
                    fac = sla.cho_factor(M, check_finite=False)
                    solveM = lambda r: sla.cho_solve(fac, r, check_finite=False)
                except (np.linalg.LinAlgError, sla.LinAlgError):
                    lu = sla.lu_factor(M + 1e-12 * np.trace(M) / len(M) * np.eye(len(M)))
                    solveM = lambda r: sla.lu_solve(lu, r)
            except np.linalg.LinAlgError:
                break

            def direction(target, corr):
                G = []
                for j in range(self.nb):
                    t = target * Zinv[j] - X[j] - X[j] @ Rd[j] @ Zinv[j]
                    if corr is not None:
                        t = t - corr[j] @ Zinv[j]
                    G.append(t)
                rhs = rp - self.Aop(G)
                dy = solveM(rhs)
                ATdy = self.Aadj(dy)
                dZ = [Rd[j] - ATdy[j] for j in range(self.nb)]
                dX = []
                for j in range(self.nb):
                    t = target * Zinv[j] - X[j] - X[j] @ dZ[j] @ Zinv[j]
                    if corr is not None:
                        t = t - corr[j] @ Zinv[j]
                    dX.append(_herm(t))
                return dX, dy, dZ

            dXa, dya, dZa = direction(0.0, None)
            ap = min(1.0, self._max_step(X, dXa))
            ad = min(1.0, self._max_step(Z, dZa))
            mu_aff = self.inner([x + ap * d for x, d in zip(X, dXa)], [z + ad * d for z, d in zip(Z, dZa)]) / n
            sigma = min(1.0, max(0.0, mu_aff / mu) ** 3)
            corr = [dXa[j] @ dZa[j] for j in range(self.nb)]
            dX, dy, dZ = direction(sigma * mu, corr)
            frac = 0.9 + 0.09 * min(ap, ad)
            ap = min(1.0, frac * self._max_step(X, dX))
            ad = min(1.0, frac * self._max_step(Z, dZ))
            if ap < 1e-12 and ad < 1e-12:
                break
            X = [x + ap * d for x, d in zip(X, dX)]
            y = y + ad * dy
            Z = [z + ad * d for z, d in zip(Z, dZ)]
        last_X, last_y = X, y
        score, X, y, Z, pobj, dobj, pinf, dinf, relgap = best
        if status != OPTIMAL:
            if score <= opt.near_tol:
                status = NEAR_OPTIMAL
            elif self._infeasible(last_y, last_X) or self._infeasible(y, X):
                status = INFEASIBLE
        return dict(status=status, X=X, y=y, Z=Z, pobj=pobj, dobj=dobj, pinf=pinf, dinf=dinf,
                    relgap=relgap, iterations=it, log=self.log)

    def _infeasible(self, y, X) -> bool:
        by = float(self.b @ y)
        if by > 0:
            S = self.Aadj(y / by)
            lam = max(np.linalg.eigvalsh(s)[-1] for s in S)
            if lam <= 1e-6:
                return True
        cx = self.inner(self.Cmats, X)
        if cx < 0:
            Xs = [x / -cx for x in X]
            if np.linalg.norm(self.Aop(Xs)) <= 1e-6:
                return True
        return False


# --------------------------------------------------------------------------
# entry points
# --------------------------------------------------------------------------

def _objective_coords(problem, space: _Space) -> np.ndarray:
    P = space.raw_map()
    return np.asarray(P.T @ np.asarray(problem.c, dtype=float)).ravel()


def solve(problem, options: SolverOptions | None = None, sense: str | None = None) -> Solution:
    """Optimize ``problem`` (``sense`` overrides ``problem.sense``).

    The returned value is the conservative optimum: the dual bound of the
    final iterate (upper for ``max``, lower for ``min``).
    """
    options = options or SolverOptions()
    sense = sense or problem.sense
    if sense not in ("max", "min"):
        raise ValueError(f"sense must be 'max' or 'min', got {sense!r}")
    if options.backend == "cvxpy":
        return _solve_cvxpy(problem, options, sense)
    if options.backend != "ipm":
        raise ValueError(f"unknown backend {options.backend!r}")
    t0 = time.perf_counter()
    red = _reduce(problem, options)
    space = red.space
    c = _objective_coords(problem, space)
    sign = 1.0 if sense == "max" else -1.0
    offset = float(getattr(problem, "offset", 0.0))
    if red.inconsistent > 1e-7:
        diag = Diagnostics(INFEASIBLE, red.inconsistent, form=red.form, wall_time=time.perf_counter() - t0,
                           log=[f"equality rows inconsistent (residual {red.inconsistent:.2e})"])
        return Solution(float("nan"), diag)
    if red.form == "lmi":
        b = sign * (red.N.T @ c)
        base = float(c @ red.x0)
        ipm = _IPM(space, red.A, b, red.x0, red.row_blocks, options)
    else:
        ipm = _IPM(space, red.A, red.b, -sign * c, red.row_blocks, options)
    out = ipm.solve()
    if red.form == "lmi":
        # Z is the state, X the certificate; pobj is the dual bound
        value = base + sign * out["pobj"]
        achieved = base + sign * out["dobj"]
        blocks = out["Z"]
    else:
        value = -sign * out["dobj"]
        achieved = -sign * out["pobj"]
        blocks = out["X"]
    diag = Diagnostics(
        status=out["status"], primal_residual=out["pinf"], dual_residual=out["dinf"],
        gap=abs(value - achieved), iterations=out["iterations"], wall_time=time.perf_counter() - t0,
        form=red.form, primal_value=achieved + offset, dual_value=value + offset, log=out["log"],
    )
    if diag.status == INFEASIBLE:
        log.warning("problem reported infeasible; a steady-state relaxation always admits the true marginals")
        return Solution(float("nan"), diag, None)
    return Solution(value + offset, diag, blocks)


def realified_blocks(problem, solution: Solution) -> List[np.ndarray]:
    space = _Space(problem.blocks)
    return [space.realify(j, H) for j, H in enumerate(solution.blocks)]


def _solve_cvxpy(problem, options: SolverOptions, sense: str) -> Solution:
    import cvxpy as cp

    t0 = time.perf_counter()
    variables, pieces = [], []
    for blk in problem.blocks:
        V = cp.Variable((blk.dim, blk.dim), symmetric=True)
        variables.append(V)
        pieces.append(cp.reshape(V, (blk.dim * blk.dim,), order="C"))
    x = cp.hstack(pieces) if len(pieces) > 1 else pieces[0]
    A = sp.csr_matrix(problem.A)
    cons = [V >> 0 for V in variables] + [A @ x == np.asarray(problem.b, dtype=float)]
    obj = np.asarray(problem.c, dtype=float) @ x
    prob = cp.Problem(cp.Maximize(obj) if sense == "max" else cp.Minimize(obj), cons)
    for name in ("CLARABEL", "SCS"):
        if name in cp.installed_solvers():
            try:
                prob.solve(solver=name)
                break
            except cp.SolverError:
                continue
    status = {"optimal": OPTIMAL, "optimal_inaccurate": NEAR_OPTIMAL,
              "infeasible": INFEASIBLE, "infeasible_inaccurate": INFEASIBLE}.get(prob.status, FAILURE)
    value = float(prob.value) + float(getattr(problem, "offset", 0.0)) if prob.value is not None else float("nan")
    gap = 1e-7 if status == OPTIMAL else 1e-5
    diag = Diagnostics(status, gap=gap, wall_time=time.perf_counter() - t0, form="cvxpy",
                       primal_value=value, dual_value=value, log=[f"cvxpy status {prob.status}"])
    return Solution(value, diag, None)


def report_margin(*diagnostics: Diagnostics) -> float:
    gaps = [d.gap for d in diagnostics if np.isfinite(d.gap)]
    return max([MIN_MARGIN] + [10 * g for g in gaps])


def bound_observable(problem, options: SolverOptions | None = None, label: str | None = None) -> BoundsResult:
    """Maximize and minimize the objective of ``problem`` over its feasible set."""
    upper = solve(problem, options, "max")
    lower = solve(problem, options, "min")
    margin = report_margin(upper.diagnostics, lower.diagnostics)
    return BoundsResult(
        observable=label or getattr(problem, "observable", ""),
        lower=lower.value - margin,
        upper=upper.value + margin,
        raw_lower=lower.value,
        raw_upper=upper.value,
        report_margin=margin,
        diagnostics={"max": upper.diagnostics, "min": lower.diagnostics},
    )
