"""Steady-state relaxations as standard-form conic problems.

Every variable is a reduced density matrix ``rho`` on a region.  Constraints
are generated in moment coordinates ``r_a = Tr(G_a rho)`` of the string basis
(so all rows are real), deduplicated and rank-pruned, then written in the real
exchange form on realified blocks ``T(rho)``:

* a moment row ``sum_a alpha_a r_a = beta`` becomes ``<T(A), T(rho)> = 2 beta``
  with ``A = sum_a alpha_a G_a``;
* the normalization is ``Tr T(rho) = 2``;
* the objective ``Tr(O rho)`` is ``<T(O), T(rho)> / 2``.
"""
from __future__ import annotations

import logging
import warnings
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp

from .lattice import (
    CHAIN_FINITE,
    CHAIN_TI,
    SQUARE_TI,
    halo_region,
    orbit_map,
    symmetry_pairs_within,
)
from .model import LindbladModel, boundary_expansions, term_contributions
from .operators import (
    Expansion,
    HERMITIAN_TOL,
    LocalOperator,
    local_basis,
    string_entries,
    qubit_matrix,
    relabel_expansion,
    to_expansion,
)

log = logging.getLogger(__name__)

RANK_TOL = 1e-10


def embed_hermitian(H, tol: float = 1e-10) -> np.ndarray:
    """Realification ``T(H) = [[A, -B], [B, A]]`` of ``H = A + iB``."""
    H = H.toarray() if sp.issparse(H) else np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError("expected a square matrix")
    if np.abs(H - H.conj().T).max(initial=0.0) > tol:
        raise ValueError("matrix is not Hermitian")
    A, B = H.real, H.imag
    return np.block([[A, -B], [B, A]])


def extract_hermitian(X: np.ndarray) -> np.ndarray:
    """Inverse of :func:`embed_hermitian` on (nearly) realified matrices."""
    n = X.shape[0] // 2
    X11, X12, X21, X22 = X[:n, :n], X[:n, n:], X[n:, :n], X[n:, n:]
    return 0.5 * (X11 + X22) + 0.5j * (X21 - X12)


# --------------------------------------------------------------------------
# problem container
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    """A PSD block; ``dim`` is the real (realified) dimension."""

    label: str
    dim: int
    complex: bool = True
    region: tuple = ()


@dataclass
class ConicProblem:
    """``sense <c, vec X> + offset  s.t.  A vec X = b,  X_j >= 0``.

    ``vec`` is the row-major concatenation of the full block matrices.
    """

    blocks: List[Block]
    A: sp.csr_matrix
    b: np.ndarray
    c: np.ndarray
    sense: str = "max"
    offset: float = 0.0
    row_labels: List[str] = field(default_factory=list)
    observable: str = ""
    rank_report: dict = field(default_factory=dict)
    qudit_dim: int = 2
    moment_rows: Optional[sp.csr_matrix] = field(default=None, repr=False)
    moment_rhs: Optional[np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        total = sum(b.dim * b.dim for b in self.blocks)
        self.A = sp.csr_matrix(self.A)
        self.b = np.asarray(self.b, dtype=float)
        self.c = np.asarray(self.c, dtype=float)
        if self.A.shape[1] != total or self.c.shape != (total,):
            raise ValueError("constraint/objective width does not match the declared blocks")
        if self.A.shape[0] != len(self.b):
            raise ValueError("number of rows and right-hand sides differ")
        if self.sense not in ("max", "min"):
            raise ValueError("sense must be 'max' or 'min'")

    @property
    def n_rows(self) -> int:
        return self.A.shape[0]

    @property
    def block_offsets(self) -> np.ndarray:
        return np.concatenate([[0], np.cumsum([b.dim * b.dim for b in self.blocks])]).astype(int)

    def vectorize(self, mats: Sequence[np.ndarray]) -> np.ndarray:
        return np.concatenate([np.asarray(m, dtype=float).reshape(-1) for m in mats])

    def realify_states(self, states: Sequence[np.ndarray]) -> List[np.ndarray]:
        """Realified block matrices from Hermitian (complex blocks) or real matrices."""
        out = []
        for blk, rho in zip(self.blocks, states):
            out.append(embed_hermitian(rho) if blk.complex else np.asarray(rho, dtype=float))
        return out

    def residuals(self, states: Sequence[np.ndarray]) -> np.ndarray:
        """``A vec X - b`` for block states (Hermitian matrices for complex blocks)."""
        return self.A @ self.vectorize(self.realify_states(states)) - self.b

    def objective_value(self, states: Sequence[np.ndarray]) -> float:
        return float(self.c @ self.vectorize(self.realify_states(states))) + self.offset

    def with_objective(self, c: np.ndarray, observable: str = "", sense: str | None = None) -> "ConicProblem":
        return ConicProblem(self.blocks, self.A, self.b, np.asarray(c, dtype=float), sense or self.sense,
                            self.offset, self.row_labels, observable, self.rank_report, self.qudit_dim,
                            self.moment_rows, self.moment_rhs)

    def scaled_objective(self, factor: float) -> "ConicProblem":
        p = self.with_objective(factor * self.c, self.observable)
        p.offset = factor * self.offset
        return p


# --------------------------------------------------------------------------
# moment rows
# --------------------------------------------------------------------------

@lru_cache(maxsize=16)
def _string_vec_map(n: int, d: int) -> sp.csr_matrix:
    """Column ``a`` is the row-major vec of ``T(G_a)`` for the strings on ``n`` sites."""
    D = d ** n
    rows, cols, vals = [], [], []
    for a, idx in enumerate(product(range(d * d), repeat=n)):
        r, c, v = string_entries(idx, d)
        re, im = v.real, v.imag
        for rr, cc, vv in ((r, c, re), (r + D, c + D, re), (r, c + D, -im), (r + D, c, im)):
            mask = vv != 0
            rows.append(rr[mask] * (2 * D) + cc[mask])
            cols.append(np.full(int(mask.sum()), a))
            vals.append(vv[mask])
    return sp.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(4 * D * D, d ** (2 * n))
    )


class _Rows:
    """Accumulates moment rows over several region blocks."""

    def __init__(self, regions: Sequence[tuple], d: int, labels: Sequence[str]):
        self.regions = [tuple(r) for r in regions]
        self.labels = list(labels)
        self.d = d
        self.pos = [{s: i for i, s in enumerate(r)} for r in self.regions]
        self.sizes = [d ** (2 * len(r)) for r in self.regions]
        self.offsets = np.concatenate([[0], np.cumsum(self.sizes)]).astype(int)
        self.rows: List[Dict[int, float]] = []
        self.rhs: List[float] = []
        self.kinds: List[str] = []
        self.names: List[str] = []

    def index(self, block: int, key) -> int:
        n = len(self.regions[block])
        digits = [0] * n
        pos = self.pos[block]
        for s, a in key:
            if s not in pos:
                raise KeyError(f"site {s} is not in block {self.labels[block]}")
            digits[pos[s]] = a
        flat = 0
        d2 = self.d * self.d
        for a in digits:
            flat = flat * d2 + a
        return int(self.offsets[block] + flat)

    def fits(self, block: int, key) -> bool:
        pos = self.pos[block]
        return all(s in pos for s, _ in key)

    def add(self, entries: Dict[int, float], rhs: float, kind: str, name: str):
        self.rows.append(entries)
        self.rhs.append(float(rhs))
        self.kinds.append(kind)
        self.names.append(name)

    def add_expansion(self, block: int, expansion: Expansion, rhs: float, kind: str, name: str, sign: float = 1.0,
                      into: Optional[Dict[int, float]] = None):
        row = {} if into is None else into
        for key, v in expansion.items():
            i = self.index(block, key)
            row[i] = row.get(i, 0.0) + sign * v
        if into is None:
            self.add(row, rhs, kind, name)
        return row

    def normalization(self, block: int):
        self.add({int(self.offsets[block]): 1.0}, 1.0, "normalization", f"Tr {self.labels[block]} = 1")

    def matrix(self) -> sp.csr_matrix:
        rows, cols, vals = [], [], []
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                rows.append(i)
                cols.append(j)
                vals.append(v)
        return sp.csr_matrix((vals, (rows, cols)), shape=(len(self.rows), int(self.offsets[-1])))

    def prune(self, rank_check: bool = True):
        """Drop zero, duplicate and (optionally) linearly dependent rows."""
        M = self.matrix()
        rhs = np.asarray(self.rhs)
        report = {"generated": {}, "zero": 0, "duplicate": 0, "dependent": 0, "kept": {}}
        for k in self.kinds:
            report["generated"][k] = report["generated"].get(k, 0) + 1
        seen = {}
        keep = []
        for i in range(M.shape[0]):
            lo, hi = M.indptr[i], M.indptr[i + 1]
            idx, val = M.indices[lo:hi], M.data[lo:hi]
            nz = np.abs(val) > 1e-13
            idx, val = idx[nz], val[nz]
            if len(idx) == 0:
                if abs(rhs[i]) > 1e-12:
                    raise ValueError(f"row {self.names[i]!r} is inconsistent (0 = {rhs[i]})")
                report["zero"] += 1
                continue
            order = np.argsort(idx)
            idx, val = idx[order], val[order]
            piv = val[np.argmax(np.abs(val))]
            sig = (tuple(idx), tuple(np.round(val / piv, 11)), round(rhs[i] / piv, 11))
            if sig in seen:
                report["duplicate"] += 1
                continue
            seen[sig] = i
            keep.append(i)
        keep = np.array(keep, dtype=int)
        if rank_check and len(keep):
            dense = M[keep].toarray()
            dense /= np.linalg.norm(dense, axis=1)[:, None]
            aug = dense.T
            _, R, piv = sla.qr(aug, mode="economic", pivoting=True, overwrite_a=True, check_finite=False)
            diag = np.abs(np.diag(R))
            rank = int(np.sum(diag > RANK_TOL * diag[0]))
            report["dependent"] = len(keep) - rank
            keep = np.sort(keep[piv[:rank]])
        for k in (self.kinds[i] for i in keep):
            report["kept"][k] = report["kept"].get(k, 0) + 1
        report["rows"] = int(len(keep))
        report["rank_checked"] = bool(rank_check)
        return M[keep], rhs[keep], [self.names[i] for i in keep], report


def _assemble(rows: _Rows, moment_matrix: sp.csr_matrix, rhs: np.ndarray) -> Tuple[sp.csr_matrix, np.ndarray, List[Block]]:
    """Moment rows -> realified exchange rows (block-diagonal string maps)."""
    d = rows.d
    maps = [_string_vec_map(len(r), d) for r in rows.regions]
    big = sp.block_diag(maps, format="csr")
    A = (moment_matrix @ big.T).tocsr()
    A.eliminate_zeros()
    blocks = [Block(lbl, 2 * d ** len(r), True, r) for lbl, r in zip(rows.labels, rows.regions)]
    return A, 2.0 * rhs, blocks


def _objective(rows: _Rows, block: int, expansion: Expansion) -> np.ndarray:
    vec = np.zeros(int(rows.offsets[-1]))
    for key, v in expansion.items():
        vec[rows.index(block, key)] += v
    maps = [_string_vec_map(len(r), rows.d) for r in rows.regions]
    big = sp.block_diag(maps, format="csr")
    return 0.5 * np.asarray(big @ vec).ravel()


def _strings(sites: Sequence, d: int, nonidentity: bool = True):
    """All basis strings on ``sites`` as sorted keys."""
    for idx in product(range(d * d), repeat=len(sites)):
        key = tuple((s, a) for s, a in zip(sites, idx) if a)
        if nonidentity and not key:
            continue
        yield key


def _key_support(key) -> tuple:
    return tuple(s for s, _ in key)


def _shift_key(key, shift):
    if isinstance(shift, tuple):
        return tuple(sorted(((s[0] + shift[0], s[1] + shift[1]), a) for s, a in key))
    return tuple((s + shift, a) for s, a in key)


# --------------------------------------------------------------------------
# observables
# --------------------------------------------------------------------------

def observable_from_label(label: str, lattice_ndim: int = 1, d: int = 2) -> LocalOperator:
    """Pauli-letter observable on consecutive sites from the origin, e.g. ``"X"`` or ``"ZZ"``.

    Two-dimensional lattices place the letters along a row.
    """
    label = label.strip()
    if not label:
        raise ValueError("empty observable label")
    if d != 2:
        raise ValueError("letter observables need qubits; pass a LocalOperator instead")
    sites = list(range(len(label))) if lattice_ndim == 1 else [(0, c) for c in range(len(label))]
    return LocalOperator.from_letters(label.upper(), sites)


def _observable_expansion(obs: LocalOperator) -> Expansion:
    if not obs.is_hermitian(1e-10):
        raise ValueError("observables must be Hermitian")
    return to_expansion(obs)


def _obs_label(obs: LocalOperator, label: str | None) -> str:
    return label if label is not None else f"O{obs.support}"


# --------------------------------------------------------------------------
# constraint caches
# --------------------------------------------------------------------------

_CONSTRAINTS: "OrderedDict[tuple, tuple]" = OrderedDict()


def _cached(key, build):
    if key in _CONSTRAINTS:
        _CONSTRAINTS.move_to_end(key)
        return _CONSTRAINTS[key]
    val = build()
    _CONSTRAINTS[key] = val
    if len(_CONSTRAINTS) > 8:
        _CONSTRAINTS.popitem(last=False)
    return val


def clear_cache():
    _CONSTRAINTS.clear()


# --------------------------------------------------------------------------
# one-dimensional, translation invariant
# --------------------------------------------------------------------------

def _ti_1d_constraints(model: LindbladModel, k: int, rank_check: bool):
    d = model.qudit_dim
    win = tuple(range(k))
    rows = _Rows([win], d, [f"rho^({k})"])
    rows.normalization(0)
    # local translation invariance: Tr_first rho = Tr_last rho
    for key in _strings(win[:-1], d, nonidentity=False):
        a = rows.index(0, key)
        b = rows.index(0, _shift_key(key, 1))
        entries = {a: 1.0}
        entries[b] = entries.get(b, 0.0) - 1.0
        rows.add(entries, 0.0, "lti", f"LTI {key}")
    # stationarity: one adjoint evaluation per string anchored at site 0, all fitting placements
    interior = set(win[1:-1])
    n_interior = 0
    for key in _strings(win, d):
        if key[0][0] != 0:
            continue
        img = {}
        for _, _, _, part in term_contributions(model, {key: 1.0}):
            for kk, v in part.items():
                img[kk] = img.get(kk, 0.0) + v
        img = {kk: v for kk, v in img.items() if abs(v) > 1e-13}
        if not img:
            continue
        sup = {s for kk in img for s, _ in kk} | set(_key_support(key))
        lo, hi = min(sup), max(sup)
        if hi - lo + 1 > k:
            continue
        for shift in range(-lo, k - hi):
            shifted = {_shift_key(kk, shift): v for kk, v in img.items()}
            xkey = _shift_key(key, shift)
            if set(_key_support(xkey)) <= interior:
                n_interior += 1
            rows.add_expansion(0, shifted, 0.0, "stationarity", f"L*({xkey})")
    if not any(kd == "stationarity" for kd in rows.kinds):
        warnings.warn(f"k={k} admits no stationarity constraint; bounds use positivity and LTI only")
    M, rhs, names, report = rows.prune(rank_check)
    report["stationarity_interior"] = n_interior
    A, b, blocks = _assemble(rows, M, rhs)
    return rows, A, b, blocks, names, report, M, rhs


def centered_shift(support: Sequence[int], k: int) -> int:
    """Shift placing ``support`` centrally in ``[0, k)``, ties to the left."""
    lo, hi = min(support), max(support)
    span = hi - lo + 1
    if span > k:
        raise ValueError(f"observable spans {span} sites but the window has {k}")
    return (k - span) // 2 - lo


def build_ti_1d(model: LindbladModel, k: int, observable: LocalOperator, label: str | None = None,
                sense: str = "max", rank_check: bool = True, placement: int | None = None) -> ConicProblem:
    """Single-window relaxation for translation-invariant chains."""
    if model.lattice.kind != CHAIN_TI:
        raise ValueError("build_ti_1d needs a translation-invariant chain model")
    if k < 1:
        raise ValueError("k must be positive")
    key = ("ti1d", model.fingerprint, k, rank_check)
    rows, A, b, blocks, names, report, M, rhs = _cached(key, lambda: _ti_1d_constraints(model, k, rank_check))
    shift = centered_shift(observable.support, k) if placement is None else placement - min(observable.support)
    obs = relabel_expansion(_observable_expansion(observable), lambda s: s + shift)
    if not all(0 <= s < k for kk in obs for s, _ in kk):
        raise ValueError("observable does not fit in the window")
    c = _objective(rows, 0, obs)
    return ConicProblem(blocks, A, b, c, sense, 0.0, names, _obs_label(observable, label), report, model.qudit_dim,
                        M, rhs)


# --------------------------------------------------------------------------
# one-dimensional, open chain without translation invariance
# --------------------------------------------------------------------------

def _nonti_constraints(model: LindbladModel, k: int, N: int, rank_check: bool):
    d = model.qudit_dim
    windows = [tuple(range(i, i + k)) for i in range(N - k + 1)]
    rows = _Rows(windows, d, [f"rho^({w[0]}..{w[-1]})" for w in windows])
    for j in range(len(windows)):
        rows.normalization(j)
    # overlap consistency between neighbouring windows
    for j in range(len(windows) - 1):
        overlap = windows[j][1:]
        for key in _strings(overlap, d):
            entries = {rows.index(j, key): 1.0}
            i2 = rows.index(j + 1, key)
            entries[i2] = entries.get(i2, 0.0) - 1.0
            rows.add(entries, 0.0, "consistency", f"overlap {j}/{j + 1} {key}")
    # stationarity for every string readable from some window
    seen = set()
    for w in windows:
        for key in _strings(w, d):
            if key in seen:
                continue
            seen.add(key)
            row: Dict[int, float] = {}
            ok = True
            for ti, inst, _, part in term_contributions(model, {key: 1.0}):
                sup = set(_key_support(key)) | set(inst)
                j = next((j for j, ww in enumerate(windows) if sup <= set(ww)), None)
                if j is None:
                    ok = False
                    break
                rows.add_expansion(j, part, 0.0, "", "", into=row)
            if ok and row:
                rows.add(row, 0.0, "stationarity", f"L*({key})")
    M, rhs, names, report = rows.prune(rank_check)
    A, b, blocks = _assemble(rows, M, rhs)
    return rows, A, b, blocks, names, report, M, rhs


def build_nonti_chain(model: LindbladModel, k: int, N: int, observable: LocalOperator, target_site: int,
                      label: str | None = None, sense: str = "max", rank_check: bool = True) -> ConicProblem:
    """Overlapping-window relaxation of an open chain of ``N`` sites.

    ``observable`` is given on relative sites and is shifted so that its first
    site lands on ``target_site``; it is read from the leftmost window holding it.
    """
    if N < k:
        raise ValueError(f"chain length {N} is smaller than the window size {k}")
    if model.lattice.ndim != 1:
        raise ValueError("build_nonti_chain needs a chain model")
    if model.lattice.kind != CHAIN_FINITE or model.lattice.length != N:
        from .lattice import finite_chain

        model = model.with_lattice(finite_chain(N, model.qudit_dim))
    key = ("nonti", model.fingerprint, k, N, rank_check)
    rows, A, b, blocks, names, report, M, rhs = _cached(key, lambda: _nonti_constraints(model, k, N, rank_check))
    shift = target_site - min(observable.support)
    obs = relabel_expansion(_observable_expansion(observable), lambda s: s + shift)
    sup = {s for kk in obs for s, _ in kk} or {target_site}
    j = next((j for j, w in enumerate(rows.regions) if sup <= set(w)), None)
    if j is None:
        raise ValueError(f"observable support {sorted(sup)} spans no single window")
    c = _objective(rows, j, obs)
    return ConicProblem(blocks, A, b, c, sense, 0.0, names, _obs_label(observable, label), report, model.qudit_dim,
                        M, rhs)


# --------------------------------------------------------------------------
# two-dimensional cluster with lattice symmetries
# --------------------------------------------------------------------------

def _cluster_constraints(model: LindbladModel, cluster: tuple, rank_check: bool):
    d = model.qudit_dim
    lat = model.lattice
    halo = halo_region(cluster, lat)
    rows = _Rows([halo], d, [f"rho^(halo {len(cluster)}+{len(halo) - len(cluster)})"])
    rows.normalization(0)
    # symmetry rows r[X] = r[g(X)]
    for g, dom in symmetry_pairs_within(halo, lat):
        for key in _strings(dom, d):
            img = tuple(sorted((g(s), a) for s, a in key))
            if img == key:
                continue
            entries = {rows.index(0, key): 1.0}
            i2 = rows.index(0, img)
            entries[i2] = entries.get(i2, 0.0) - 1.0
            rows.add(entries, 0.0, "symmetry", f"{g.label}: {key}")
    # stationarity with boundary terms mapped into the halo
    gmap = orbit_map(cluster, lat)
    cset = set(cluster)
    for key in _strings(cluster, d):
        groups = boundary_expansions(model, {key: 1.0}, base_support=cset)
        row: Dict[int, float] = {}
        for extra, part in groups.items():
            if extra is None:
                rows.add_expansion(0, part, 0.0, "", "", into=row)
                continue
            if extra not in gmap:
                raise AssertionError(f"boundary site {extra} has no stabilizer image in the halo")
            mapped = relabel_expansion(part, gmap[extra])
            rows.add_expansion(0, mapped, 0.0, "", "", into=row)
        if row:
            rows.add(row, 0.0, "stationarity", f"L*({key})")
    M, rhs, names, report = rows.prune(rank_check)
    A, b, blocks = _assemble(rows, M, rhs)
    return rows, A, b, blocks, names, report, M, rhs


def build_cluster_2d(model: LindbladModel, cluster: Sequence, observable: LocalOperator, label: str | None = None,
                     sense: str = "max", rank_check: bool = True) -> ConicProblem:
    """Relaxation on ``cluster`` plus one representative per boundary orbit."""
    if model.lattice.kind != SQUARE_TI:
        raise ValueError("build_cluster_2d needs a square-lattice model")
    cluster = tuple(sorted(cluster))
    rs = sorted({s[0] for s in cluster})
    cs = sorted({s[1] for s in cluster})
    if len(cluster) != len(rs) * len(cs) or rs != list(range(rs[0], rs[-1] + 1)) or cs != list(range(cs[0], cs[-1] + 1)):
        raise ValueError("clusters must be rectangles")
    key = ("cluster", model.fingerprint, cluster, rank_check)
    rows, A, b, blocks, names, report, M, rhs = _cached(key, lambda: _cluster_constraints(model, cluster, rank_check))
    anchor = min(observable.support)
    shift = (cluster[0][0] - anchor[0], cluster[0][1] - anchor[1])
    obs = relabel_expansion(_observable_expansion(observable), lambda s: (s[0] + shift[0], s[1] + shift[1]))
    if not all(rows.fits(0, kk) for kk in obs):
        raise ValueError("observable does not fit in the cluster region")
    c = _objective(rows, 0, obs)
    return ConicProblem(blocks, A, b, c, sense, 0.0, names, _obs_label(observable, label), report, model.qudit_dim,
                        M, rhs)


# --------------------------------------------------------------------------
# audit
# --------------------------------------------------------------------------

def feasible_set_monotonicity_audit(model: LindbladModel, observable: LocalOperator, k_list: Sequence[int],
                                    options=None, tol: float = 1e-6, label: str | None = None) -> dict:
    """Solve the translation-invariant relaxation for each ``k`` and check nesting."""
    from .solver import bound_observable

    ks = list(k_list)
    if ks != sorted(ks):
        raise ValueError("k_list must be ascending")
    results, incidents = [], []
    for k in ks:
        res = bound_observable(build_ti_1d(model, k, observable, label), options)
        results.append((k, res))
    for (k0, r0), (k1, r1) in zip(results, results[1:]):
        slack = tol + r0.report_margin + r1.report_margin
        if r1.raw_lower < r0.raw_lower - slack or r1.raw_upper > r0.raw_upper + slack:
            incidents.append(f"solver-accuracy incident: k={k1} interval [{r1.raw_lower:.9f}, {r1.raw_upper:.9f}] "
                             f"not inside k={k0} interval [{r0.raw_lower:.9f}, {r0.raw_upper:.9f}]")
    return {
        "k": ks,
        "intervals": [(r.lower, r.upper) for _, r in results],
        "widths": [r.width for _, r in results],
        "results": [r for _, r in results],
        "nested": not incidents,
        "incidents": incidents,
    }


# --------------------------------------------------------------------------
# SDPA sparse exchange format
# --------------------------------------------------------------------------

def _sym_entries(row: sp.csr_matrix, offsets, dims):
    """Upper-triangle entries ``(block, i, j, value)`` of the symmetric part of a vec row."""
    acc: Dict[tuple, float] = {}
    row = row.tocoo()
    for col, v in zip(row.col, row.data):
        blk = int(np.searchsorted(offsets, col, side="right") - 1)
        local = col - offsets[blk]
        n = dims[blk]
        i, j = divmod(int(local), n)
        if i > j:
            i, j = j, i
        w = v if i == j else 0.5 * v
        acc[(blk, i, j)] = acc.get((blk, i, j), 0.0) + w
    return acc


def write_sdpa(problem: ConicProblem, path) -> None:
    """Write ``problem`` in SDPA sparse format.

    SDPA's primal ``max F0.Y s.t. F_i.Y = c_i, Y >= 0`` is our problem with
    ``F0 = c`` (``-c`` for minimization), ``F_i = A_i`` and ``c_i = b_i``.
    Comment lines record the block flags, sense and offset.
    """
    offsets = problem.block_offsets
    dims = [b.dim for b in problem.blocks]
    lines = [
        f'"steady-state relaxation: {problem.observable}',
        "* sense " + problem.sense,
        "* offset " + repr(float(problem.offset)),
        "* complex " + " ".join("1" if b.complex else "0" for b in problem.blocks),
        str(problem.n_rows),
        str(len(dims)),
        " ".join(str(n) for n in dims),
        " ".join(repr(float(v)) for v in problem.b) if problem.n_rows else "",
    ]
    sign = 1.0 if problem.sense == "max" else -1.0
    c_row = sp.csr_matrix(problem.c.reshape(1, -1))
    for (blk, i, j), v in sorted(_sym_entries(c_row, offsets, dims).items()):
        if v != 0:
            lines.append(f"0 {blk + 1} {i + 1} {j + 1} {float(sign * v)!r}")
    A = problem.A
    for r in range(problem.n_rows):
        for (blk, i, j), v in sorted(_sym_entries(A[r], offsets, dims).items()):
            if v != 0:
                lines.append(f"{r + 1} {blk + 1} {i + 1} {j + 1} {float(v)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_sdpa(path) -> ConicProblem:
    """Read a problem written by :func:`write_sdpa` (or any SDPA sparse file)."""
    sense, offset, flags = "max", 0.0, None
    data = []
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if line.startswith("* sense"):
                sense = line.split()[-1]
            elif line.startswith("* offset"):
                offset = float(line.split()[-1])
            elif line.startswith("* complex"):
                flags = [t == "1" for t in line.split()[2:]]
            elif line and line[0] not in '*"':
                data.append(line.replace(",", " ").replace("{", " ").replace("}", " ").replace("(", " ").replace(")", " "))
    m = int(data[0].split()[0])
    nblocks = int(data[1].split()[0])
    dims = [abs(int(v)) for v in data[2].split()[:nblocks]]
    pos = 3
    b = []
    while len(b) < m:
        b += [float(v) for v in data[pos].split()]
        pos += 1
    flags = flags or [False] * nblocks
    blocks = [Block(f"block{j}", n, f) for j, (n, f) in enumerate(zip(dims, flags))]
    offsets = np.concatenate([[0], np.cumsum([n * n for n in dims])]).astype(int)
    rows, cols, vals = [], [], []
    c = np.zeros(int(offsets[-1]))
    for line in data[pos:]:
        mat, blk, i, j, v = line.split()[:5]
        mat, blk, i, j, v = int(mat), int(blk) - 1, int(i) - 1, int(j) - 1, float(v)
        n = dims[blk]
        idx = {offsets[blk] + i * n + j, offsets[blk] + j * n + i}
        for col in idx:
            if mat == 0:
                c[col] += v
            else:
                rows.append(mat - 1)
                cols.append(col)
                vals.append(v)
    A = sp.csr_matrix((vals, (rows, cols)), shape=(m, int(offsets[-1])))
    if sense == "min":
        c = -c
    return ConicProblem(blocks, A, np.array(b[:m]), c, sense, offset)
