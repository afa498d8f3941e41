"""Lattices, regions and lattice symmetries.

Chain sites are integers ``0, 1, 2, ...``; square-lattice sites are
``(row, col)`` tuples.  A :class:`SymmetryElement` is an affine map
``x -> linear @ x + shift`` on lattice coordinates.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, List, Sequence, Tuple

import numpy as np

CHAIN_TI = "chain_ti"
CHAIN_FINITE = "chain_finite"
SQUARE_TI = "square_ti"
LATTICE_KINDS = (CHAIN_TI, CHAIN_FINITE, SQUARE_TI)


def _as_vec(site) -> tuple:
    return (site,) if isinstance(site, (int, np.integer)) else tuple(site)


def _from_vec(vec, scalar: bool):
    return int(vec[0]) if scalar else tuple(int(v) for v in vec)


@dataclass(frozen=True)
class SymmetryElement:
    """Affine site map ``x -> linear @ x + shift``."""

    linear: Tuple[Tuple[int, ...], ...]
    shift: Tuple[int, ...]
    label: str = ""

    @property
    def ndim(self) -> int:
        return len(self.shift)

    def __call__(self, site):
        scalar = isinstance(site, (int, np.integer))
        x = _as_vec(site)
        if len(x) != self.ndim:
            raise ValueError(f"site {site!r} has wrong dimension for {self.label or self}")
        y = [sum(self.linear[i][j] * x[j] for j in range(self.ndim)) + self.shift[i] for i in range(self.ndim)]
        return _from_vec(y, scalar)

    def compose(self, inner: "SymmetryElement") -> "SymmetryElement":
        """``self o inner`` (apply ``inner`` first)."""
        L1, L2 = np.array(inner.linear), np.array(self.linear)
        lin = L2 @ L1
        sh = L2 @ np.array(inner.shift) + np.array(self.shift)
        label = f"{self.label}*{inner.label}" if self.label and inner.label else ""
        return SymmetryElement(_tup2(lin), tuple(int(v) for v in sh), label)

    def __matmul__(self, inner: "SymmetryElement") -> "SymmetryElement":
        return self.compose(inner)

    def inverse(self) -> "SymmetryElement":
        L = np.array(self.linear)
        Linv = np.rint(np.linalg.inv(L)).astype(int)
        sh = -Linv @ np.array(self.shift)
        return SymmetryElement(_tup2(Linv), tuple(int(v) for v in sh), f"inv({self.label})" if self.label else "")

    def with_shift(self, shift: Sequence[int], label: str | None = None) -> "SymmetryElement":
        shift = tuple(int(v) for v in shift)
        if label is None:
            label = f"{self.label}+T{shift}" if any(shift) else self.label
        return SymmetryElement(self.linear, shift, label)

    def key(self) -> tuple:
        return (self.linear, self.shift)


def _tup2(m) -> tuple:
    return tuple(tuple(int(v) for v in row) for row in np.asarray(m))


def identity_element(ndim: int) -> SymmetryElement:
    return SymmetryElement(_tup2(np.eye(ndim, dtype=int)), (0,) * ndim, "e")


def translation(shift) -> SymmetryElement:
    shift = _as_vec(shift)
    return SymmetryElement(_tup2(np.eye(len(shift), dtype=int)), tuple(shift), f"T{tuple(shift)}")


def chain_reflection(center2: int = 0) -> SymmetryElement:
    """Reflection ``s -> center2 - s``."""
    return SymmetryElement(((-1,),), (center2,), f"R{center2}")


def square_point_group() -> List[SymmetryElement]:
    """The 8 elements of the square's point group, fixing the origin."""
    rot = np.array([[0, -1], [1, 0]])
    refl = np.array([[1, 0], [0, -1]])
    out = []
    for r in range(4):
        R = np.linalg.matrix_power(rot, r)
        out.append(SymmetryElement(_tup2(R), (0, 0), f"C4^{r}"))
    for r in range(4):
        R = np.linalg.matrix_power(rot, r) @ refl
        out.append(SymmetryElement(_tup2(R), (0, 0), f"C4^{r}m"))
    return out


@dataclass(frozen=True)
class Lattice:
    kind: str
    qudit_dim: int = 2
    length: int | None = None
    point_group: bool = False
    symmetry_group: Tuple[SymmetryElement, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kind not in LATTICE_KINDS:
            raise ValueError(f"unknown lattice kind {self.kind!r}")
        if self.kind == CHAIN_FINITE and (self.length is None or self.length < 1):
            raise ValueError("finite chains need a positive length")
        if not self.symmetry_group:
            object.__setattr__(self, "symmetry_group", tuple(self._default_group()))

    def _default_group(self) -> List[SymmetryElement]:
        if self.kind == CHAIN_TI:
            gens = [translation(1)]
            if self.point_group:
                gens.append(chain_reflection(0))
            return gens
        if self.kind == CHAIN_FINITE:
            return [chain_reflection(self.length - 1)] if self.point_group else []
        gens = [translation((1, 0)), translation((0, 1))]
        if self.point_group:
            gens += [g for g in square_point_group() if g.label != "C4^0"]
        return gens

    @property
    def ndim(self) -> int:
        return 2 if self.kind == SQUARE_TI else 1

    @property
    def is_ti(self) -> bool:
        return self.kind in (CHAIN_TI, SQUARE_TI)

    def contains(self, site) -> bool:
        if self.kind == CHAIN_FINITE:
            return isinstance(site, (int, np.integer)) and 0 <= site < self.length
        if self.kind == CHAIN_TI:
            return isinstance(site, (int, np.integer))
        return isinstance(site, tuple) and len(site) == 2

    def point_group_elements(self) -> List[SymmetryElement]:
        """Origin-fixing part of the declared group (identity included)."""
        if self.kind == SQUARE_TI:
            return square_point_group() if self.point_group else [identity_element(2)]
        if self.kind == CHAIN_TI:
            return [identity_element(1)] + ([chain_reflection(0)] if self.point_group else [])
        return [identity_element(1)]

    def translate(self, site, shift):
        if self.ndim == 1:
            return site + shift
        return (site[0] + shift[0], site[1] + shift[1])

    def neighbors(self, site) -> list:
        if self.ndim == 1:
            out = [site - 1, site + 1]
            return [s for s in out if self.contains(s)]
        r, c = site
        return [(r - 1, c), (r, c - 1), (r, c + 1), (r + 1, c)]


def chain(qudit_dim: int = 2, reflection: bool = True) -> Lattice:
    return Lattice(CHAIN_TI, qudit_dim, point_group=reflection)


def finite_chain(length: int, qudit_dim: int = 2) -> Lattice:
    return Lattice(CHAIN_FINITE, qudit_dim, length=length)


def square(qudit_dim: int = 2, point_group: bool = True) -> Lattice:
    return Lattice(SQUARE_TI, qudit_dim, point_group=point_group)


# --------------------------------------------------------------------------
# regions
# --------------------------------------------------------------------------

Region = Tuple  # ordered tuple of sites, canonical (sorted) order


def region(sites: Iterable) -> tuple:
    sites = list(sites)
    if len(set(sites)) != len(sites):
        raise ValueError("duplicate sites in region")
    return tuple(sorted(sites))


def window(lattice: Lattice, k: int, start: int = 0) -> tuple:
    """Contiguous ``k``-site window ``[start, ..., start + k - 1]`` of a chain."""
    if k < 1:
        raise ValueError("window size must be positive")
    if lattice.ndim != 1:
        raise ValueError("windows are defined on chains")
    if lattice.kind == CHAIN_FINITE and start + k > lattice.length:
        raise ValueError(f"window of size {k} does not fit in a chain of length {lattice.length}")
    return tuple(range(start, start + k))


def rectangle(rows: int, cols: int, origin=(0, 0)) -> tuple:
    if rows < 1 or cols < 1:
        raise ValueError("rectangle dimensions must be positive")
    r0, c0 = origin
    return tuple((r0 + r, c0 + c) for r in range(rows) for c in range(cols))


def parse_cluster(spec: str) -> tuple:
    """``"2x3"`` -> 2 rows by 3 columns rectangle at the origin."""
    try:
        rows, cols = (int(v) for v in spec.lower().split("x"))
    except ValueError:
        raise ValueError(f"cluster spec must look like RxC, got {spec!r}") from None
    return rectangle(rows, cols)


def _bbox_min(sites) -> tuple:
    arr = np.array([_as_vec(s) for s in sites])
    return tuple(int(v) for v in arr.min(axis=0))


def stabilizer(cluster: Sequence, lattice: Lattice) -> List[SymmetryElement]:
    """Point-group elements composed with the translation mapping ``cluster`` onto itself."""
    cset = set(cluster)
    lo = _bbox_min(cluster)
    out = []
    for p in lattice.point_group_elements():
        img = [p(s) for s in cluster]
        plo = _bbox_min(img)
        shift = tuple(a - b for a, b in zip(lo, plo))
        g = p.with_shift(shift)
        if {g(s) for s in cluster} == cset:
            out.append(g)
    return out


def adjacent_sites(cluster: Sequence, lattice: Lattice) -> list:
    cset = set(cluster)
    adj = {n for s in cluster for n in lattice.neighbors(s)} - cset
    return sorted(adj)


def boundary_orbits(cluster: Sequence, lattice: Lattice) -> List[Tuple[object, tuple]]:
    """Orbits of the sites adjacent to ``cluster`` under its stabilizer.

    Returns ``(representative, members)`` pairs, the representative being the
    smallest member in row-major order; orbits are sorted by representative.
    """
    stab = stabilizer(cluster, lattice)
    remaining = set(adjacent_sites(cluster, lattice))
    orbits = []
    while remaining:
        b = min(remaining)
        members = tuple(sorted({g(b) for g in stab}))
        orbits.append((members[0], members))
        remaining -= set(members)
    return sorted(orbits)


def halo_region(cluster: Sequence, lattice: Lattice) -> tuple:
    """Cluster plus one representative per boundary orbit."""
    return region(list(cluster) + [rep for rep, _ in boundary_orbits(cluster, lattice)])


def orbit_map(cluster: Sequence, lattice: Lattice) -> dict:
    """For each adjacent site ``b``: a stabilizer element sending it to its representative."""
    stab = stabilizer(cluster, lattice)
    out = {}
    for rep, members in boundary_orbits(cluster, lattice):
        for b in members:
            out[b] = next(g for g in stab if g(b) == rep)
    return out


def _group_elements(lattice: Lattice) -> List[SymmetryElement]:
    return lattice.point_group_elements()


def symmetry_pairs_within(reg: Sequence, lattice: Lattice) -> List[Tuple[SymmetryElement, tuple]]:
    """Maximal ``(g, S)`` with ``S`` in ``reg`` and ``g(S)`` in ``reg``.

    ``g`` ranges over the lattice group (point group times translations for
    translation-invariant lattices).  Pairs acting as the identity on ``S`` are
    dropped, as are pairs whose partial map is a restriction of another pair.
    """
    reg = tuple(reg)
    rset = set(reg)
    candidates = {}
    if lattice.is_ti:
        for p in _group_elements(lattice):
            for s, t in product(reg, reg):
                ps = _as_vec(p(s))
                shift = tuple(a - b for a, b in zip(_as_vec(t), ps))
                g = p.with_shift(shift)
                dom = tuple(x for x in reg if g(x) in rset)
                pmap = frozenset((x, g(x)) for x in dom)
                if all(x == y for x, y in pmap):
                    continue
                candidates.setdefault(pmap, (g, dom))
    else:
        for g in lattice.symmetry_group:
            dom = tuple(x for x in reg if g(x) in rset)
            pmap = frozenset((x, g(x)) for x in dom)
            if dom and not all(x == y for x, y in pmap):
                candidates.setdefault(pmap, (g, dom))
    maps = sorted(candidates, key=len, reverse=True)
    kept = []
    for pm in maps:
        if any(pm < other for other in kept):
            continue
        kept.append(pm)
    out = [candidates[pm] for pm in kept]
    out.sort(key=lambda gs: (len(gs[1]), gs[0].key()), reverse=False)
    return out
