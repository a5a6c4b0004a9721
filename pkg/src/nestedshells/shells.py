"""Projected orbits of lattice points, organised into exact radial layers.

For a catalog group ``K`` containing the icosahedral group ``H`` and a seed
``v`` in Z^6, the orbit ``K v`` splits into the coset orbits
``O_i = H g_i v``.  Each ``O_i`` projects to a single icosahedral shell, so
the projected orbit is a union of shells at finitely many radii (at most
``[K : H]`` of them).  Radii are compared exactly in Q(tau).
"""

from __future__ import annotations

import hashlib
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import exactnum as ex
from .exactnum import QTau
from .groupcore import (FiniteGroup, Transversal, act_codes, act_points, compose_codes,
                        is_normal, right_transversal, stabilizer)
from .icosa import (build_catalog, build_embedding, project_many, radius_physical,
                    symmetry_axes, to_physical)

logger = logging.getLogger(__name__)

LIBRARY_LABELS = tuple(f"G{i}" for i in range(4, 14))

_TRANSVERSALS: dict[tuple[str, str, str], Transversal] = {}


def transversal(k: FiniteGroup, h: FiniteGroup, pick: str = "first") -> Transversal:
    key = (k.key, h.key, pick)
    if key not in _TRANSVERSALS:
        _TRANSVERSALS[key] = right_transversal(k, h, pick)
    return _TRANSVERSALS[key]


def coset_blocks(t: Transversal) -> np.ndarray:
    """Codes arranged as an (n, |H|) array; row ``i`` is the coset ``H g_i``
    and column 0 is ``g_i`` itself."""
    hel = t.subgroup.elements.astype(np.int64)
    return compose_codes(hel[None, :], t.rep_codes[:, None])


@dataclass(frozen=True)
class CosetOrbit:
    coset_index: int
    rep: int  # element code of g_i
    points6: np.ndarray  # distinct lattice points h g_i v, sorted


def coset_orbits(k: FiniteGroup, h: FiniteGroup, v, pick: str = "first") -> list[CosetOrbit]:
    t = transversal(k, h, pick)
    blocks = coset_blocks(t)
    v = np.asarray(v, dtype=np.int64)
    out = []
    for i, row in enumerate(blocks):
        pts = np.unique(act_codes(row, v), axis=0)
        out.append(CosetOrbit(i, int(t.rep_codes[i]), pts))
    return out


@dataclass
class Layer:
    radius2: QTau  # exact, in units where the factor 1/(2(2+tau)) is divided out
    points: np.ndarray  # exact projections, integer Q(tau) array (m, 3, 2)
    preimages: np.ndarray  # (m, 6) lattice points
    cosets: np.ndarray  # (m,) least coset index whose orbit contains the point
    coset_indices: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def radius(self) -> float:
        return radius_physical(self.radius2)

    @property
    def points_float(self) -> np.ndarray:
        return to_physical(self.points)


@dataclass
class PointArray:
    seed: tuple[int, ...]
    group_label: str
    layers: list[Layer]
    index: int  # [K : H]

    @property
    def total_points(self) -> int:
        return sum(len(layer) for layer in self.layers)

    @property
    def radii(self) -> list[float]:
        return [layer.radius for layer in self.layers]

    @property
    def outer(self) -> Layer:
        return self.layers[-1]

    def all_points(self) -> np.ndarray:
        return np.concatenate([layer.points for layer in self.layers])

    def points_float(self) -> np.ndarray:
        return to_physical(self.all_points())

    @cached_property
    def fingerprint(self) -> str:
        """Hash of the exact projected point set; equal iff the sets are equal."""
        return hashlib.sha1(_point_set_key(self.all_points())).hexdigest()

    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]

    def __repr__(self):
        return (f"<PointArray {self.group_label} seed={self.seed} "
                f"points={self.total_points} layers={self.sizes()}>")


def _r2_sort_key(keys: list[tuple[int, int]]) -> list[tuple[int, int]]:
    return sorted(keys, key=lambda k: QTau(*k))


def build_point_array(k: FiniteGroup, v, h: FiniteGroup | None = None,
                      label: str | None = None, pick: str = "first") -> PointArray:
    """Project the ``K``-orbit of ``v`` and group it into exact radial layers."""
    h = h if h is not None else build_catalog()["G1"]
    v = np.asarray(v, dtype=np.int64)
    t = transversal(k, h, pick)
    blocks = coset_blocks(t)
    n, m = blocks.shape
    imgs = act_codes(blocks.ravel(), v).reshape(n, m, 6)
    r2 = ex.qt_norm2(project_many(imgs[:, 0, :]))  # one radius per coset
    groups: dict[tuple[int, int], list[int]] = {}
    for i in range(n):
        groups.setdefault((int(r2[i, 0]), int(r2[i, 1])), []).append(i)
    layers = []
    for key in _r2_sort_key(list(groups)):
        idx = groups[key]
        pts = imgs[idx].reshape(-1, 6)
        cos = np.repeat(np.asarray(idx), m)
        uniq, first = np.unique(pts, axis=0, return_index=True)
        # np.unique keeps the first occurrence, which has the least coset index
        layers.append(Layer(QTau(*key), project_many(uniq), uniq, cos[first], tuple(idx)))
    return PointArray(tuple(int(x) for x in v), label or k.name or "K", layers, n)


def orbit_size(k: FiniteGroup, v) -> int:
    return len(k.orbit(v))


# ---------------------------------------------------------------------------
# Coset-orbit checks


def coset_coincidence_geometric(k: FiniteGroup, h: FiniteGroup, v, pick: str = "first") -> np.ndarray:
    """``M[i, j]`` is True when the projected coset orbits P_i and P_j coincide."""
    orbs = coset_orbits(k, h, v, pick)
    keys = [_point_set_key(project_many(o.points6)) for o in orbs]
    return np.array([[a == b for b in keys] for a in keys])


def coset_coincidence_criterion(k: FiniteGroup, h: FiniteGroup, v, pick: str = "first") -> np.ndarray:
    """``M[i, j]`` is True when ``g_j^-1 H g_i`` meets ``Stab_K(v)``.

    Computed group-theoretically: the condition holds iff the left coset
    ``g_j Stab`` meets the right coset ``H g_i``.
    """
    t = transversal(k, h, pick)
    stab = stabilizer(k, v).elements.astype(np.int64)
    n = len(t)
    out = np.zeros((n, n), dtype=bool)
    for j, gj in enumerate(t.rep_codes):
        hit = np.unique(t.coset_of[compose_codes(gj, stab)])
        out[hit, j] = True
    return out


def _point_set_key(x: np.ndarray) -> bytes:
    flat = x.reshape(len(x), -1)
    flat = flat[np.lexsort(flat.T[::-1])]
    return flat.astype("<i8").tobytes()


def closed_under_t1(points: np.ndarray) -> bool:
    """Is an exact projected point set invariant under both T1 generators?"""
    emb = build_embedding()
    base = {tuple(p.ravel()) for p in 2 * points}
    for t in (emb.t1_g2, emb.t1_g3):
        imgs = ex.qt_matvec(t, points)
        if any(tuple(p.ravel()) not in base for p in imgs):
            return False
    return True


def closed_under_negation(points: np.ndarray) -> bool:
    base = {tuple(p.ravel()) for p in points}
    return all(tuple(p.ravel()) in base for p in -points)


@dataclass
class CosetOrbitReport:
    transversal_independent: bool
    shells_symmetric: bool
    criterion_matches: bool
    equal_cardinality: bool | None  # None when H is not normal in K
    normal: bool
    n_cosets: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def verify_coset_orbits(k: FiniteGroup, h: FiniteGroup, v) -> CosetOrbitReport:
    """Check the four coset-orbit properties for one seed."""
    v = np.asarray(v, dtype=np.int64)
    violations = []
    first = coset_orbits(k, h, v, "first")
    last = coset_orbits(k, h, v, "last")
    indep = all(np.array_equal(a.points6, b.points6) for a, b in zip(first, last))
    if not indep:
        violations.append("coset orbits depend on the transversal")
    proj = [project_many(o.points6) for o in first]
    sym = all(closed_under_t1(p) for p in proj)
    if not sym:
        violations.append("a projected coset orbit is not icosahedrally symmetric")
    geo = coset_coincidence_geometric(k, h, v)
    crit = coset_coincidence_criterion(k, h, v)
    match = bool(np.array_equal(geo, crit))
    if not match:
        violations.append("P_i = P_j does not match the stabilizer criterion")
    normal = is_normal(h, k)
    eq = None
    if normal:
        eq = len({len(p) for p in proj}) == 1
        if not eq:
            violations.append("H is normal but coset orbits differ in size")
    return CosetOrbitReport(indep, sym, match, eq, normal, len(first), violations)


# ---------------------------------------------------------------------------
# Fundamental domain in the cube [-N, N]^6


def _cube_points(n: int) -> np.ndarray:
    r = np.arange(-n, n + 1)
    grid = np.stack(np.meshgrid(*([r] * 6), indexing="ij"), axis=-1)
    return grid.reshape(-1, 6)


def _cube_index(points: np.ndarray, n: int) -> np.ndarray:
    m = 2 * n + 1
    return (points + n) @ (m ** np.arange(5, -1, -1))


def orbit_partition(k: FiniteGroup, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Cube points (in index order) and the orbit label of each under ``k``."""
    pts = _cube_points(n)
    src = np.arange(len(pts))
    rows, cols = [], []
    for g in k.generators:
        rows.append(src)
        cols.append(_cube_index(act_points(g.code, pts), n))
    if not rows:
        return pts, src
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    graph = coo_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(len(pts),) * 2)
    _, labels = connected_components(graph, directed=False)
    return pts, labels


def fundamental_reps(k: FiniteGroup, n: int) -> list[tuple[int, ...]]:
    """One representative per ``k``-orbit on the cube ``[-n, n]^6``.

    The representative has the most strictly positive coordinates in its
    orbit; ties go to the lexicographically greatest point.  Returned in
    decreasing order of that preference.
    """
    if n < 0:
        raise ValueError("cutoff must be non-negative")
    pts, labels = orbit_partition(k, n)
    m = 2 * n + 1
    pref = (pts > 0).sum(axis=1).astype(np.int64) * m ** 6 + _cube_index(pts, n)
    order = np.lexsort((pref, labels))
    last = np.r_[labels[order][1:] != labels[order][:-1], True]
    chosen = order[last]
    chosen = chosen[np.argsort(-pref[chosen], kind="stable")]
    return [tuple(int(x) for x in pts[i]) for i in chosen]


# ---------------------------------------------------------------------------
# The library S(N)


@dataclass
class Library:
    n: int
    seeds: list[tuple[int, ...]]
    labels: tuple[str, ...]
    arrays: list[PointArray]  # distinct point sets, in first-seen order
    index: dict[tuple[tuple[int, ...], str], int]  # (seed, label) -> position in arrays

    @property
    def n_pairs(self) -> int:
        return len(self.index)

    def aliases(self, i: int) -> list[tuple[tuple[int, ...], str]]:
        return [key for key, j in self.index.items() if j == i]

    def get(self, seed, label: str) -> PointArray:
        return self.arrays[self.index[(tuple(seed), label)]]

    def summary(self) -> dict:
        return {"N": self.n, "representatives": len(self.seeds), "pairs": self.n_pairs,
                "distinct_arrays": len(self.arrays)}


def build_library(n: int, labels=LIBRARY_LABELS, catalog=None, threads: int = 1) -> Library:
    """All projected orbits of the G4-representatives of ``[-n, n]^6`` under
    the given catalog groups, deduplicated as exact point sets."""
    catalog = catalog or build_catalog()
    seeds = fundamental_reps(catalog["G4"], n)
    h = catalog["G1"]
    for lab in labels:  # warm the transversal cache before fanning out
        transversal(catalog[lab], h)
    jobs = [(s, lab) for s in seeds for lab in labels]

    def run(job):
        s, lab = job
        return build_point_array(catalog[lab], s, h, lab)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, jobs))
    else:
        results = [run(j) for j in jobs]
    arrays: list[PointArray] = []
    by_print: dict[str, int] = {}
    index = {}
    for (s, lab), arr in zip(jobs, results):
        fp = arr.fingerprint
        if fp not in by_print:
            by_print[fp] = len(arrays)
            arrays.append(arr)
        index[(s, lab)] = by_print[fp]
    logger.info("library N=%d: %d seeds, %d pairs, %d distinct arrays",
                n, len(seeds), len(jobs), len(arrays))
    return Library(n, seeds, tuple(labels), arrays, index)


# ---------------------------------------------------------------------------
# Angular clustering of a shell


def axis_clusters(points: np.ndarray, folds=(5, 3), tie_tol: float = 1e-9) -> list[tuple[int, int]]:
    """Cluster points of a shell by their nearest symmetry axis direction.

    Only axes of the listed orders are used as centres.  A point equally
    close to two centres is grouped with its nearest 2-fold axis instead,
    so the result stays symmetric.  Returns ``(fold, size)`` for every
    nonempty cluster.  Scale free: depends only on directions.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 3:
        pts = to_physical(pts)
    axes = symmetry_axes()
    centres = np.vstack([axes[f] for f in folds])
    kinds = np.concatenate([[f] * len(axes[f]) for f in folds])
    u = pts / np.linalg.norm(pts, axis=1)[:, None]
    cos = u @ centres.T
    top2 = np.sort(cos, axis=1)[:, -2:]
    tied = top2[:, 1] - top2[:, 0] <= tie_tol
    counts = Counter((int(kinds[c]), int(c)) for c in np.argmax(cos[~tied], axis=1))
    if tied.any():
        counts.update((2, int(c)) for c in np.argmax(u[tied] @ axes[2].T, axis=1))
    return sorted(((fold, n) for (fold, _), n in counts.items()), reverse=True)


def cluster_profile(points: np.ndarray, folds=(5, 3)) -> dict[tuple[int, int], int]:
    """``{(fold, cluster size): number of clusters}``."""
    return dict(Counter(axis_clusters(points, folds)))
