"""Six-dimensional icosahedral machinery.

The crystallographic representation of the icosahedral group on the simple
cubic lattice Z^6, its three-dimensional irrep ``T1``, the exact projection
onto the invariant subspace ``E_par``, and the catalog of the 13 subgroups of
B6 that contain it.

Q(tau) matrices are stored as integer arrays with a trailing ``(a, b)`` axis
(see :mod:`nestedshells.exactnum`).  Two global scale factors are left out
everywhere and restored only when converting to floats: the projection is
kept as ``sqrt(2(2+tau)) * pi_par`` and ``T1`` as ``2 * T1``.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from . import exactnum as ex
from .errors import CatalogMismatch, VerificationError
from .exactnum import QTau
from .groupcore import (FiniteGroup, SignedPerm, b6, cycle_string, is_normal,
                        materialize, minimal_overgroups, signed_perm, to_perm12)

logger = logging.getLogger(__name__)

_t = QTau(0, 1)
_tc = ex.TAU_CONJ

G2_MATRIX = np.array([
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 0, 1, 0],
    [0, 0, -1, 0, 0, 0],
    [0, 0, 0, -1, 0, 0],
    [0, 1, 0, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
])
G3_MATRIX = np.array([
    [0, 0, 0, 0, 0, 1],
    [0, 0, 0, 1, 0, 0],
    [0, -1, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0],
    [1, 0, 0, 0, 0, 0],
    [0, 0, 0, 0, 1, 0],
])

# 2 * T1(g2), 2 * T1(g3)
T1_G2_X2 = ex.qt_from_matrix([
    [-_tc, 1, _t],
    [1, -_t, -_tc],
    [_t, -_tc, -1],
])
T1_G3_X2 = ex.qt_from_matrix([
    [_t, -_tc, 1],
    [_tc, -1, _t],
    [1, -_t, _tc],
])
# sqrt(2(2+tau)) * pi_par
PROJ = ex.qt_from_matrix([
    [_t, 0, -1, 0, _t, 1],
    [1, _t, 0, -_t, -1, 0],
    [0, 1, _t, 1, 0, _t],
])
PROJ_NORM2 = QTau(4, 2)  # 2(2 + tau): squared length of each row of PROJ

CATALOG_ORDERS = (60, 120, 240, 1920, 3840, 3840, 3840, 7680, 11520, 23040, 23040, 23040, 46080)

PUBLISHED_GENERATORS: dict[str, list[str]] = {
    "G1": ["(1,6)(2,5)(3,9)(4,10)(7,12)(8,11)", "(1,5,6)(2,9,4)(7,11,12)(3,10,8)"],
    "G2": ["(1,6)(2,5)(3,9)(4,10)(7,12)(8,11)", "(1,5,6)(2,9,4)(7,11,12)(3,10,8)",
           "(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)"],
    "G3": ["(3,11)(4,12)(5,9)(6,10)", "(2,3,5,4)(6,12)(8,9,11,10)", "(1,2)(3,5)(7,8)(9,11)"],
    "G4": ["(1,3)(2,8)(4,5,10,11)(7,9)", "(1,3,4,7,9,10)(2,5,12,8,11,6)"],
    "G5": ["(1,8,9,7,2,3)(4,6,5)(10,12,11)", "(1,2)(3,5)(7,8)(9,11)", "(4,10)"],
    "G6": ["(3,9)(6,12)", "(3,4,5,6)(9,10,11,12)", "(1,7)(6,12)", "(1,2,9,10,11,7,8,3,4,5)(6,12)"],
    "G7": ["(1,7)(6,12)", "(2,8)(6,12)", "(1,2,9,10,11,7,8,3,4,5)(6,12)", "(3,4,5,12,9,10,11,6)"],
    "G8": ["(1,8,9,7,2,3)(4,6,5)(10,12,11)", "(1,2)(3,5)(7,8)(9,11)", "(3,4,5,6)(9,10,11,12)",
           "(4,10)"],
    "G9": ["(2,8)(6,12)", "(1,7)(2,5,3)(6,12)(8,11,9)", "(1,3,7,9)(2,12,8,6)",
           "(1,3,2,7,9,8)(4,5,12,10,11,6)"],
    "G10": ["(1,2,6,4,3)(7,8,12,10,9)", "(5,11)(6,12)", "(1,2,6,5,3)(7,8,12,11,9)", "(5,12,11,6)"],
    "G11": ["(1,8,9,7,2,3)", "(1,7)(2,3,4)(8,9,10)", "(1,7)(2,3,5)(8,9,11)",
            "(2,6,3,5,4)(8,12,9,11,10)", "(5,11)"],
    "G12": ["(2,8)(6,12)", "(1,2,6,5,3)(7,8,12,11,9)", "(5,6)(11,12)", "(1,2,6,4,3)(7,8,12,10,9)"],
    "G13": ["(1,2)(7,8)", "(1,2,3,4,5,6)(7,8,9,10,11,12)", "(6,12)"],
}
LABELS = tuple(f"G{i}" for i in range(1, 14))


def qt_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product of integer Q(tau) matrices (r, k, 2) @ (k, c, 2)."""
    return ex.qt_mul(a[:, :, None, :], b[None, :, :, :]).sum(axis=1)


def _int_to_qt(m: np.ndarray) -> np.ndarray:
    return np.stack([np.asarray(m, dtype=np.int64), np.zeros_like(m, dtype=np.int64)], axis=-1)


def _qt_identity(n: int, scale=(1, 0)) -> np.ndarray:
    out = np.zeros((n, n, 2), dtype=np.int64)
    for i in range(n):
        out[i, i] = scale
    return out


def qt_matrix_float(m: np.ndarray, scale: float = 1.0) -> np.ndarray:
    return ex.qt_to_float(m) * scale


@dataclass(frozen=True)
class IcosaEmbedding:
    gen_g2: SignedPerm
    gen_g3: SignedPerm
    t1_g2: np.ndarray  # 2 * T1(g2)
    t1_g3: np.ndarray
    proj: np.ndarray  # sqrt(2(2+tau)) * pi_par

    def t1_of(self, g: SignedPerm) -> np.ndarray:
        """``2 * T1(g)`` for any element of the icosahedral group, exactly.

        Uses ``T1(g) = pi Ihat(g) pi^T`` with the scale of ``pi`` restored;
        the division by ``2 + tau`` is exact because ``g`` preserves E_par.
        """
        num = qt_matmul(qt_matmul(self.proj, _int_to_qt(g.to_matrix())), _transpose(self.proj))
        out = np.empty_like(num)
        inv = (QTau(4, 2) / 2).inverse()  # 1 / (2 + tau)
        for idx in np.ndindex(num.shape[:2]):
            q = ex.qt_key(num[idx]) * inv
            if q.a.denominator != 1 or q.b.denominator != 1:
                raise VerificationError(f"{g} does not preserve E_par")
            out[idx] = (int(q.a), int(q.b))
        return out


def _transpose(m: np.ndarray) -> np.ndarray:
    return np.transpose(m, (1, 0, 2))


def _qt_matpow_check(m2: np.ndarray, k: int) -> bool:
    """Is (m2 / 2)**k the identity?  ``m2`` holds twice the matrix."""
    acc = _qt_identity(3)
    for _ in range(k):
        acc = qt_matmul(acc, m2)
    return np.array_equal(acc, _qt_identity(3, (2 ** k, 0)))


@cache
def build_embedding() -> IcosaEmbedding:
    """Load the generators, irrep and projection and verify them exactly."""
    g2 = SignedPerm.from_matrix(G2_MATRIX)
    g3 = SignedPerm.from_matrix(G3_MATRIX)
    emb = IcosaEmbedding(g2, g3, T1_G2_X2, T1_G3_X2, PROJ)
    failures = verify_embedding(emb)
    if failures:
        raise VerificationError("; ".join(failures))
    return emb


def verify_embedding(emb: IcosaEmbedding) -> list[str]:
    failures = []
    g2, g3 = emb.gen_g2, emb.gen_g3
    if (g2.order(), g3.order(), (g2 * g3).order()) != (2, 3, 5):
        failures.append("6D generators violate g2^2 = g3^3 = (g2 g3)^5 = e")
    t23 = qt_matmul(emb.t1_g2, emb.t1_g3)  # 4 * T1(g2 g3)
    ok3 = (_qt_matpow_check(emb.t1_g2, 2) and _qt_matpow_check(emb.t1_g3, 3))
    acc = _qt_identity(3)
    for _ in range(5):
        acc = qt_matmul(acc, t23)
    ok3 = ok3 and np.array_equal(acc, _qt_identity(3, (4 ** 5, 0)))
    if not ok3:
        failures.append("T1 generators violate the icosahedral presentation")
    gram = qt_matmul(emb.proj, _transpose(emb.proj))
    if not np.array_equal(gram, _qt_identity(3, (4, 2))):
        failures.append("proj proj^T != 2(2+tau) I3")
    for name, g, t in (("g2", g2, emb.t1_g2), ("g3", g3, emb.t1_g3)):
        lhs = 2 * qt_matmul(emb.proj, _int_to_qt(g.to_matrix()))
        rhs = qt_matmul(t, emb.proj)
        if not np.array_equal(lhs, rhs):
            failures.append(f"proj Ihat({name}) != T1({name}) proj")
    return failures


def icosahedral_group() -> FiniteGroup:
    emb = build_embedding()
    return materialize(FiniteGroup((emb.gen_g2, emb.gen_g3), name="G1"))


# ---------------------------------------------------------------------------
# Projection


def project(v) -> tuple[QTau, QTau, QTau]:
    """Exact projection of a lattice point, in units of 1/sqrt(2(2+tau))."""
    x = project_many(np.asarray(v, dtype=np.int64)[None, :])[0]
    return tuple(ex.qt_key(c) for c in x)


def project_many(points: np.ndarray) -> np.ndarray:
    """Exact projections of lattice points (n, 6) -> integer Q(tau) array (n, 3, 2)."""
    points = np.asarray(points, dtype=np.int64)
    a = PROJ[..., 0] @ points.T  # (3, n)
    b = PROJ[..., 1] @ points.T
    return np.stack([a.T, b.T], axis=-1)


def radius2_many(points: np.ndarray) -> np.ndarray:
    """Exact squared radii (scale 2(2+tau) removed) as integer (n, 2) pairs."""
    return ex.qt_norm2(project_many(points))


def to_physical(x: np.ndarray) -> np.ndarray:
    """Float coordinates in E_par from scaled exact projections."""
    return ex.qt_to_float(x) / np.sqrt(float(PROJ_NORM2))


def radius_physical(r2: QTau) -> float:
    return float(np.sqrt(float(r2) / float(PROJ_NORM2)))


def projection_float() -> np.ndarray:
    """The 3x6 orthogonal projection matrix as floats."""
    return ex.qt_to_float(PROJ) / np.sqrt(float(PROJ_NORM2))


@cache
def t1_rotations() -> np.ndarray:
    """The 60 rotations of T1 as float 3x3 matrices, ordered like the
    element codes of the icosahedral group."""
    emb = build_embedding()
    grp = icosahedral_group()
    mats = [ex.qt_to_float(emb.t1_of(grp.element(i))) / 2 for i in range(grp.order)]
    return np.array(mats)


@cache
def symmetry_axes() -> dict[int, np.ndarray]:
    """Unit vectors (both signs) along the 5-, 3- and 2-fold axes in E_par."""
    e = projection_float().T  # rows: images of e_1..e_6, the 5-fold directions
    verts = np.vstack([e, -e])
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    d = np.linalg.norm(verts[:, None] - verts[None, :], axis=-1)
    edge = np.min(d[d > 1e-9])
    adj = np.abs(d - edge) < 1e-9
    edges = [(i, j) for i in range(12) for j in range(i + 1, 12) if adj[i, j]]
    faces = [(i, j, k) for i, j in edges for k in range(j + 1, 12) if adj[i, k] and adj[j, k]]
    two = np.array([verts[i] + verts[j] for i, j in edges])
    three = np.array([verts[i] + verts[j] + verts[k] for i, j, k in faces])
    two /= np.linalg.norm(two, axis=1)[:, None]
    three /= np.linalg.norm(three, axis=1)[:, None]
    return {5: verts, 3: three, 2: two}


# ---------------------------------------------------------------------------
# Subgroup catalog


@dataclass
class SubgroupCatalog:
    groups: dict[str, FiniteGroup]
    inclusion_edges: set[tuple[str, str]] = field(default_factory=set)
    source: str = "generators"

    def __getitem__(self, label: str) -> FiniteGroup:
        return self.groups[label]

    def __iter__(self):
        return iter(self.groups.values())

    @property
    def labels(self) -> list[str]:
        return list(self.groups)

    def index(self, label: str) -> int:
        return self.groups[label].order // self.groups["G1"].order

    @property
    def indices(self) -> dict[str, int]:
        return {lab: self.index(lab) for lab in self.groups}

    def contains(self, small: str, big: str) -> bool:
        return self.groups[small].issubgroup(self.groups[big])

    def overgroups_of(self, label: str) -> list[str]:
        return [lab for lab in self.groups if lab != label and self.contains(label, lab)]

    def keys(self) -> dict[str, str]:
        return {lab: g.key for lab, g in self.groups.items()}

    def to_json_dict(self) -> dict:
        out = []
        for lab, g in self.groups.items():
            out.append({
                "label": lab,
                "order": g.order,
                "index": self.index(lab),
                "generators": [cycle_string(to_perm12(p)) for p in g.generators],
                "hash": g.key,
            })
        edges = sorted(self.inclusion_edges, key=lambda e: (_num(e[0]), _num(e[1])))
        return {"groups": out, "inclusion_edges": [list(e) for e in edges], "source": self.source}

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=False)


def _num(label: str) -> int:
    return int(label[1:])


def inclusion_edges(groups: dict[str, FiniteGroup]) -> set[tuple[str, str]]:
    """Transitive reduction of proper containment among the given groups."""
    labs = list(groups)
    below = {(a, b) for a in labs for b in labs
             if a != b and groups[a].order < groups[b].order and groups[a].issubgroup(groups[b])}
    return {(a, b) for a, b in below
            if not any((a, c) in below and (c, b) in below for c in labs)}


def _published_groups() -> dict[str, FiniteGroup]:
    groups = {}
    for lab in LABELS:
        g = materialize(FiniteGroup.from_cycles(PUBLISHED_GENERATORS[lab], name=lab))
        groups[lab] = g
    return groups


def _check_orders(groups: dict[str, FiniteGroup]) -> None:
    orders = tuple(g.order for g in groups.values())
    if orders != CATALOG_ORDERS:
        raise CatalogMismatch(f"orders {orders} differ from the published classification")
    g1 = groups["G1"]
    if g1 != icosahedral_group():
        raise CatalogMismatch("G1 generators do not generate the embedded icosahedral group")
    for lab, g in groups.items():
        if not g1.issubgroup(g):
            raise CatalogMismatch(f"{lab} does not contain G1")


_CATALOG_CACHE: dict[bool, SubgroupCatalog] = {}


def build_catalog(discover: bool = False, threads: int = 1) -> SubgroupCatalog:
    """The 13 subgroups of B6 containing the icosahedral group.

    By default the published generator lists are materialised.  With
    ``discover=True`` every overgroup is found from scratch and labelled by
    matching canonical hashes against the published lists; any disagreement
    raises :class:`CatalogMismatch`.
    """
    if discover in _CATALOG_CACHE:
        return _CATALOG_CACHE[discover]
    published = _published_groups()
    _check_orders(published)
    if not discover:
        cat = SubgroupCatalog(published, inclusion_edges(published), "generators")
    else:
        found = minimal_overgroups(icosahedral_group(), materialize(b6()), threads=threads)
        by_key = {g.key: g for g in found}
        want = {g.key: lab for lab, g in published.items()}
        if set(by_key) != set(want):
            raise CatalogMismatch(
                f"discovered {len(by_key)} overgroups with orders "
                f"{sorted(g.order for g in found)}; published list has 13")
        groups = {}
        for lab in LABELS:
            g = by_key[published[lab].key]
            g.name = lab
            groups[lab] = g
        cat = SubgroupCatalog(groups, inclusion_edges(groups), "discovery")
        if cat.inclusion_edges != inclusion_edges(published):
            raise CatalogMismatch("inclusion graphs differ")
    _CATALOG_CACHE[discover] = cat
    return cat


def verify_h3_structure(catalog: SubgroupCatalog) -> dict:
    """Check the achiral (H3) structure of the catalog; returns a report with
    a ``failures`` list (empty when everything holds)."""
    failures = []
    g1, g2 = catalog["G1"], catalog["G2"]
    minus_one = signed_perm("(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)")
    if not np.array_equal(minus_one.to_matrix(), -np.eye(6, dtype=int)):
        failures.append("(1,7)(2,8)...(6,12) is not -I6")
    if g2.order != 120:
        failures.append(f"|G2| = {g2.order}, expected 120")
    if not (g1.issubgroup(g2) and g2.order == 2 * g1.order):
        failures.append("G1 is not an index-2 subgroup of G2")
    if g2 != g1.join(minus_one):
        failures.append("G2 is not generated by G1 and -I6")
    if not is_normal(g1, g2):
        failures.append("G1 is not normal in G2")
    contains = {}
    for lab in catalog.labels[3:]:
        ok = g2.issubgroup(catalog[lab])
        contains[lab] = ok
        if not ok:
            failures.append(f"G2 is not contained in {lab}")
    index_over_g2 = {lab: catalog[lab].order // g2.order for lab in catalog.labels[1:]}
    for lab, n in index_over_g2.items():
        if 2 * n != catalog.index(lab):
            failures.append(f"[{lab}:G2] != [{lab}:G1]/2")
    return {"g2_order": g2.order, "g2_contains_minus_identity": minus_one in g2,
            "g2_in": contains, "index_over_g2": index_over_g2, "failures": failures}
