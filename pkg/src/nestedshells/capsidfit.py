"""Fitting projected point arrays to icosahedral virus capsids.

Protocol: read C-alpha (and genome) atoms from a PDB file, find the radially
outermost clusters of C-alpha atoms, scale each array so its outer layer sits
on those clusters, keep arrays whose every outer point lies within ``r_tilde``
of a cluster centre, and rank the kept arrays by how close their inner layers
come to material.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .errors import EmptyModel, NoSurface, ParseError
from .icosa import build_embedding, t1_rotations
from .exactnum import qt_to_float

logger = logging.getLogger(__name__)

RADIAL_FRACTION = 0.95
LINKAGE_CUTOFF = 8.0  # angstrom
R_TILDE = 10.0  # angstrom
ATOM_SPHERE_RADIUS = 1.9  # angstrom, visualisation metadata only

NUCLEOTIDES = frozenset({"A", "C", "G", "U", "T", "DA", "DC", "DG", "DT", "DU",
                         "ADE", "CYT", "GUA", "URA", "THY", "URI"})


@dataclass(frozen=True)
class Cluster:
    centroid: np.ndarray
    size: int

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.centroid))


@dataclass
class CapsidModel:
    coords: np.ndarray  # (n, 3) all retained atoms, angstrom
    names: np.ndarray
    chains: np.ndarray
    resnames: np.ndarray
    source: str = ""
    biomt: list[np.ndarray] = field(default_factory=list)  # 3x4 operators as read
    clusters: list[Cluster] = field(default_factory=list)

    @cached_property
    def calpha(self) -> np.ndarray:
        sel = (self.names == "CA") & ~np.isin(self.resnames, list(NUCLEOTIDES))
        return self.coords[sel]

    @cached_property
    def genome(self) -> np.ndarray:
        nuc = np.isin(self.resnames, list(NUCLEOTIDES))
        phos = nuc & (self.names == "P")
        return self.coords[phos] if phos.any() else self.coords[nuc]

    @property
    def max_radius(self) -> float:
        return float(np.linalg.norm(self.calpha, axis=1).max())

    @cached_property
    def calpha_tree(self) -> cKDTree:
        return cKDTree(self.calpha)

    @cached_property
    def genome_tree(self) -> cKDTree | None:
        return cKDTree(self.genome) if len(self.genome) else None

    @cached_property
    def material_tree(self) -> cKDTree:
        return cKDTree(np.vstack([self.calpha, self.genome]) if len(self.genome) else self.calpha)

    def transformed(self, rot: np.ndarray, shift=None) -> CapsidModel:
        """Copy with coordinates mapped by ``x -> rot^T (x - shift)``."""
        shift = np.zeros(3) if shift is None else np.asarray(shift, float)
        return CapsidModel((self.coords - shift) @ rot, self.names, self.chains, self.resnames,
                           self.source, self.biomt)


# ---------------------------------------------------------------------------
# PDB input


def _parse_atom(line: str, lineno: int):
    if len(line) < 54:
        raise ParseError(f"line {lineno}: coordinate record too short")
    try:
        x, y, z = float(line[30:38]), float(line[38:46]), float(line[46:54])
    except ValueError as exc:
        raise ParseError(f"line {lineno}: bad coordinates") from exc
    return (line[12:16].strip(), line[16], line[17:20].strip(), line[21], (x, y, z))


def _parse_biomt(lines: list[tuple[int, str]]) -> list[np.ndarray]:
    rows: dict[int, dict[int, list[float]]] = {}
    for lineno, line in lines:
        parts = line.split()
        try:
            row = int(parts[2][-1])
            op = int(parts[3])
            vals = [float(p) for p in parts[4:8]]
        except (IndexError, ValueError) as exc:
            raise ParseError(f"line {lineno}: malformed BIOMT record") from exc
        rows.setdefault(op, {})[row] = vals
    ops = []
    for op in sorted(rows):
        r = rows[op]
        if set(r) != {1, 2, 3}:
            raise ParseError(f"BIOMT operator {op} is incomplete")
        ops.append(np.array([r[1], r[2], r[3]]))
    return ops


def read_pdb(path) -> CapsidModel:
    """Atoms from fixed-column ATOM/HETATM records of the first model.

    Alternate locations other than blank or 'A' are dropped.
    """
    recs = []
    biomt = []
    with open(path, encoding="latin-1") as fh:
        for lineno, line in enumerate(fh, 1):
            tag = line[:6]
            if tag in ("ATOM  ", "HETATM"):
                name, alt, resn, chain, xyz = _parse_atom(line.rstrip("\n"), lineno)
                if alt in (" ", "A"):
                    recs.append((name, resn, chain, xyz))
            elif tag == "REMARK" and line[6:10].strip() == "350" and "BIOMT" in line[10:20]:
                biomt.append((lineno, line))
            elif tag == "ENDMDL":
                break
    if not recs:
        return CapsidModel(np.zeros((0, 3)), np.array([], str), np.array([], str),
                           np.array([], str), str(path), _parse_biomt(biomt))
    names, resn, chains, xyz = zip(*recs)
    return CapsidModel(np.array(xyz, float), np.array(names), np.array(chains), np.array(resn),
                       str(path), _parse_biomt(biomt))


def _apply_ops(coords: np.ndarray, ops: list[np.ndarray]) -> np.ndarray:
    return np.vstack([coords @ op[:, :3].T + op[:, 3] for op in ops])


def expand(model: CapsidModel, ops: list[np.ndarray]) -> CapsidModel:
    k = len(ops)
    return CapsidModel(_apply_ops(model.coords, ops), np.tile(model.names, k),
                       np.tile(model.chains, k), np.tile(model.resnames, k), model.source, model.biomt)


def ingest_pdb(path, expand_symmetry: bool = False, align: bool = True) -> CapsidModel:
    """Read a capsid and bring it into the frame of the point arrays.

    With ``expand_symmetry`` the asymmetric unit is expanded by the BIOMT
    operators when the file has a full icosahedral set, else by the 60
    icosahedral rotations of the arrays' own frame.  With ``align`` a file
    carrying 60 BIOMT operators is rotated so its symmetry axes coincide with
    those of the arrays.
    """
    model = read_pdb(path)
    if not len(model.calpha):
        raise EmptyModel(f"{path}: no C-alpha atoms")
    ops = model.biomt
    has_ico = len(ops) == 60
    if expand_symmetry:
        if has_ico:
            model = expand(model, ops)
        else:
            rots = t1_rotations()
            model = expand(model, [np.hstack([r, np.zeros((3, 1))]) for r in rots])
    if align and has_ico:
        rot, shift = frame_from_operators(ops)
        model = model.transformed(rot, shift)
    return model


# ---------------------------------------------------------------------------
# Frame alignment


def _rotation_order(r: np.ndarray, limit: int = 12, tol: float = 1e-3) -> int:
    x = r
    for k in range(1, limit + 1):
        if np.allclose(x, np.eye(3), atol=tol):
            return k
        x = x @ r
    return 0


def _axis(r: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eig(r)
    a = np.real(v[:, np.argmin(np.abs(w - 1))])
    return a / np.linalg.norm(a)


def _kabsch(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Rotation ``R`` minimising ``|R src_i - dst_i|``."""
    u, _, vt = np.linalg.svd(dst.T @ src)
    d = np.sign(np.linalg.det(u @ vt))
    return u @ np.diag([1, 1, d]) @ vt


def frame_from_operators(ops: list[np.ndarray], tol: float = 1e-3) -> tuple[np.ndarray, np.ndarray]:
    """Rotation ``R`` and centre ``c`` with ``op = R g R^T`` about ``c`` for the
    icosahedral generators ``g``.  Coordinates map to the array frame by
    ``x -> R^T (x - c)``."""
    rots = [op[:, :3] for op in ops]
    # common fixed point of all operators: least squares of (I - R) c = t
    a = np.vstack([np.eye(3) - op[:, :3] for op in ops])
    b = np.concatenate([op[:, 3] for op in ops])
    centre = np.linalg.lstsq(a, b, rcond=None)[0]
    emb = build_embedding()
    g2 = qt_to_float(emb.t1_g2) / 2
    g3 = qt_to_float(emb.t1_g3) / 2
    ax2, ax3 = _axis(g2), _axis(g3)
    twos = [r for r in rots if _rotation_order(r) == 2]
    threes = [r for r in rots if _rotation_order(r) == 3]
    for a2 in twos:
        for a3 in threes:
            if _rotation_order(a2 @ a3) != 5:
                continue
            for s2 in (1, -1):
                for s3 in (1, -1):
                    src = np.array([ax2, ax3, np.cross(ax2, ax3)])
                    d2, d3 = s2 * _axis(a2), s3 * _axis(a3)
                    dst = np.array([d2, d3, np.cross(d2, d3)])
                    if abs(np.dot(ax2, ax3) - np.dot(d2, d3)) > tol:
                        continue
                    r = _kabsch(src, dst)
                    if np.allclose(r @ g2 @ r.T, a2, atol=tol) and np.allclose(r @ g3 @ r.T, a3, atol=tol):
                        return r, centre
    raise ParseError("BIOMT operators do not form an icosahedral group")


# ---------------------------------------------------------------------------
# Surface clusters


def single_linkage(points: np.ndarray, cutoff: float) -> np.ndarray:
    """Cluster labels: points closer than ``cutoff`` share a cluster, transitively."""
    if len(points) == 0:
        return np.zeros(0, dtype=int)
    pairs = cKDTree(points).query_pairs(cutoff, output_type="ndarray")
    graph = coo_matrix((np.ones(len(pairs)), (pairs[:, 0], pairs[:, 1])), shape=(len(points),) * 2)
    _, labels = connected_components(graph, directed=False)
    return labels


def surface_clusters(model: CapsidModel, radial_fraction: float = RADIAL_FRACTION,
                     linkage_cutoff: float = LINKAGE_CUTOFF) -> list[Cluster]:
    """Group the outermost C-alpha atoms into clusters and store them on the model."""
    ca = model.calpha
    if not len(ca):
        raise EmptyModel("model has no C-alpha atoms")
    r = np.linalg.norm(ca, axis=1)
    outer = ca[r >= radial_fraction * r.max()]
    if not len(outer):
        raise NoSurface("no atoms above the radial threshold")
    labels = single_linkage(outer, linkage_cutoff)
    clusters = []
    for lab in np.unique(labels):
        members = outer[labels == lab]
        clusters.append(Cluster(members.mean(axis=0), len(members)))
    clusters.sort(key=lambda c: (-c.size, tuple(np.round(c.centroid, 6))))
    model.clusters = clusters
    return clusters


# ---------------------------------------------------------------------------
# Fitting


@dataclass
class LayerStats:
    radius: float  # angstrom, after scaling
    count: int
    mean_ca: float
    min_ca: float
    mean_genome: float | None


@dataclass
class FitResult:
    array_id: tuple
    scale: float
    outer_match: float
    layers: list[LayerStats]
    fingerprint: str = ""
    aliases: list[tuple] = field(default_factory=list)

    @property
    def selected(self) -> bool:
        return self.outer_match == 1.0

    @property
    def score(self) -> float:
        """Mean over inner layers of the mean distance to the nearest material atom."""
        inner = self.layers[:-1]
        vals = [min(s.mean_ca, s.mean_genome) if s.mean_genome is not None else s.mean_ca for s in inner]
        return float(np.mean(vals)) if vals else math.inf

    def to_dict(self) -> dict:
        seed, group = self.array_id
        return {"seed": list(seed), "group": group, "scale": round(self.scale, 9),
                "outer_match": round(self.outer_match, 9), "selected": self.selected,
                "score": None if math.isinf(self.score) else round(self.score, 6),
                "aliases": [[list(s), g] for s, g in self.aliases],
                "layers": [{"radius": round(s.radius, 6), "count": s.count, "mean_ca": round(s.mean_ca, 6),
                            "min_ca": round(s.min_ca, 6),
                            "mean_genome": None if s.mean_genome is None else round(s.mean_genome, 6)}
                           for s in self.layers]}


def fit_array(array, model: CapsidModel, r_tilde: float = R_TILDE, scale: float | None = None,
              array_id=None) -> FitResult:
    if not model.clusters:
        surface_clusters(model)
    centres = np.array([c.centroid for c in model.clusters])
    r_max = array.outer.radius
    if scale is None:
        scale = max(c.radius for c in model.clusters) / r_max if r_max > 0 else 1.0
    outer = array.outer.points_float * scale
    d, _ = cKDTree(centres).query(outer)
    match = float(np.mean(d <= r_tilde))
    stats = []
    for layer in array.layers:
        pts = layer.points_float * scale
        dca, _ = model.calpha_tree.query(pts)
        dg = model.genome_tree.query(pts)[0].mean() if model.genome_tree is not None else None
        stats.append(LayerStats(layer.radius * scale, len(layer), float(dca.mean()), float(dca.min()),
                                None if dg is None else float(dg)))
    ident = array_id or (array.seed, array.group_label)
    return FitResult(ident, float(scale), match, stats, array.fingerprint)


def rank_library(library, model: CapsidModel, r_tilde: float = R_TILDE,
                 scale: float | None = None) -> list[FitResult]:
    """Fit every distinct array; selected ones first, by ascending score."""
    if library is None or not library.arrays:
        return []
    if not model.clusters:
        surface_clusters(model)
    results = []
    for i, arr in enumerate(library.arrays):
        if arr.outer.radius == 0:
            continue
        res = fit_array(arr, model, r_tilde, scale)
        res.aliases = library.aliases(i)
        results.append(res)
    results.sort(key=lambda r: (not r.selected, r.score if r.selected else -r.outer_match,
                                r.array_id[1], r.array_id[0]))
    return results


def find_result(results: list[FitResult], array) -> FitResult | None:
    """The result for the same projected point set as ``array``, if any."""
    for r in results:
        if r.fingerprint == array.fingerprint:
            return r
    return None


# ---------------------------------------------------------------------------
# Synthetic capsids for exercising the pipeline without deposited structures


def synthetic_capsid(array, outer_radius: float = 160.0, atoms_per_site: int = 6,
                     spread: float = 2.0, inner_layers=True, genome_layer: int | None = None,
                     seed: int = 0) -> CapsidModel:
    """A toy capsid: small C-alpha blobs on the scaled array points.

    Every site of a layer carries the same translated blob, so each blob
    centroid sits exactly on its array point.
    """
    rng = np.random.default_rng(seed)
    scale = outer_radius / array.outer.radius
    layers = array.layers if inner_layers else [array.outer]
    ca, gen = [], []
    for i, layer in enumerate(layers):
        pts = layer.points_float * scale
        blob = rng.normal(scale=spread, size=(atoms_per_site, 3))
        blob -= blob.mean(axis=0)
        target = gen if genome_layer is not None and i == genome_layer else ca
        for p in pts:
            target.append(p + blob)
    ca = np.vstack(ca)
    names = ["CA"] * len(ca)
    resn = ["ALA"] * len(ca)
    coords = ca
    if gen:
        g = np.vstack(gen)
        coords = np.vstack([ca, g])
        names += ["P"] * len(g)
        resn += ["U"] * len(g)
    return CapsidModel(coords, np.array(names), np.array(["A"] * len(coords)), np.array(resn), "synthetic")


def write_pdb(model: CapsidModel, path, biomt: list[np.ndarray] | None = None) -> None:
    lines = []
    for op_i, op in enumerate(biomt or [], 1):
        for row in range(3):
            r = op[row]
            lines.append(f"REMARK 350   BIOMT{row + 1} {op_i:3d}{r[0]:10.6f}{r[1]:10.6f}{r[2]:10.6f}{r[3]:15.5f}")
    for i, (xyz, name, chain, resn) in enumerate(zip(model.coords, model.names, model.chains, model.resnames), 1):
        rec = "ATOM  "
        nm = f" {name:<3s}" if len(name) < 4 else name
        lines.append(f"{rec}{i % 100000:5d} {nm:4s} {resn:>3s} {chain:1s}{(i // 10) % 10000:4d}    "
                     f"{xyz[0]:8.3f}{xyz[1]:8.3f}{xyz[2]:8.3f}  1.00  0.00")
    lines.append("END")
    Path(path).write_text("\n".join(lines) + "\n")
