"""Serialisation of point arrays, planar orbits and fit tables.

JSON is the canonical form; CSV, OFF and pseudo-PDB are derived views.
All writers iterate in a fixed order so repeated runs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from .exactnum import QTau, decimal_str, exact_str

FLOAT_DIGITS = 12


def _f(x: float) -> float:
    return round(float(x), FLOAT_DIGITS)


def _qt_pair_str(p) -> str:
    return exact_str(QTau(int(p[0]), int(p[1])))


def array_to_dict(array) -> dict:
    layers = []
    for i, layer in enumerate(array.layers, 1):
        xyz = layer.points_float
        layers.append({
            "layer": i,
            "radius2_exact": exact_str(layer.radius2),
            "radius2_decimal": decimal_str(layer.radius2),
            "radius": _f(layer.radius),
            "count": len(layer),
            "coset_indices": [int(c) for c in layer.coset_indices],
            "points": [
                {"xyz": [_f(c) for c in p],
                 "exact": [_qt_pair_str(c) for c in q],
                 "preimage": [int(c) for c in pre],
                 "coset": int(cos)}
                for p, q, pre, cos in zip(xyz, layer.points, layer.preimages, layer.cosets)
            ],
        })
    return {"seed": list(array.seed), "group": array.group_label, "index": array.index,
            "total_points": array.total_points, "scale_note": "exact coordinates carry a factor sqrt(2(2+tau))",
            "layers": layers}


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def array_to_json(array) -> str:
    return dumps(array_to_dict(array))


def array_to_csv(array) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "z", "layer", "radius", "coset"])
    for i, layer in enumerate(array.layers, 1):
        for p, cos in zip(layer.points_float, layer.cosets):
            w.writerow([f"{_f(c):.12g}" for c in p] + [i, f"{_f(layer.radius):.12g}", int(cos)])
    return buf.getvalue()


def points_to_off(points: np.ndarray) -> str:
    """OFF mesh of the convex hull; degenerate sets are written as bare vertices."""
    pts = np.asarray(points, dtype=float)
    faces: list = []
    if len(pts) >= 4:
        try:
            faces = ConvexHull(pts).simplices.tolist()
        except QhullError:
            faces = []
    lines = ["OFF", f"{len(pts)} {len(faces)} 0"]
    lines += [" ".join(f"{_f(c):.12g}" for c in p) for p in pts]
    lines += ["3 " + " ".join(str(i) for i in sorted(f)) for f in sorted(map(sorted, faces))]
    return "\n".join(lines) + "\n"


def array_to_off(array, layer: int) -> str:
    """Hull of one layer, numbered from 1 at the origin."""
    return points_to_off(array.layers[layer - 1].points_float)


def planar_to_dict(layers, label: str, seed) -> dict:
    out = []
    for i, layer in enumerate(layers, 1):
        r2 = layer.radius2
        entry = {"layer": i, "radius": _f(layer.radius), "count": len(layer),
                 "points": [[_f(x), _f(y)] for x, y in layer.coords()]}
        if isinstance(r2, QTau):
            entry["radius2_exact"] = exact_str(r2)
        out.append(entry)
    return {"group": label, "seed": [int(c) for c in seed], "layers": out}


def planar_to_csv(layers) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "layer", "radius"])
    for i, layer in enumerate(layers, 1):
        for x, y in layer.coords():
            w.writerow([f"{_f(x):.12g}", f"{_f(y):.12g}", i, f"{_f(layer.radius):.12g}"])
    return buf.getvalue()


def pseudo_pdb(points_by_layer: list[np.ndarray], resname: str = "PTS") -> str:
    """HETATM records, one residue per layer, for overlay in molecular viewers."""
    lines = []
    serial = 1
    for layer, pts in enumerate(points_by_layer, 1):
        for x, y, z in pts:
            lines.append(
                f"HETATM{serial % 100000:5d}  P   {resname:>3s} X{layer % 10000:4d}    "
                f"{x:8.3f}{y:8.3f}{z:8.3f}  1.00{1.9:6.2f}           P")
            serial += 1
    lines.append("END")
    return "\n".join(lines) + "\n"
