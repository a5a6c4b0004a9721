import csv
import io
import json

import numpy as np
import pytest

from nestedshells.dihedral import a4_case
from nestedshells.exactnum import parse_qtau
from nestedshells.export import (array_to_csv, array_to_json, array_to_off, planar_to_csv,
                                 planar_to_dict, points_to_off, pseudo_pdb)
from nestedshells.icosa import to_physical
from nestedshells.shells import build_point_array

SEED = (0, 0, 1, 1, 2, 1)


@pytest.fixture(scope="module")
def array(catalog):
    return build_point_array(catalog["G4"], SEED, label="G4")


def test_json_round_trip(array):
    doc = json.loads(array_to_json(array))
    assert doc["total_points"] == array.total_points
    assert [layer["count"] for layer in doc["layers"]] == array.sizes()
    for entry, layer in zip(doc["layers"], array.layers):
        assert parse_qtau(entry["radius2_exact"]) == layer.radius2
        exact = np.array([[[int(c) for c in _pair(s)] for s in p["exact"]] for p in entry["points"]])
        assert np.allclose(to_physical(exact), [p["xyz"] for p in entry["points"]], atol=1e-11)


def _pair(text):
    q = parse_qtau(text)
    return q.a, q.b


def test_json_is_deterministic(array, catalog):
    again = build_point_array(catalog["G4"], SEED, label="G4")
    assert array_to_json(array) == array_to_json(again)


def test_csv_matches_json(array):
    rows = list(csv.DictReader(io.StringIO(array_to_csv(array))))
    assert len(rows) == array.total_points
    assert sorted({int(r["layer"]) for r in rows}) == list(range(1, len(array.layers) + 1))
    xyz = np.array([[float(r[c]) for c in "xyz"] for r in rows])
    assert np.allclose(xyz, array.points_float(), atol=1e-11)


def test_off_hull(array):
    text = array_to_off(array, len(array.layers))
    lines = text.splitlines()
    nv, nf, _ = map(int, lines[1].split())
    assert lines[0] == "OFF" and nv == len(array.outer)
    # Euler characteristic of a triangulated sphere
    assert nv - 3 * nf // 2 + nf == 2


def test_off_degenerate():
    text = points_to_off(np.array([[0.0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0]]))
    assert text.splitlines()[1] == "4 0 0"
    assert points_to_off(np.zeros((1, 3))).splitlines()[1] == "1 0 0"


def test_planar_exports():
    layers = a4_case().orbit_layers("K")
    doc = planar_to_dict(layers, "A4:K", (1, 2, 4, 3))
    assert [layer["count"] for layer in doc["layers"]] == [10, 10]
    assert all("radius2_exact" in layer for layer in doc["layers"])
    rows = planar_to_csv(layers).splitlines()
    assert rows[0] == "x,y,layer,radius" and len(rows) == 21


def test_pseudo_pdb_columns():
    text = pseudo_pdb([np.array([[1.0, -2.5, 3.25]]), np.array([[10.0, 0, 0], [0, 10, 0]])])
    lines = text.splitlines()
    assert len(lines) == 4 and lines[-1] == "END"
    first = lines[0]
    assert first.startswith("HETATM")
    assert float(first[30:38]) == 1.0 and float(first[38:46]) == -2.5 and float(first[46:54]) == 3.25
    assert int(lines[2][22:26]) == 2
