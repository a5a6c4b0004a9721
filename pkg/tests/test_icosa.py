import itertools
import json

import numpy as np
import sympy as sp

import oracles
from nestedshells import exactnum as ex
from nestedshells.exactnum import QTau
from nestedshells.groupcore import signed_perm
from nestedshells.icosa import (PROJ, CATALOG_ORDERS, build_embedding, project, project_many,
                                radius2_many, symmetry_axes, t1_rotations, to_physical,
                                verify_embedding, verify_h3_structure)


def _sym(x: np.ndarray) -> sp.Matrix:
    """Integer Q(tau) array -> sympy matrix."""
    return sp.Matrix(x.shape[0], x.shape[1], lambda i, j: int(x[i, j, 0]) + int(x[i, j, 1]) * oracles.tau)


def test_embedding_verifies():
    emb = build_embedding()
    assert verify_embedding(emb) == []


def test_constants_match_reference():
    emb = build_embedding()
    scale = sp.sqrt(2 * (2 + oracles.tau))
    assert sp.simplify(_sym(PROJ) - oracles.PROJ_SYM * scale) == sp.zeros(3, 6)
    assert sp.simplify(_sym(emb.t1_g2) - 2 * oracles.T1_G2_SYM) == sp.zeros(3, 3)
    assert sp.simplify(_sym(emb.t1_g3) - 2 * oracles.T1_G3_SYM) == sp.zeros(3, 3)
    assert np.array_equal(emb.gen_g2.to_matrix(), np.array(oracles.G2_SYM.tolist(), dtype=int))


def test_relations_in_three_dimensions():
    emb = build_embedding()
    a = oracles.T1_G2_SYM
    b = oracles.T1_G3_SYM
    eye = sp.eye(3)
    assert sp.simplify(a * a - eye) == sp.zeros(3, 3)
    assert sp.simplify(b ** 3 - eye) == sp.zeros(3, 3)
    assert sp.simplify((a * b) ** 5 - eye) == sp.zeros(3, 3)
    # the package's exact matrices agree after halving
    assert np.allclose(ex.qt_to_float(emb.t1_g2) / 2, np.array(a.evalf().tolist(), dtype=float))


def test_project_examples():
    assert project([0] * 6) == (QTau(0), QTau(0), QTau(0))
    assert project([1, 0, 0, 0, 0, 0]) == (ex.TAU, QTau(1), QTau(0))


def test_projection_injective_sample():
    rng = np.random.default_rng(3)
    pts = rng.integers(-2, 3, size=(100_000, 6))
    pts = np.unique(pts, axis=0)
    proj = project_many(pts).reshape(len(pts), -1)
    assert len(np.unique(proj, axis=0)) == len(pts)


def test_projection_matches_float_oracle():
    rng = np.random.default_rng(4)
    pts = rng.integers(-3, 4, size=(50, 6))
    ours = to_physical(project_many(pts))
    ref = np.array([oracles.project_float(p) for p in pts])
    assert np.allclose(ours, ref, atol=1e-12)
    r2 = radius2_many(pts)
    assert np.allclose(ex.qt_to_float(r2) / float(QTau(4, 2)), (ref ** 2).sum(axis=1))


def test_t1_rotations_form_a_group():
    rots = t1_rotations()
    assert rots.shape == (60, 3, 3)
    assert np.allclose(np.einsum("nij,nkj->nik", rots, rots), np.eye(3))
    assert np.allclose(np.linalg.det(rots), 1)
    keys = {tuple(np.round(r, 8).ravel()) for r in rots}
    assert len(keys) == 60
    for a, b in itertools.product(rots[:7], rots[:7]):
        assert tuple(np.round(a @ b, 8).ravel()) in keys


def test_symmetry_axes():
    axes = symmetry_axes()
    assert {k: len(v) for k, v in axes.items()} == {5: 12, 3: 20, 2: 30}
    rots = t1_rotations()
    for fold, dirs in axes.items():
        fixed = [sum(np.allclose(r @ d, d, atol=1e-9) for r in rots) for d in dirs]
        assert set(fixed) == {fold}


def test_catalog_orders_and_indices(catalog):
    assert tuple(g.order for g in catalog) == CATALOG_ORDERS
    assert [catalog.index(lab) for lab in catalog.labels] == [o // 60 for o in CATALOG_ORDERS]


def test_catalog_quoted_inclusions(catalog):
    assert catalog.contains("G1", "G2") and catalog.contains("G2", "G3")
    for i in range(5, 14):
        assert catalog.contains("G4", f"G{i}")
    assert set(catalog.overgroups_of("G6")) == {"G8", "G12", "G13"}


def test_inclusion_edges_reduce_containment(catalog):
    labs = catalog.labels
    brute = {(a, b) for a in labs for b in labs if a != b
             and set(catalog[a].elements.tolist()) <= set(catalog[b].elements.tolist())}
    closure = set(catalog.inclusion_edges)
    while True:
        extra = {(a, d) for a, b in closure for c, d in closure if b == c} - closure
        if not extra:
            break
        closure |= extra
    assert closure == brute


def test_catalog_groups_pass_cheap_filters(catalog):
    for g in catalog:
        assert g.order % 60 == 0
        assert not g.is_abelian()


def test_h3_structure(catalog):
    rep = verify_h3_structure(catalog)
    assert rep["failures"] == []
    assert np.array_equal(signed_perm("(1,7)(2,8)(3,9)(4,10)(5,11)(6,12)").to_matrix(), -np.eye(6))
    assert catalog["G3"].order // catalog["G2"].order == 2


def test_catalog_json(catalog):
    doc = json.loads(catalog.to_json())
    assert [g["order"] for g in doc["groups"]] == list(CATALOG_ORDERS)
    assert ["G6", "G8"] in doc["inclusion_edges"]
