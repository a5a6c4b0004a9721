import numpy as np
import pytest

import oracles
from nestedshells.exactnum import qtau_cmp
from nestedshells.icosa import PUBLISHED_GENERATORS, project_many, symmetry_axes
from nestedshells.shells import (axis_clusters, build_library, build_point_array,
                                 closed_under_negation, closed_under_t1, coset_coincidence_criterion,
                                 coset_coincidence_geometric, coset_orbits, fundamental_reps,
                                 orbit_partition, verify_coset_orbits)

PAV = (2, 1, -1, -1, 0, 0)
MS2 = (2, 1, 1, -1, 0, 1)
DEMO_SEED = (0, 0, 1, 1, 2, 1)


@pytest.fixture(scope="module")
def library1():
    return build_library(1)


def test_zero_seed_orbits(catalog):
    orbs = coset_orbits(catalog["G4"], catalog["G1"], [0] * 6)
    assert len(orbs) == 32
    assert all(o.points6.tolist() == [[0] * 6] for o in orbs)


def test_generic_seed_under_g2(catalog):
    v = (1, 2, 3, 4, 5, 6)
    orbs = coset_orbits(catalog["G2"], catalog["G1"], v)
    assert [len(o.points6) for o in orbs] == [60, 60]


def test_pav_orbit_size(catalog):
    orbs = coset_orbits(catalog["G6"], catalog["G1"], PAV)
    union = np.unique(np.vstack([o.points6 for o in orbs]), axis=0)
    assert len(union) == 960


@pytest.mark.parametrize("label,seed", [("G6", PAV), ("G4", MS2), ("G4", DEMO_SEED), ("G13", (1, 0, 0, 0, 0, 0)),
                                        ("G2", (1, 2, 3, 4, 5, 6)), ("G9", (1, 1, 0, 0, -1, 2))])
def test_array_invariants(catalog, label, seed):
    k = catalog[label]
    arr = build_point_array(k, seed, label=label)
    radii = [layer.radius2 for layer in arr.layers]
    assert all(qtau_cmp(a, b) < 0 for a, b in zip(radii, radii[1:]))
    assert arr.total_points == len(k.orbit(seed))
    assert len(np.unique(arr.all_points().reshape(arr.total_points, -1), axis=0)) == arr.total_points
    assert len(arr.layers) <= arr.index
    if catalog.contains("G2", label):
        assert len(arr.layers) <= arr.index // 2
    # float oracle: radii of the projected 6D orbit
    ref = np.linalg.norm(np.array([oracles.project_float(p) for p in k.orbit(seed)]), axis=1)
    assert np.allclose(sorted(set(np.round(ref, 9))), np.round(arr.radii, 9))


@pytest.mark.parametrize("label", ["G1", "G4", "G13"])
def test_origin_array(catalog, label):
    arr = build_point_array(catalog[label], [0] * 6)
    assert len(arr.layers) == 1 and arr.total_points == 1


def test_virus_case_studies(catalog):
    pav = build_point_array(catalog["G6"], PAV)
    assert pav.total_points == 960 and len(pav.layers) == 8
    assert len(pav.layers[-1]) == 60 and len(pav.layers[2]) == 120
    ms2 = build_point_array(catalog["G4"], MS2)
    assert ms2.total_points == 960 and len(ms2.layers) == 9
    assert ms2.radii[-1] / ms2.radii[-2] == pytest.approx(1.064814, abs=1e-5)


def test_pav_layers_coincide_for_supergroups(catalog):
    base = build_point_array(catalog["G6"], PAV).fingerprint
    for lab in ("G8", "G12", "G13"):
        assert build_point_array(catalog[lab], PAV).fingerprint == base


def _brute_criterion(gens_k, v):
    """Both sides of the coset-coincidence statement for H = G1, by brute force."""
    h = oracles.matrix_closure([oracles.matrix_from_cycles12(t) for t in PUBLISHED_GENERATORS["G1"]])
    k = oracles.matrix_closure([oracles.matrix_from_cycles12(t) for t in gens_k])
    hm = oracles.matrices_of(h)
    cosets, seen = [], set()
    for g in sorted(k):
        if g in seen:
            continue
        gm = np.frombuffer(g, dtype=np.int64).reshape(6, 6)
        c = {(x @ gm).tobytes() for x in hm}
        seen |= c
        cosets.append(gm)
    v = np.asarray(v)
    stab = [m for m in oracles.matrices_of(k) if np.array_equal(m @ v, v)]
    geo = [{tuple(np.round(oracles.project_float(x @ g @ v), 9)) for x in hm} for g in cosets]
    n = len(cosets)
    crit = np.zeros((n, n), bool)
    for i in range(n):
        for j in range(n):
            gj_inv = cosets[j].T
            crit[i, j] = any((gj_inv @ x @ cosets[i]).tobytes() in {s.tobytes() for s in stab} for x in hm)
    same = np.array([[geo[i] == geo[j] for j in range(n)] for i in range(n)])
    return same, crit


@pytest.mark.parametrize("v", [(1, 0, 0, 0, 0, 0), (1, 2, 3, 4, 5, 6), (1, 1, 1, 1, 1, 1), (2, 1, -1, -1, 0, 0)])
def test_coset_criterion_g2_brute_force(catalog, v):
    same, crit = _brute_criterion(PUBLISHED_GENERATORS["G2"], v)
    assert np.array_equal(same, crit)
    k, h = catalog["G2"], catalog["G1"]
    assert np.array_equal(coset_coincidence_geometric(k, h, v), same)
    assert np.array_equal(coset_coincidence_criterion(k, h, v), crit)
    # with two cosets the orbits coincide exactly when -v lies in the icosahedral orbit of v
    minus_in = any(np.array_equal(p, -np.asarray(v)) for p in h.orbit(v))
    assert bool(same[0, 1]) == minus_in


def test_coset_orbit_report_fields(catalog):
    rep = verify_coset_orbits(catalog["G2"], catalog["G1"], (1, 2, 0, 0, -1, 3))
    assert rep.ok and rep.normal and rep.equal_cardinality
    rep = verify_coset_orbits(catalog["G4"], catalog["G1"], [0] * 6)
    assert rep.ok and rep.n_cosets == 32


def test_layers_closed_on_library(catalog, library1):
    for arr in library1.arrays:
        for layer in arr.layers:
            assert closed_under_t1(layer.points)
            assert closed_under_negation(layer.points)


def test_fundamental_reps_small(catalog):
    g4 = catalog["G4"]
    reps = fundamental_reps(g4, 1)
    assert (0, 0, 0, 0, 0, 0) in reps
    pts, labels = orbit_partition(g4, 1)
    assert len(reps) == len(np.unique(labels))
    # every cube point lies in exactly one representative's orbit
    owner = {}
    for r in reps:
        for p in g4.orbit(r):
            key = tuple(p)
            assert key not in owner
            owner[key] = r
    assert len(owner) == 3 ** 6


def test_representatives_maximise_positive_count(catalog):
    g4 = catalog["G4"]
    for r in fundamental_reps(g4, 2):
        orb = g4.orbit(r)
        best = (orb > 0).sum(axis=1).max()
        assert sum(c > 0 for c in r) == best
        cands = [tuple(p) for p in orb if (p > 0).sum() == best]
        assert r == max(cands)


def test_fundamental_counts_match_burnside(catalog):
    mats = oracles.matrices_of(oracles.matrix_closure(
        [oracles.matrix_from_cycles12(t) for t in PUBLISHED_GENERATORS["G4"]]))
    for n in (1, 2, 3):
        assert len(fundamental_reps(catalog["G4"], n)) == oracles.burnside_cube_orbits(mats, n)


def test_partition_sample_n2(catalog):
    g4 = catalog["G4"]
    reps = fundamental_reps(g4, 2)
    rep_orbits = {}
    for r in reps:
        for p in g4.orbit(r):
            rep_orbits[tuple(p)] = r
    rng = np.random.default_rng(11)
    for p in rng.integers(-2, 3, size=(500, 6)):
        assert tuple(p) in rep_orbits
    assert len(rep_orbits) == 5 ** 6


def test_library_small(library1):
    assert len(library1.seeds) == 9
    assert library1.n_pairs == 9 * 10
    prints = [a.fingerprint for a in library1.arrays]
    assert len(set(prints)) == len(prints)
    origin = [a for a in library1.arrays if a.total_points == 1]
    assert len(origin) == 1
    assert len(library1.aliases(library1.arrays.index(origin[0]))) == 10


@pytest.mark.slow
def test_library_n2_layer_bound(catalog):
    lib = build_library(2)
    assert len(lib.seeds) == 47 and lib.n_pairs <= 470
    for arr in lib.arrays:
        assert len(arr.layers) <= arr.index // 2


def test_axis_clusters_on_icosahedron(catalog):
    verts = project_many(catalog["G1"].orbit([1, 0, 0, 0, 0, 0]))
    assert axis_clusters(verts) == [(5, 1)] * 12
    centres = np.vstack([symmetry_axes()[5], symmetry_axes()[3]])
    arr = build_point_array(catalog["G4"], MS2)
    for layer in arr.layers:
        sizes = sorted(n for _, n in axis_clusters(layer.points))
        assert sizes == oracles.angular_clusters(layer.points_float, centres)
