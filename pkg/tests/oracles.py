"""Independent reference computations for the test-suite.

Nothing here imports the package's arithmetic: group elements are explicit
integer matrices, closures are breadth-first searches over matrix bytes, exact
identities go through sympy, and orbit counts through Burnside's lemma.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np
import sympy as sp

TAU_F = (1 + math.sqrt(5)) / 2


def signed_matrix(perm, signs) -> np.ndarray:
    """Column j has the entry ``signs[j]`` in row ``perm[j]``."""
    m = np.zeros((6, 6), dtype=np.int64)
    for j in range(6):
        m[perm[j], j] = signs[j]
    return m


def matrix_from_cycles12(text: str) -> np.ndarray:
    """Read a permutation of 1..12 in cycle notation and convert it with the
    rule ``k -> pi(k) + 6 a_k`` directly to a signed 6x6 matrix."""
    img = list(range(13))
    for cyc in text.replace(" ", "").strip("()").split(")("):
        if not cyc:
            continue
        pts = [int(x) for x in cyc.split(",")]
        for a, b in zip(pts, pts[1:] + pts[:1]):
            img[a] = b
    m = np.zeros((6, 6), dtype=np.int64)
    for k in range(1, 7):
        t = img[k]
        row, neg = (t - 1, False) if t <= 6 else (t - 7, True)
        m[row, k - 1] = -1 if neg else 1
        # the partner point must follow with the opposite sign
        partner = img[k + 6]
        assert (partner - 1) % 6 == row and (partner > 6) != neg, "not in the image"
    return m


def matrix_closure(gens) -> set[bytes]:
    gens = [np.asarray(g, dtype=np.int64) for g in gens]
    ident = np.eye(gens[0].shape[0], dtype=np.int64)
    seen = {ident.tobytes()}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = g @ x
                key = y.tobytes()
                if key not in seen:
                    seen.add(key)
                    nxt.append(y)
        frontier = nxt
    return seen


def matrices_of(keys: set[bytes], n: int = 6) -> list[np.ndarray]:
    return [np.frombuffer(k, dtype=np.int64).reshape(n, n) for k in keys]


def burnside_cube_orbits(mats, n: int) -> int:
    """Number of orbits of a signed-permutation group on ``[-n, n]^6``."""
    total = 0
    for m in mats:
        perm = [int(np.flatnonzero(m[:, j])[0]) for j in range(6)]
        signs = [int(m[perm[j], j]) for j in range(6)]
        seen = [False] * 6
        fixed = 1
        for i in range(6):
            if seen[i]:
                continue
            j, s = i, 1
            while not seen[j]:
                seen[j] = True
                s *= signs[j]
                j = perm[j]
            fixed *= (2 * n + 1) if s == 1 else 1
        total += fixed
    q = Fraction(total, len(mats))
    assert q.denominator == 1
    return int(q)


# ---------------------------------------------------------------------------
# Icosahedral constants typed from their defining formulas, in sympy

tau = (1 + sp.sqrt(5)) / 2
tau_c = 1 - tau

G2_SYM = sp.Matrix([
    [0, 0, 0, 0, 0, 1], [0, 0, 0, 0, 1, 0], [0, 0, -1, 0, 0, 0],
    [0, 0, 0, -1, 0, 0], [0, 1, 0, 0, 0, 0], [1, 0, 0, 0, 0, 0]])
G3_SYM = sp.Matrix([
    [0, 0, 0, 0, 0, 1], [0, 0, 0, 1, 0, 0], [0, -1, 0, 0, 0, 0],
    [0, 0, -1, 0, 0, 0], [1, 0, 0, 0, 0, 0], [0, 0, 0, 0, 1, 0]])
T1_G2_SYM = sp.Rational(1, 2) * sp.Matrix([
    [-tau_c, 1, tau], [1, -tau, -tau_c], [tau, -tau_c, -1]])
T1_G3_SYM = sp.Rational(1, 2) * sp.Matrix([
    [tau, -tau_c, 1], [tau_c, -1, tau], [1, -tau, tau_c]])
PROJ_SYM = sp.Matrix([
    [tau, 0, -1, 0, tau, 1], [1, tau, 0, -tau, -1, 0], [0, 1, tau, 1, 0, tau]]) / sp.sqrt(2 * (2 + tau))


def proj_float() -> np.ndarray:
    return np.array(PROJ_SYM.evalf(30).tolist(), dtype=float)


def project_float(v) -> np.ndarray:
    return proj_float() @ np.asarray(v, dtype=float)


def is_zero(expr) -> bool:
    return sp.simplify(sp.nsimplify(expr)) == 0


# ---------------------------------------------------------------------------
# Planar holomorph


def hol_perm(n, m, l):
    return tuple((m * j + l) % n for j in range(n))


def perm_compose(a, b):
    return tuple(a[b[j]] for j in range(len(a)))


def s5_in_root_basis() -> list[np.ndarray]:
    """Permutations of e_1..e_5 acting on the simple roots, columns = images."""
    def root(a, b):
        v = np.zeros(5)
        v[a] += 1
        v[b] -= 1
        return v

    basis = np.array([root(k, k + 1) for k in range(4)]).T  # 5x4
    mats = []
    for s in itertools.permutations(range(5)):
        cols = [np.linalg.lstsq(basis, root(s[k], s[k + 1]), rcond=None)[0] for k in range(4)]
        mats.append(np.rint(np.array(cols).T).astype(np.int64))
    return mats


def angular_clusters(points: np.ndarray, centres: np.ndarray) -> list[int]:
    """Cluster sizes by nearest centre direction, explicit loop."""
    counts = {}
    for p in points:
        u = p / np.linalg.norm(p)
        best, arg = -2.0, -1
        for i, c in enumerate(centres):
            d = float(np.dot(u, c))
            if d > best:
                best, arg = d, i
        counts[arg] = counts.get(arg, 0) + 1
    return sorted(counts.values())
