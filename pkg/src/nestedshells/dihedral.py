"""Planar point sets with n-fold symmetry from the Minkowski embedding of
Z[xi_n], and the exact five-fold case realised on the A4 root lattice."""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from functools import cache

import numpy as np

from .errors import NotCoprime, VerificationError
from .exactnum import TAU, CycInt, QTau, QTauExt, cyc5_abs2, cyc_apply_t, euler_phi, units_mod
from .groupcore import closure, overgroups

RADIUS_RTOL = 1e-9


# ---------------------------------------------------------------------------
# The holomorph of Z_n


@dataclass(frozen=True, order=True)
class HolElement:
    """The affine map ``j -> m*j + l`` on Z_n."""

    n: int
    m: int
    l: int

    def __post_init__(self):
        if math.gcd(self.m, self.n) != 1:
            raise NotCoprime(f"gcd({self.m}, {self.n}) != 1")
        object.__setattr__(self, "m", self.m % self.n)
        object.__setattr__(self, "l", self.l % self.n)

    def __mul__(self, other: HolElement) -> HolElement:
        return HolElement(self.n, self.m * other.m, self.m * other.l + self.l)

    def inverse(self) -> HolElement:
        mi = pow(self.m, -1, self.n)
        return HolElement(self.n, mi, -mi * self.l)

    def __call__(self, j: int) -> int:
        return (self.m * j + self.l) % self.n

    def as_permutation(self) -> tuple[int, ...]:
        return tuple(self(j) for j in range(self.n))

    def apply(self, z: CycInt) -> CycInt:
        return cyc_apply_t(self.m, self.l, z)

    def is_dihedral(self) -> bool:
        return self.m in (1, self.n - 1)


def hol_group(n: int) -> list[HolElement]:
    if n < 3:
        raise ValueError("n must be at least 3")
    return [HolElement(n, m, l) for m in units_mod(n) for l in range(n)]


def dihedral_subgroup(n: int) -> list[HolElement]:
    return [g for g in hol_group(n) if g.is_dihedral()]


def rotation(n: int, s: int = 1) -> HolElement:
    return HolElement(n, 1, s)


def reflection(n: int) -> HolElement:
    return HolElement(n, -1, 0)


@dataclass
class HolReport:
    n: int
    order: int
    dihedral_order: int
    normal: bool
    conjugation_formula: bool
    theta_isomorphism: bool
    proper: bool

    @property
    def ok(self) -> bool:
        return (self.order == euler_phi(self.n) * self.n and self.dihedral_order == 2 * self.n
                and self.normal and self.conjugation_formula and self.theta_isomorphism
                and self.proper == (self.n == 5 or self.n >= 7))


def verify_hol(n: int) -> HolReport:
    """Exhaustive checks of the holomorph: order, closure of the group law
    against composition of affine maps, and normality of the dihedral part."""
    grp = hol_group(n)
    dih = set(dihedral_subgroup(n))
    theta = all((a * b).as_permutation() == tuple(a(b(j)) for j in range(n))
                for a in grp for b in grp)
    # closure of the law and inverses
    gset = set(grp)
    theta = theta and all(a * b in gset for a in grp for b in grp)
    theta = theta and all((a * a.inverse()).as_permutation() == tuple(range(n)) for a in grp)
    normal = all(s * d * s.inverse() in dih for s in grp for d in dih)
    formula = all(
        s * (rotation(n, k) * reflection(n)) * s.inverse()
        == rotation(n, s.m * k + 2 * s.l) * reflection(n)
        for s in grp for k in range(n))
    return HolReport(n, len(grp), len(dih), normal, formula, theta, len(grp) > 2 * n)


# ---------------------------------------------------------------------------
# Minkowski embedding and planar orbits


@dataclass(frozen=True)
class MinkowskiLattice:
    n: int

    @property
    def dim(self) -> int:
        return euler_phi(self.n)

    @property
    def galois_reps(self) -> tuple[int, ...]:
        return tuple(y for y in range(1, (self.n + 1) // 2) if math.gcd(y, self.n) == 1)

    def embed(self, z: CycInt) -> np.ndarray:
        """Complex coordinates ``(sigma_y(z))`` for the chosen exponents ``y``."""
        return np.array([complex(cyc_apply_t(y, 0, z)) for y in self.galois_reps])

    def embed_real(self, z: CycInt) -> np.ndarray:
        c = self.embed(z)
        return np.column_stack([c.real, c.imag]).ravel()


@dataclass
class PlanarLayer:
    radius2: QTau | float  # exact for n = 5
    points: list[CycInt]

    @property
    def radius(self) -> float:
        return math.sqrt(float(self.radius2))

    def coords(self) -> np.ndarray:
        return np.array([[complex(z).real, complex(z).imag] for z in self.points])

    def __len__(self):
        return len(self.points)


@dataclass
class PlanarOrbit:
    n: int
    seed: CycInt
    layers: list[PlanarLayer]
    exact: bool

    @property
    def total_points(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def sizes(self) -> list[int]:
        return [len(layer) for layer in self.layers]


def _group_float_radii(items: list[tuple[float, CycInt]], rtol: float) -> list[PlanarLayer]:
    items.sort(key=lambda t: t[0])
    layers: list[PlanarLayer] = []
    for r2, z in items:
        if layers and abs(r2 - layers[-1].radius2) <= rtol * max(1.0, abs(r2)):
            layers[-1].points.append(z)
        else:
            layers.append(PlanarLayer(r2, [z]))
    return layers


def lift_and_orbit(n: int, subgroup: list[HolElement], z: CycInt, rtol: float = RADIUS_RTOL) -> PlanarOrbit:
    """Orbit of ``z`` under the affine Galois maps, projected to the first
    Minkowski coordinate and grouped into radial layers."""
    if z.n != n:
        raise ValueError("seed lives in a different cyclotomic ring")
    orbit = list(dict.fromkeys(g.apply(z) for g in subgroup))
    if n == 5:
        by_r: dict[QTau, list[CycInt]] = {}
        for w in orbit:
            by_r.setdefault(cyc5_abs2(w), []).append(w)
        layers = [PlanarLayer(r, by_r[r]) for r in sorted(by_r)]
        return PlanarOrbit(n, z, layers, True)
    items = [(abs(complex(w)) ** 2, w) for w in orbit]
    return PlanarOrbit(n, z, _group_float_radii(items, rtol), False)


def random_cycint(n: int, rng: random.Random, bound: int = 3) -> CycInt:
    return CycInt(n, [rng.randint(-bound, bound) for _ in range(n)])


# ---------------------------------------------------------------------------
# Five-fold case on the A4 root lattice (coordinates in the simple-root basis)


Matrix = tuple[tuple[int, ...], ...]

H_GENERATORS: tuple[Matrix, Matrix] = (
    ((1, 0, 0, 0), (1, 0, 0, -1), (1, 0, -1, 0), (1, -1, 0, 0)),
    ((-1, 1, 0, 0), (0, 1, 0, 0), (0, 1, 0, -1), (0, 1, -1, 0)),
)

K_GENERATORS: tuple[Matrix, Matrix, Matrix] = (
    ((0, -1, 1, 0), (-1, 0, 1, 0), (0, 0, 1, 0), (0, 0, 1, -1)),
    ((0, 0, 0, -1), (1, 0, 0, -1), (0, 1, 0, -1), (0, 0, 1, -1)),
    ((1, 0, 0, 0), (1, 0, -1, 1), (0, 1, -1, 1), (0, 1, -1, 0)),
)

IDENTITY4: Matrix = tuple(tuple(int(i == j) for j in range(4)) for i in range(4))
A4_SEED = (1, 2, 4, 3)

_S = QTau(3, -1)  # the projection carries sqrt(3 - tau)
_TAU_CONJ = QTau(1, -1)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)) for i in range(4))


def matvec(a: Matrix, v) -> tuple[int, ...]:
    return tuple(sum(a[i][k] * v[k] for k in range(4)) for i in range(4))


def root_coords(a: int, b: int) -> tuple[int, ...]:
    """``e_a - e_b`` (1-based) in the simple-root basis ``alpha_k = e_k - e_{k+1}``."""
    out = [0] * 4
    lo, hi, sgn = (a, b, 1) if a < b else (b, a, -1)
    for k in range(lo, hi):
        out[k - 1] = sgn
    return tuple(out)


def permutation_matrix(sigma: tuple[int, ...]) -> Matrix:
    """Action of a permutation of ``e_1..e_5`` (0-based images) on root coordinates."""
    cols = [root_coords(sigma[j] + 1, sigma[j + 1] + 1) for j in range(4)]
    return tuple(tuple(cols[j][i] for j in range(4)) for i in range(4))


def _ext(p=0, q=0) -> QTauExt:
    return QTauExt(p, q, _S)


@cache
def projection_ext() -> list[list[QTauExt]]:
    """The 2x4 projection with the prefactor 1/sqrt(2(3 - tau)) removed."""
    return [[_ext(0, -_TAU_CONJ), _ext(0, 1), _ext(0, 0), _ext(0, -1)],
            [_ext(-1), _ext(2 - TAU), _ext(-2 * _TAU_CONJ), _ext(2 - TAU)]]


@cache
def irrep_generators() -> tuple[list[list[QTauExt]], list[list[QTauExt]]]:
    # sqrt(tau + 2) = sqrt(5) / sqrt(3 - tau) since (3 - tau)(tau + 2) = 5
    root = _ext(0, (2 * TAU - 1) / _S)
    half = QTau(1, 0) / 2
    r1 = [[_ext(1), _ext(0)], [_ext(0), _ext(-1)]]
    r2 = [[_ext(-_TAU_CONJ * half), root * half], [root * half, _ext(_TAU_CONJ * half)]]
    return r1, r2


def _ext_matmul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), _ext(0)) for j in range(len(b[0]))]
            for i in range(len(a))]


def commutation_holds() -> list[bool]:
    """``proj . H(g) == rho(g) . proj`` exactly, for both generators."""
    proj = projection_ext()
    out = []
    for h, r in zip(H_GENERATORS, irrep_generators()):
        lhs = _ext_matmul(proj, [[_ext(x) for x in row] for row in h])
        out.append(lhs == _ext_matmul(r, proj))
    return out


def a4_radius2(v) -> QTau:
    """Exact squared radius of the projected point, times 2(3 - tau)."""
    v1, v2, v3, v4 = (QTau(int(x)) for x in v)
    u = -_TAU_CONJ * v1 + v2 - v4
    w = -v1 + (2 - TAU) * v2 - 2 * _TAU_CONJ * v3 + (2 - TAU) * v4
    return _S * u * u + w * w


def a4_project(v) -> np.ndarray:
    """Float coordinates in the plane, prefactor included."""
    scale = 1 / math.sqrt(2 * float(_S))
    return np.array([[float(c) for c in row] for row in projection_ext()]) @ np.asarray(v, float) * scale


@dataclass
class A4Layer:
    radius2: QTau  # with the factor 1/(2(3 - tau)) divided out
    preimages: list[tuple[int, ...]]

    @property
    def radius(self) -> float:
        return math.sqrt(float(self.radius2) / (2 * float(_S)))

    def coords(self) -> np.ndarray:
        return np.array([a4_project(v) for v in self.preimages])

    def __len__(self):
        return len(self.preimages)


def a4_orbit_layers(group: frozenset, v) -> list[A4Layer]:
    orbit = sorted({matvec(g, v) for g in group})
    by_r: dict[QTau, list] = {}
    for w in orbit:
        by_r.setdefault(a4_radius2(w), []).append(w)
    return [A4Layer(r, by_r[r]) for r in sorted(by_r)]


@dataclass
class A4Chain:
    H: frozenset
    K: frozenset
    Lambda: frozenset
    overgroups_of_h: list[frozenset]
    commutation: list[bool]
    h_normal_in_k: bool
    k_matches_hol5: bool
    notes: list[str] = field(default_factory=list)

    @property
    def intermediate(self) -> list[frozenset]:
        return [g for g in self.overgroups_of_h if len(self.H) < len(g) < len(self.Lambda)]

    def orbit_layers(self, which: str, v=A4_SEED) -> list[A4Layer]:
        return a4_orbit_layers({"H": self.H, "K": self.K, "Lambda": self.Lambda}[which], v)


def _order(g, mul, e) -> int:
    k, x = 1, g
    while x != e:
        x, k = mul(x, g), k + 1
    return k


def order_profile(elements, mul, e) -> Counter:
    return Counter(_order(g, mul, e) for g in elements)


def _is_normal(h: frozenset, k: frozenset, mul, inv) -> bool:
    return all(mul(mul(g, x), inv(g)) in h for g in k for x in h)


def _mat_inverse(g: Matrix, group: frozenset) -> Matrix:
    return next(x for x in group if matmul(g, x) == IDENTITY4)


def matches_hol5(k: frozenset) -> bool:
    """Order, element-order profile and an index-2 normal dihedral subgroup
    agree with the abstract holomorph of Z_5."""
    hol = hol_group(5)
    e = HolElement(5, 1, 0)
    if len(k) != len(hol):
        return False
    if order_profile(k, matmul, IDENTITY4) != order_profile(hol, HolElement.__mul__, e):
        return False
    # the dihedral part: generated by the elements of order 5 and 2 that normalise it
    fives = [g for g in k if _order(g, matmul, IDENTITY4) == 5]
    rot = closure(fives, matmul, IDENTITY4)
    twos = [g for g in k if _order(g, matmul, IDENTITY4) == 2]
    dih = closure(fives + twos, matmul, IDENTITY4)
    if len(rot) != 5 or len(dih) != 10:
        return False
    return _is_normal(dih, k, matmul, lambda g: _mat_inverse(g, k))


@cache
def a4_case() -> A4Chain:
    """Build and verify the five-fold chain inside the A4 lattice group."""
    lam = frozenset(permutation_matrix(p) for p in itertools.permutations(range(5)))
    h = closure(H_GENERATORS, matmul, IDENTITY4)
    k = closure(K_GENERATORS, matmul, IDENTITY4)
    if not (h <= k <= lam) or (len(h), len(k), len(lam)) != (10, 20, 120):
        raise VerificationError("A4 matrix groups do not nest with orders 10, 20, 120")
    comm = commutation_holds()
    if not all(comm):
        raise VerificationError("projection does not intertwine H with its irrep")
    ups = overgroups(h, lam, matmul, IDENTITY4)
    normal = _is_normal(h, k, matmul, lambda g: _mat_inverse(g, k))
    chain = A4Chain(h, k, lam, ups, comm, normal, matches_hol5(k))
    mids = chain.intermediate
    if [len(g) for g in mids] != [20, 60] or k not in mids:
        raise VerificationError(f"unexpected overgroups of H: orders {[len(g) for g in ups]}")
    chain.notes.append("the even permutations (order 60) also contain H")
    return chain


def a4_coset_orbits(chain: A4Chain, v) -> list[frozenset]:
    """The H-orbits of ``g v`` for ``g`` running over a right transversal of H in K."""
    seen: set = set()
    out = []
    for g in sorted(chain.K):
        if g in seen:
            continue
        coset = {matmul(x, g) for x in chain.H}
        seen |= coset
        out.append(frozenset(matvec(c, v) for c in coset))
    return out


def verify_a4_coset_orbits(chain: A4Chain, seeds) -> list[str]:
    """Normality of H in K forces equal coset-orbit sizes and at most two radii."""
    bad = []
    for v in seeds:
        sizes = [len(p) for p in a4_coset_orbits(chain, v)]
        radii = chain.orbit_layers("K", v)
        if len(set(sizes)) > 1 or len(radii) > 2:
            bad.append(f"seed {tuple(v)}: coset orbit sizes {sizes}, {len(radii)} radii")
    return bad
