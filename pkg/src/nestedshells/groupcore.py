"""Finite groups of signed permutations of six coordinates.

Every element of the hyperoctahedral group B6 (the wreath product of Z2 with
S6, order 46,080) is packed into one integer code ``rank * 64 + signbits``
where ``rank`` is the lexicographic rank of the underlying permutation in
[0, 720) and bit ``j`` of ``signbits`` is set when axis ``j`` is negated.
Groups are stored as sorted ``uint16`` arrays of codes; all heavy lifting
(composition, closure, cosets, action on lattice points) is vectorised over
these codes with numpy.

Conventions: a signed permutation ``(signs, perm)`` acts on column vectors
through the matrix ``T[i, j] = signs[j] * (i == perm[j])`` and ``p * q`` is
the matrix product ``T(p) @ T(q)`` (apply ``q`` first).  Internally indices
are 0-based; cycle strings use the 1-based labels 1..12.
"""

from __future__ import annotations

import hashlib
import itertools
import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import cache, cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

from .errors import NotInImage, NotSubgroup

logger = logging.getLogger(__name__)

DEGREE = 6
B6_ORDER = 46080  # 2**6 * 6!

_POW6 = 6 ** np.arange(DEGREE - 1, -1, -1)
_POW2 = 2 ** np.arange(DEGREE)


@cache
def _tables():
    perms = np.array(list(itertools.permutations(range(DEGREE))), dtype=np.int64)
    rank = np.full(6 ** DEGREE, -1, dtype=np.int64)
    rank[perms @ _POW6] = np.arange(len(perms))
    bits = (np.arange(64)[:, None] >> np.arange(DEGREE)[None, :]) & 1
    signs = (1 - 2 * bits).astype(np.int64)
    codes = np.arange(B6_ORDER)
    all_perm = perms[codes // 64]
    all_sign = signs[codes % 64]
    all_perm.setflags(write=False)
    all_sign.setflags(write=False)
    return perms, rank, all_perm, all_sign


def encode(perm: np.ndarray, sign: np.ndarray) -> np.ndarray:
    """Pack arrays of permutations and sign vectors (last axis 6) into codes."""
    _, rank, _, _ = _tables()
    perm = np.asarray(perm, dtype=np.int64)
    sign = np.asarray(sign, dtype=np.int64)
    r = rank[perm @ _POW6]
    if np.any(r < 0):
        raise ValueError("not a permutation of 0..5")
    return r * 64 + (sign < 0).astype(np.int64) @ _POW2


def decode(codes) -> tuple[np.ndarray, np.ndarray]:
    _, _, all_perm, all_sign = _tables()
    codes = np.asarray(codes, dtype=np.int64)
    return all_perm[codes], all_sign[codes]


def compose_codes(a, b) -> np.ndarray:
    """Codes of ``a * b`` with numpy broadcasting over ``a`` and ``b``."""
    a, b = np.broadcast_arrays(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    pa, sa = decode(a)
    pb, sb = decode(b)
    perm = np.take_along_axis(pa, pb, axis=-1)
    sign = sb * np.take_along_axis(sa, pb, axis=-1)
    return encode(perm, sign)


def invert_codes(a) -> np.ndarray:
    pa, sa = decode(a)
    inv = np.argsort(pa, axis=-1)
    return encode(inv, np.take_along_axis(sa, inv, axis=-1))


def act_codes(codes, v) -> np.ndarray:
    """Images of the lattice point ``v`` under each element: shape (len(codes), 6)."""
    pa, sa = decode(np.atleast_1d(codes))
    v = np.asarray(v, dtype=np.int64)
    out = np.empty(pa.shape, dtype=np.int64)
    np.put_along_axis(out, pa, sa * v[None, :], axis=-1)
    return out


def act_points(code: int, points) -> np.ndarray:
    """Image of an array of lattice points (rows) under one element."""
    (perm,), (sign,) = decode([code])
    points = np.asarray(points, dtype=np.int64)
    out = np.empty_like(points)
    out[:, perm] = points * sign[None, :]
    return out


# ---------------------------------------------------------------------------
# Elements


@dataclass(frozen=True)
class SignedPerm:
    """Element ``(a, pi)`` of Z2 wr S6.

    ``perm[j]`` is the (0-based) axis that axis ``j`` is sent to and
    ``signs[j]`` the sign picked up on the way.
    """

    perm: tuple[int, ...]
    signs: tuple[int, ...] = (1,) * DEGREE

    def __post_init__(self):
        perm = tuple(int(i) for i in self.perm)
        signs = tuple(int(s) for s in self.signs)
        if sorted(perm) != list(range(DEGREE)):
            raise ValueError(f"perm must be a bijection on 0..5, got {perm}")
        if len(signs) != DEGREE or any(s not in (1, -1) for s in signs):
            raise ValueError(f"signs must be six values in {{+1, -1}}, got {signs}")
        object.__setattr__(self, "perm", perm)
        object.__setattr__(self, "signs", signs)

    @classmethod
    def identity(cls) -> SignedPerm:
        return cls(tuple(range(DEGREE)))

    @classmethod
    def from_code(cls, code: int) -> SignedPerm:
        (perm,), (sign,) = decode([code])
        return cls(tuple(perm), tuple(sign))

    @classmethod
    def from_matrix(cls, m) -> SignedPerm:
        m = np.asarray(m)
        if m.shape != (DEGREE, DEGREE) or not np.array_equal(np.abs(m).sum(0), np.ones(DEGREE)):
            raise ValueError("not a signed permutation matrix")
        perm = tuple(int(np.flatnonzero(m[:, j])[0]) for j in range(DEGREE))
        signs = tuple(int(m[perm[j], j]) for j in range(DEGREE))
        if not np.array_equal(np.abs(m).sum(1), np.ones(DEGREE)):
            raise ValueError("not a signed permutation matrix")
        return cls(perm, signs)

    @cached_property
    def code(self) -> int:
        return int(encode(self.perm, self.signs))

    def __mul__(self, other: SignedPerm) -> SignedPerm:
        return compose(self, other)

    def inverse(self) -> SignedPerm:
        return SignedPerm.from_code(int(invert_codes(self.code)))

    def to_matrix(self) -> np.ndarray:
        return to_matrix(self)

    def act(self, v) -> np.ndarray:
        return act_codes([self.code], v)[0]

    def order(self) -> int:
        e, p, k = SignedPerm.identity(), self, 1
        while p != e:
            p, k = p * self, k + 1
        return k


def compose(p: SignedPerm, q: SignedPerm) -> SignedPerm:
    """Wreath product rule ``(a, pi)(b, sigma) = (a_sigma + b, pi sigma)``."""
    perm = tuple(p.perm[q.perm[j]] for j in range(DEGREE))
    signs = tuple(q.signs[j] * p.signs[q.perm[j]] for j in range(DEGREE))
    return SignedPerm(perm, signs)


def to_matrix(p: SignedPerm) -> np.ndarray:
    m = np.zeros((DEGREE, DEGREE), dtype=np.int64)
    for j in range(DEGREE):
        m[p.perm[j], j] = p.signs[j]
    return m


@dataclass(frozen=True)
class Perm12:
    """Permutation of 12 points; ``images[k]`` is the 0-based image of ``k``."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(12)):
            raise ValueError(f"not a permutation of 12 points: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls) -> Perm12:
        return cls(tuple(range(12)))

    @classmethod
    def parse(cls, text: str) -> Perm12:
        return parse_cycles(text)

    def __mul__(self, other: Perm12) -> Perm12:
        # functional composition: apply other first
        return Perm12(tuple(self.images[other.images[k]] for k in range(12)))

    def __str__(self) -> str:
        return cycle_string(self)


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_cycles(text: str) -> Perm12:
    """Parse GAP-style cycle notation on the labels 1..12, e.g. ``(1,6)(2,5)``."""
    stripped = re.sub(r"\s+", "", text)
    if stripped in ("", "()"):
        return Perm12.identity()
    if _CYCLE_RE.sub("", stripped):
        raise ValueError(f"malformed cycle string: {text!r}")
    images = list(range(12))
    seen: set[int] = set()
    for body in _CYCLE_RE.findall(stripped):
        pts = [int(x) - 1 for x in body.split(",") if x]
        if any(not 0 <= x < 12 for x in pts) or seen.intersection(pts) or len(set(pts)) != len(pts):
            raise ValueError(f"malformed cycle string: {text!r}")
        seen.update(pts)
        for a, b in zip(pts, pts[1:] + pts[:1]):
            images[a] = b
    return Perm12(tuple(images))


def cycle_string(p: Perm12) -> str:
    """Canonical cycle notation: each cycle starts at its least point, cycles
    ordered by least point, fixed points omitted."""
    seen = [False] * 12
    parts = []
    for start in range(12):
        if seen[start] or p.images[start] == start:
            seen[start] = True
            continue
        cyc, k = [], start
        while not seen[k]:
            seen[k] = True
            cyc.append(k + 1)
            k = p.images[k]
        parts.append("(" + ",".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def to_perm12(p: SignedPerm) -> Perm12:
    a = [0 if s == 1 else 1 for s in p.signs]
    images = [p.perm[k] + 6 * a[k] for k in range(DEGREE)]
    images += [p.perm[k] + 6 * (1 - a[k]) for k in range(DEGREE)]
    return Perm12(tuple(images))


def from_perm12(p: Perm12) -> SignedPerm:
    perm, signs = [], []
    for k in range(DEGREE):
        img = p.images[k]
        pk, ak = img % 6, img // 6
        if p.images[k + 6] != pk + 6 * (1 - ak):
            raise NotInImage(f"{cycle_string(p)} does not preserve the pairs (k, k+6)")
        perm.append(pk)
        signs.append(1 - 2 * ak)
    return SignedPerm(tuple(perm), tuple(signs))


def signed_perm(cycles: str) -> SignedPerm:
    """Shorthand: the signed permutation whose image in S12 is ``cycles``."""
    return from_perm12(parse_cycles(cycles))


# ---------------------------------------------------------------------------
# Groups


def closure_codes(gen_codes: Iterable[int], seed: np.ndarray | None = None) -> np.ndarray:
    """Sorted codes of the group generated by ``gen_codes`` (and ``seed``)."""
    gens = np.unique(np.asarray(list(gen_codes), dtype=np.int64))
    mask = np.zeros(B6_ORDER, dtype=bool)
    frontier = np.array([0], dtype=np.int64) if seed is None else np.asarray(seed, dtype=np.int64)
    mask[0] = True
    mask[frontier] = True
    if gens.size == 0:
        return np.flatnonzero(mask).astype(np.uint16)
    if seed is not None:
        frontier = np.concatenate([frontier, gens])
        mask[gens] = True
    while frontier.size:
        new = compose_codes(gens[:, None], frontier[None, :]).ravel()
        new = np.unique(new)
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return np.flatnonzero(mask).astype(np.uint16)


class FiniteGroup:
    """A subgroup of B6 given by generators; the element set is computed on
    first access and never changes afterwards."""

    def __init__(self, generators: Iterable[SignedPerm] = (), name: str | None = None,
                 *, _elements: np.ndarray | None = None):
        self.generators: tuple[SignedPerm, ...] = tuple(generators)
        self.name = name
        if _elements is not None:
            els = np.asarray(_elements, dtype=np.uint16)
            els.setflags(write=False)
            self.__dict__["elements"] = els

    @classmethod
    def from_codes(cls, codes, name: str | None = None) -> FiniteGroup:
        """Wrap a set of codes that is already known to be closed."""
        codes = np.unique(np.asarray(codes, dtype=np.int64))
        gens = _small_generating_set(codes)
        return cls(gens, name, _elements=codes)

    @classmethod
    def from_cycles(cls, cycles: Sequence[str], name: str | None = None) -> FiniteGroup:
        return cls([signed_perm(c) for c in cycles], name)

    @cached_property
    def elements(self) -> np.ndarray:
        els = closure_codes(g.code for g in self.generators)
        els.setflags(write=False)
        return els

    @cached_property
    def mask(self) -> np.ndarray:
        m = np.zeros(B6_ORDER, dtype=bool)
        m[self.elements] = True
        m.setflags(write=False)
        return m

    @property
    def order(self) -> int:
        return int(self.elements.size)

    @cached_property
    def key(self) -> str:
        """Canonical hash; equal iff the element sets are equal."""
        return hashlib.sha1(self.elements.astype("<u2").tobytes()).hexdigest()

    @property
    def gen_codes(self) -> np.ndarray:
        return np.array([g.code for g in self.generators], dtype=np.int64)

    def __len__(self) -> int:
        return self.order

    def __contains__(self, item) -> bool:
        code = item.code if isinstance(item, SignedPerm) else int(item)
        return bool(self.mask[code])

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteGroup) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        label = self.name or "FiniteGroup"
        known = f"order={self.order}" if "elements" in self.__dict__ else f"{len(self.generators)} generators"
        return f"<{label} {known}>"

    def issubgroup(self, other: FiniteGroup) -> bool:
        return bool(other.mask[self.elements].all())

    def is_abelian(self) -> bool:
        g = self.gen_codes
        if g.size < 2:
            return True
        return bool(np.array_equal(compose_codes(g[:, None], g[None, :]),
                                   compose_codes(g[None, :], g[:, None])))

    def join(self, *extra: SignedPerm, name: str | None = None) -> FiniteGroup:
        gens = self.generators + tuple(e for e in extra if e not in self)
        if len(gens) == len(self.generators):
            return self
        els = closure_codes([g.code for g in gens], seed=self.elements)
        return FiniteGroup(gens, name, _elements=els)

    def element(self, i: int) -> SignedPerm:
        return SignedPerm.from_code(int(self.elements[i]))

    def orbit(self, v) -> np.ndarray:
        """Distinct images of the lattice point ``v``, sorted lexicographically."""
        return np.unique(act_codes(self.elements, v), axis=0)


def _small_generating_set(codes: np.ndarray) -> list[SignedPerm]:
    gens: list[SignedPerm] = []
    have = np.zeros(B6_ORDER, dtype=bool)
    have[0] = True
    target = np.zeros(B6_ORDER, dtype=bool)
    target[codes] = True
    # prefer elements of large order-ish position: scan from the top
    for c in codes[::-1]:
        if have[c]:
            continue
        gens.append(SignedPerm.from_code(int(c)))
        have[:] = False
        have[closure_codes(g.code for g in gens)] = True
        if np.array_equal(have, target):
            break
    return gens


def materialize(g: FiniteGroup) -> FiniteGroup:
    g.elements  # noqa: B018 - populates the cache
    return g


def b6() -> FiniteGroup:
    return FiniteGroup.from_cycles(
        ["(1,2)(7,8)", "(1,2,3,4,5,6)(7,8,9,10,11,12)", "(6,12)"], name="B6")


def trivial_group() -> FiniteGroup:
    return FiniteGroup((), name="trivial")


def _require_subgroup(h: FiniteGroup, k: FiniteGroup) -> None:
    missing = [g for g in h.generators if g not in k]
    if missing:
        raise NotSubgroup(f"{h!r} is not contained in {k!r}: generator {missing[0]} missing")


@dataclass(frozen=True)
class Transversal:
    """Right transversal ``{g_1, ..., g_n}`` of ``subgroup`` in ``parent``.

    Cosets are indexed by their least element code, so coset ``i`` is the
    same set for every choice of representatives.
    """

    parent: FiniteGroup
    subgroup: FiniteGroup
    rep_codes: np.ndarray
    coset_of: np.ndarray  # code -> coset index, -1 outside parent

    @property
    def reps(self) -> list[SignedPerm]:
        return [SignedPerm.from_code(int(c)) for c in self.rep_codes]

    def __len__(self) -> int:
        return int(self.rep_codes.size)

    def coset(self, i: int) -> np.ndarray:
        return np.flatnonzero(self.coset_of == i)


def right_transversal(k: FiniteGroup, h: FiniteGroup, pick: str = "first") -> Transversal:
    """Representatives of the right cosets ``H g`` in ``K``.

    ``pick="first"`` takes the least code of each coset (so the identity
    represents ``H``); ``pick="last"`` takes the greatest, giving a second
    independent transversal.
    """
    _require_subgroup(h, k)
    if pick not in ("first", "last"):
        raise ValueError("pick must be 'first' or 'last'")
    coset_of = np.full(B6_ORDER, -1, dtype=np.int64)
    uncovered = k.mask.copy()
    hel = h.elements.astype(np.int64)
    reps = []
    idx = 0
    while True:
        pos = np.flatnonzero(uncovered[:])
        if pos.size == 0:
            break
        g = int(pos[0])
        coset = compose_codes(hel, g)
        coset_of[coset] = idx
        uncovered[coset] = False
        reps.append(g if pick == "first" else int(coset.max()))
        idx += 1
        if idx * h.order > k.order:
            raise NotSubgroup("coset sizes do not divide the group order")
    coset_of.setflags(write=False)
    return Transversal(k, h, np.array(reps, dtype=np.int64), coset_of)


def is_normal(h: FiniteGroup, k: FiniteGroup) -> bool:
    _require_subgroup(h, k)
    hel = h.elements.astype(np.int64)
    for g in k.generators:
        conj = compose_codes(invert_codes(g.code), compose_codes(hel, g.code))
        if not h.mask[conj].all():
            return False
    return True


def stabilizer(k: FiniteGroup, v) -> FiniteGroup:
    v = np.asarray(v, dtype=np.int64)
    imgs = act_codes(k.elements, v)
    fixed = k.elements[(imgs == v[None, :]).all(axis=1)]
    return FiniteGroup.from_codes(fixed, name=f"Stab({tuple(int(x) for x in v)})")


def orbit(k: FiniteGroup, v) -> np.ndarray:
    return k.orbit(v)


def _admissible(candidate: FiniteGroup, h: FiniteGroup, h_abelian: bool) -> bool:
    # cheap filters: Lagrange and non-commutativity inherited from h
    if candidate.order % h.order:
        return False
    return h_abelian or not candidate.is_abelian()


def minimal_overgroups(h: FiniteGroup, ambient: FiniteGroup, threads: int = 1) -> list[FiniteGroup]:
    """All subgroups ``K`` with ``h <= K <= ambient``.

    Breadth-first: starting from ``h``, every known group ``K`` is joined with
    one representative of each nontrivial right coset of ``K`` in ``ambient``;
    new groups are deduplicated by canonical hash until nothing new appears.
    Every overgroup is reached this way because it can be built from ``h`` by
    adjoining its elements one at a time.  Result is sorted by (order, key).
    """
    _require_subgroup(h, ambient)
    materialize(ambient)
    h_abelian = h.is_abelian()
    found: dict[str, FiniteGroup] = {h.key: h}
    queue = [h]
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        while queue:
            k = queue.pop(0)
            reps = right_transversal(ambient, k).reps[1:]
            logger.info("overgroups: expanding order %d with %d coset reps", k.order, len(reps))
            mapper = pool.map if pool else map
            for cand in mapper(lambda g: k.join(g), reps):
                if cand.key in found or not _admissible(cand, h, h_abelian):
                    continue
                found[cand.key] = cand
                queue.append(cand)
    finally:
        if pool:
            pool.shutdown()
    return sorted(found.values(), key=lambda g: (g.order, g.key))


# ---------------------------------------------------------------------------
# Small groups of arbitrary hashable elements (used for 4x4 matrix groups)


def closure(gens: Iterable[Hashable], mul: Callable, identity: Hashable) -> frozenset:
    gens = list(gens)
    els = {identity}
    frontier = [identity]
    while frontier:
        new = []
        for a in gens:
            for b in frontier:
                c = mul(a, b)
                if c not in els:
                    els.add(c)
                    new.append(c)
        frontier = new
    return frozenset(els)


def overgroups(h: frozenset, ambient: frozenset, mul: Callable, identity: Hashable) -> list[frozenset]:
    """All subgroups between ``h`` and ``ambient`` for small explicit groups."""
    if not h <= ambient:
        raise NotSubgroup("h is not contained in ambient")
    found = {h}
    queue = [h]
    while queue:
        k = queue.pop(0)
        for g in ambient - k:
            cand = closure(list(k) + [g], mul, identity)
            if cand not in found:
                found.add(cand)
                queue.append(cand)
    return sorted(found, key=lambda s: (len(s), sorted(map(repr, s))))
