"""Finite simplicial complexes with exact F2 cohomology.

Vertices carry a global total order (their identifier order); simplices are
stored as increasing tuples and enumerated deterministically per dimension.
Cup products use the front-face/back-face rule relative to that order, so
everything downstream (cup lengths, zero-divisor kernels, cohomological
dimension) is exact mod 2.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegreeError
from .f2 import F2Matrix, F2RowSpace


class SimplicialComplex:
    """A downward-closed family of simplices over totally ordered vertices."""

    def __init__(self, simplices_by_dim: list[list[tuple]]):
        self.simplices_by_dim = simplices_by_dim
        self.vertices = tuple(s[0] for s in simplices_by_dim[0]) if simplices_by_dim else ()
        self._index = [
            {s: i for i, s in enumerate(level)} for level in simplices_by_dim
        ]
        self._cup_faces: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}
        self._cohomology = None

    @property
    def dimension(self) -> int:
        return len(self.simplices_by_dim) - 1

    def simplices(self, d: int) -> list[tuple]:
        if 0 <= d <= self.dimension:
            return self.simplices_by_dim[d]
        return []

    def n_simplices(self, d: int) -> int:
        return len(self.simplices(d))

    def total_simplices(self) -> int:
        return sum(len(level) for level in self.simplices_by_dim)

    def index(self, simplex: tuple) -> int:
        return self._index[len(simplex) - 1][simplex]

    def contains(self, simplex: tuple) -> bool:
        d = len(simplex) - 1
        return 0 <= d <= self.dimension and simplex in self._index[d]

    def all_simplices(self):
        for level in self.simplices_by_dim:
            yield from level

    def is_empty(self) -> bool:
        return not self.simplices_by_dim

    def __eq__(self, other):
        return (isinstance(other, SimplicialComplex)
                and self.simplices_by_dim == other.simplices_by_dim)

    def __repr__(self):
        counts = tuple(len(level) for level in self.simplices_by_dim)
        return f"SimplicialComplex(counts={counts})"


@dataclass
class Cochain:
    """An F2 cochain: one bit per simplex of the given degree."""

    degree: int
    coeffs: np.ndarray

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=np.uint8) & 1

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __add__(self, other: "Cochain") -> "Cochain":
        if other.degree != self.degree:
            raise DegreeError("cannot add cochains of different degrees")
        return Cochain(self.degree, self.coeffs ^ other.coeffs)


@dataclass
class CohomologySummary:
    betti: tuple[int, ...]
    representatives: list[list[Cochain]]
    cd: int


def _closure(simplices) -> set[tuple]:
    out: set[tuple] = set()
    stack = [tuple(s) for s in simplices]
    while stack:
        s = stack.pop()
        if s in out:
            continue
        out.add(s)
        if len(s) > 1:
            for i in range(len(s)):
                stack.append(s[:i] + s[i + 1:])
    return out


def from_simplex_set(simplices) -> SimplicialComplex:
    """Build a complex from an arbitrary downward-closed-or-not simplex set."""
    closed = _closure(simplices)
    if not closed:
        return SimplicialComplex([])
    maxdim = max(len(s) for s in closed) - 1
    by_dim: list[list[tuple]] = [[] for _ in range(maxdim + 1)]
    for s in closed:
        by_dim[len(s) - 1].append(s)
    for level in by_dim:
        level.sort()
    return SimplicialComplex(by_dim)


def build_complex(maximal_simplices) -> SimplicialComplex:
    """Downward closure of the given maximal simplices.

    Vertices inside one simplex must be distinct; each simplex is stored
    sorted by the global identifier order.
    """
    normalized = []
    for s in maximal_simplices:
        s = list(s)
        if not s:
            raise ValueError("empty simplex")
        if len(set(s)) != len(s):
            raise ValueError(f"duplicate vertex within simplex {s}")
        normalized.append(tuple(sorted(s)))
    return from_simplex_set(normalized)


def coboundary_matrix(K: SimplicialComplex, d: int) -> F2Matrix:
    """Matrix of delta: C^d -> C^{d+1}; rows indexed by (d+1)-simplices."""
    if K.is_empty() or d < 0 or d > K.dimension:
        raise DegreeError(f"degree {d} out of range for dimension {K.dimension}")
    n_rows = K.n_simplices(d + 1)
    n_cols = K.n_simplices(d)
    m = F2Matrix.zeros(n_rows, n_cols)
    for i, tau in enumerate(K.simplices(d + 1)):
        for j in range(len(tau)):
            face = tau[:j] + tau[j + 1:]
            c = K.index(face)
            m.packed[i, c >> 6] ^= np.uint64(1) << np.uint64(c & 63)
    return m


def coboundary_apply(K: SimplicialComplex, c: Cochain) -> Cochain:
    """delta(c), computed without materializing the matrix."""
    d = c.degree
    if d >= K.dimension:
        return Cochain(d + 1, np.zeros(K.n_simplices(d + 1), dtype=np.uint8))
    out = np.zeros(K.n_simplices(d + 1), dtype=np.uint8)
    for i, tau in enumerate(K.simplices(d + 1)):
        total = 0
        for j in range(len(tau)):
            total ^= int(c.coeffs[K.index(tau[:j] + tau[j + 1:])])
        out[i] = total
    return Cochain(d + 1, out)


def is_cocycle(K: SimplicialComplex, c: Cochain) -> bool:
    return not coboundary_apply(K, c).coeffs.any()


def coboundary_space(K: SimplicialComplex, d: int) -> F2RowSpace:
    """Row space of im(delta_{d-1}) inside C^d."""
    n = K.n_simplices(d)
    if d == 0 or d > K.dimension:
        return F2RowSpace(n)
    cofacets: list[list[int]] = [[] for _ in range(K.n_simplices(d - 1))]
    for i, tau in enumerate(K.simplices(d)):
        for j in range(len(tau)):
            cofacets[K.index(tau[:j] + tau[j + 1:])].append(i)
    m = F2Matrix.zeros(len(cofacets), n)
    for r, hit in enumerate(cofacets):
        for i in hit:
            m.packed[r, i >> 6] ^= np.uint64(1) << np.uint64(i & 63)
    return F2RowSpace.from_matrix(m)


def cohomology(K: SimplicialComplex) -> CohomologySummary:
    """F2 Betti numbers, canonical cocycle representatives and cd.

    The empty complex reports cd = -1 so the saturated-diagonal bound
    arithmetic stays total on empty fixed sets.
    """
    if K._cohomology is not None:
        return K._cohomology
    if K.is_empty():
        return CohomologySummary(betti=(), representatives=[], cd=-1)
    betti = []
    reps: list[list[Cochain]] = []
    for d in range(K.dimension + 1):
        n_d = K.n_simplices(d)
        kernel = coboundary_matrix(K, d).kernel_basis()
        cobound = coboundary_space(K, d)
        space = F2RowSpace(n_d)
        space._rows = cobound._rows.copy()
        space._pivots = cobound._pivots.copy()
        level = []
        for v in kernel:
            reduced = space.reduce(v)
            if reduced.any():
                space.add(reduced)
                level.append(Cochain(d, cobound.reduce(v)))
        betti.append(len(level))
        reps.append(level)
    nonzero = [d for d, b in enumerate(betti) if b > 0]
    cd = max(nonzero) if nonzero else -1
    summary = CohomologySummary(betti=tuple(betti), representatives=reps, cd=cd)
    K._cohomology = summary
    return summary


def betti_numbers(K: SimplicialComplex) -> tuple[int, ...]:
    return cohomology(K).betti


def f2_cd(K: SimplicialComplex) -> int:
    """Cohomological dimension over constant F2 coefficients (-1 if empty)."""
    return cohomology(K).cd


def _cup_faces(K: SimplicialComplex, p: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    key = (p, q)
    if key not in K._cup_faces:
        front = []
        back = []
        for tau in K.simplices(p + q):
            front.append(K.index(tau[:p + 1]))
            back.append(K.index(tau[p:]))
        K._cup_faces[key] = (np.array(front, dtype=np.intp),
                             np.array(back, dtype=np.intp))
    return K._cup_faces[key]


def cup_product(K: SimplicialComplex, a: Cochain, b: Cochain) -> Cochain:
    """Front-face/back-face cup product on the ordered complex."""
    p, q = a.degree, b.degree
    if p + q > K.dimension:
        return Cochain(p + q, np.zeros(0, dtype=np.uint8))
    front, back = _cup_faces(K, p, q)
    return Cochain(p + q, a.coeffs[front] & b.coeffs[back])


def cup_length(K: SimplicialComplex, classes) -> int:
    """Longest nonzero product of positive-degree classes from the span.

    `classes` are cocycle representatives; a non-cocycle is rejected.
    Returns 0 for an empty family or when every product of two classes
    already vanishes and every class itself is a coboundary.
    """
    cocycles = []
    for c in classes:
        if c.degree <= 0:
            raise ValueError("cup_length expects positive-degree classes")
        if not is_cocycle(K, c):
            raise ValueError("representative is not a cocycle")
        cocycles.append(c)
    if not cocycles:
        return 0
    cobound = {d: coboundary_space(K, d) for d in range(1, K.dimension + 1)}

    def reduce_class(c: Cochain) -> Cochain:
        if c.degree > K.dimension:
            return Cochain(c.degree, np.zeros(0, dtype=np.uint8))
        return Cochain(c.degree, cobound[c.degree].reduce(c.coeffs))

    generators = []
    gen_spans: dict[int, F2RowSpace] = {}
    for c in cocycles:
        r = reduce_class(c)
        if r.is_zero():
            continue
        span = gen_spans.setdefault(r.degree, F2RowSpace(K.n_simplices(r.degree)))
        if span.add(r.coeffs):
            generators.append(r)
    if not generators:
        return 0
    length = 1
    level = generators
    while True:
        next_level = []
        spans: dict[int, F2RowSpace] = {}
        for a in level:
            for g in generators:
                prod = reduce_class(cup_product(K, a, g))
                if prod.is_zero():
                    continue
                span = spans.setdefault(prod.degree, F2RowSpace(K.n_simplices(prod.degree)))
                if span.add(prod.coeffs):
                    next_level.append(prod)
        if not next_level:
            return length
        length += 1
        level = next_level


def barycentric_subdivision(K: SimplicialComplex) -> SimplicialComplex:
    """First barycentric subdivision.

    The subdivision vertex for a simplex sigma is (dim sigma, sigma); the
    identifier order is therefore dimension-primary, which makes every
    simplicial automorphism of K order-monotone on the subdivided simplices.
    """
    chains: set[tuple] = set()
    maximal = _maximal_simplices(K)
    import itertools
    for sigma in maximal:
        for perm in itertools.permutations(sigma):
            chain = []
            for i in range(len(perm)):
                face = tuple(sorted(perm[:i + 1]))
                chain.append((len(face) - 1, face))
            chains.add(tuple(sorted(chain)))
    return from_simplex_set(chains)


def _maximal_simplices(K: SimplicialComplex) -> list[tuple]:
    maximal = []
    for d in range(K.dimension, -1, -1):
        for s in K.simplices(d):
            sset = set(s)
            is_face = False
            for t in K.simplices(d + 1):
                if sset <= set(t):
                    is_face = True
                    break
            if not is_face:
                maximal.append(s)
    return maximal


def cone(K: SimplicialComplex, apex) -> SimplicialComplex:
    """Join of K with one new vertex."""
    if any(apex in s for s in K.all_simplices()):
        raise ValueError("apex already a vertex of the complex")
    simplices = [tuple(sorted(s + (apex,))) for s in K.all_simplices()]
    simplices.append((apex,))
    return from_simplex_set(simplices)


def disjoint_union(K: SimplicialComplex, L: SimplicialComplex) -> SimplicialComplex:
    relabel_k = [tuple((0, v) for v in s) for s in K.all_simplices()]
    relabel_l = [tuple((1, v) for v in s) for s in L.all_simplices()]
    return from_simplex_set(relabel_k + relabel_l)


def write_complex_text(K: SimplicialComplex, path) -> None:
    """One line per maximal simplex, whitespace-separated integer vertex ids."""
    lines = ["# maximal simplices, one per line"]
    for s in sorted(_maximal_simplices(K)):
        lines.append(" ".join(str(v) for v in s))
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + "\n")


def read_complex_text(path) -> SimplicialComplex:
    simplices = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            try:
                simplices.append([int(p) for p in parts])
            except ValueError as exc:
                raise ValueError(f"bad vertex id in line {line!r}") from exc
    if not simplices:
        raise ValueError("no simplices in file")
    return build_complex(simplices)
