"""Convex-geometry kernel: points, corpora, polytopes, and the operations
the rest of the package is built on (hulls, halfspace intersections,
membership, volumes, support functions, Radon partitions).

Every polytope carries both a minimal vertex representation and a halfspace
representation with unit-length normals, so a halfspace residual is a signed
distance and one absolute tolerance (TOL_GEOM) drives membership,
deduplication and degeneracy decisions. All values are immutable after
construction and all operations are pure, which makes concurrent use safe.
"""
from __future__ import annotations

import enum
import hashlib
import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull as _QhullConvexHull
from scipy.spatial import HalfspaceIntersection as _QhullHalfspaceIntersection
from scipy.spatial import QhullError

from .errors import (
    DegenerateSystem,
    DimensionMismatch,
    DuplicateCreation,
    EmptyCorpus,
    EmptyPolytope,
    InsufficientPoints,
    ZeroVolumeBounding,
)

# Absolute tolerance on halfspace residuals. Coordinates are assumed to stay
# within |x| <= 1e6, where doubles keep ~1e-10 of headroom below this value.
TOL_GEOM = 1e-9

# Chebyshev inradius above which an intersection is treated as full-dimensional.
_FULL_DIM_RADIUS = 1e-7

# Slack threshold for detecting constraints that hold with equality on the
# whole feasible set (implicit equalities). Looser than TOL_GEOM to absorb
# LP solver noise.
_EQ_SLACK = 1e-7

_MC_DEFAULT_SAMPLES = 100_000


class Location(enum.Enum):
    """Trichotomy returned by membership tests."""

    INSIDE = "inside"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class Creation:
    """A single work, embedded as a point of R^d.

    Coordinates are stored as a tuple of finite floats; equality and hashing
    are exact on coordinates, so creations can key dictionaries.
    """

    coords: tuple[float, ...]

    def __post_init__(self) -> None:
        coords = tuple(float(v) for v in self.coords)
        if not coords:
            raise DimensionMismatch("a creation needs at least one coordinate")
        if not all(math.isfinite(v) for v in coords):
            raise ValueError(f"non-finite coordinate in {coords!r}")
        object.__setattr__(self, "coords", coords)

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def __repr__(self) -> str:
        return f"Creation({', '.join(repr(v) for v in self.coords)})"


def _as_creation(value, dim: int | None = None) -> Creation:
    c = value if isinstance(value, Creation) else Creation(tuple(np.atleast_1d(value)))
    if dim is not None and c.dim != dim:
        raise DimensionMismatch(f"expected dimension {dim}, got {c.dim}")
    return c


class Corpus:
    """An ordered collection of pairwise-distinct creations in a common R^d.

    Equality is set-like (order does not matter) but iteration preserves
    insertion order, so derived computations stay deterministic.
    """

    __slots__ = ("items", "dim", "_key")

    def __init__(self, items=(), dim: int | None = None):
        members = tuple(_as_creation(it) for it in items)
        if dim is None:
            if not members:
                raise EmptyCorpus("an empty corpus needs an explicit dimension")
            dim = members[0].dim
        for c in members:
            if c.dim != dim:
                raise DimensionMismatch(
                    f"corpus dimension is {dim} but item {c!r} has dimension {c.dim}"
                )
        seen = set()
        for c in members:
            if c in seen:
                raise DuplicateCreation(f"duplicate item {c!r}")
            seen.add(c)
        self.items = members
        self.dim = int(dim)
        self._key = frozenset(members)

    @classmethod
    def from_array(cls, arr, dim: int | None = None) -> "Corpus":
        arr = np.atleast_2d(np.asarray(arr, dtype=float))
        return cls((Creation(tuple(row)) for row in arr), dim=dim or arr.shape[1])

    def to_array(self) -> np.ndarray:
        if not self.items:
            return np.empty((0, self.dim))
        return np.array([c.coords for c in self.items], dtype=float)

    def without(self, creation) -> "Corpus":
        c = _as_creation(creation, self.dim)
        return Corpus((it for it in self.items if it != c), dim=self.dim)

    def without_many(self, creations) -> "Corpus":
        drop = {_as_creation(c, self.dim) for c in creations}
        return Corpus((it for it in self.items if it not in drop), dim=self.dim)

    def add(self, creation) -> "Corpus":
        c = _as_creation(creation, self.dim)
        if c in self._key:
            raise DuplicateCreation(f"{c!r} is already in the corpus")
        return Corpus(self.items + (c,), dim=self.dim)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def __contains__(self, creation) -> bool:
        try:
            return _as_creation(creation, self.dim) in self._key
        except DimensionMismatch:
            return False

    def __eq__(self, other) -> bool:
        if not isinstance(other, Corpus):
            return NotImplemented
        return self.dim == other.dim and self._key == other._key

    def __hash__(self) -> int:
        return hash((self.dim, self._key))

    def __repr__(self) -> str:
        return f"Corpus(n={len(self.items)}, dim={self.dim})"


def _dedupe_rows(P: np.ndarray) -> np.ndarray:
    # first-occurrence order, buckets of width TOL_GEOM
    keys = np.round(P / TOL_GEOM).astype(np.int64)
    seen: set[tuple] = set()
    keep = []
    for i, row in enumerate(keys):
        k = tuple(row.tolist())
        if k not in seen:
            seen.add(k)
            keep.append(i)
    return P[keep]


def _affine_rank(P: np.ndarray):
    """Origin, orthonormal basis of the affine hull, its orthogonal complement."""
    o = P[0]
    if len(P) == 1:
        return o, np.zeros((P.shape[1], 0)), np.eye(P.shape[1])
    Q = P - o
    _, s, Vt = np.linalg.svd(Q, full_matrices=True)
    thresh = TOL_GEOM * max(1.0, float(s[0]) if s.size else 1.0)
    rank = int(np.sum(s > thresh))
    return o, Vt[:rank].T, Vt[rank:].T


def _qhull(points: np.ndarray) -> _QhullConvexHull:
    try:
        return _QhullConvexHull(points)
    except QhullError:
        # joggle as a last resort; callers re-derive clean vertices afterwards
        return _QhullConvexHull(points, qhull_options="QJ")


class Polytope:
    """A (possibly empty, possibly lower-dimensional) convex polytope.

    ``vertex_array`` is the minimal set of extreme points. ``normals`` /
    ``offsets`` describe the same set as ``{x : normals @ x <= offsets}`` with
    unit-length rows; lower-dimensional polytopes carry their affine hull as
    pairs of opposing halfspaces. ``affine_dim`` is -1 for the empty polytope.
    """

    __slots__ = ("dim", "vertex_array", "normals", "offsets", "affine_dim")

    def __init__(self, dim, vertex_array, normals, offsets, affine_dim):
        self.dim = int(dim)
        self.vertex_array = np.asarray(vertex_array, dtype=float).reshape(-1, self.dim)
        self.normals = np.asarray(normals, dtype=float).reshape(-1, self.dim)
        self.offsets = np.asarray(offsets, dtype=float).reshape(-1)
        self.affine_dim = int(affine_dim)
        for a in (self.vertex_array, self.normals, self.offsets):
            a.setflags(write=False)

    # -- construction -------------------------------------------------------

    @classmethod
    def empty(cls, dim: int) -> "Polytope":
        return cls(dim, np.empty((0, dim)), np.empty((0, dim)), np.empty(0), -1)

    @classmethod
    def from_points(cls, points, dim: int | None = None) -> "Polytope":
        P = np.asarray(points, dtype=float)
        if P.ndim == 1:
            P = P.reshape(-1, 1) if dim in (None, 1) else P.reshape(1, -1)
        if dim is None:
            if P.size == 0:
                raise DimensionMismatch("cannot infer dimension from no points")
            dim = P.shape[1]
        if P.size == 0:
            return cls.empty(dim)
        if P.shape[1] != dim:
            raise DimensionMismatch(f"points have dimension {P.shape[1]}, expected {dim}")
        if not np.all(np.isfinite(P)):
            raise ValueError("non-finite coordinates")
        P = _dedupe_rows(P)
        if dim == 1:
            return cls._interval(P)
        o, B, N = _affine_rank(P)
        k = B.shape[1]
        if k == 0:
            return cls._single_point(P[0])
        if k == dim:
            hull = _qhull(P)
            verts = P[hull.vertices]
            A = hull.equations[:, :dim]
            b = -hull.equations[:, dim]
            return cls._normalized(dim, verts, A, b, affine_dim=dim)
        # lower-dimensional: build the hull inside the affine hull and lift
        Y = (P - o) @ B
        if k == 1:
            y = Y[:, 0]
            i_lo, i_hi = int(np.argmin(y)), int(np.argmax(y))
            verts = P[[i_lo, i_hi]]
            A_sub = np.array([[1.0], [-1.0]])
            b_sub = np.array([y[i_hi], -y[i_lo]])
        else:
            hull = _qhull(Y)
            verts = P[hull.vertices]
            A_sub = hull.equations[:, :k]
            b_sub = -hull.equations[:, k]
        A_in = A_sub @ B.T
        b_in = b_sub + A_in @ o
        flat = N.T
        bf = flat @ o
        A = np.vstack([A_in, flat, -flat])
        b = np.concatenate([b_in, bf, -bf])
        return cls._normalized(dim, verts, A, b, affine_dim=k)

    @classmethod
    def box(cls, lo, hi) -> "Polytope":
        """Axis-aligned product of intervals [lo_k, hi_k]."""
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if lo.shape != hi.shape:
            raise DimensionMismatch("lo and hi must have the same length")
        if np.any(hi < lo):
            raise ValueError("box needs lo <= hi componentwise")
        corners = np.array(list(itertools.product(*zip(lo, hi))), dtype=float)
        return cls.from_points(corners, dim=len(lo))

    @classmethod
    def _interval(cls, P: np.ndarray) -> "Polytope":
        lo, hi = float(P.min()), float(P.max())
        if hi - lo <= TOL_GEOM:
            return cls._single_point(np.array([lo]))
        verts = np.array([[lo], [hi]])
        return cls(1, verts, np.array([[1.0], [-1.0]]), np.array([hi, -lo]), 1)

    @classmethod
    def _single_point(cls, p: np.ndarray) -> "Polytope":
        d = len(p)
        eye = np.eye(d)
        A = np.vstack([eye, -eye])
        b = np.concatenate([p, -p])
        return cls(d, p.reshape(1, d), A, b, 0)

    @classmethod
    def _normalized(cls, dim, verts, A, b, affine_dim) -> "Polytope":
        norms = np.linalg.norm(A, axis=1)
        keep = norms > TOL_GEOM
        A = A[keep] / norms[keep, None]
        b = b[keep] / norms[keep]
        A, b = _dedupe_halfspaces(A, b)
        return cls(dim, verts, A, b, affine_dim)

    # -- queries -------------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.affine_dim < 0

    @property
    def has_zero_volume(self) -> bool:
        return self.affine_dim < self.dim

    @property
    def vertices(self) -> tuple[Creation, ...]:
        return tuple(Creation(tuple(row)) for row in self.vertex_array)

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        if self.is_empty:
            raise EmptyPolytope("the empty polytope has no bounding box")
        return self.vertex_array.min(axis=0), self.vertex_array.max(axis=0)

    def membership(self, point, tol: float = TOL_GEOM) -> Location:
        x = _as_creation(point, self.dim).array
        if self.is_empty:
            return Location.OUTSIDE
        res = self.normals @ x - self.offsets
        worst = float(res.max()) if res.size else -np.inf
        if worst > tol:
            return Location.OUTSIDE
        if worst >= -tol:
            return Location.BOUNDARY
        return Location.INSIDE

    def contains(self, point, tol: float = TOL_GEOM) -> bool:
        return self.membership(point, tol) is not Location.OUTSIDE

    def contains_batch(self, points: np.ndarray, tol: float = TOL_GEOM) -> np.ndarray:
        """Vectorized closed-membership test for an (m, d) array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if pts.shape[1] != self.dim:
            raise DimensionMismatch(f"points have dimension {pts.shape[1]}, expected {self.dim}")
        if self.is_empty:
            return np.zeros(len(pts), dtype=bool)
        out = np.ones(len(pts), dtype=bool)
        # chunked so 1e6-point batches do not allocate m x facets at once
        step = 65536
        for start in range(0, len(pts), step):
            block = pts[start : start + step]
            res = block @ self.normals.T - self.offsets
            out[start : start + step] = (res <= tol).all(axis=1)
        return out

    def equals(self, other: "Polytope", tol: float = 1e-7) -> bool:
        """Same point set, decided by matching the minimal vertex sets."""
        if not isinstance(other, Polytope) or self.dim != other.dim:
            return False
        if self.is_empty or other.is_empty:
            return self.is_empty and other.is_empty
        return _vertex_sets_match(self.vertex_array, other.vertex_array, tol)

    def __repr__(self) -> str:
        if self.is_empty:
            return f"Polytope(empty, dim={self.dim})"
        return (
            f"Polytope(dim={self.dim}, vertices={len(self.vertex_array)}, "
            f"affine_dim={self.affine_dim})"
        )


def _dedupe_halfspaces(A: np.ndarray, b: np.ndarray):
    if len(A) == 0:
        return A, b
    keys = np.round(np.column_stack([A, b]) / TOL_GEOM).astype(np.int64)
    seen: set[tuple] = set()
    keep = []
    for i, row in enumerate(keys):
        k = tuple(row.tolist())
        if k not in seen:
            seen.add(k)
            keep.append(i)
    return A[keep], b[keep]


def _vertex_sets_match(V: np.ndarray, W: np.ndarray, tol: float) -> bool:
    if len(V) != len(W):
        return False
    used = np.zeros(len(W), dtype=bool)
    for v in V:
        dist = np.abs(W - v).max(axis=1)
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        used[j] = True
    return True


# -- spec operations ---------------------------------------------------------


def convex_hull(corpus: Corpus) -> Polytope:
    """Convex hull of a corpus as a polytope.

    Lower-dimensional inputs (collinear points, a single point) produce a
    degenerate polytope whose halfspaces pin down the affine hull, so
    membership and intersection behave uniformly.
    """
    if len(corpus) == 0:
        raise EmptyCorpus("hull of an empty corpus")
    return Polytope.from_points(corpus.to_array(), dim=corpus.dim)


def membership(polytope: Polytope, point, tol: float = TOL_GEOM) -> Location:
    return polytope.membership(point, tol)


def halfspace_intersection(polytopes) -> Polytope:
    """Intersection of finitely many polytopes in the same R^d.

    The result keeps minimal vertices even when the intersection drops
    dimension (a face, a segment, a single point) or is empty. Feasibility
    and dimensionality are decided by a Chebyshev-center LP; implicit
    equalities are detected by per-constraint LPs and the problem is reduced
    into the affine hull before vertex enumeration.
    """
    polys = list(polytopes)
    if not polys:
        raise ValueError("halfspace_intersection needs at least one polytope")
    dim = polys[0].dim
    for p in polys:
        if p.dim != dim:
            raise DimensionMismatch("mixed dimensions in intersection")
    if any(p.is_empty for p in polys):
        return Polytope.empty(dim)
    A = np.vstack([p.normals for p in polys])
    b = np.concatenate([p.offsets for p in polys])
    A, b = _dedupe_halfspaces(A, b)
    verts = _hsi_vertices(A, b, dim)
    if verts is None:
        return Polytope.empty(dim)
    return Polytope.from_points(verts, dim=dim)


def _chebyshev_center(A: np.ndarray, b: np.ndarray, dim: int):
    c = np.zeros(dim + 1)
    c[-1] = -1.0
    A_ub = np.hstack([A, np.ones((len(A), 1))])
    bounds = [(None, None)] * dim + [(0.0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=b, bounds=bounds, method="highs")
    if res.status == 2:
        return None
    if not res.success:
        raise DegenerateSystem(f"Chebyshev LP failed: {res.message}")
    return res.x[:dim], float(res.x[dim])


def _hsi_vertices(A: np.ndarray, b: np.ndarray, dim: int):
    """Vertex array of {x : A x <= b}, or None when infeasible."""
    if dim == 1:
        a = A[:, 0]
        pos = a > 0.5
        neg = a < -0.5
        if not pos.any() or not neg.any():
            raise DegenerateSystem("unbounded one-dimensional intersection")
        hi = float(np.min(b[pos] / a[pos]))
        lo = float(np.max(b[neg] / a[neg]))
        if lo > hi + TOL_GEOM:
            return None
        return np.array([[lo], [hi]])
    found = _chebyshev_center(A, b, dim)
    if found is None:
        return None
    center, radius = found
    if radius > _FULL_DIM_RADIUS:
        return _hsi_full_dim(A, b, center)
    # flat (or nearly flat) feasible set: peel off implicit equalities
    eq_rows = []
    for i in range(len(A)):
        res = linprog(A[i], A_ub=A, b_ub=b, bounds=[(None, None)] * dim, method="highs")
        if res.status == 3:
            continue
        if not res.success:
            continue
        if res.fun >= b[i] - _EQ_SLACK:
            eq_rows.append(i)
    if not eq_rows:
        # thin but genuinely full-dimensional
        return _hsi_full_dim(A, b, center)
    E = A[eq_rows]
    e = b[eq_rows]
    x0, *_ = np.linalg.lstsq(E, e, rcond=None)
    _, s, Vt = np.linalg.svd(E, full_matrices=True)
    rank = int(np.sum(s > TOL_GEOM * max(1.0, float(s[0]))))
    if rank >= dim:
        return x0.reshape(1, dim)
    B = Vt[rank:].T  # dim x k null basis
    k = B.shape[1]
    A_sub = A @ B
    b_sub = b - A @ x0
    norms = np.linalg.norm(A_sub, axis=1)
    flatrows = norms <= TOL_GEOM
    if np.any(b_sub[flatrows] < -_EQ_SLACK):
        return None
    A_sub = A_sub[~flatrows] / norms[~flatrows, None]
    b_sub = b_sub[~flatrows] / norms[~flatrows]
    if len(A_sub) == 0:
        raise DegenerateSystem("unbounded flat in intersection")
    sub = _hsi_vertices(A_sub, b_sub, k)
    if sub is None:
        return None
    return x0 + sub @ B.T


def _hsi_full_dim(A: np.ndarray, b: np.ndarray, interior: np.ndarray):
    hs = np.hstack([A, -b[:, None]])
    try:
        hsi = _QhullHalfspaceIntersection(hs, interior)
    except QhullError:
        hsi = _QhullHalfspaceIntersection(hs, interior, qhull_options="QJ")
    pts = hsi.intersections
    pts = pts[np.all(np.isfinite(pts), axis=1)]
    if len(pts) == 0:
        return None
    return pts


def volume(polytope: Polytope) -> float:
    """Exact volume for dim <= 3; Monte Carlo with fixed defaults above that.

    Degenerate and empty polytopes have volume 0. The 2D case is the
    shoelace formula on angularly ordered vertices; 3D sums tetrahedra from
    the centroid over triangulated facets.
    """
    if polytope.is_empty or polytope.has_zero_volume:
        return 0.0
    V = polytope.vertex_array
    d = polytope.dim
    if d == 1:
        return float(V.max() - V.min())
    if d == 2:
        c = V.mean(axis=0)
        order = np.argsort(np.arctan2(V[:, 1] - c[1], V[:, 0] - c[0]))
        W = V[order]
        x, y = W[:, 0], W[:, 1]
        return float(abs(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y)) / 2.0)
    if d == 3:
        hull = _qhull(V)
        c = V.mean(axis=0)
        total = 0.0
        for simplex in hull.simplices:
            T = V[simplex] - c
            total += abs(np.linalg.det(T)) / 6.0
        return float(total)
    est, _ = mc_volume(polytope.contains_batch, _bbox_polytope(polytope), _MC_DEFAULT_SAMPLES, seed=0)
    return est


def _bbox_polytope(polytope: Polytope) -> Polytope:
    lo, hi = polytope.bounding_box()
    return Polytope.box(lo, hi)


def mc_volume(region_membership, bounding: Polytope, samples: int, seed: int) -> tuple[float, float]:
    """Monte Carlo volume of a region known only through a membership oracle.

    Parameters
    ----------
    region_membership : callable
        Maps an (m, d) array to a boolean array; must describe a subset of
        ``bounding``.
    bounding : Polytope
        Region of positive volume containing the target. Sampling is uniform
        over its axis-aligned bounding box (equal to ``bounding`` when the
        bounding region is itself a box).
    samples, seed : int
        Sample count and deterministic stream seed.

    Returns
    -------
    (estimate, stderr)
        ``hit_rate * envelope_volume`` and the binomial standard error
        ``envelope_volume * sqrt(p (1 - p) / samples)``.
    """
    if samples <= 0:
        raise ValueError("samples must be positive")
    if bounding.is_empty or bounding.has_zero_volume:
        raise ZeroVolumeBounding("bounding region must have positive volume")
    lo, hi = bounding.bounding_box()
    widths = hi - lo
    vol_env = float(np.prod(widths))
    if vol_env <= 0.0:
        raise ZeroVolumeBounding("bounding region must have positive volume")
    rng = np.random.Generator(np.random.Philox(seed))
    hits = 0
    step = 262_144
    remaining = samples
    while remaining > 0:
        m = min(step, remaining)
        pts = lo + rng.random((m, len(lo))) * widths
        hits += int(np.count_nonzero(region_membership(pts)))
        remaining -= m
    p = hits / samples
    return vol_env * p, vol_env * math.sqrt(p * (1.0 - p) / samples)


def support(polytope: Polytope, direction) -> float:
    """Support value max{<u, x> : x in polytope} for a unit direction u."""
    if polytope.is_empty:
        raise EmptyPolytope("support of the empty polytope")
    u = np.asarray(direction, dtype=float).reshape(-1)
    if u.shape[0] != polytope.dim:
        raise DimensionMismatch("direction has the wrong dimension")
    return float((polytope.vertex_array @ u).max())


@dataclass(frozen=True)
class RadonSplit:
    """Two disjoint sub-corpora whose hulls share ``witness``."""

    side_a: Corpus
    side_b: Corpus
    witness: Creation


def radon_partition(corpus: Corpus) -> RadonSplit:
    """Split d + 2 points into two parts with intersecting hulls.

    Uses the first d + 2 corpus items: a nonzero affine dependence is read
    off the SVD null space, its sign pattern gives the two sides and the
    normalized positive part gives the common point. If validation fails on
    degenerate input, the system is re-solved under a deterministic 1e-12
    perturbation (seeded from a hash of the coordinates) and the witness is
    recomputed from the unperturbed points and re-validated.

    The smaller side is reported first; ties go to the side holding the
    earliest corpus item.
    """
    d = corpus.dim
    if len(corpus) < d + 2:
        raise InsufficientPoints(f"need at least {d + 2} points in dimension {d}")
    pts = corpus.to_array()[: d + 2]
    items = corpus.items[: d + 2]

    def attempt(solve_pts: np.ndarray):
        M = np.vstack([solve_pts.T, np.ones(len(solve_pts))])
        _, _, Vt = np.linalg.svd(M)
        lam = Vt[-1]
        nz = np.abs(lam) > 1e-12 * np.abs(lam).max()
        if lam[nz][0] < 0:
            lam = -lam
        pos = lam > 1e-12
        neg = lam < -1e-12
        if not pos.any() or not neg.any():
            return None
        w = (lam[pos] @ pts[pos]) / lam[pos].sum()
        side_pos = Corpus((items[i] for i in np.flatnonzero(pos)), dim=d)
        side_neg = Corpus((items[i] for i in np.flatnonzero(neg)), dim=d)
        hull_pos = Polytope.from_points(pts[pos], dim=d)
        hull_neg = Polytope.from_points(pts[neg], dim=d)
        if hull_pos.membership(w, tol=_EQ_SLACK) is Location.OUTSIDE:
            return None
        if hull_neg.membership(w, tol=_EQ_SLACK) is Location.OUTSIDE:
            return None
        return side_pos, side_neg, Creation(tuple(w))

    result = attempt(pts)
    if result is None:
        digest = hashlib.sha256(pts.tobytes()).digest()
        base_seed = int.from_bytes(digest[:8], "little")
        for salt in range(4):
            rng = np.random.Generator(np.random.Philox(base_seed + salt))
            noise = (rng.random(pts.shape) - 0.5) * 2e-12
            result = attempt(pts + noise)
            if result is not None:
                break
    if result is None:
        raise DegenerateSystem("no valid Radon split after perturbation retries")
    side_pos, side_neg, witness = result
    first, second = side_pos, side_neg
    if len(side_neg) < len(side_pos):
        first, second = side_neg, side_pos
    elif len(side_neg) == len(side_pos):
        for it in items:
            if it in side_pos:
                break
            if it in side_neg:
                first, second = side_neg, side_pos
                break
    return RadonSplit(first, second, witness)
