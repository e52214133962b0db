"""Counterfactual permissibility: which generable points survive the removal
of any single corpus item (or any protected set of items).

The permissible set is the intersection of the leave-one-out images
g(C \\ {c}) over all items c; a generable point outside some leave-one-out
image is a violation and the items whose removal excludes it are the works
it infringes. For hull-valued generators only the removal of extreme points
can shrink the image, which keeps the intersection cheap on large corpora.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DuplicateCreation,
    EmptyCorpus,
    InsufficientPoints,
    NotConvexValued,
    ProtectedSetNotInCorpus,
)
from .generators import (
    BOX,
    CONV,
    SPLICE,
    ConvexRegion,
    FiniteGrid,
    GenerableSet,
    GeneratorSpec,
    convex_valued,
    empty_generable_set,
    generate,
    is_member,
)
from .geometry import (
    TOL_GEOM,
    Corpus,
    Creation,
    Polytope,
    RadonSplit,
    convex_hull,
    halfspace_intersection,
    radon_partition,
)

PERMISSIBLE = "permissible"
VIOLATION = "violation"
NOT_GENERABLE = "not_generable"


@dataclass(frozen=True)
class Classification:
    """Status of a candidate point against a corpus.

    ``infringed`` lists, in corpus order, every item whose removal would
    exclude the point; it is empty unless status is ``violation``.
    """

    status: str
    infringed: tuple[Creation, ...] = ()


@dataclass(frozen=True)
class PermissibleResult:
    generable: GenerableSet
    permissible: GenerableSet
    per_creation: dict[Creation, GenerableSet]


def _check_nonempty(corpus: Corpus) -> None:
    if len(corpus) == 0:
        raise EmptyCorpus("permissibility is defined over nonempty corpora")


def _leave_one_out(spec: GeneratorSpec, corpus: Corpus, c: Creation) -> GenerableSet:
    rest = corpus.without(c)
    if len(rest) == 0:
        return empty_generable_set(spec, corpus.dim)
    return generate(spec, rest)


def _conv_leave_one_out(corpus: Corpus, full: Polytope) -> dict[Creation, Polytope]:
    """Leave-one-out hulls; non-extreme removals reuse the full hull object."""
    out: dict[Creation, Polytope] = {}
    extreme = set(full.vertices)
    for c in corpus:
        if c in extreme:
            rest = corpus.without(c)
            out[c] = Polytope.empty(corpus.dim) if len(rest) == 0 else convex_hull(rest)
        else:
            out[c] = full
    return out


def conv_permissible_polytope(corpus: Corpus, full: Polytope | None = None) -> Polytope:
    """Intersection of leave-one-out hulls, touching only extreme points."""
    if len(corpus) <= 1:
        return Polytope.empty(corpus.dim)
    if full is None:
        full = convex_hull(corpus)
    polys = []
    for c in full.vertices:
        rest = corpus.without(c)
        if len(rest) == 0:
            return Polytope.empty(corpus.dim)
        polys.append(convex_hull(rest))
    return halfspace_intersection(polys)


def box_permissible_polytope(corpus: Corpus) -> Polytope:
    """Componentwise second-order statistics; equals the generic intersection."""
    if len(corpus) <= 1:
        return Polytope.empty(corpus.dim)
    arr = np.sort(corpus.to_array(), axis=0)
    lo = np.where(arr[0] == arr[1], arr[0], arr[1])
    hi = np.where(arr[-1] == arr[-2], arr[-1], arr[-2])
    if np.any(lo > hi + TOL_GEOM):
        return Polytope.empty(corpus.dim)
    return Polytope.box(lo, np.maximum(lo, hi))


def _splice_permissible_grid(corpus: Corpus) -> FiniteGrid:
    """Grid of coordinate values supplied by at least two corpus items."""
    if len(corpus) <= 1:
        return FiniteGrid(corpus.dim, tuple(() for _ in range(corpus.dim)))
    arr = corpus.to_array()
    sets = []
    for k in range(corpus.dim):
        keys = np.round(arr[:, k] / TOL_GEOM).astype(np.int64)
        uniq, first, counts = np.unique(keys, return_index=True, return_counts=True)
        kept = [float(arr[first[i], k]) for i in range(len(uniq)) if counts[i] >= 2]
        sets.append(tuple(sorted(kept)))
    return FiniteGrid(corpus.dim, tuple(sets))


def _intersect_generable(sets: list[GenerableSet], spec: GeneratorSpec, dim: int) -> GenerableSet:
    if any(s.is_empty for s in sets):
        return empty_generable_set(spec, dim)
    if all(isinstance(s, ConvexRegion) for s in sets):
        return ConvexRegion(halfspace_intersection([s.polytope for s in sets]))
    # product grids intersect coordinatewise
    grids = [s for s in sets if isinstance(s, FiniteGrid)]
    value_sets = []
    for k in range(dim):
        current = list(grids[0].value_sets[k])
        for g in grids[1:]:
            other = np.asarray(g.value_sets[k])
            current = [
                v for v in current if other.size and np.abs(other - v).min() <= TOL_GEOM
            ]
        value_sets.append(tuple(current))
    return FiniteGrid(dim, tuple(value_sets))


def permissible_set(spec: GeneratorSpec, corpus: Corpus) -> PermissibleResult:
    """Generable set, leave-one-out images, and their intersection.

    A singleton corpus has an empty permissible set: removing its only item
    leaves nothing to generate from.
    """
    _check_nonempty(corpus)
    generable = generate(spec, corpus)
    dim = corpus.dim
    if len(corpus) == 1:
        only = corpus.items[0]
        return PermissibleResult(
            generable, empty_generable_set(spec, dim), {only: empty_generable_set(spec, dim)}
        )
    if spec.kind == CONV:
        full = generable.polytope  # type: ignore[union-attr]
        loo = _conv_leave_one_out(corpus, full)
        per = {c: ConvexRegion(p) for c, p in loo.items()}
        permissible = ConvexRegion(conv_permissible_polytope(corpus, full))
        return PermissibleResult(generable, permissible, per)
    if spec.kind == BOX:
        per = {c: _leave_one_out(spec, corpus, c) for c in corpus}
        return PermissibleResult(generable, ConvexRegion(box_permissible_polytope(corpus)), per)
    if spec.kind == SPLICE:
        per = {c: _leave_one_out(spec, corpus, c) for c in corpus}
        return PermissibleResult(generable, _splice_permissible_grid(corpus), per)
    per = {c: _leave_one_out(spec, corpus, c) for c in corpus}
    permissible = _intersect_generable(list(per.values()), spec, dim)
    return PermissibleResult(generable, permissible, per)


def classify(spec: GeneratorSpec, corpus: Corpus, point, tol: float = TOL_GEOM) -> Classification:
    """Permissible / violation / not-generable trichotomy for one point.

    For hull-valued generators only extreme items can be infringed, so the
    scan is restricted to them; the reported tuple still follows corpus
    order and lists every infringed item.
    """
    _check_nonempty(corpus)
    if not is_member(spec, corpus, point, tol):
        return Classification(NOT_GENERABLE)
    if spec.kind == CONV:
        candidates = set(convex_hull(corpus).vertices)
    else:
        candidates = set(corpus.items)
    infringed = []
    for c in corpus:
        if c not in candidates:
            continue
        rest = corpus.without(c)
        if len(rest) == 0 or not is_member(spec, rest, point, tol):
            infringed.append(c)
    if infringed:
        return Classification(VIOLATION, tuple(infringed))
    return Classification(PERMISSIBLE)


def generable_sets_equal(a: GenerableSet, b: GenerableSet, tol: float = 1e-7) -> bool:
    if isinstance(a, ConvexRegion) and isinstance(b, ConvexRegion):
        return a.polytope.equals(b.polytope, tol)
    if isinstance(a, FiniteGrid) and isinstance(b, FiniteGrid):
        return a.equals(b, tol)
    return a.is_empty and b.is_empty


def generable_set_included(a: GenerableSet, b: GenerableSet, tol: float = 1e-7) -> bool:
    """Whether a is a subset of b (exact for regions via extreme points)."""
    if a.is_empty:
        return True
    if b.is_empty:
        return False
    if isinstance(a, ConvexRegion) and isinstance(b, ConvexRegion):
        return all(b.polytope.contains(v, tol) for v in a.polytope.vertex_array)
    if isinstance(a, FiniteGrid) and isinstance(b, FiniteGrid):
        for k in range(a.dim):
            other = np.asarray(b.value_sets[k])
            for v in a.value_sets[k]:
                if np.abs(other - v).min() > tol:
                    return False
        return True
    if isinstance(a, FiniteGrid):
        return all(b.contains(p, tol) for p in a.points())
    return False


@dataclass(frozen=True)
class AddEffect:
    """Comparative statics of inserting one new creation."""

    case: str
    before: PermissibleResult
    after: PermissibleResult
    strictly_expanded: bool
    inclusion_holds: bool
    witness: Creation | None


def add_creation_effect(spec: GeneratorSpec, corpus: Corpus, creation) -> AddEffect:
    """Classify a new point and report how the permissible set reacts.

    A permissible insertion leaves the permissible set unchanged; a
    violating insertion strictly expands it and the inserted point itself
    is a witness (it is permissible afterwards but was not before); a
    non-generable insertion can only grow the set. These consequences are
    verified on the computed sets and a failure raises, since it would mean
    the geometry kernel broke an exact law.
    """
    _check_nonempty(corpus)
    c = creation if isinstance(creation, Creation) else Creation(tuple(np.atleast_1d(creation)))
    if c in corpus:
        raise DuplicateCreation(f"{c!r} is already in the corpus")
    before = permissible_set(spec, corpus)
    verdict = classify(spec, corpus, c)
    after = permissible_set(spec, corpus.add(c))
    included = generable_set_included(before.permissible, after.permissible)
    equal = generable_sets_equal(before.permissible, after.permissible)
    if not included:
        raise AssertionError("permissible set lost points after an insertion")
    witness = None
    if verdict.status == PERMISSIBLE:
        if not equal:
            raise AssertionError("permissible insertion changed the permissible set")
    elif verdict.status == VIOLATION:
        if not after.permissible.contains(c.coords):
            raise AssertionError("violating insertion did not become permissible")
        if before.permissible.contains(c.coords):
            raise AssertionError("violating insertion was already permissible")
        if equal:
            raise AssertionError("violating insertion did not expand the permissible set")
        witness = c
    return AddEffect(verdict.status, before, after, not equal, included, witness)


def radon_nonemptiness_witness(spec: GeneratorSpec, corpus: Corpus) -> tuple[Creation, RadonSplit]:
    """A concrete permissible point for convex-valued generators, |C| >= d + 2.

    The witness is the common point of a Radon split of the first d + 2
    items: whichever single item is removed, one side of the split survives
    intact, so the point stays inside every leave-one-out image.
    """
    if not convex_valued(spec):
        raise NotConvexValued(f"generator {spec} is not convex-valued")
    if len(corpus) < corpus.dim + 2:
        raise InsufficientPoints(
            f"need at least {corpus.dim + 2} items in dimension {corpus.dim}"
        )
    split = radon_partition(corpus)
    verdict = classify(spec, corpus, split.witness)
    if verdict.status != PERMISSIBLE:
        raise AssertionError(
            f"Radon witness classified as {verdict.status}; expected permissible"
        )
    return split.witness, split


# -- protected collections ---------------------------------------------------


@dataclass(frozen=True)
class Collection:
    """A family of protected sets, each a nonempty sub-corpus."""

    protected: tuple[Corpus, ...]

    @classmethod
    def from_indices(cls, corpus: Corpus, groups) -> "Collection":
        sets = []
        for group in groups:
            idx = sorted(set(int(i) for i in group))
            if any(i < 0 or i >= len(corpus) for i in idx):
                raise ProtectedSetNotInCorpus(f"index out of range in {group!r}")
            sets.append(Corpus((corpus.items[i] for i in idx), dim=corpus.dim))
        return cls(tuple(sets))

    def __iter__(self):
        return iter(self.protected)

    def __len__(self) -> int:
        return len(self.protected)


def _validate_collection(corpus: Corpus, collection: Collection) -> None:
    for group in collection:
        if len(group) == 0:
            raise ProtectedSetNotInCorpus("protected sets must be nonempty")
        if group.dim != corpus.dim:
            raise ProtectedSetNotInCorpus("protected set dimension mismatch")
        for item in group:
            if item not in corpus:
                raise ProtectedSetNotInCorpus(f"{item!r} is not a corpus member")


def groupwise_permissible(
    spec: GeneratorSpec, corpus: Corpus, collection: Collection
) -> GenerableSet:
    """Points generable without any single protected set.

    The empty collection imposes no constraint and returns the full
    generable set; a protected set covering the whole corpus contributes
    the empty image and empties the intersection.
    """
    _check_nonempty(corpus)
    _validate_collection(corpus, collection)
    if len(collection) == 0:
        return generate(spec, corpus)
    parts: list[GenerableSet] = []
    for group in collection:
        rest = corpus.without_many(group.items)
        parts.append(
            empty_generable_set(spec, corpus.dim) if len(rest) == 0 else generate(spec, rest)
        )
    return _intersect_generable(parts, spec, corpus.dim)


def richness_compare(finer: Collection, coarser: Collection) -> bool:
    """True when every protected set of ``coarser`` sits inside one of ``finer``.

    In that case protecting ``finer`` is at least as restrictive: its
    groupwise permissible set is contained in the one for ``coarser``.
    """
    for b in coarser:
        b_key = frozenset(b.items)
        if not any(b_key <= frozenset(a.items) for a in finer):
            return False
    return True


@dataclass(frozen=True)
class SuperadditivityReport:
    inclusion_holds: bool
    strict_witness: Creation | None
    points_checked: int


def superadditivity_check(
    spec: GeneratorSpec,
    corpus: Corpus,
    set_a: Corpus,
    set_b: Corpus,
    samples: int = 512,
    seed: int = 0,
) -> SuperadditivityReport:
    """Violations against {A, B} are violations against {A union B}.

    Verified contrapositively: every point permissible under the merged
    protection must be permissible under the pairwise protection. The check
    runs on the exact extreme points of the merged-protection set plus
    sampled points of the generable region; a strict witness (permissible
    pairwise but not merged) is reported when one exists.
    """
    _check_nonempty(corpus)
    for item in set_a:
        if item in set_b:
            raise ValueError("protected sets must be disjoint")
    pair = groupwise_permissible(spec, corpus, Collection((set_a, set_b)))
    union_corpus = Corpus(set_a.items + set_b.items, dim=corpus.dim)
    merged = groupwise_permissible(spec, corpus, Collection((union_corpus,)))
    inclusion = generable_set_included(merged, pair)

    # hunt for strictness: in the pairwise set but not in the merged one
    rng = np.random.Generator(np.random.Philox(seed))
    candidates: list[np.ndarray] = []
    if isinstance(pair, ConvexRegion) and not pair.is_empty:
        candidates.extend(pair.polytope.vertex_array)
        if len(pair.polytope.vertex_array) >= 2:
            V = pair.polytope.vertex_array
            w = rng.random((samples, len(V)))
            w /= w.sum(axis=1, keepdims=True)
            candidates.extend(w @ V)
    elif isinstance(pair, FiniteGrid) and not pair.is_empty:
        pts = pair.points()
        candidates.extend(pts[: min(len(pts), samples)])
    witness = None
    checked = 0
    for x in candidates:
        checked += 1
        if pair.contains(x) and not merged.contains(x):
            witness = Creation(tuple(np.asarray(x, dtype=float)))
            break
    return SuperadditivityReport(bool(inclusion), witness, checked)
