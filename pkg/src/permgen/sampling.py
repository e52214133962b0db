"""Seeded sampling of random corpora with stream-stable prefixes.

Every distribution draws from counter-based Philox streams derived from a
64-bit seed, one independent child stream per stochastic component
(directions and radii are separate streams). Arrays are filled row-major
with a fixed number of variates per point, so sample(seed, n) is always a
prefix of sample(seed, n + 1).
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .geometry import Corpus

GAUSS_STD = "gauss_std"
ELLIPTICAL = "elliptical"
PARETO_RADIAL = "pareto_radial"
PARETO_1D = "pareto_1d"
UNIFORM_BOX = "uniform_box"

_RADIAL_KINDS = ("normal", "exponential")


@dataclass(frozen=True)
class DistributionSpec:
    """A sampling law on R^d plus its default stream seed."""

    kind: str
    dim: int
    seed: int = 0
    alpha: float | None = None
    radial: str | None = None
    lo: tuple[float, ...] | None = None
    hi: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.dim < 1:
            raise DimensionMismatch("dimension must be at least 1")
        if self.kind in (PARETO_RADIAL, PARETO_1D):
            if self.alpha is None or self.alpha <= 0:
                raise ValueError("a positive tail index alpha is required")
        if self.kind == PARETO_1D and self.dim != 1:
            raise DimensionMismatch("the one-dimensional Pareto law has dim 1")
        if self.kind == ELLIPTICAL and self.radial not in _RADIAL_KINDS:
            raise ValueError(f"radial kind must be one of {_RADIAL_KINDS}")
        if self.kind == UNIFORM_BOX:
            if self.lo is None or self.hi is None:
                raise ValueError("uniform boxes need lo and hi")
            if len(self.lo) != self.dim or len(self.hi) != self.dim:
                raise DimensionMismatch("lo/hi length must match dim")
            if not all(a < b for a, b in zip(self.lo, self.hi)):
                raise ValueError("uniform boxes need lo < hi componentwise")

    @property
    def label(self) -> str:
        if self.kind == GAUSS_STD:
            return f"gauss:d={self.dim}"
        if self.kind == ELLIPTICAL:
            return f"elliptical:d={self.dim},radial={self.radial}"
        if self.kind in (PARETO_RADIAL, PARETO_1D):
            return f"pareto:d={self.dim},alpha={self.alpha:g}"
        return (
            f"uniform:d={self.dim},lo={','.join(f'{v:g}' for v in self.lo)}"
            f",hi={','.join(f'{v:g}' for v in self.hi)}"
        )


def gaussian_std(dim: int, seed: int = 0) -> DistributionSpec:
    return DistributionSpec(GAUSS_STD, dim, seed)


def elliptical_light(dim: int, radial: str, seed: int = 0) -> DistributionSpec:
    return DistributionSpec(ELLIPTICAL, dim, seed, radial=radial)


def pareto_radial(dim: int, alpha: float, seed: int = 0) -> DistributionSpec:
    return DistributionSpec(PARETO_RADIAL, dim, seed, alpha=alpha)


def pareto_1d(alpha: float, seed: int = 0) -> DistributionSpec:
    return DistributionSpec(PARETO_1D, 1, seed, alpha=alpha)


def uniform_box(dim: int, lo, hi, seed: int = 0) -> DistributionSpec:
    lo_t = tuple(float(v) for v in np.broadcast_to(np.asarray(lo, dtype=float), dim))
    hi_t = tuple(float(v) for v in np.broadcast_to(np.asarray(hi, dtype=float), dim))
    return DistributionSpec(UNIFORM_BOX, dim, seed, lo=lo_t, hi=hi_t)


def parse_distribution(text: str, seed: int = 0) -> DistributionSpec:
    """Parse strings like ``gauss:d=2``, ``pareto:d=1,alpha=1.0``,
    ``uniform:d=2,lo=0,hi=1`` or ``elliptical:d=2,radial=normal``."""
    head, _, tail = text.partition(":")
    head = head.strip().lower()
    params: dict[str, str] = {}
    if tail:
        for piece in tail.split(","):
            key, eq, value = piece.partition("=")
            if not eq:
                raise ValueError(f"malformed distribution parameter {piece!r}")
            params[key.strip().lower()] = value.strip()
    try:
        dim = int(params["d"])
        if head == "gauss":
            return gaussian_std(dim, seed)
        if head == "elliptical":
            return elliptical_light(dim, params.get("radial", "normal"), seed)
        if head == "pareto":
            alpha = float(params["alpha"])
            return pareto_1d(alpha, seed) if dim == 1 else pareto_radial(dim, alpha, seed)
        if head == "uniform":
            return uniform_box(dim, float(params.get("lo", "0")), float(params.get("hi", "1")), seed)
    except KeyError as exc:
        raise ValueError(f"missing distribution parameter {exc.args[0]!r}") from None
    except (TypeError, ValueError, DimensionMismatch) as exc:
        raise ValueError(f"malformed distribution string {text!r}: {exc}") from None
    raise ValueError(f"unknown distribution kind {head!r}")


def _streams(seed: int, count: int) -> list[np.random.Generator]:
    children = np.random.SeedSequence(seed).spawn(count)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


def _unit_directions(rng: np.random.Generator, n: int, dim: int) -> np.ndarray:
    raw = rng.normal(size=(n, dim))
    norms = np.linalg.norm(raw, axis=1, keepdims=True)
    norms[norms < 1e-300] = 1.0
    return raw / norms


def sample_points(dist: DistributionSpec, n: int, seed: int | None = None) -> np.ndarray:
    """Draw the first n points of the stream as an (n, d) array."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    s = dist.seed if seed is None else int(seed)
    if dist.kind == GAUSS_STD:
        (rng,) = _streams(s, 1)
        return rng.normal(size=(n, dist.dim))
    if dist.kind == ELLIPTICAL:
        dir_rng, rad_rng = _streams(s, 2)
        dirs = _unit_directions(dir_rng, n, dist.dim)
        if dist.radial == "normal":
            radii = np.linalg.norm(rad_rng.normal(size=(n, dist.dim)), axis=1)
        else:
            radii = rad_rng.exponential(size=n)
        return dirs * radii[:, None]
    if dist.kind == PARETO_RADIAL:
        dir_rng, rad_rng = _streams(s, 2)
        dirs = _unit_directions(dir_rng, n, dist.dim)
        radii = 1.0 + rad_rng.pareto(dist.alpha, size=n)
        return dirs * radii[:, None]
    if dist.kind == PARETO_1D:
        (rng,) = _streams(s, 1)
        return 1.0 + rng.pareto(dist.alpha, size=(n, 1))
    (rng,) = _streams(s, 1)
    lo = np.asarray(dist.lo)
    hi = np.asarray(dist.hi)
    return lo + rng.random((n, dist.dim)) * (hi - lo)


def sample_corpus(dist: DistributionSpec, n: int, seed: int | None = None) -> Corpus:
    """Sample a corpus; exact duplicate rows (probability zero for these
    continuous laws) would raise DuplicateCreation."""
    return Corpus.from_array(sample_points(dist, n, seed), dim=dist.dim)


@dataclass(frozen=True)
class TailDiagnostic:
    """Running norm maxima and their successive ratios.

    ``ratios[k]`` compares the running maximum before and after arrival
    k + 2: values near 1 mean new points stopped extending the reach of the
    corpus; deep drops are the signature of heavy tails.
    """

    max_norms: np.ndarray
    ratios: np.ndarray

    @property
    def final_ratio(self) -> float:
        return float(self.ratios[-1]) if self.ratios.size else float("nan")

    @property
    def min_ratio(self) -> float:
        return float(self.ratios.min()) if self.ratios.size else float("nan")


def tail_diagnostic(dist: DistributionSpec, n: int, seed: int | None = None) -> TailDiagnostic:
    if n < 1:
        raise ValueError("n must be at least 1")
    pts = sample_points(dist, n, seed)
    norms = np.linalg.norm(pts, axis=1)
    running = np.maximum.accumulate(norms)
    ratios = running[:-1] / running[1:] if n > 1 else np.empty(0)
    return TailDiagnostic(running, ratios)
