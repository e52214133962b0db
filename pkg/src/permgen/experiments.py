"""Growth experiments: permissible-to-generable volume ratios along seeded
sample paths, their summary statistics, and the exact one-dimensional
successive-maxima bound for heavy-tailed corpora.
"""
from __future__ import annotations

import csv
import os
import time
from dataclasses import dataclass

import numpy as np

from .errors import (
    BoundViolation,
    DimensionNotOne,
    EmptyCorpus,
    MisalignedCheckpoints,
    NotConvexValued,
    ZeroGenerableVolume,
)
from .generators import BOX, CONV, ConvexRegion, GeneratorSpec, convex_valued, generate
from .geometry import TOL_GEOM, Corpus, Polytope, volume
from .permissibility import (
    box_permissible_polytope,
    conv_permissible_polytope,
    permissible_set,
)
from .sampling import DistributionSpec, sample_points

_FLOAT_FMT = ".17g"


def _format_float(x: float) -> str:
    return format(float(x), _FLOAT_FMT)


def _generable_polytope(spec: GeneratorSpec, corpus: Corpus) -> Polytope:
    result = generate(spec, corpus)
    if not isinstance(result, ConvexRegion):
        raise NotConvexValued(f"volume ratios need a convex-valued generator, got {spec}")
    return result.polytope


def _permissible_polytope(spec: GeneratorSpec, corpus: Corpus, full: Polytope) -> Polytope:
    if spec.kind == CONV:
        return conv_permissible_polytope(corpus, full)
    if spec.kind == BOX:
        return box_permissible_polytope(corpus)
    result = permissible_set(spec, corpus).permissible
    if not isinstance(result, ConvexRegion):
        raise NotConvexValued(f"volume ratios need a convex-valued generator, got {spec}")
    return result.polytope


def permissible_ratio(
    spec: GeneratorSpec,
    corpus: Corpus,
    method: str = "exact",
    mc_samples: int = 100_000,
    mc_seed: int = 0,
) -> float:
    """Volume of the permissible set over the volume of the generable set.

    ``method="exact"`` uses exact polytope volumes and requires dim <= 3;
    ``method="mc"`` evaluates both sets on one shared uniform sample over
    the bounding box of the generable set, so the ratio is a plain hit
    count quotient and never exceeds 1. Raises ZeroGenerableVolume when the
    generable set is degenerate.
    """
    if not convex_valued(spec):
        raise NotConvexValued(f"volume ratios need a convex-valued generator, got {spec}")
    if len(corpus) == 0:
        raise EmptyCorpus("ratio over an empty corpus")
    full = _generable_polytope(spec, corpus)
    if full.has_zero_volume:
        raise ZeroGenerableVolume(f"generable set has zero volume at n={len(corpus)}")
    if method == "exact":
        if corpus.dim > 3:
            raise ValueError("exact volumes are limited to dimension <= 3")
        vol_g = volume(full)
        if vol_g <= 0.0:
            raise ZeroGenerableVolume(f"generable set has zero volume at n={len(corpus)}")
        perm = _permissible_polytope(spec, corpus, full)
        return min(1.0, max(0.0, volume(perm) / vol_g))
    if method != "mc":
        raise ValueError(f"unknown method {method!r}")
    perm = _permissible_polytope(spec, corpus, full)
    lo, hi = full.bounding_box()
    rng = np.random.Generator(np.random.Philox(mc_seed))
    pts = lo + rng.random((mc_samples, corpus.dim)) * (hi - lo)
    in_g = full.contains_batch(pts)
    hits_g = int(np.count_nonzero(in_g))
    if hits_g == 0:
        raise ZeroGenerableVolume("no generable hits in the Monte Carlo sample")
    hits_p = int(np.count_nonzero(perm.contains_batch(pts) & in_g))
    return hits_p / hits_g


@dataclass(frozen=True)
class CheckpointRecord:
    n: int
    vol_generable: float
    vol_permissible: float
    ratio: float
    degenerate: bool
    walltime_ms: float


@dataclass(frozen=True)
class Trajectory:
    seed: int
    records: tuple[CheckpointRecord, ...]

    @property
    def checkpoints(self) -> tuple[int, ...]:
        return tuple(r.n for r in self.records)

    def ratio_at(self, n: int) -> float:
        for r in self.records:
            if r.n == n:
                return r.ratio
        raise KeyError(f"no checkpoint at n={n}")


def _env_threads() -> int:
    raw = os.environ.get("PERMGEN_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def run_growth(
    dist: DistributionSpec,
    spec: GeneratorSpec,
    n_max: int,
    checkpoints,
    seeds,
    method: str = "auto",
    mc_samples: int = 100_000,
) -> list[Trajectory]:
    """Grow one corpus per seed and record volume ratios at checkpoints.

    Per seed, the first n_max points of the stream are drawn once and each
    checkpoint evaluates the prefix, so later checkpoints extend earlier
    ones. Checkpoints where the generable set is degenerate (n <= d, or a
    flat corpus) are recorded with the degenerate flag, a ratio of 0 and
    zero volumes. ``method="auto"`` picks exact volumes for dim <= 3 and
    Monte Carlo above. The PERMGEN_THREADS environment variable caps the
    number of worker threads used across seeds (default 1).
    """
    cps = [int(n) for n in checkpoints]
    if not cps or any(b <= a for a, b in zip(cps, cps[1:])):
        raise MisalignedCheckpoints("checkpoints must be strictly increasing")
    if cps[-1] > n_max:
        raise MisalignedCheckpoints("checkpoints exceed n_max")
    if not convex_valued(spec):
        raise NotConvexValued(f"growth ratios need a convex-valued generator, got {spec}")
    if method == "auto":
        method = "exact" if dist.dim <= 3 else "mc"

    def one_seed(seed: int) -> Trajectory:
        pts = sample_points(dist, n_max, seed)
        records = []
        for n in cps:
            start = time.perf_counter()
            corpus = Corpus.from_array(pts[:n], dim=dist.dim)
            full = _generable_polytope(spec, corpus)
            degenerate = full.has_zero_volume
            if degenerate:
                vol_g = vol_p = 0.0
                ratio = 0.0
            else:
                if method == "exact":
                    vol_g = volume(full)
                    perm = _permissible_polytope(spec, corpus, full)
                    vol_p = volume(perm)
                    ratio = min(1.0, max(0.0, vol_p / vol_g)) if vol_g > 0 else 0.0
                    degenerate = vol_g <= 0.0
                else:
                    perm = _permissible_polytope(spec, corpus, full)
                    lo, hi = full.bounding_box()
                    rng = np.random.Generator(
                        np.random.Philox(int(seed) * 1_000_003 + n)
                    )
                    sample = lo + rng.random((mc_samples, dist.dim)) * (hi - lo)
                    in_g = full.contains_batch(sample)
                    hits_g = int(np.count_nonzero(in_g))
                    box_vol = float(np.prod(hi - lo))
                    if hits_g == 0:
                        vol_g = vol_p = 0.0
                        ratio = 0.0
                        degenerate = True
                    else:
                        hits_p = int(np.count_nonzero(perm.contains_batch(sample) & in_g))
                        vol_g = box_vol * hits_g / mc_samples
                        vol_p = box_vol * hits_p / mc_samples
                        ratio = hits_p / hits_g
            elapsed_ms = (time.perf_counter() - start) * 1000.0
            records.append(
                CheckpointRecord(n, float(vol_g), float(vol_p), float(ratio), degenerate, elapsed_ms)
            )
        return Trajectory(int(seed), tuple(records))

    seed_list = [int(s) for s in seeds]
    workers = min(_env_threads(), max(1, len(seed_list)))
    if workers <= 1:
        return [one_seed(s) for s in seed_list]
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(one_seed, seed_list))


@dataclass(frozen=True)
class BoundRecord:
    n: int
    bound: float
    ratio: float


def heavy_tail_bound(corpus: Corpus, tol: float = TOL_GEOM) -> list[BoundRecord]:
    """Stepwise ratio bound for one-dimensional hull growth on positive data.

    Walking the corpus in arrival order, the permissible-to-generable length
    ratio after step n is (second largest - second smallest) over
    (largest - smallest), and it never exceeds the ratio of the previous
    running maximum to the current one. Each step is checked against that
    bound (raising BoundViolation on failure, which for positive data would
    indicate a kernel defect) and the per-step pairs are returned.
    """
    if corpus.dim != 1:
        raise DimensionNotOne("the successive-maxima bound needs a one-dimensional corpus")
    values = corpus.to_array()[:, 0]
    if len(values) < 2:
        return []
    records = []
    for n in range(2, len(values) + 1):
        prefix = values[:n]
        prev_max = float(prefix[:-1].max())
        cur_max = float(prefix.max())
        bound = prev_max / cur_max if cur_max != 0 else float("inf")
        srt = np.sort(prefix)
        vol_g = float(srt[-1] - srt[0])
        vol_p = max(0.0, float(srt[-2] - srt[1]))
        ratio = vol_p / vol_g if vol_g > 0 else 0.0
        if ratio > bound + tol:
            raise BoundViolation(
                f"ratio {ratio} exceeds successive-maxima bound {bound} at step {n}"
            )
        records.append(BoundRecord(n, bound, ratio))
    return records


@dataclass(frozen=True)
class StatRow:
    n: int
    mean: float
    median: float
    q10: float
    q90: float
    frac_below_07: float
    frac_below_09: float


def summarize(trajectories) -> list[StatRow]:
    """Per-checkpoint ratio statistics across seeds.

    All trajectories must share one checkpoint schedule; degenerate
    checkpoints contribute their recorded ratio of 0.
    """
    trajs = list(trajectories)
    if not trajs:
        raise MisalignedCheckpoints("nothing to summarize")
    schedule = trajs[0].checkpoints
    for t in trajs[1:]:
        if t.checkpoints != schedule:
            raise MisalignedCheckpoints(
                f"trajectory for seed {t.seed} has schedule {t.checkpoints}, expected {schedule}"
            )
    rows = []
    for i, n in enumerate(schedule):
        ratios = np.array([t.records[i].ratio for t in trajs])
        rows.append(
            StatRow(
                n,
                float(ratios.mean()),
                float(np.median(ratios)),
                float(np.quantile(ratios, 0.10)),
                float(np.quantile(ratios, 0.90)),
                float(np.mean(ratios < 0.7)),
                float(np.mean(ratios < 0.9)),
            )
        )
    return rows


def write_trajectories(path, trajectories, include_walltime: bool = False) -> None:
    """Write the per-checkpoint trajectory table as CSV.

    Wall times are instrumentation, not data: by default the column is
    written as 0 so repeated runs with identical flags emit byte-identical
    files. Floats carry 17 significant digits and round-trip exactly.
    """
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(
            ["seed", "n", "vol_generable", "vol_permissible", "ratio", "degenerate_flag", "walltime_ms"]
        )
        for t in sorted(trajectories, key=lambda t: t.seed):
            for r in t.records:
                writer.writerow(
                    [
                        t.seed,
                        r.n,
                        _format_float(r.vol_generable),
                        _format_float(r.vol_permissible),
                        _format_float(r.ratio),
                        int(r.degenerate),
                        _format_float(r.walltime_ms) if include_walltime else "0",
                    ]
                )


def write_stats(path, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["checkpoint", "mean", "median", "q10", "q90", "frac_below_0.7", "frac_below_0.9"])
        for row in rows:
            writer.writerow(
                [
                    row.n,
                    _format_float(row.mean),
                    _format_float(row.median),
                    _format_float(row.q10),
                    _format_float(row.q90),
                    _format_float(row.frac_below_07),
                    _format_float(row.frac_below_09),
                ]
            )
