"""End-to-end acceptance checks.

Each test covers one numbered criterion and prints a single visible
PASS/FAIL line with the measured quantities, bypassing output capture so
the line shows up in plain ``pytest`` runs as well.
"""
import time

import numpy as np
import pytest

from permgen import (
    Corpus,
    Creation,
    add_creation_effect,
    box_spec,
    conv_spec,
    convex_hull,
    heavy_tail_bound,
    mc_volume,
    parse_distribution,
    permissible_set,
    run_growth,
    sample_points,
    volume,
)
from permgen.cli import main as cli_main
from permgen.props import (
    run_axioms_suite,
    run_convexity_suite,
    run_groupwise_suite,
    run_permissibility_suite,
    run_radon_suite,
)

from conftest import corpus_of

TOL = 1e-9


def _report(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"CRITERION {number}: {'PASS' if ok else 'FAIL'} - {detail}")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_1_exact_examples(capsys):
    t0 = time.perf_counter()

    res_a = permissible_set(conv_spec(), corpus_of([[0.0], [1.0]]))
    ok_a = res_a.permissible.is_empty

    col = corpus_of([[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0]])
    before_b = permissible_set(conv_spec(), col).permissible
    effect_b = add_creation_effect(conv_spec(), col, Creation((0.0, 1.0)))
    after_b = effect_b.after.permissible
    ok_b = (
        not before_b.is_empty
        and np.allclose(before_b.polytope.vertex_array, [[0.0, 0.0]], atol=TOL)
        and not after_b.is_empty
        and np.allclose(after_b.polytope.vertex_array, [[0.0, 0.0]], atol=TOL)
    )

    tri = corpus_of([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0]])
    before_c = permissible_set(conv_spec(), tri).permissible
    effect_c = add_creation_effect(conv_spec(), tri, Creation((1.0, 1.0)))
    after_c = effect_c.after.permissible
    ok_c = (
        before_c.is_empty
        and not after_c.is_empty
        and np.allclose(after_c.polytope.vertex_array, [[0.5, 0.5]], atol=TOL)
    )

    elapsed = time.perf_counter() - t0
    ok = ok_a and ok_b and ok_c and elapsed < 1.0
    _report(
        capsys, 1, ok,
        f"interval empty={ok_a}, collinear pin={ok_b}, square center={ok_c}, {elapsed:.3f}s",
    )


def test_criterion_2_closure_axioms(capsys):
    t0 = time.perf_counter()
    results = run_axioms_suite(trials=1000, seed=0, dims=(1, 2, 3, 4), max_n=12)
    elapsed = time.perf_counter() - t0
    failures = sum(r.failures for r in results)
    ok = failures == 0 and len(results) == 9 and elapsed < 60.0
    _report(
        capsys, 2, ok,
        f"1000 corpora x 3 generators x 3 laws, failures={failures}, {elapsed:.1f}s",
    )


def test_criterion_3_permissibility_laws(capsys):
    perm = run_permissibility_suite(trials=500, seed=0)
    group = run_groupwise_suite(trials=500, seed=0)
    failures = {r.name: r.failures for r in (*perm, *group)}
    total = sum(failures.values())
    ok = total == 0
    _report(
        capsys, 3, ok,
        f"500 trials per law (growth, stability, trichotomy, groupwise, richness, "
        f"superadditivity), failures={total}",
    )


def test_criterion_4_radon_witnesses(capsys):
    results = run_radon_suite(trials=500, seed=0, dims=(1, 2, 3))
    failures = sum(r.failures for r in results)
    ok = failures == 0
    _report(
        capsys, 4, ok,
        f"500 corpora of d+2 points, hull and box witnesses, failures={failures}",
    )


def test_criterion_5_convexity_characterizations(capsys):
    results = run_convexity_suite(trials=500, seed=0)
    failures = {r.name: r.failures for r in results}
    total = sum(failures.values())

    from permgen import check_convex_valued, splice_spec

    pair = corpus_of([[0.0, 0.0], [1.0, 1.0]])
    report = check_convex_valued(splice_spec(), pair)
    witness_ok = (
        not report.image_convex
        and report.witness is not None
        and np.allclose(report.witness.coords, [0.5, 0.5], atol=TOL)
    )
    ok = total == 0 and witness_ok
    _report(
        capsys, 5, ok,
        f"500 corpora hull-in-box and convex-image laws, failures={total}, "
        f"recombination witness (0.5,0.5)={witness_ok}",
    )


def test_criterion_6_light_tail_growth(capsys):
    t0 = time.perf_counter()
    dist = parse_distribution("gauss:d=2")
    trajectories = run_growth(
        dist, conv_spec(), 2000, [50, 200, 800, 2000], seeds=range(20), method="exact"
    )
    elapsed = time.perf_counter() - t0
    improved = sum(1 for t in trajectories if t.ratio_at(2000) > t.ratio_at(50))
    mean_final = float(np.mean([t.ratio_at(2000) for t in trajectories]))
    ok = improved >= 18 and mean_final >= 0.85 and elapsed < 600.0
    _report(
        capsys, 6, ok,
        f"gaussian d=2, 20 seeds: improved {improved}/20, mean final ratio "
        f"{mean_final:.4f} (need >= 0.85), {elapsed:.1f}s",
    )


def test_criterion_7_heavy_tail_persistence(capsys):
    t0 = time.perf_counter()
    dist = parse_distribution("pareto:d=1,alpha=1")
    below = 0
    for seed in range(200):
        pts = sample_points(dist, 2000, seed=seed)
        records = heavy_tail_bound(Corpus.from_array(pts, dim=1))  # raises on violation
        if records[-1].ratio < 0.7:
            below += 1
    elapsed = time.perf_counter() - t0
    frac = below / 200.0
    ok = frac >= 0.10 and elapsed < 300.0
    _report(
        capsys, 7, ok,
        f"pareto alpha=1, 200 seeds: bound held at every step, "
        f"final ratio < 0.7 in {frac:.3f} of seeds (need >= 0.10), {elapsed:.1f}s",
    )


def test_criterion_8_volume_cross_validation(capsys):
    rng = np.random.default_rng(42)
    within = 0
    worst = 0.0
    for i in range(50):
        n = int(rng.integers(3, 40))
        pts = rng.normal(size=(n, 2)) * rng.uniform(0.5, 3.0)
        poly = convex_hull(corpus_of(pts))
        exact = volume(poly)
        est, se = mc_volume(poly.contains_batch, poly, samples=1_000_000, seed=i)
        dev = abs(est - exact) / se if se > 0 else 0.0
        worst = max(worst, dev)
        within += dev <= 4.0
    ok = within >= 48
    _report(
        capsys, 8, ok,
        f"50 planar bodies, 1e6 samples: within 4 stderr in {within}/50, "
        f"worst deviation {worst:.2f} stderr",
    )


def test_criterion_9_determinism(capsys, tmp_path):
    args = [
        "simulate", "gauss:d=2", "conv",
        "--nmax", "120", "--checkpoints", "40,120", "--seeds", "3",
    ]
    d1, d2 = tmp_path / "run1", tmp_path / "run2"
    assert cli_main([*args, "--out", str(d1)]) == 0
    assert cli_main([*args, "--out", str(d2)]) == 0
    same_traj = (d1 / "trajectories.csv").read_bytes() == (d2 / "trajectories.csv").read_bytes()
    same_stats = (d1 / "stats.csv").read_bytes() == (d2 / "stats.csv").read_bytes()
    ok = same_traj and same_stats
    _report(
        capsys, 9, ok,
        f"repeated identical invocations: trajectories identical={same_traj}, "
        f"stats identical={same_stats}",
    )
