"""Shared oracles for the test suite.

Membership oracles here deliberately avoid the package's own geometry
paths: hull membership is answered by a barycentric-coordinate LP, box and
recombination membership by direct coordinate comparisons. Permissible-set
oracles apply the leave-one-out definition literally on top of those.
"""
from __future__ import annotations

import numpy as np
import pytest
from scipy.optimize import linprog

from permgen import Corpus, Creation


def oracle_in_hull(points: np.ndarray, x, tol: float = 1e-9) -> bool:
    """Barycentric LP: minimal L1 distance between x and any convex combination.

    min sum(s) subject to -s <= P^T w - x <= s, sum(w) = 1, w >= 0; the
    point is inside iff the optimum is within tolerance.
    """
    P = np.asarray(points, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    n, d = P.shape
    c = np.concatenate([np.zeros(n), np.ones(d)])
    A_ub = np.block([[P.T, -np.eye(d)], [-P.T, -np.eye(d)]])
    b_ub = np.concatenate([x, -x])
    A_eq = np.concatenate([np.ones(n), np.zeros(d)]).reshape(1, -1)
    res = linprog(
        c,
        A_ub=A_ub,
        b_ub=b_ub,
        A_eq=A_eq,
        b_eq=[1.0],
        bounds=[(0, None)] * n + [(None, None)] * d,
        method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"oracle LP ended with status {res.status}")
    return float(res.fun) <= tol * max(1, d)


def oracle_in_box(points: np.ndarray, x, tol: float = 1e-9) -> bool:
    P = np.asarray(points, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return bool(np.all(x >= P.min(axis=0) - tol) and np.all(x <= P.max(axis=0) + tol))


def oracle_in_splice(points: np.ndarray, x, tol: float = 1e-9) -> bool:
    P = np.asarray(points, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    return all(np.abs(P[:, k] - x[k]).min() <= tol for k in range(P.shape[1]))


_ORACLES = {"conv": oracle_in_hull, "box": oracle_in_box, "splice": oracle_in_splice}


def oracle_permissible(kind: str, points: np.ndarray, x, tol: float = 1e-9) -> bool:
    """Leave-one-out definition applied literally over every corpus item."""
    P = np.asarray(points, dtype=float)
    member = _ORACLES[kind]
    for i in range(len(P)):
        rest = np.delete(P, i, axis=0)
        if len(rest) == 0 or not member(rest, x, tol):
            return False
    return True


def corpus_of(rows, dim=None) -> Corpus:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return Corpus((Creation(tuple(r)) for r in arr), dim=dim or arr.shape[1])


def regular_polygon(k: int, radius: float = 1.0, phase: float = 0.0) -> np.ndarray:
    angles = phase + 2.0 * np.pi * np.arange(k) / k
    return radius * np.column_stack([np.cos(angles), np.sin(angles)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
