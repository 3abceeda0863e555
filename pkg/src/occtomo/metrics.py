"""Pointwise error metrics between vector fields."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class RelativeErrors(NamedTuple):
    max_error: float
    mean_error: float
    n_excluded: int = 0


class NormStats(NamedTuple):
    max: float
    mean: float
    variance: float


@dataclass(frozen=True)
class FieldComparison:
    sample_points: np.ndarray
    max_error: float
    mean_error: float
    max_norm_diff: float
    mean_norm_diff: float
    variance_norm_diff: float
    n_excluded: int = 0

    def to_dict(self) -> dict:
        return {
            "n_points": int(len(self.sample_points)),
            "n_excluded": self.n_excluded,
            "max_error": self.max_error,
            "mean_error": self.mean_error,
            "max_norm_diff": self.max_norm_diff,
            "mean_norm_diff": self.mean_norm_diff,
            "variance_norm_diff": self.variance_norm_diff,
        }


def _values(f, pts):
    return np.asarray(f(pts), dtype=float).reshape(-1, 2)


def relative_errors(reference, estimate, points) -> RelativeErrors:
    """Max and mean of ``|V - W| / |V|`` over points where ``V`` is nonzero.

    Points where the reference vanishes are skipped and counted.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    v = _values(reference, pts)
    w = _values(estimate, pts)
    ref_norm = np.linalg.norm(v, axis=1)
    keep = ref_norm > 0
    if not np.any(keep):
        raise ValueError("reference field vanishes at every sample point")
    rel = np.linalg.norm(v[keep] - w[keep], axis=1) / ref_norm[keep]
    return RelativeErrors(float(rel.max()), float(rel.mean()), int((~keep).sum()))


def norm_difference_stats(a, b, points) -> NormStats:
    """Max, mean and population variance of ``|A(x) - B(x)|``."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("need at least one point")
    d = np.linalg.norm(_values(a, pts) - _values(b, pts), axis=1)
    return NormStats(float(d.max()), float(d.mean()), float(d.var()))


def compare_fields(reference, estimate, points) -> FieldComparison:
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    rel = relative_errors(reference, estimate, pts)
    stats = norm_difference_stats(reference, estimate, pts)
    return FieldComparison(pts, rel.max_error, rel.mean_error, stats.max, stats.mean,
                           stats.variance, rel.n_excluded)
