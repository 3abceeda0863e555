"""Analytic ground-truth flow fields and synthetic tomography datasets."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from occtomo.trajectory import (
    DEFAULT_STEPS,
    Box,
    TomographySample,
    integrate_rk4_batch,
)


@dataclass(frozen=True)
class GaussianBump:
    coefficient: float
    shape: float
    center: tuple

    def __post_init__(self):
        if not self.shape > 0:
            raise ValueError("bump shape must be positive")
        object.__setattr__(self, "center", (float(self.center[0]), float(self.center[1])))

    def __call__(self, pts: np.ndarray) -> np.ndarray:
        d = pts - np.asarray(self.center)
        return self.coefficient * np.exp(-self.shape * (d[:, 0] ** 2 + d[:, 1] ** 2))


@dataclass(frozen=True)
class AnalyticField:
    """``scale * (sum of x bumps, sum of y bumps)``."""

    bumps_x: tuple
    bumps_y: tuple
    scale: float = 1.0

    def __call__(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        pts = xs.reshape(-1, 2)
        fx = sum((b(pts) for b in self.bumps_x), np.zeros(pts.shape[0]))
        fy = sum((b(pts) for b in self.bumps_y), np.zeros(pts.shape[0]))
        out = self.scale * np.column_stack([fx, fy])
        return out[0] if xs.ndim == 1 else out

    def jacobian(self, x) -> np.ndarray:
        """Analytic Jacobian ``d F_i / d x_j`` at one point, shape ``(2, 2)``."""
        p = np.asarray(x, dtype=float)
        rows = []
        for bumps in (self.bumps_x, self.bumps_y):
            g = np.zeros(2)
            for b in bumps:
                d = p - np.asarray(b.center)
                g += -2.0 * b.shape * d * b.coefficient * math.exp(-b.shape * d @ d)
            rows.append(self.scale * g)
        return np.array(rows)

    def max_magnitude_bound(self) -> float:
        """``scale * sum |coefficients|`` per component, the larger of the two."""
        return self.scale * max(sum(abs(b.coefficient) for b in self.bumps_x),
                                sum(abs(b.coefficient) for b in self.bumps_y))


@dataclass(frozen=True)
class ConstantField:
    value: tuple

    def __call__(self, x) -> np.ndarray:
        xs = np.asarray(x, dtype=float)
        out = np.broadcast_to(np.asarray(self.value, dtype=float), xs.reshape(-1, 2).shape).copy()
        return out[0] if xs.ndim == 1 else out


def experiment1_field() -> AnalyticField:
    """Four-bump test field on the unit square, scaled by 1/8."""
    return AnalyticField(
        bumps_x=(
            GaussianBump(5.0, 2.0, (0.25, 0.25)),
            GaussianBump(-0.2, 1.0, (0.25, 0.75)),
            GaussianBump(2.0, 1.0, (0.75, 0.75)),
            GaussianBump(-5.0, 2.0, (0.75, 0.25)),
        ),
        bumps_y=(
            GaussianBump(3.0, 1.0, (0.25, 0.25)),
            GaussianBump(1.0, 1.0, (0.25, 0.75)),
            GaussianBump(-3.0, 3.0, (0.75, 0.75)),
            GaussianBump(1.0, 1.0, (0.75, 0.25)),
        ),
        scale=1.0 / 8.0,
    )


def field_from_name(name: str):
    """Parse ``zero``, ``experiment1`` or ``constant:a,b``."""
    key = name.strip().lower()
    if key == "zero":
        return ConstantField((0.0, 0.0))
    if key == "experiment1":
        return experiment1_field()
    if key.startswith("constant:"):
        parts = key.split(":", 1)[1].split(",")
        if len(parts) != 2:
            raise ValueError(f"constant field needs two components: {name!r}")
        return ConstantField((float(parts[0]), float(parts[1])))
    raise ValueError(f"unknown field {name!r}; expected zero, experiment1 or constant:a,b")


def generate_samples(field, M: int, region: Box = Box(), speed: float = 1.0,
                     horizon: float = 1.0, seed: int = 0, steps: int = DEFAULT_STEPS,
                     oversample: int = 1) -> list:
    """Draw ``M`` random starts and headings, simulate the truth, record endpoints.

    Starts are uniform in ``region`` and headings uniform in ``[0, 2 pi)``,
    both from ``numpy.random.default_rng(seed)``. The truth is integrated
    with RK4 on ``steps * oversample`` steps.
    """
    if M < 1:
        raise ValueError("M must be >= 1")
    if oversample < 1:
        raise ValueError("oversample must be >= 1")
    rng = np.random.default_rng(seed)
    starts = np.column_stack([rng.uniform(region.xmin, region.xmax, M),
                              rng.uniform(region.ymin, region.ymax, M)])
    thetas = rng.uniform(0.0, 2.0 * math.pi, M)
    return samples_from_headings(field, starts, thetas, speed, horizon, steps * oversample)


def samples_from_headings(field, starts, thetas: Sequence[float], speed: float = 1.0,
                          horizon: float = 1.0, steps: int = DEFAULT_STEPS) -> list:
    """Simulate given starts and headings under ``field``; ids are ``s000``, ``s001``, ..."""
    starts = np.asarray(starts, dtype=float).reshape(-1, 2)
    thetas = np.asarray(thetas, dtype=float)
    vel = speed * np.column_stack([np.cos(thetas), np.sin(thetas)])
    paths = integrate_rk4_batch(starts, vel, field, horizon, steps)
    return [
        TomographySample(f"s{k:03d}", starts[k], thetas[k], speed, horizon, paths[k, -1])
        for k in range(starts.shape[0])
    ]
