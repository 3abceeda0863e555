"""Sampled planar trajectories and fixed-step RK4 integration of sensor dynamics.

A sensor with speed ``s`` and heading ``theta`` moving through a flow ``F``
obeys ``p' = s (cos theta, sin theta) + F(p)``. Field evaluators used here
are vectorised callables mapping an ``(n, 2)`` array of points to an
``(n, 2)`` array of flow vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

FieldEvaluator = Callable[[np.ndarray], np.ndarray]

DEFAULT_STEPS = 100


class DivergenceError(RuntimeError):
    """A simulated state became non-finite, or an iteration blew up."""

    def __init__(self, message, iteration=None):
        super().__init__(message)
        self.iteration = iteration


@dataclass(frozen=True)
class Box:
    """Axis-aligned rectangle ``[xmin, xmax] x [ymin, ymax]``."""

    xmin: float = 0.0
    xmax: float = 1.0
    ymin: float = 0.0
    ymax: float = 1.0

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError(f"degenerate box {self}")

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float).reshape(-1, 2)
        return ((pts[:, 0] >= self.xmin) & (pts[:, 0] <= self.xmax)
                & (pts[:, 1] >= self.ymin) & (pts[:, 1] <= self.ymax))

    def grid(self, n: int) -> np.ndarray:
        """``n x n`` uniform grid including the edges, as an ``(n*n, 2)`` array.

        Points are ordered row by row (y outer, x inner).
        """
        if n < 2:
            raise ValueError("grid needs at least 2 points per side")
        gx, gy = np.meshgrid(np.linspace(self.xmin, self.xmax, n),
                             np.linspace(self.ymin, self.ymax, n))
        return np.column_stack([gx.ravel(), gy.ravel()])

    def as_tuple(self):
        return (self.xmin, self.xmax, self.ymin, self.ymax)


@dataclass(frozen=True, eq=False)
class SampledTrajectory:
    """Planar path sampled on the uniform grid ``t_i = i * horizon / steps``.

    ``points`` has shape ``(steps + 1, 2)``; ``steps`` must be even so the
    grid supports composite Simpson weights.
    """

    points: np.ndarray
    horizon: float
    label: str = ""

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise ValueError(f"points must have shape (F+1, 2), got {pts.shape}")
        steps = pts.shape[0] - 1
        if steps < 2 or steps % 2:
            raise ValueError(f"number of steps must be even and >= 2, got {steps}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise ValueError(f"horizon must be positive, got {self.horizon!r}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("trajectory contains non-finite points")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "horizon", float(self.horizon))

    @property
    def steps(self) -> int:
        return self.points.shape[0] - 1

    @property
    def h(self) -> float:
        return self.horizon / self.steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(0.0, self.horizon, self.steps + 1)

    @property
    def start(self) -> np.ndarray:
        return self.points[0]

    @property
    def end(self) -> np.ndarray:
        return self.points[-1]

    def __eq__(self, other):
        if not isinstance(other, SampledTrajectory):
            return NotImplemented
        return (self.horizon == other.horizon and self.label == other.label
                and np.array_equal(self.points, other.points))

    __hash__ = None


@dataclass(frozen=True)
class TomographySample:
    """One experiment: where a sensor started, how it was steered, where it ended up."""

    id: str
    start: tuple
    theta: float
    speed: float
    horizon: float
    observed_final: tuple

    def __post_init__(self):
        if not self.speed > 0:
            raise ValueError(f"sample {self.id}: speed must be positive")
        if not self.horizon > 0:
            raise ValueError(f"sample {self.id}: horizon must be positive")
        object.__setattr__(self, "start", (float(self.start[0]), float(self.start[1])))
        object.__setattr__(self, "observed_final",
                           (float(self.observed_final[0]), float(self.observed_final[1])))
        object.__setattr__(self, "theta", float(self.theta))
        object.__setattr__(self, "speed", float(self.speed))
        object.__setattr__(self, "horizon", float(self.horizon))

    @property
    def velocity(self) -> np.ndarray:
        """Commanded (still-water) velocity ``speed * (cos theta, sin theta)``."""
        return self.speed * np.array([math.cos(self.theta), math.sin(self.theta)])


def zero_field(points: np.ndarray) -> np.ndarray:
    return np.zeros_like(np.asarray(points, dtype=float))


def integrate_rk4_batch(starts, velocities, field: Optional[FieldEvaluator],
                        horizons, steps: int = DEFAULT_STEPS) -> np.ndarray:
    """Integrate ``p' = v_k + field(p)`` for every row ``k`` at once.

    Each trajectory uses its own step ``horizons[k] / steps``; all share the
    step count. Returns an array of shape ``(M, steps + 1, 2)``.

    Raises
    ------
    DivergenceError
        If any state coordinate becomes non-finite.
    """
    if steps < 2 or steps % 2:
        raise ValueError(f"steps must be even and >= 2, got {steps}")
    p = np.array(starts, dtype=float).reshape(-1, 2)
    v = np.asarray(velocities, dtype=float).reshape(-1, 2)
    hz = np.broadcast_to(np.asarray(horizons, dtype=float), (p.shape[0],))
    if np.any(hz <= 0):
        raise ValueError("horizons must be positive")
    if field is None:
        field = zero_field
    h = (hz / steps)[:, None]
    half = 0.5 * h
    out = np.empty((p.shape[0], steps + 1, 2))
    out[:, 0] = p

    def rhs(q):
        return v + field(q)

    for i in range(steps):
        k1 = rhs(p)
        k2 = rhs(p + half * k1)
        k3 = rhs(p + half * k2)
        k4 = rhs(p + h * k3)
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(p)):
            raise DivergenceError(f"RK4 state became non-finite at step {i + 1}")
        out[:, i + 1] = p
    return out


def integrate_rk4(start, speed: float, theta: float, field: Optional[FieldEvaluator],
                  horizon: float, steps: int = DEFAULT_STEPS, label: str = "") -> SampledTrajectory:
    """Classical RK4 solution of ``p' = speed (cos theta, sin theta) + field(p)``."""
    velocity = speed * np.array([math.cos(theta), math.sin(theta)])
    pts = integrate_rk4_batch(np.asarray(start, dtype=float)[None, :], velocity[None, :],
                              field, [horizon], steps)[0]
    return SampledTrajectory(pts, horizon, label)


def simulate_samples(samples: Sequence[TomographySample], field: Optional[FieldEvaluator],
                     steps: int = DEFAULT_STEPS) -> list:
    """Simulate every sample's dynamics under ``field`` from its start point."""
    starts = np.array([s.start for s in samples])
    vel = np.array([s.velocity for s in samples])
    hz = np.array([s.horizon for s in samples])
    pts = integrate_rk4_batch(starts, vel, field, hz, steps)
    return [SampledTrajectory(pts[k], s.horizon, s.id) for k, s in enumerate(samples)]


def displacement(sample: TomographySample, predicted: SampledTrajectory) -> np.ndarray:
    """Endpoint mismatch ``observed_final - predicted(T)`` as a 2-vector."""
    if not math.isclose(sample.horizon, predicted.horizon, rel_tol=1e-12):
        raise ValueError(f"sample {sample.id}: horizon {sample.horizon} does not match "
                         f"predicted trajectory horizon {predicted.horizon}")
    return np.asarray(sample.observed_final) - predicted.end
