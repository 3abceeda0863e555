"""Occupation kernels and their Gram matrices at the quadrature level.

The occupation kernel of a path ``gamma`` on ``[0, T]`` is the RKHS function
``x -> int_0^T K(x, gamma(t)) dt``. Every routine here works with its
composite-Simpson approximation on the trajectory's own grid, so inner
products are double Simpson sums and identities between them hold exactly
in linear algebra rather than up to quadrature error.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from occtomo import _backend
from occtomo.kernel import KernelSpec
from occtomo.trajectory import SampledTrajectory


def simpson_weights(steps: int, horizon: float) -> np.ndarray:
    """Composite Simpson weights ``(h/3) * (1, 4, 2, 4, ..., 2, 4, 1)``."""
    if steps < 2 or steps % 2:
        raise ValueError(f"Simpson's rule needs an even number of steps >= 2, got {steps}")
    w = np.ones(steps + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return w * (horizon / steps / 3.0)


def _stack(trajs: Sequence[SampledTrajectory]):
    if len(trajs) == 0:
        raise ValueError("need at least one trajectory")
    steps = trajs[0].steps
    if any(t.steps != steps for t in trajs):
        raise ValueError("all trajectories must share the quadrature step count")
    pts = np.ascontiguousarray(np.stack([t.points for t in trajs]))
    wts = np.ascontiguousarray(np.stack([simpson_weights(t.steps, t.horizon) for t in trajs]))
    return pts, wts


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Pairwise occupation-kernel inner products of a trajectory family."""

    entries: np.ndarray
    basis_ids: tuple
    quadrature_steps: int
    kernel: KernelSpec

    def __post_init__(self):
        e = np.array(self.entries, dtype=float)
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("Gram matrix must be square")
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)
        object.__setattr__(self, "basis_ids", tuple(self.basis_ids))

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def eigvalsh(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)

    def condition(self) -> float:
        """Spectral condition number ``lambda_max / max(lambda_min, eps)``."""
        ev = self.eigvalsh()
        lo = max(ev[0], np.finfo(float).eps * max(ev[-1], np.finfo(float).tiny))
        return float(ev[-1] / lo)


def occupation_eval(kernel: KernelSpec, traj: SampledTrajectory, x):
    """Simpson-approximated occupation kernel of ``traj`` evaluated at ``x``.

    ``x`` may be a single point (returns a float) or an ``(n, 2)`` array
    (returns an ``(n,)`` array).
    """
    xs = np.asarray(x, dtype=float)
    single = xs.ndim == 1
    pts = np.ascontiguousarray(xs.reshape(-1, 2))
    w = simpson_weights(traj.steps, traj.horizon)[:, None]
    vals = _backend.gauss_sum(pts, np.ascontiguousarray(traj.points), w, kernel.mu)[:, 0]
    return float(vals[0]) if single else vals


def occupation_inner(kernel: KernelSpec, a: SampledTrajectory, b: SampledTrajectory) -> float:
    """Double Simpson approximation of ``int int K(a(t), b(tau)) dt dtau``.

    Each trajectory is integrated on its own grid, so step counts and
    horizons may differ.
    """
    pa, wa = _stack([a])
    pb, wb = _stack([b])
    return float(_backend.occupation_gram(pa, wa, pb, wb, kernel.mu, False)[0, 0])


def assemble_gram(kernel: KernelSpec, basis: Sequence[SampledTrajectory]) -> GramMatrix:
    """Gram matrix of the occupation kernels of ``basis`` (upper triangle, mirrored)."""
    pts, wts = _stack(basis)
    entries = _backend.occupation_gram(pts, wts, pts, wts, kernel.mu, True)
    return GramMatrix(entries, [t.label for t in basis], basis[0].steps, kernel)


def cross_gram(kernel: KernelSpec, new_basis: Sequence[SampledTrajectory],
               old_basis: Sequence[SampledTrajectory]) -> np.ndarray:
    """Matrix of inner products ``<Gamma_new[i], Gamma_old[j]>``."""
    pa, wa = _stack(new_basis)
    pb, wb = _stack(old_basis)
    return _backend.occupation_gram(pa, wa, pb, wb, kernel.mu, False)


def occupation_distance_sq(kernel: KernelSpec, a: SampledTrajectory, b: SampledTrajectory) -> float:
    """Squared RKHS distance ``<a, a> + <b, b> - 2 <a, b>`` between Simpson occupation kernels."""
    return (occupation_inner(kernel, a, a) + occupation_inner(kernel, b, b)
            - 2.0 * occupation_inner(kernel, a, b))
