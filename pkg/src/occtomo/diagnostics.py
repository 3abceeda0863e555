"""Spectral diagnostics for occupation-kernel Gram matrices.

For a Gaussian kernel ``exp(-mu |x - y|^2)`` and ``N`` trajectories on
``[0, T]`` with separation ``q`` (half the smallest distance between points
of distinct trajectories):

* ``lambda_min >= C2 / (2 mu) * exp(-M2^2 / (q^2 mu)) * T^2 / q^2`` with
  ``M2 = 12 (pi / 9)^(1/3)`` and ``C2 = M2^2 / 16``;
* ``lambda_max <= N T^2 Phi(0)`` (Gershgorin), with ``Phi(0) = 1``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np
from scipy.spatial.distance import cdist

from occtomo.occupation import GramMatrix
from occtomo.trajectory import SampledTrajectory

M2 = 12.0 * (math.pi / 9.0) ** (1.0 / 3.0)
C2 = M2 ** 2 / 16.0


@dataclass(frozen=True)
class SpectralReport:
    lambda_min: float
    lambda_max: float
    lambda_min_bound: float
    lambda_max_bound: float
    separation_q: float
    condition: float
    n_trajectories: int
    horizon: float
    grid_steps: int
    mixed_horizons: bool = False
    c2_convention: str = "M2^2/16"

    @property
    def min_bound_holds(self) -> bool:
        return self.lambda_min >= self.lambda_min_bound

    @property
    def max_bound_holds(self) -> bool:
        return self.lambda_max <= self.lambda_max_bound

    def to_dict(self) -> dict:
        d = asdict(self)
        d["min_bound_holds"] = self.min_bound_holds
        d["max_bound_holds"] = self.max_bound_holds
        return d

    def to_text(self) -> str:
        return "\n".join(f"{k} = {v}" for k, v in self.to_dict().items()) + "\n"


def separation_distance(trajectories: Sequence[SampledTrajectory]) -> float:
    """Half the minimum grid-point distance between distinct trajectories."""
    if len(trajectories) < 2:
        raise ValueError("separation distance needs at least two trajectories")
    best = math.inf
    for j in range(len(trajectories)):
        for k in range(j + 1, len(trajectories)):
            d = cdist(trajectories[j].points, trajectories[k].points).min()
            best = min(best, float(d))
    return 0.5 * best


def lambda_min_bound(mu: float, q: float, horizon: float) -> float:
    """Lower bound on the smallest Gram eigenvalue; zero when ``q == 0``."""
    if q <= 0:
        return 0.0
    return C2 / (2.0 * mu) * math.exp(-M2 ** 2 / (q * q * mu)) * horizon ** 2 / (q * q)


def lambda_max_bound(n: int, horizon: float, phi0: float = 1.0) -> float:
    return n * horizon ** 2 * phi0


def eigen_bounds(gram: GramMatrix, trajectories: Sequence[SampledTrajectory]) -> SpectralReport:
    """Exact extremal eigenvalues of ``gram`` next to their theoretical bounds.

    With mixed horizons the bounds use the largest one and the report is
    flagged.
    """
    if len(trajectories) != gram.size:
        raise ValueError("trajectory count does not match the Gram matrix")
    ev = gram.eigvalsh()
    lo, hi = float(ev[0]), float(ev[-1])
    horizons = {t.horizon for t in trajectories}
    horizon = max(horizons)
    q = separation_distance(trajectories) if len(trajectories) > 1 else math.inf
    mu = gram.kernel.mu
    if math.isinf(q):
        # a single trajectory has no competitor; the bound is vacuous
        min_bound = 0.0
    else:
        min_bound = lambda_min_bound(mu, q, horizon)
    eps = np.finfo(float).eps * max(hi, np.finfo(float).tiny)
    return SpectralReport(
        lambda_min=lo,
        lambda_max=hi,
        lambda_min_bound=min_bound,
        lambda_max_bound=lambda_max_bound(gram.size, horizon, gram.kernel.phi0),
        separation_q=q,
        condition=hi / max(lo, eps),
        n_trajectories=gram.size,
        horizon=horizon,
        grid_steps=gram.quadrature_steps,
        mixed_horizons=len(horizons) > 1,
    )
