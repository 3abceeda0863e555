"""Gaussian reproducing kernel K(x, y) = exp(-mu * |x - y|^2)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class KernelSpec:
    """Scalar Gaussian kernel on the plane.

    Parameters
    ----------
    mu : float
        Inverse squared length scale, in inverse squared workspace units.
        The experiments' "kernel width" is this value directly.
    """

    mu: float
    name: str = "gaussian"

    def __post_init__(self):
        mu = float(self.mu)
        if not (math.isfinite(mu) and mu > 0):
            raise ValueError(f"kernel parameter mu must be positive and finite, got {self.mu!r}")
        if self.name != "gaussian":
            raise ValueError(f"unsupported kernel {self.name!r}")
        object.__setattr__(self, "mu", mu)

    @property
    def phi0(self) -> float:
        """Value of the radial profile at zero distance."""
        return 1.0

    def profile(self, sqdist):
        """Kernel as a function of the squared distance."""
        return np.exp(-self.mu * np.asarray(sqdist, dtype=float))

    def __call__(self, x, y) -> float:
        return eval_kernel(self, x, y)

    def matrix(self, xs, ys) -> np.ndarray:
        """Pointwise kernel matrix between two point sets of shape (n, 2) and (m, 2)."""
        xs = np.asarray(xs, dtype=float).reshape(-1, 2)
        ys = np.asarray(ys, dtype=float).reshape(-1, 2)
        diff = xs[:, None, :] - ys[None, :, :]
        return self.profile(diff[..., 0] ** 2 + diff[..., 1] ** 2)

    def to_dict(self) -> dict:
        return {"name": self.name, "mu": self.mu}

    @classmethod
    def from_dict(cls, data: dict) -> "KernelSpec":
        return cls(mu=data["mu"], name=data.get("name", "gaussian"))


def eval_kernel(spec: KernelSpec, x, y) -> float:
    """Evaluate ``exp(-mu * |x - y|^2)`` for two planar points."""
    dx = float(x[0]) - float(y[0])
    dy = float(x[1]) - float(y[1])
    return math.exp(-spec.mu * (dx * dx + dy * dy))
