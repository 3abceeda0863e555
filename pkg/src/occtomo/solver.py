"""Iterative motion tomography with an adaptive occupation-kernel basis.

Each iteration simulates every sensor under the current field estimate
and measures the endpoint mismatch. The field is then re-fitted on the
occupation kernels of the freshly simulated paths so that, for every
sample ``i``,

    <F_new, Gamma_i> = D_i + <F_old, Gamma_i>

holds componentwise. Both field components share the Gram matrix and its
Cholesky factor.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from occtomo import _backend
from occtomo.kernel import KernelSpec
from occtomo.occupation import GramMatrix, assemble_gram, cross_gram, simpson_weights
from occtomo.trajectory import (
    DEFAULT_STEPS,
    Box,
    DivergenceError,
    SampledTrajectory,
    TomographySample,
    simulate_samples,
)

log = logging.getLogger(__name__)


class GramFactorizationError(np.linalg.LinAlgError):
    """The (regularized) Gram matrix is not numerically positive definite."""

    def __init__(self, message, condition=float("nan"), iteration=None):
        super().__init__(message)
        self.condition = condition
        self.iteration = iteration


@dataclass(frozen=True)
class SolverConfig:
    iterations: int = 10
    steps: int = DEFAULT_STEPS
    mu: float = 1.0
    regularization: float = 0.0
    divergence_factor: float = 1e3
    region: Optional[Box] = None

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if self.steps < 2 or self.steps % 2:
            raise ValueError("steps must be even and >= 2")
        if self.regularization < 0:
            raise ValueError("regularization must be non-negative")
        if not self.divergence_factor > 0:
            raise ValueError("divergence_factor must be positive")

    @property
    def kernel(self) -> KernelSpec:
        return KernelSpec(self.mu)


class FieldEstimate:
    """Vector field ``x -> sum_j w_j * Gamma_{b_j}(x)`` over an occupation-kernel basis.

    ``weights`` has shape ``(M, 2)``: column 0 holds the x-component weights,
    column 1 the y-component weights. Calling the estimate evaluates it.
    """

    def __init__(self, basis: Sequence[SampledTrajectory], weights, kernel: KernelSpec):
        self.basis = tuple(basis)
        w = np.array(weights, dtype=float).reshape(len(self.basis), 2)
        if not np.all(np.isfinite(w)):
            raise ValueError("field weights must be finite")
        w.setflags(write=False)
        self.weights = w
        self.kernel = kernel
        if self.basis:
            nodes = np.concatenate([b.points for b in self.basis])
            node_w = np.concatenate([
                simpson_weights(b.steps, b.horizon)[:, None] * w[j]
                for j, b in enumerate(self.basis)
            ])
            self._nodes = np.ascontiguousarray(nodes)
            self._node_weights = np.ascontiguousarray(node_w)
        else:
            self._nodes = np.zeros((0, 2))
            self._node_weights = np.zeros((0, 2))

    @classmethod
    def zero(cls, kernel: KernelSpec) -> "FieldEstimate":
        return cls((), np.zeros((0, 2)), kernel)

    @property
    def weights_x(self) -> np.ndarray:
        return self.weights[:, 0]

    @property
    def weights_y(self) -> np.ndarray:
        return self.weights[:, 1]

    def __len__(self):
        return len(self.basis)

    def __call__(self, x) -> np.ndarray:
        return eval_field(self, x)

    def __repr__(self):
        return f"FieldEstimate(M={len(self.basis)}, mu={self.kernel.mu})"


def eval_field(est: FieldEstimate, x) -> np.ndarray:
    """Evaluate ``est`` at one point (returns shape ``(2,)``) or at ``(n, 2)`` points."""
    xs = np.asarray(x, dtype=float)
    single = xs.ndim == 1
    pts = np.ascontiguousarray(xs.reshape(-1, 2))
    if not est.basis:
        out = np.zeros((pts.shape[0], 2))
    else:
        out = _backend.gauss_sum(pts, est._nodes, est._node_weights, est.kernel.mu)
    return out[0] if single else out


@dataclass
class IterationRecord:
    iteration: int
    displacements: np.ndarray
    residual_norm: float
    gram_condition: float
    rhs: np.ndarray
    estimate: FieldEstimate = field(repr=False)
    n_outside: int = 0

    @property
    def weights(self) -> np.ndarray:
        return self.estimate.weights


def solve_weights(gram, rhs_x, rhs_y, regularization: float = 0.0):
    """Solve ``(G + regularization * I) w = rhs`` for both field components.

    One Cholesky factorization serves both right-hand sides.

    Raises
    ------
    GramFactorizationError
        If the matrix is not numerically positive definite; the exception
        carries the 2-norm condition estimate.
    """
    g = gram.entries if isinstance(gram, GramMatrix) else np.asarray(gram, dtype=float)
    rx = np.asarray(rhs_x, dtype=float)
    ry = np.asarray(rhs_y, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("Gram matrix must be square")
    if rx.shape != (g.shape[0],) or ry.shape != (g.shape[0],):
        raise ValueError("right-hand sides must match the Gram matrix size")
    a = g + regularization * np.eye(g.shape[0]) if regularization else g
    try:
        factor = scipy.linalg.cho_factor(a, lower=False)
    except np.linalg.LinAlgError as exc:
        cond = float(np.linalg.cond(a))
        raise GramFactorizationError(
            f"Gram matrix is not positive definite (condition estimate {cond:.3e}); "
            "coincident trajectories or too wide a kernel?", condition=cond) from exc
    w = scipy.linalg.cho_solve(factor, np.column_stack([rx, ry]))
    if not np.all(np.isfinite(w)):
        cond = float(np.linalg.cond(a))
        raise GramFactorizationError(f"solve produced non-finite weights (condition {cond:.3e})",
                                     condition=cond)
    return w[:, 0].copy(), w[:, 1].copy()


def mt_iterate(samples: Sequence[TomographySample], config: SolverConfig = SolverConfig(),
               callback: Optional[Callable[[IterationRecord], None]] = None):
    """Run iterations ``n = 0, ..., N`` of the predictor-corrector scheme.

    Returns the final estimate and one record per iteration; record ``n``
    holds the displacements ``D_n`` and the estimate it produced.

    Raises
    ------
    GramFactorizationError
        With ``iteration`` set, if a Gram matrix cannot be factored.
    DivergenceError
        If a simulation goes non-finite or the residual grows beyond
        ``divergence_factor`` times its initial value.
    """
    samples = list(samples)
    if not samples:
        raise ValueError("need at least one sample")
    kernel = config.kernel
    observed = np.array([s.observed_final for s in samples])
    estimate = FieldEstimate.zero(kernel)
    records = []
    initial = None
    for n in range(config.iterations + 1):
        try:
            trajs = simulate_samples(samples, estimate if n else None, config.steps)
        except DivergenceError as exc:
            raise DivergenceError(f"iteration {n}: {exc}", iteration=n) from exc
        ends = np.array([t.end for t in trajs])
        disp = observed - ends
        residual = float(np.max(np.linalg.norm(disp, axis=1)))
        if initial is None:
            initial = residual
        elif initial > 0 and residual > config.divergence_factor * initial:
            raise DivergenceError(
                f"iteration {n}: residual {residual:.3e} exceeds {config.divergence_factor:g} x "
                f"initial {initial:.3e}", iteration=n)

        n_outside = 0
        if config.region is not None:
            n_outside = sum(not np.all(config.region.contains(t.points)) for t in trajs)
            if n_outside:
                log.warning("iteration %d: %d trajectories leave the region", n, n_outside)

        gram = assemble_gram(kernel, trajs)
        rhs = disp.copy()
        if estimate.basis:
            rhs += cross_gram(kernel, trajs, estimate.basis) @ estimate.weights
        try:
            wx, wy = solve_weights(gram, rhs[:, 0], rhs[:, 1], config.regularization)
        except GramFactorizationError as exc:
            raise GramFactorizationError(f"iteration {n}: {exc}", condition=exc.condition,
                                         iteration=n) from exc
        cond = gram.condition()
        estimate = FieldEstimate(trajs, np.column_stack([wx, wy]), kernel)
        rec = IterationRecord(n, disp, residual, cond, rhs, estimate, n_outside)
        records.append(rec)
        log.info("iteration %d: residual %.3e, Gram condition %.3e", n, residual, cond)
        if callback is not None:
            callback(rec)
    return estimate, records
