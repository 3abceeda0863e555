import numpy as np
import pytest

from occtomo.trajectory import SampledTrajectory

ACCEPTANCE_LINES = []


def analytic_path(fn, horizon, steps, label=""):
    """Sample an analytic path ``fn(t) -> (x, y)`` on the uniform grid."""
    t = np.linspace(0.0, horizon, steps + 1)
    return SampledTrajectory(np.column_stack(fn(t)), horizon, label)


def simpson_1d(steps, horizon):
    # independent of occtomo.occupation.simpson_weights
    h = horizon / steps
    w = np.array([1.0] + [4.0 if i % 2 else 2.0 for i in range(1, steps)] + [1.0])
    return w * h / 3.0


def fine_inner(fa, fb, mu, horizon_a=1.0, horizon_b=1.0, steps=4096):
    """Brute-force double Simpson of exp(-mu |a(t) - b(s)|^2) on a fine grid."""
    ta = np.linspace(0.0, horizon_a, steps + 1)
    tb = np.linspace(0.0, horizon_b, steps + 1)
    a = np.column_stack(fa(ta))
    b = np.column_stack(fb(tb))
    wa = simpson_1d(steps, horizon_a)
    wb = simpson_1d(steps, horizon_b)
    total = 0.0
    for lo in range(0, steps + 1, 512):
        d = a[lo:lo + 512, None, :] - b[None, :, :]
        total += wa[lo:lo + 512] @ np.exp(-mu * (d ** 2).sum(-1)) @ wb
    return total


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def separated_family(seed, n=5, steps=100, horizon=1.0):
    """``n`` unit-speed curved trajectories around a polygon of random radius.

    The paths bend under a random smooth Gaussian-bump flow, so they are
    smooth but not straight. Returns the trajectories.
    """
    from occtomo.synthfield import AnalyticField, GaussianBump
    from occtomo.trajectory import integrate_rk4_batch

    r = np.random.default_rng(seed)
    radius = r.uniform(2.5, 15.0)
    ang = 2 * np.pi * np.arange(n) / n + r.uniform(0, 2 * np.pi)
    starts = radius * np.column_stack([np.cos(ang), np.sin(ang)]) + r.uniform(-0.2, 0.2, (n, 2))

    def bumps():
        return tuple(GaussianBump(r.uniform(-0.15, 0.15), r.uniform(0.5, 3.0),
                                  starts[r.integers(n)] + r.uniform(-0.5, 0.5, 2))
                     for _ in range(2 * n))

    flow = AnalyticField(bumps(), bumps())
    theta = r.uniform(0, 2 * np.pi, n)
    vel = np.column_stack([np.cos(theta), np.sin(theta)])
    paths = integrate_rk4_batch(starts, vel, flow, horizon, steps)
    return [SampledTrajectory(paths[k], horizon, f"f{seed}_{k}") for k in range(n)]
