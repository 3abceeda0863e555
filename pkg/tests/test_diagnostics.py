import math

import numpy as np
import pytest
from conftest import analytic_path, separated_family
from hypothesis import given, settings
from hypothesis import strategies as st

from occtomo.diagnostics import (
    C2,
    M2,
    eigen_bounds,
    lambda_min_bound,
    separation_distance,
)
from occtomo.kernel import KernelSpec
from occtomo.occupation import assemble_gram
from occtomo.trajectory import SampledTrajectory

K1 = KernelSpec(1.0)


def stationary(c, horizon=1.0, steps=10):
    return SampledTrajectory(np.tile(np.asarray(c, float), (steps + 1, 1)), horizon)


def test_constants():
    assert M2 == pytest.approx(12 * (math.pi / 9) ** (1 / 3), rel=1e-15)
    assert C2 == pytest.approx(M2 ** 2 / 16, rel=1e-15)
    assert M2 == pytest.approx(8.4492, abs=1e-4)


@given(st.floats(0.01, 100))
def test_separation_of_stationary_pair(d):
    assert separation_distance([stationary((0, 0)), stationary((d, 0))]) == pytest.approx(d / 2)


def test_coincident_trajectories_have_zero_separation():
    p = analytic_path(lambda t: (t, t ** 2), 1.0, 10)
    assert separation_distance([p, p]) == 0.0


def test_parallel_segments_brute_force():
    a = analytic_path(lambda t: (t, 0 * t), 1.0, 20)
    b = analytic_path(lambda t: (t, 0 * t + 1), 1.0, 20)
    brute = min(math.dist(p, q) for p in a.points for q in b.points) / 2
    assert brute == 0.5
    assert separation_distance([a, b]) == pytest.approx(brute, rel=1e-15)


def test_separation_needs_two():
    with pytest.raises(ValueError):
        separation_distance([stationary((0, 0))])


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000), st.floats(-50, 50), st.floats(-50, 50), st.randoms())
def test_separation_permutation_and_translation_invariant(seed, dx, dy, rnd):
    fam = separated_family(seed, n=4, steps=10)
    q = separation_distance(fam)
    shuffled = list(fam)
    rnd.shuffle(shuffled)
    assert separation_distance(shuffled) == q
    moved = [SampledTrajectory(t.points + [dx, dy], t.horizon) for t in fam]
    assert separation_distance(moved) == pytest.approx(q, rel=1e-9, abs=1e-9)


def test_single_stationary_report():
    traj = [stationary((0, 0))]
    rep = eigen_bounds(assemble_gram(K1, traj), traj)
    assert rep.lambda_min == pytest.approx(1.0) and rep.lambda_max == pytest.approx(1.0)
    assert rep.lambda_max_bound == 1.0
    assert rep.lambda_max <= rep.lambda_max_bound + 1e-15
    assert rep.condition == pytest.approx(1.0)


@pytest.mark.parametrize("seed", range(10))
def test_gershgorin_bound_random_smooth(seed):
    rng = np.random.default_rng(seed)
    fam = []
    for j in range(5):
        p0, th, c = rng.uniform(0, 1, 2), rng.uniform(0, 2 * np.pi), rng.uniform(-1, 1)
        fam.append(analytic_path(lambda t: (p0[0] + t * np.cos(th + c * t),
                                            p0[1] + t * np.sin(th + c * t)), 1.0, 100))
    rep = eigen_bounds(assemble_gram(K1, fam), fam)
    assert rep.lambda_max <= 5.0
    assert rep.lambda_max_bound == 5.0
    assert rep.max_bound_holds


@pytest.mark.parametrize("seed", range(10))
def test_minimum_eigenvalue_bound_separated(seed):
    fam = separated_family(seed)
    rep = eigen_bounds(assemble_gram(K1, fam), fam)
    assert rep.separation_q > 0
    assert rep.lambda_min >= rep.lambda_min_bound
    assert rep.min_bound_holds
    expect = C2 / 2 * math.exp(-M2 ** 2 / rep.separation_q ** 2) / rep.separation_q ** 2
    assert rep.lambda_min_bound == pytest.approx(expect, rel=1e-14)


def test_bound_degenerates_at_zero_separation():
    assert lambda_min_bound(1.0, 0.0, 1.0) == 0.0


def test_bound_scales_with_horizon_squared():
    assert lambda_min_bound(1.0, 5.0, 2.0) == pytest.approx(4 * lambda_min_bound(1.0, 5.0, 1.0))


def test_mixed_horizons_flagged():
    fam = [stationary((0, 0), 1.0), stationary((5, 0), 2.0)]
    rep = eigen_bounds(assemble_gram(K1, fam), fam)
    assert rep.mixed_horizons
    assert rep.horizon == 2.0
    assert rep.lambda_max_bound == 2 * 4.0


def test_report_serialisation():
    fam = separated_family(1)
    rep = eigen_bounds(assemble_gram(K1, fam), fam)
    d = rep.to_dict()
    assert d["lambda_min"] == rep.lambda_min and d["min_bound_holds"] is True
    assert d["c2_convention"] == "M2^2/16"
    assert "separation_q = " in rep.to_text()
    assert rep.grid_steps == 100
