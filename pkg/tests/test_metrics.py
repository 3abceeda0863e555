import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from occtomo.metrics import compare_fields, norm_difference_stats, relative_errors
from occtomo.synthfield import AnalyticField, ConstantField, GaussianBump, experiment1_field
from occtomo.trajectory import Box

GRID = Box().grid(10)
V = experiment1_field()


def test_identical_fields():
    r = relative_errors(V, V, GRID)
    assert (r.max_error, r.mean_error) == (0.0, 0.0)


def test_doubled_field():
    r = relative_errors(V, lambda p: 2 * V(p), GRID)
    assert r.max_error == pytest.approx(1.0, rel=1e-14)
    assert r.mean_error == pytest.approx(1.0, rel=1e-14)


def test_orthogonal_unit_vectors():
    r = relative_errors(ConstantField((1, 0)), ConstantField((0, 1)), [(0.3, 0.3)])
    assert r.max_error == pytest.approx(math.sqrt(2)) and r.mean_error == pytest.approx(math.sqrt(2))


@given(st.floats(-3, 3))
def test_scale_awareness(alpha):
    r = relative_errors(V, lambda p: alpha * V(p), GRID)
    assert r.max_error == pytest.approx(abs(1 - alpha), rel=1e-12, abs=1e-15)
    assert r.mean_error == pytest.approx(abs(1 - alpha), rel=1e-12, abs=1e-15)


def test_zero_reference_points_excluded():
    def ref(p):
        out = np.tile([1.0, 0.0], (len(p), 1))
        out[0] = 0.0
        return out

    r = relative_errors(ref, ConstantField((0, 0)), GRID[:5])
    assert r.n_excluded == 1
    assert r.max_error == 1.0
    with pytest.raises(ValueError):
        relative_errors(ConstantField((0, 0)), V, GRID)


def test_norm_stats_identical():
    assert tuple(norm_difference_stats(V, V, GRID)) == (0.0, 0.0, 0.0)


def test_norm_stats_constant_gap():
    s = norm_difference_stats(V, lambda p: V(p) + np.array([0.3, 0.4]), GRID)
    assert s.max == pytest.approx(0.5) and s.mean == pytest.approx(0.5)
    assert s.variance == pytest.approx(0.0, abs=1e-28)


def _random_bump_field(seed):
    r = np.random.default_rng(seed)

    def bumps():
        return tuple(GaussianBump(r.normal(), r.uniform(0.5, 3), r.uniform(0, 1, 2))
                     for _ in range(3))

    return AnalyticField(bumps(), bumps())


def test_random_fields_match_brute_force():
    a, b = _random_bump_field(1), _random_bump_field(2)
    diffs, rels = [], []
    for x in np.linspace(0, 1, 10):
        for y in np.linspace(0, 1, 10):
            va, vb = a((x, y)), b((x, y))
            d = math.hypot(*(va - vb))
            diffs.append(d)
            rels.append(d / math.hypot(*va))
    s = norm_difference_stats(a, b, GRID)
    mean = sum(diffs) / len(diffs)
    assert s.max == pytest.approx(max(diffs), rel=1e-13)
    assert s.mean == pytest.approx(mean, rel=1e-13)
    assert s.variance == pytest.approx(sum((d - mean) ** 2 for d in diffs) / len(diffs), rel=1e-10)
    r = relative_errors(a, b, GRID)
    assert r.max_error == pytest.approx(max(rels), rel=1e-13)
    assert r.mean_error == pytest.approx(sum(rels) / len(rels), rel=1e-13)


@given(st.integers(0, 1000), st.integers(0, 1000))
def test_norm_stats_symmetric(s1, s2):
    a, b = _random_bump_field(s1), _random_bump_field(s2)
    assert norm_difference_stats(a, b, GRID) == norm_difference_stats(b, a, GRID)


def test_compare_fields_invariants():
    c = compare_fields(V, _random_bump_field(3), GRID)
    assert c.mean_error <= c.max_error
    assert c.variance_norm_diff >= 0
    assert c.to_dict()["n_points"] == 100


def test_empty_points_rejected():
    with pytest.raises(ValueError):
        norm_difference_stats(V, V, np.zeros((0, 2)))
