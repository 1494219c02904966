import math

import numpy as np
import pytest

from plingam.errors import DimensionMismatchError, UnstableSystemError
from plingam.simulate import (
    SimSpec,
    companion_spectral_radius,
    gen_two_level_dag,
    level_split,
    sample_lingam,
    sample_svar,
)
from plingam.types import CausalOrder, WeightedDag, permuted_is_lower_triangular


@pytest.mark.parametrize(
    "kwargs",
    [dict(dims=1, samples=10), dict(dims=3, samples=1), dict(dims=3, samples=10, edge_prob=0.0),
     dict(dims=3, samples=10, noise_low=1.0, noise_high=1.0)],
)
def test_spec_validation(kwargs):
    with pytest.raises(ValueError):
        SimSpec(**kwargs)


@pytest.mark.parametrize("seed", range(20))
def test_two_level_structure(seed):
    spec = SimSpec(dims=7, samples=10, seed=seed)
    dag = gen_two_level_dag(spec)
    lvl0, lvl1 = level_split(spec)
    assert len(lvl0) == math.ceil(7 / 2) and sorted(lvl0 + lvl1) == list(range(7))
    assert permuted_is_lower_triangular(dag)
    assert set(dag.order.order[: len(lvl0)]) == set(lvl0)
    for i, j in np.argwhere(dag.weights != 0):
        assert j in lvl0 and i in lvl1


def test_saturated_edges():
    spec = SimSpec(dims=4, samples=10, seed=0, edge_prob=1.0)
    dag = gen_two_level_dag(spec)
    lvl0, lvl1 = level_split(spec)
    assert np.count_nonzero(dag.weights) == 4
    assert all(dag.weights[i, j] != 0 for i in lvl1 for j in lvl0)


def test_determinism():
    spec = SimSpec(dims=10, samples=100, seed=42)
    a, b = gen_two_level_dag(spec), gen_two_level_dag(spec)
    assert a == b
    np.testing.assert_array_equal(sample_lingam(a, spec).values, sample_lingam(b, spec).values)
    assert not np.array_equal(
        sample_lingam(a, spec).values, sample_lingam(a, SimSpec(10, 100, seed=43)).values
    )


def test_empty_dag_columns_independent_with_noise_variance():
    spec = SimSpec(dims=5, samples=10000, seed=1)
    X = sample_lingam(WeightedDag(np.zeros((5, 5)), CausalOrder(tuple(range(5)))), spec).values
    C = np.corrcoef(X.T)
    assert np.abs(C[np.triu_indices(5, 1)]).max() < 0.05
    np.testing.assert_allclose(X.var(axis=0), spec.noise_variance, rtol=0.05)
    assert spec.noise_variance == pytest.approx(1 / 12)
    assert X.min() >= 0.0 and X.max() <= 1.0


def test_single_edge_covariance():
    W = np.zeros((2, 2))
    W[1, 0] = -1.3
    spec = SimSpec(dims=2, samples=10000, seed=2)
    X = sample_lingam(WeightedDag(W, CausalOrder((0, 1))), spec).values
    cov = np.cov(X.T, bias=True)[0, 1]
    assert abs(cov - (-1.3) * spec.noise_variance) < 0.05


class TestSvar:
    def dag0(self, d):
        return WeightedDag(np.zeros((d, d)), CausalOrder(tuple(range(d))))

    def test_no_dynamics_is_iid_noise(self):
        spec = SimSpec(dims=3, samples=2, seed=0)
        ts = sample_svar(self.dag0(3), [np.zeros((3, 3))], 5000, 10, spec)
        assert ts.values.shape == (5000, 3)
        assert ts.values.min() >= 0 and ts.values.max() <= 1
        lag1 = [np.corrcoef(ts.values[1:, j], ts.values[:-1, j])[0, 1] for j in range(3)]
        assert max(abs(c) for c in lag1) < 0.05

    def test_univariate_ar1_autocorrelation(self):
        spec = SimSpec(dims=2, samples=2, seed=3)
        ts = sample_svar(self.dag0(1), [np.array([[0.5]])], 10000, 200, spec)
        x = ts.values[:, 0]
        assert abs(np.corrcoef(x[1:], x[:-1])[0, 1] - 0.5) < 0.05

    def test_determinism(self):
        spec = SimSpec(dims=2, samples=2, seed=9)
        M = [np.array([[0.3, 0.1], [0.0, 0.2]])]
        a = sample_svar(self.dag0(2), M, 300, 10, spec)
        b = sample_svar(self.dag0(2), M, 300, 10, spec)
        np.testing.assert_array_equal(a.values, b.values)

    def test_explosive_system_raises(self):
        spec = SimSpec(dims=2, samples=2, seed=0)
        with pytest.raises(UnstableSystemError):
            sample_svar(self.dag0(1), [np.array([[1.5]])], 5000, 0, spec)

    def test_shape_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            sample_svar(self.dag0(2), [np.zeros((3, 3))], 10, 0, SimSpec(2, 2))

    def test_spectral_radius(self):
        assert companion_spectral_radius([np.diag([0.5, -0.9])]) == pytest.approx(0.9)
        assert companion_spectral_radius([np.zeros((1, 1)), np.array([[0.25]])]) == pytest.approx(0.5)
