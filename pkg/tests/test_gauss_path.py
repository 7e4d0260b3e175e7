import numpy as np
import pytest
from scipy import stats

from contracted_maxima.corr_models import CorrelationModel, rho
from contracted_maxima.experiments import contracted_maxima
from contracted_maxima.contraction import ContractionSpec
from contracted_maxima.gauss_path import (
    NonEmbeddableCovariance, prefix_maxima, sample_iid_normals, sample_path, sample_path_pair,
    spectral_amplitudes, synthesize_pairs,
)
from contracted_maxima.streams import stream

from .conftest import MODELS


@pytest.mark.parametrize("name", MODELS)
def test_sample_path_is_deterministic(name):
    a = sample_path(MODELS[name], 1000, 42).values
    b = sample_path(MODELS[name], 1000, 42).values
    c = sample_path(MODELS[name], 1000, 43).values
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_iid_path_moments():
    x = sample_path(CorrelationModel.iid(), 10**6, 1).values
    # 5 sigma bands
    assert abs(x.mean()) < 5e-3
    assert abs(x.var() - 1) < 5 * np.sqrt(2 / 10**6)


def test_iid_path_is_normal():
    x = sample_path(CorrelationModel.iid(), 20000, 3).values
    assert stats.kstest(x, "norm").pvalue > 1e-3


def test_ar1_lag_one_correlation():
    x = sample_path(CorrelationModel.ar1(0.5), 10**6, 5).values
    r1 = np.corrcoef(x[:-1], x[1:])[0, 1]
    assert abs(r1 - 0.5) < 0.005


@pytest.mark.parametrize("name", ["ar1", "pow", "log"])
def test_small_n_covariance(name):
    model = MODELS[name]
    n, pairs = 8, 100_000
    amp = spectral_amplitudes(model, n)
    x = synthesize_pairs(amp, n, pairs, stream(11))
    emp = np.cov(x, rowvar=False)
    lag = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    target = rho(model, lag)
    # entries have sd about sqrt((1 + r^2) / N) <= 2.3e-3
    assert np.max(np.abs(emp - target)) < 0.015


def test_real_and_imaginary_parts_are_uncorrelated():
    amp = spectral_amplitudes(CorrelationModel.ar1(0.8), 16)
    x = synthesize_pairs(amp, 16, 100_000, stream(2))
    cross = (x[0::2].T @ x[1::2]) / 100_000
    assert np.max(np.abs(cross)) < 0.02


def test_pair_paths_differ():
    a, b = sample_path_pair(CorrelationModel.iid(), 100, 9)
    assert not np.array_equal(a.values, b.values)
    assert np.array_equal(a.values, sample_path(CorrelationModel.iid(), 100, 9).values)


def test_tail_fraction():
    x = sample_iid_normals(10**6, 4)
    p = stats.norm.sf(3)
    frac = np.mean(x > 3)
    assert abs(frac - p) < 5 * np.sqrt(p / 10**6)


def test_nonembeddable_raises():
    # persistent strong negative correlation is not a covariance at all
    model = CorrelationModel.power_decay(-0.9, 0.3)
    with pytest.raises(NonEmbeddableCovariance):
        spectral_amplitudes(model, 4096)


def test_prefix_maxima():
    assert prefix_maxima([1, 3, 2, 5, 4]).tolist() == [1, 3, 3, 5, 5]
    x = sample_iid_normals(1000, 1)
    m = prefix_maxima(x)
    assert np.all(np.diff(m) >= 0)
    assert m[-1] == x.max()
    with pytest.raises(ValueError):
        prefix_maxima([])


@pytest.mark.parametrize("bad", [0, -3])
def test_bad_lengths(bad):
    with pytest.raises(ValueError):
        sample_path(CorrelationModel.iid(), bad, 0)
    with pytest.raises(ValueError):
        sample_iid_normals(bad, 0)


def test_bad_seed():
    with pytest.raises(ValueError):
        sample_path(CorrelationModel.iid(), 10, -1)
    with pytest.raises(ValueError):
        sample_path(CorrelationModel.iid(), 10, 2**64)


@pytest.mark.parametrize("n, reps", [(64, 40_000), (1000, 3000)])
def test_maxima_are_thread_invariant(n, reps):
    spec = ContractionSpec.beta(2, 3)
    one = contracted_maxima(CorrelationModel.ar1(0.5), spec, n, reps, 17, threads=1)
    four = contracted_maxima(CorrelationModel.ar1(0.5), spec, n, reps, 17, threads=4)
    assert np.array_equal(one, four)
