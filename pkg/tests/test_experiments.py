import math

import numpy as np
import pytest
from scipy import stats

from contracted_maxima.contraction import ContractionSpec
from contracted_maxima.corr_models import CorrelationModel
from contracted_maxima.experiments import (
    MaximaSample, asclt_logavg, contracted_maxima, derive_seed, ks_to_gumbel, norming_for,
    pairs_per_block, simulate_maxima, weak_limit_experiment,
)
from contracted_maxima.norming import CLOSED, EXACT, NormingConstants, exact_constants
from contracted_maxima.special_fn import gumbel_cdf, gumbel_quantile, std_normal_sf
from contracted_maxima.streams import stream

from .conftest import MODELS, SPECS

IID = CorrelationModel.iid()
ONE = ContractionSpec.degenerate()


def test_derive_seed():
    assert derive_seed(1, 5) == derive_seed(1, 5)
    assert len({derive_seed(1, k) for k in range(100)}) == 100
    assert 0 <= derive_seed(2**64 - 1, 3) < 2**64


def test_pairs_per_block_depends_on_n_only():
    assert pairs_per_block(4) == 2**16
    assert pairs_per_block(2**14) == 32
    assert pairs_per_block(2**20) == 1


def test_n1_maxima_are_normal():
    const = NormingConstants(1, 1.0, 0.0)
    s = simulate_maxima(IID, ONE, 1, 10**5, const, 5)
    assert isinstance(s, MaximaSample)
    assert s.normalized_values.size == 10**5
    d = stats.kstest(s.normalized_values, "norm").statistic
    assert d < 1.63 / math.sqrt(10**5)


def test_constants_must_match_n():
    with pytest.raises(ValueError):
        simulate_maxima(IID, ONE, 10, 100, exact_constants(ONE, 20), 0)


def test_iid_gaussian_maxima_ks():
    n = 2**14
    s = simulate_maxima(IID, ONE, n, 2000, exact_constants(ONE, n), 3)
    assert ks_to_gumbel(s) < 0.08


def test_dependence_does_not_change_the_limit():
    n = 2**14
    spec = SPECS["ptail"]
    const = exact_constants(spec, n)
    iid = ks_to_gumbel(simulate_maxima(IID, spec, n, 2000, const, 21))
    ar1 = ks_to_gumbel(simulate_maxima(MODELS["ar1"], spec, n, 2000, const, 21))
    assert abs(iid - ar1) < 0.02


@pytest.mark.parametrize("n", [1, 2, 4])
def test_two_point_contraction_brute_force(n):
    spec = ContractionSpec.discrete([1.0, 0.5], [0.7, 0.3])
    reps = 10**6
    m = contracted_maxima(IID, spec, n, reps, 99)
    for u in (1.0, 2.0, 3.0):
        g = 1 - (0.7 * std_normal_sf(u) + 0.3 * std_normal_sf(2 * u))
        p = g**n
        assert abs(np.mean(m <= u) - p) <= 4 * math.sqrt(p * (1 - p) / reps)


def test_ks_of_gumbel_sample():
    v = gumbel_quantile(stream(8).random(10**4))
    assert ks_to_gumbel(v) < 1.63 / 100


def test_ks_of_constant_sample():
    v = np.full(50, 0.3)
    lam = gumbel_cdf(0.3)
    assert ks_to_gumbel(v) == pytest.approx(max(lam, 1 - lam), rel=1e-15)


def test_ks_minimal_and_too_small():
    assert 0 <= ks_to_gumbel(np.linspace(-1, 2, 10)) <= 1
    with pytest.raises(ValueError):
        ks_to_gumbel(np.zeros(9))


def test_ks_affine_invariance():
    n = 1000
    const = exact_constants(ONE, n)
    raw = contracted_maxima(IID, ONE, n, 500, 4)
    z = (raw - const.b) / const.a
    c, shift = 3.5, -2.0
    scaled = c * raw + shift
    z2 = (scaled - (c * const.b + shift)) / (c * const.a)
    assert ks_to_gumbel(z2) == pytest.approx(ks_to_gumbel(z), abs=1e-12)


def test_weak_limit_report():
    rep = weak_limit_experiment(IID, ONE, [2**6, 2**9], 200, EXACT, 11)
    assert rep.kind == "weak-limit"
    assert [r["n"] for r in rep.records] == [64, 512]
    assert all(r["runtime_ms"] is None for r in rep.records)
    assert rep.records[0]["seed"] == derive_seed(11, 64)
    assert rep.summary["hypothesis_satisfied"]
    timed = weak_limit_experiment(IID, ONE, [2**6], 200, EXACT, 11, timing=True)
    assert timed.records[0]["runtime_ms"] >= 0
    assert timed.records[0]["ks"] == rep.records[0]["ks"]


def test_weak_limit_flags_violation():
    model = CorrelationModel.log_decay(0.9, 0.5)
    rep = weak_limit_experiment(model, ONE, [2**6, 2**8], 100, EXACT, 2)
    assert rep.summary["hypothesis_satisfied"] is False


@pytest.mark.parametrize("grid", [[8, 8], [16, 8], [4, 16], []])
def test_weak_limit_rejects_grids(grid):
    with pytest.raises(ValueError):
        weak_limit_experiment(IID, ONE, grid, 100, EXACT, 0)


def test_weak_limit_thread_invariance():
    a = weak_limit_experiment(MODELS["ar1"], SPECS["beta23"], [2**8, 2**10], 3000, EXACT, 5, threads=1)
    b = weak_limit_experiment(MODELS["ar1"], SPECS["beta23"], [2**8, 2**10], 3000, EXACT, 5, threads=3)
    assert a.to_json() == b.to_json()


def test_closed_mode_norming():
    c = norming_for(SPECS["beta23"], 1000, CLOSED)
    assert c.mode == CLOSED
    with pytest.raises(ValueError):
        norming_for(ONE, 1000, "approx")


@pytest.mark.parametrize("name", ["one", "beta23", "atom"])
@pytest.mark.parametrize("mode", [EXACT, CLOSED])
def test_asclt_bounds_and_monotonicity(name, mode):
    x = np.array([1.0, -50.0, 0.0, 50.0, -1.0, 3.0])
    est = asclt_logavg(MODELS["ar1"], SPECS[name], 20_000, x, mode, 6)
    e = est.estimates
    assert np.all((e >= 0) & (e <= 1))
    order = np.argsort(x)
    assert np.all(np.diff(e[order]) >= 0)
    # x = +50 counts every term that was kept, x = -50 none
    assert e[3] == pytest.approx(1 - est.dropped_weight - _tail_gap(20_000), abs=1e-12)
    assert e[1] == 0.0


def _tail_gap(n):
    # sum_{k<=n} 1/k exceeds ln n by Euler's constant plus O(1/n)
    return -(sum(1.0 / k for k in range(1, n + 1)) - math.log(n)) / math.log(n)


def test_asclt_report_and_labels():
    est = asclt_logavg(IID, ONE, 1000, [0.0], CLOSED, 1)
    assert est.first_k == 3
    assert est.dropped_weight == pytest.approx(1.5 / math.log(1000))
    assert not est.heuristic
    assert asclt_logavg(IID, SPECS["beta23"], 1000, [0.0], CLOSED, 1, c=1.0, gamma=0.0).heuristic
    rep = est.to_report(IID, ONE)
    rec = rep.records[0]
    assert rec["lambda_x"] == pytest.approx(math.exp(-1))
    assert rec["abs_error"] == pytest.approx(abs(rec["estimate"] - rec["lambda_x"]))


def test_asclt_rejects_short_paths():
    with pytest.raises(ValueError):
        asclt_logavg(IID, ONE, 99, [0.0], CLOSED, 0)
    with pytest.raises(ValueError):
        asclt_logavg(IID, ONE, 1000, [], CLOSED, 0)
