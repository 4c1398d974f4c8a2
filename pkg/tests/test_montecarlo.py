import math

import numpy as np
import pytest

import oracles
from wishart_traces.cumulants import stars_moment_spec
from wishart_traces.moments import WishartModel, moment_numeric
from wishart_traces.montecarlo import (
    MCEstimate,
    complex_normal,
    estimate_cumulant,
    estimate_laplace,
    estimate_moment,
    hermitian_factor,
    sample_wishart,
)
from wishart_traces.parser import parse_expression


def test_entry_law():
    x = complex_normal(np.random.default_rng(0), 200_000)
    n = len(x)
    for stat, target in ((x, 0), (x * x, 0), (np.abs(x) ** 2, 1)):
        err = abs(stat.mean() - target)
        se = math.sqrt((np.var(stat.real) + np.var(stat.imag)) / n)
        assert err <= 5 * se


def test_hermitian_factor_examples():
    assert np.allclose(hermitian_factor(np.eye(3)), np.eye(3))
    assert np.allclose(hermitian_factor(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]))
    S = oracles.random_psd(np.random.default_rng(1), 4)
    A = hermitian_factor(S)
    assert np.linalg.norm(A.conj().T @ A - S, 2) <= 1e-12 * np.linalg.norm(S, 2)
    with pytest.raises(ValueError):
        hermitian_factor(np.diag([1.0, -1.0]))


def test_samples_hermitian_psd():
    rng = np.random.default_rng(2)
    A = hermitian_factor(oracles.random_psd(rng, 5))
    for p in (1, 3, 7):
        W = sample_wishart(A, p, rng, size=500)
        assert np.abs(W - np.swapaxes(W.conj(), -1, -2)).max() <= 1e-12 * np.abs(W).max()
        eig = np.linalg.eigvalsh(W)
        norms = np.abs(eig).max(axis=1)
        assert (eig.min(axis=1) >= -1e-10 * norms).all()


def test_sampling_rejects_fractional_shape():
    with pytest.raises(ValueError):
        sample_wishart(np.eye(2), 2.5, np.random.default_rng(0))


def test_zero_samples_rejected():
    spec = parse_expression("tr(W1)").to_spec()
    with pytest.raises(ValueError):
        estimate_moment(spec, WishartModel.identity(2, (1.0,)), n_samples=0)


def test_ex1_mean():
    spec = parse_expression("tr(W1 W2)").to_spec()
    model = WishartModel.identity(4, (3.0, 5.0))
    est = estimate_moment(spec, model, n_samples=40_000, seed=1)
    assert est.z(60) <= 5


def test_table1_mean():
    rng = np.random.default_rng(4)
    model = WishartModel((oracles.random_psd(rng, 3), oracles.random_psd(rng, 3)), (2.0, 3.0))
    spec = parse_expression("tr(W1 W2)^2").to_spec()
    est = estimate_moment(spec, model, n_samples=60_000, seed=2)
    assert est.z(moment_numeric(spec, model)) <= 5


def test_reproducible_across_workers():
    spec = parse_expression("tr(W1 W2 W1)").to_spec()
    model = WishartModel.identity(3, (2.0, 4.0))
    a = estimate_moment(spec, model, n_samples=5000, seed=9, workers=1)
    b = estimate_moment(spec, model, n_samples=5000, seed=9, workers=3)
    c = estimate_moment(spec, model, n_samples=5000, seed=9, workers=1)
    assert a == b == c
    d = estimate_moment(spec, model, n_samples=5000, seed=10)
    assert d != a


@pytest.mark.parametrize("N,p", [(2, 1), (3, 2)])
def test_trace_cumulants_gamma(N, p):
    # tr W for W ~ W(I_N, p) is Gamma(pN, 1): kappa_2 = pN, kappa_3 = 2pN
    spec = stars_moment_spec([(1,)])
    model = WishartModel.identity(N, (float(p),))
    var = estimate_cumulant([spec], [2], model, 100_000, seed=3, part="real")
    k3 = estimate_cumulant([spec], [3], model, 100_000, seed=4, part="real")
    assert var.z(p * N) <= 5
    assert k3.z(2 * p * N) <= 5


def test_imag_part_of_real_trace_is_zero():
    spec = stars_moment_spec([(1, 1)])
    est = estimate_cumulant([spec], [2], WishartModel.identity(2, (2.0,)), 2000, seed=0, part="imag")
    assert abs(est.mean) < 1e-20


def test_cumulant_argument_checks():
    spec = stars_moment_spec([(1,)])
    model = WishartModel.identity(2, (1.0,))
    with pytest.raises(ValueError):
        estimate_cumulant([spec], [4], model, 100)
    with pytest.raises(ValueError):
        estimate_cumulant([spec], [1], model, 100, part="abs")


@pytest.mark.parametrize("p", [1, 2, 3])
def test_laplace_spot_check(p):
    rng = np.random.default_rng(p)
    sigma = oracles.random_psd(rng, 2) + 0.5 * np.eye(2)
    theta = oracles.random_psd(rng, 2)
    theta *= 0.1 * np.linalg.norm(np.linalg.inv(sigma), 2) / np.linalg.norm(theta, 2)
    est, exact = estimate_laplace(sigma, p, theta, n_samples=100_000, seed=p)
    assert est.z(exact) <= 5


def test_mc_estimate_dict():
    e = MCEstimate(1 + 2j, 0.5, 10, 2)
    assert e.to_dict() == {"mean": [1.0, 2.0], "stderr": 0.5, "samples": 10, "batches": 2}
    assert e.z(2 + 2j) == 2.0


def test_sample_mean_is_p_sigma():
    rng = np.random.default_rng(11)
    sigma = oracles.random_psd(rng, 3)
    p = 4
    W = sample_wishart(hermitian_factor(sigma), p, rng, size=100_000)
    mean = W.mean(axis=0)
    se = np.sqrt((W.real.var(axis=0) + W.imag.var(axis=0)) / len(W))
    assert (np.abs(mean - p * sigma) <= 5 * se + 1e-12).all()


def test_second_moment_matches_s2_sum():
    rng = np.random.default_rng(12)
    sigma = oracles.random_psd(rng, 2)
    p = 3
    spec = parse_expression("tr(W1 W1)").to_spec()
    model = WishartModel((sigma,), (float(p),))
    exact = p**2 * np.trace(sigma @ sigma) + p * np.trace(sigma) ** 2
    est = estimate_moment(spec, model, n_samples=100_000, seed=3)
    assert est.z(exact) <= 5
