"""End-to-end smoke tests for the benthos python module.

These only gate the binding layer: the numerical heavy lifting is covered by
the C++ unit and acceptance suites.
"""

import math

import pytest

import benthos


def test_module_surface():
    assert benthos.__version__
    model = benthos.brownian(1.0, 1.0)
    assert model.linear_drift == 1.0
    assert model.diffusion == 1.0
    assert model.effective_velocity == 1.0
    assert "LevyModel" in repr(model)


def test_validate_model_flags_bad_drift():
    bad = benthos.brownian(-1.0, 1.0)
    problems = benthos.validate_model(bad)
    assert any("effective velocity" in p for p in problems)
    assert benthos.validate_model(benthos.brownian(1.0, 1.0)) == []


def test_transform_matches_exponent_root():
    model = benthos.with_exponential_jumps(2.0, 0.5, 1.0, 0.5)
    for s in (0.1, 1.0, 10.0):
        phi = benthos.inverse_laplace_exponent(model, s)
        assert benthos.laplace_exponent(model, phi) == pytest.approx(s, rel=1e-12)
        transform = benthos.passage_time_transform(model, 2.0, s)
        assert transform == pytest.approx(math.exp(-2.0 * phi), rel=1e-12)


def test_critical_length_brownian_closed_form():
    params = benthos.RegimeParams(r=1.0, lambda0=2.0, lambda1=1.0)
    verdict = benthos.persistence_verdict(benthos.brownian(1.0, 1.0), params)
    assert not verdict.always_persists
    expected = math.log(2.0) / (math.sqrt(3.0) - 1.0)
    assert verdict.critical_length == pytest.approx(expected, rel=1e-12)
    closed = benthos.critical_length_brownian_closed_form(1.0, 1.0, params)
    assert closed == pytest.approx(expected, rel=1e-12)


def test_critical_curve_is_increasing_and_tends_to_asymptote():
    params = benthos.RegimeParams(r=1.0, lambda0=2.0, lambda1=1.0)
    grid = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0]
    rows = benthos.critical_curve(benthos.brownian(1.0, 1.0), params, grid)
    lengths = [row.critical_length for row in rows]
    assert all(row.error == "" for row in rows)
    assert lengths == sorted(lengths)
    assert rows[-1].ratio == pytest.approx(1.0, abs=0.01)
    assert rows[0].ratio > 1.0


def test_washout_estimate_brackets_analytic():
    model = benthos.brownian(1.0, 1.0)
    analytic = benthos.washout_probability(model, 1.0, 1.0)
    assert 0.0 < analytic < 1.0
    cfg = benthos.SimConfig(seed=13, n_paths=20000, threads=2)
    est = benthos.estimate_washout(model, 1.0, 1.0, cfg)
    assert est.censored == 0
    assert abs(est.mean - analytic) <= 4.0 * est.std_error


def test_seeded_runs_are_thread_count_invariant():
    model = benthos.with_exponential_jumps(2.0, 0.5, 1.0, 0.5)
    runs = []
    for threads in (1, 4):
        cfg = benthos.SimConfig(seed=99, n_paths=5000, dt=0.01, threads=threads)
        runs.append(benthos.estimate_washout(model, 1.0, 1.0, cfg))
    assert runs[0].mean == runs[1].mean
    assert runs[0].std_error == runs[1].std_error


def test_population_extinction_responds_to_domain_length():
    model = benthos.brownian(1.0, 1.0)
    params = benthos.RegimeParams(r=1.0, lambda0=2.0, lambda1=1.0)
    lc = benthos.persistence_verdict(model, params).critical_length
    cfg = benthos.SimConfig(seed=5, horizon=50.0, population_cap=5000)
    below = benthos.estimate_extinction_probability(
        model, params, lc / 4.0, 20, 60, cfg
    )
    above = benthos.estimate_extinction_probability(
        model, params, 4.0 * lc, 20, 60, cfg
    )
    assert below.mean > above.mean


def test_validation_suite_passes_at_reduced_scale():
    cfg = benthos.SimConfig(seed=12345, n_paths=4000, dt=0.01, threads=2)
    report = benthos.run_validation_suite(cfg)
    assert len(report.checks) > 10
    assert report.all_passed()
