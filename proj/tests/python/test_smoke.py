"""Smoke tests for the compiled msbayes module.

Exercises the main operations end to end: hazard math, dataset handling,
posterior sampling, outcome functionals and the in-process CLI.
"""

import math

import pytest

try:
    import msbayes as mb
except ImportError:
    import _msbayes as mb


@pytest.fixture(scope="module")
def id_params():
    return mb.reference.illness_death_estimates()


@pytest.fixture(scope="module")
def small_fit():
    spec = mb.SimulationSpec(
        mb.ModelFamily.IllnessDeath,
        mb.reference.illness_death_estimates(),
        400,
        12,
    )
    spec.censor_time = 6.0
    data = mb.simulate_cohort(spec)
    config = mb.ChainConfig()
    config.n_chains = 2
    config.n_iterations = 600
    config.n_burnin = 300
    config.seed = 9
    prior = mb.PriorSpec.defaults(mb.ModelFamily.IllnessDeath)
    draws = mb.sample_posterior(mb.ModelFamily.IllnessDeath, data, prior, config)
    return data, draws


def test_hazard_closed_forms():
    tp = mb.TransitionParams(
        mb.TransitionLabel.FR,
        mb.WeibullShapeScale(2.0, 1.0),
        mb.RegressionCoefficients(0.0, 0.0),
    )
    cov = mb.CovariateVector(0.0, 0.0)
    assert mb.hazard_at(tp, cov, 3.0) == pytest.approx(6.0)
    assert mb.cumulative_hazard(tp, cov, 3.0) == pytest.approx(9.0)
    assert mb.all_causes_survival([tp], cov, 0.0) == 1.0
    with pytest.raises(Exception):
        mb.hazard_at(tp, cov, 0.0)


def test_linear_predictor_reference_values(id_params):
    cov = mb.CovariateVector(1.0, 70.0 - mb.reference.AGE_CENTER)
    fd = id_params.at(mb.TransitionLabel.FD)
    # -0.5092 + 0.0705 * (70 - 83.4)
    assert mb.linear_predictor(fd.coeffs, cov) == pytest.approx(-1.4539, abs=1e-9)


def test_validation_rules():
    good = mb.SubjectRecord("a", 1.0, 80.0, 1.5, mb.FirstOutcome.Censored)
    bad = mb.SubjectRecord("b", 1.0, 80.0, 0.0, mb.FirstOutcome.Death)
    issues = mb.validate_records([good, bad])
    assert len(issues) == 1 and issues[0].record_index == 1
    with pytest.raises(Exception):
        mb.validate_dataset([bad], 83.4)
    data = mb.center_ages([good, mb.SubjectRecord("c", 0.0, 86.0, 1.0, mb.FirstOutcome.Censored)])
    assert data.age_center == pytest.approx(83.0)


def test_likelihood_forced_value():
    params = mb.ParameterSet(
        mb.ModelFamily.CompetingRisks,
        [
            mb.TransitionParams(
                mb.TransitionLabel.FR,
                mb.WeibullShapeScale(1.0, 1.0),
                mb.RegressionCoefficients(0.0, 0.0),
            ),
            mb.TransitionParams(
                mb.TransitionLabel.FD,
                mb.WeibullShapeScale(1.0, 1.0),
                mb.RegressionCoefficients(0.0, 0.0),
            ),
        ],
    )
    record = mb.SubjectRecord("x", 0.0, 83.4, 2.0, mb.FirstOutcome.Censored)
    data = mb.validate_dataset([record], 83.4)
    assert mb.log_likelihood(mb.ModelFamily.CompetingRisks, params, data) == pytest.approx(-4.0)
    parts = mb.per_transition_log_likelihood(mb.ModelFamily.CompetingRisks, params, data)
    assert sum(parts.values()) == pytest.approx(-4.0)


def test_simulation_is_deterministic(id_params):
    spec = mb.SimulationSpec(mb.ModelFamily.IllnessDeath, id_params, 50, 33)
    a = mb.simulate_cohort(spec)
    b = mb.simulate_cohort(spec)
    assert [r.t_first for r in a.records] == [r.t_first for r in b.records]


def test_incidence_against_published_values(id_params):
    q = mb.QuadratureConfig()
    cov = mb.CovariateVector(1.0, 70.0 - mb.reference.AGE_CENTER)
    cif = mb.cumulative_incidence(id_params, cov, mb.TransitionLabel.FR, 1.0, q)
    assert cif == pytest.approx(0.0196, abs=0.003)
    p23 = mb.transition_probabilities_id_refractured(id_params, cov, 0.0, 1.0, 0.0, q).p23
    assert p23 == pytest.approx(0.1477, abs=0.003)
    probs = mb.transition_probabilities_id(id_params, cov, 0.0, 1.0, q)
    assert probs.p11 + probs.p12 + probs.p13 == pytest.approx(1.0, abs=1e-9)


def test_fit_and_summaries(small_fit):
    _, draws = small_fit
    assert draws.n_chains == 2
    assert draws.n_retained == 300
    assert len(draws.labels) == 12
    summary = mb.summarize_draws(draws)
    assert len(summary) == 12
    for row in summary:
        assert math.isfinite(row.mean)
        assert row.q025 <= row.q500 <= row.q975
    report = mb.diagnostics(draws)
    assert len(report.parameters) == 12
    for chain_rates in draws.acceptance:
        for rate in chain_rates:
            assert 0.0 < rate < 1.0


def test_posterior_curves_and_tables(small_fit):
    _, draws = small_fit
    q = mb.QuadratureConfig()
    cov = mb.CovariateVector(1.0, -3.4)
    grid = mb.TimeGrid.regular(0.0, 2.0, 0.5)
    curve = mb.posterior_curve(
        draws, mb.FunctionalSpec(mb.Functional.CifRefracture), cov, grid, q, 50
    )
    assert len(curve.mean) == len(grid.times)
    assert all(lo <= m <= hi for lo, m, hi in zip(curve.lower, curve.mean, curve.upper))
    assert curve.mean == sorted(curve.mean)

    cells = mb.incidence_table(draws, [mb.Profile(True, 80.0)], 1.0, q, 50)
    assert len(cells) == 3  # FR, FD, RD rows for one profile
    assert all(0.0 <= cell.mean_pct <= 100.0 for cell in cells)

    occ = mb.occupancy_decomposition(draws, cov, grid, q, 50)
    assert all(o <= c + 1e-12 for o, c in zip(occ.occupancy_refracture, occ.cif_refracture))


def test_cohort_csv_roundtrip(tmp_path, id_params):
    spec = mb.SimulationSpec(mb.ModelFamily.IllnessDeath, id_params, 80, 5)
    data = mb.simulate_cohort(spec)
    path = str(tmp_path / "cohort.csv")
    mb.write_cohort_csv(path, data)
    loaded = mb.read_cohort_csv(path, data.age_center)
    assert len(loaded) == len(data)
    assert [r.t_first for r in loaded.records] == [r.t_first for r in data.records]


def test_cli_runs_in_process(tmp_path):
    out = str(tmp_path / "sim")
    assert mb.run_command(["simulate", "--n", "50", "--family", "cr", "--seed", "2",
                           "--out", out]) == 0
    assert (tmp_path / "sim" / "cohort.csv").exists()
    assert mb.run_command(["no-such-command"]) == 64
