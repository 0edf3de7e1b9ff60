#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "msbayes/cli.hpp"
#include "msbayes/diagnostics.hpp"
#include "msbayes/io.hpp"
#include "msbayes/likelihood.hpp"
#include "msbayes/outcomes.hpp"
#include "msbayes/reference.hpp"
#include "msbayes/simulate.hpp"

namespace py = pybind11;
using namespace msbayes;

PYBIND11_MODULE(_msbayes, m) {
  m.doc() = "Bayesian Weibull multi-state survival models: competing risks and "
            "illness-death transitions, MCMC posteriors, cumulative incidences "
            "and transition probabilities.";

  // ---- hazard core ----
  py::enum_<TransitionLabel>(m, "TransitionLabel")
      .value("FR", TransitionLabel::FR)
      .value("FD", TransitionLabel::FD)
      .value("RD", TransitionLabel::RD);

  py::class_<WeibullShapeScale>(m, "WeibullShapeScale")
      .def(py::init<double, double>(), py::arg("shape"), py::arg("scale"))
      .def_readonly("shape", &WeibullShapeScale::shape)
      .def_readonly("scale", &WeibullShapeScale::scale);

  py::class_<RegressionCoefficients>(m, "RegressionCoefficients")
      .def(py::init<double, double>(), py::arg("beta_sex"), py::arg("beta_age"))
      .def_readonly("beta_sex", &RegressionCoefficients::beta_sex)
      .def_readonly("beta_age", &RegressionCoefficients::beta_age);

  py::class_<CovariateVector>(m, "CovariateVector")
      .def(py::init<double, double>(), py::arg("woman"), py::arg("age_centered"))
      .def_readonly("woman", &CovariateVector::woman)
      .def_readonly("age_centered", &CovariateVector::age_centered);

  py::class_<TransitionParams>(m, "TransitionParams")
      .def(py::init<TransitionLabel, WeibullShapeScale, RegressionCoefficients>(),
           py::arg("label"), py::arg("baseline"), py::arg("coeffs"))
      .def_readonly("label", &TransitionParams::label)
      .def_readonly("baseline", &TransitionParams::baseline)
      .def_readonly("coeffs", &TransitionParams::coeffs);

  m.def("linear_predictor", &linear_predictor, py::arg("coeffs"), py::arg("cov"));
  m.def("hazard_at", &hazard_at, py::arg("params"), py::arg("cov"), py::arg("t"));
  m.def("cumulative_hazard", &cumulative_hazard, py::arg("params"), py::arg("cov"), py::arg("t"));
  m.def(
      "all_causes_survival",
      [](const std::vector<TransitionParams>& tps, const CovariateVector& cov, double t) {
        return all_causes_survival(tps, cov, t);
      },
      py::arg("params"), py::arg("cov"), py::arg("t"));

  // ---- cohort data ----
  py::enum_<FirstOutcome>(m, "FirstOutcome")
      .value("Censored", FirstOutcome::Censored)
      .value("Refracture", FirstOutcome::Refracture)
      .value("Death", FirstOutcome::Death);

  py::enum_<SecondOutcome>(m, "SecondOutcome")
      .value("Censored", SecondOutcome::Censored)
      .value("Death", SecondOutcome::Death);

  py::class_<PostRefracture>(m, "PostRefracture")
      .def(py::init([](double t_second, SecondOutcome outcome) {
             return PostRefracture{t_second, outcome};
           }),
           py::arg("t_second"), py::arg("outcome"))
      .def_readwrite("t_second", &PostRefracture::t_second)
      .def_readwrite("outcome", &PostRefracture::outcome);

  py::class_<SubjectRecord>(m, "SubjectRecord")
      .def(py::init([](std::string id, double woman, double age, double t_first,
                       FirstOutcome outcome, std::optional<PostRefracture> post) {
             SubjectRecord r;
             r.id = std::move(id);
             r.woman = woman;
             r.age_at_discharge = age;
             r.t_first = t_first;
             r.first_outcome = outcome;
             r.post_refracture = post;
             return r;
           }),
           py::arg("id"), py::arg("woman"), py::arg("age_at_discharge"), py::arg("t_first"),
           py::arg("first_outcome"), py::arg("post_refracture") = std::nullopt)
      .def_readwrite("id", &SubjectRecord::id)
      .def_readwrite("woman", &SubjectRecord::woman)
      .def_readwrite("age_at_discharge", &SubjectRecord::age_at_discharge)
      .def_readwrite("t_first", &SubjectRecord::t_first)
      .def_readwrite("first_outcome", &SubjectRecord::first_outcome)
      .def_readwrite("post_refracture", &SubjectRecord::post_refracture);

  py::class_<ValidationIssue>(m, "ValidationIssue")
      .def_readonly("record_index", &ValidationIssue::record_index)
      .def_readonly("id", &ValidationIssue::id)
      .def_readonly("rule", &ValidationIssue::rule);

  py::class_<CohortDataset>(m, "CohortDataset")
      .def(py::init<std::vector<SubjectRecord>, double>(), py::arg("records"),
           py::arg("age_center"))
      .def_property_readonly("records", &CohortDataset::records)
      .def_property_readonly("age_center", &CohortDataset::age_center)
      .def("__len__", &CohortDataset::size)
      .def("covariates", &CohortDataset::covariates, py::arg("record"));

  m.def(
      "validate_records",
      [](const std::vector<SubjectRecord>& records) { return validate_records(records); },
      py::arg("records"));
  m.def("validate_dataset", &validate_dataset, py::arg("records"), py::arg("age_center"));
  m.def("center_ages", &center_ages, py::arg("records"), py::arg("center") = std::nullopt);

  py::enum_<ModelFamily>(m, "ModelFamily")
      .value("CompetingRisks", ModelFamily::CompetingRisks)
      .value("IllnessDeath", ModelFamily::IllnessDeath);

  py::class_<ParameterSet>(m, "ParameterSet")
      .def(py::init<ModelFamily, std::vector<TransitionParams>>(), py::arg("family"),
           py::arg("transitions"))
      .def_property_readonly("family", &ParameterSet::family)
      .def_property_readonly("transitions", &ParameterSet::transitions)
      .def("at", &ParameterSet::at, py::arg("label"));

  m.def("log_likelihood", &log_likelihood, py::arg("family"), py::arg("params"), py::arg("data"));
  m.def("per_transition_log_likelihood", &per_transition_log_likelihood, py::arg("family"),
        py::arg("params"), py::arg("data"));

  // ---- priors and posterior sampling ----
  py::enum_<PriorKind>(m, "PriorKind")
      .value("Normal", PriorKind::Normal)
      .value("Gamma", PriorKind::Gamma);

  py::class_<ParameterPrior>(m, "ParameterPrior")
      .def_static("normal", &ParameterPrior::normal, py::arg("mean"), py::arg("sd"))
      .def_static("gamma", &ParameterPrior::gamma, py::arg("shape"), py::arg("rate"))
      .def("fixed_at", &ParameterPrior::fixed_at, py::arg("value"))
      .def("log_density", &ParameterPrior::log_density, py::arg("x"))
      .def_readwrite("kind", &ParameterPrior::kind)
      .def_readwrite("a", &ParameterPrior::a)
      .def_readwrite("b", &ParameterPrior::b)
      .def_readwrite("fixed", &ParameterPrior::fixed);

  py::class_<TransitionPriors>(m, "TransitionPriors")
      .def(py::init<>())
      .def_readwrite("shape", &TransitionPriors::shape)
      .def_readwrite("scale", &TransitionPriors::scale)
      .def_readwrite("beta_sex", &TransitionPriors::beta_sex)
      .def_readwrite("beta_age", &TransitionPriors::beta_age);

  py::class_<PriorSpec>(m, "PriorSpec")
      .def_static("defaults", &PriorSpec::defaults, py::arg("family"))
      .def_readwrite("transitions", &PriorSpec::transitions)
      .def("at", py::overload_cast<TransitionLabel>(&PriorSpec::at), py::arg("label"),
           py::return_value_policy::reference_internal);

  m.def("log_prior", &log_prior, py::arg("params"), py::arg("prior"));
  m.def("log_posterior", &log_posterior, py::arg("family"), py::arg("params"), py::arg("data"),
        py::arg("prior"));

  py::class_<ChainConfig>(m, "ChainConfig")
      .def(py::init<>())
      .def_readwrite("n_chains", &ChainConfig::n_chains)
      .def_readwrite("n_iterations", &ChainConfig::n_iterations)
      .def_readwrite("n_burnin", &ChainConfig::n_burnin)
      .def_readwrite("thin", &ChainConfig::thin)
      .def_readwrite("seed", &ChainConfig::seed)
      .def_readwrite("adapt_window", &ChainConfig::adapt_window)
      .def_readwrite("target_accept", &ChainConfig::target_accept)
      .def_readwrite("init_step", &ChainConfig::init_step)
      .def("n_retained", &ChainConfig::n_retained);

  py::class_<PosteriorDraws>(m, "PosteriorDraws")
      .def_readonly("family", &PosteriorDraws::family)
      .def_readonly("labels", &PosteriorDraws::labels)
      .def_readonly("n_chains", &PosteriorDraws::n_chains)
      .def_readonly("n_retained", &PosteriorDraws::n_retained)
      .def_readonly("age_center", &PosteriorDraws::age_center)
      .def_readonly("block_names", &PosteriorDraws::block_names)
      .def_readonly("acceptance", &PosteriorDraws::acceptance)
      .def("value", &PosteriorDraws::value, py::arg("chain"), py::arg("iteration"),
           py::arg("param"))
      .def("parameter_draws",
           [](const PosteriorDraws& d, const std::string& label) {
             return d.parameter_draws(d.find(label));
           },
           py::arg("label"))
      .def("posterior_mean_params", &PosteriorDraws::posterior_mean_params)
      .def("total_draws", &PosteriorDraws::total_draws);

  m.def("sample_posterior", &sample_posterior, py::arg("family"), py::arg("data"),
        py::arg("prior"), py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<ParameterDiagnostics>(m, "ParameterDiagnostics")
      .def_readonly("name", &ParameterDiagnostics::name)
      .def_readonly("rhat", &ParameterDiagnostics::rhat)
      .def_readonly("ess", &ParameterDiagnostics::ess)
      .def_readonly("mcse", &ParameterDiagnostics::mcse)
      .def_readonly("constant", &ParameterDiagnostics::constant);

  py::class_<DiagnosticsReport>(m, "DiagnosticsReport")
      .def_readonly("parameters", &DiagnosticsReport::parameters)
      .def_readonly("block_names", &DiagnosticsReport::block_names)
      .def_readonly("acceptance", &DiagnosticsReport::acceptance);

  m.def("diagnostics", &diagnostics, py::arg("draws"));

  py::class_<ParameterSummary>(m, "ParameterSummary")
      .def_readonly("name", &ParameterSummary::name)
      .def_readonly("mean", &ParameterSummary::mean)
      .def_readonly("sd", &ParameterSummary::sd)
      .def_readonly("q025", &ParameterSummary::q025)
      .def_readonly("q500", &ParameterSummary::q500)
      .def_readonly("q975", &ParameterSummary::q975);

  m.def("summarize_draws", &summarize_draws, py::arg("draws"));

  // ---- outcome functionals ----
  py::class_<QuadratureConfig>(m, "QuadratureConfig")
      .def(py::init<>())
      .def_readwrite("nodes", &QuadratureConfig::nodes)
      .def_readwrite("subintervals_per_unit", &QuadratureConfig::subintervals_per_unit)
      .def_readwrite("min_subintervals", &QuadratureConfig::min_subintervals)
      .def_readwrite("refine_tol", &QuadratureConfig::refine_tol);

  py::class_<TimeGrid>(m, "TimeGrid")
      .def(py::init<std::vector<double>>(), py::arg("times"))
      .def_static("regular", &TimeGrid::regular, py::arg("start"), py::arg("stop"),
                  py::arg("step"))
      .def_readonly("times", &TimeGrid::times);

  m.def("cumulative_incidence", &cumulative_incidence, py::arg("params"), py::arg("cov"),
        py::arg("cause"), py::arg("t"), py::arg("quadrature") = QuadratureConfig{});

  py::class_<InitialStateProbabilities>(m, "InitialStateProbabilities")
      .def_readonly("p11", &InitialStateProbabilities::p11)
      .def_readonly("p12", &InitialStateProbabilities::p12)
      .def_readonly("p13", &InitialStateProbabilities::p13);

  py::class_<RefractureStateProbabilities>(m, "RefractureStateProbabilities")
      .def_readonly("p22", &RefractureStateProbabilities::p22)
      .def_readonly("p23", &RefractureStateProbabilities::p23);

  m.def("transition_probabilities_cr", &transition_probabilities_cr, py::arg("params"),
        py::arg("cov"), py::arg("s"), py::arg("t"), py::arg("quadrature") = QuadratureConfig{});
  m.def("transition_probabilities_id", &transition_probabilities_id, py::arg("params"),
        py::arg("cov"), py::arg("s"), py::arg("t"), py::arg("quadrature") = QuadratureConfig{});
  m.def("transition_probabilities_id_refractured", &transition_probabilities_id_refractured,
        py::arg("params"), py::arg("cov"), py::arg("s"), py::arg("t"), py::arg("t12"),
        py::arg("quadrature") = QuadratureConfig{});

  py::enum_<Functional>(m, "Functional")
      .value("CifRefracture", Functional::CifRefracture)
      .value("CifDeath", Functional::CifDeath)
      .value("StayInitial", Functional::StayInitial)
      .value("OccupyRefracture", Functional::OccupyRefracture)
      .value("DeathAny", Functional::DeathAny)
      .value("StayRefracture", Functional::StayRefracture)
      .value("DeathAfterRefracture", Functional::DeathAfterRefracture);

  py::class_<FunctionalSpec>(m, "FunctionalSpec")
      .def(py::init([](Functional f, double t12) {
             return FunctionalSpec{f, t12};
           }),
           py::arg("functional"), py::arg("t12") = 0.0)
      .def_readwrite("functional", &FunctionalSpec::functional)
      .def_readwrite("t12", &FunctionalSpec::t12);

  py::class_<CurveEstimate>(m, "CurveEstimate")
      .def_readonly("times", &CurveEstimate::times)
      .def_readonly("mean", &CurveEstimate::mean)
      .def_readonly("lower", &CurveEstimate::lower)
      .def_readonly("upper", &CurveEstimate::upper)
      .def_readonly("level", &CurveEstimate::level);

  m.def("posterior_curve", &posterior_curve, py::arg("draws"), py::arg("spec"), py::arg("cov"),
        py::arg("grid"), py::arg("quadrature") = QuadratureConfig{}, py::arg("max_draws") = 0,
        py::call_guard<py::gil_scoped_release>());

  py::class_<Profile>(m, "Profile")
      .def(py::init([](bool woman, double age) {
             return Profile{woman, age};
           }),
           py::arg("woman"), py::arg("age"))
      .def_readwrite("woman", &Profile::woman)
      .def_readwrite("age", &Profile::age);

  py::class_<IncidenceCell>(m, "IncidenceCell")
      .def_readonly("transition", &IncidenceCell::transition)
      .def_readonly("profile", &IncidenceCell::profile)
      .def_readonly("mean_pct", &IncidenceCell::mean_pct)
      .def_readonly("lo_pct", &IncidenceCell::lo_pct)
      .def_readonly("hi_pct", &IncidenceCell::hi_pct);

  m.def(
      "incidence_table",
      [](const PosteriorDraws& draws, const std::vector<Profile>& profiles, double horizon,
         const QuadratureConfig& q, int max_draws) {
        return incidence_table(draws, profiles, horizon, q, max_draws);
      },
      py::arg("draws"), py::arg("profiles"), py::arg("horizon") = 1.0,
      py::arg("quadrature") = QuadratureConfig{}, py::arg("max_draws") = 0,
      py::call_guard<py::gil_scoped_release>());

  py::class_<OccupancyDecomposition>(m, "OccupancyDecomposition")
      .def_readonly("times", &OccupancyDecomposition::times)
      .def_readonly("cif_refracture", &OccupancyDecomposition::cif_refracture)
      .def_readonly("occupancy_refracture", &OccupancyDecomposition::occupancy_refracture)
      .def_readonly("dead_after_refracture", &OccupancyDecomposition::dead_after_refracture);

  m.def("occupancy_decomposition", &occupancy_decomposition, py::arg("draws"), py::arg("cov"),
        py::arg("grid"), py::arg("quadrature") = QuadratureConfig{}, py::arg("max_draws") = 0,
        py::call_guard<py::gil_scoped_release>());

  // ---- simulation ----
  py::class_<Pcg64>(m, "Pcg64")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream"))
      .def("uniform", py::overload_cast<>(&Pcg64::uniform))
      .def("normal", py::overload_cast<>(&Pcg64::normal))
      .def("exponential", &Pcg64::exponential)
      .def_static("algorithm_name", &Pcg64::algorithm_name);

  py::class_<CovariateModel>(m, "CovariateModel")
      .def(py::init<>())
      .def_readwrite("woman_prob", &CovariateModel::woman_prob)
      .def_readwrite("age_mean", &CovariateModel::age_mean)
      .def_readwrite("age_sd", &CovariateModel::age_sd)
      .def_readwrite("age_lo", &CovariateModel::age_lo)
      .def_readwrite("age_hi", &CovariateModel::age_hi);

  m.def("default_covariate_model", &default_covariate_model);

  py::class_<SimulationSpec>(m, "SimulationSpec")
      .def(py::init<ModelFamily, ParameterSet, std::size_t, std::uint64_t>(), py::arg("family"),
           py::arg("true_params"), py::arg("n_subjects"), py::arg("seed"))
      .def_readwrite("family", &SimulationSpec::family)
      .def_readwrite("n_subjects", &SimulationSpec::n_subjects)
      .def_readwrite("covariates", &SimulationSpec::covariates)
      .def_readwrite("censor_time", &SimulationSpec::censor_time)
      .def_readwrite("accrual_years", &SimulationSpec::accrual_years)
      .def_readwrite("age_center", &SimulationSpec::age_center)
      .def_readwrite("seed", &SimulationSpec::seed);

  m.def("event_time_from_exponential", &event_time_from_exponential, py::arg("params"),
        py::arg("cov"), py::arg("unit_exponential"));
  m.def("draw_event_time", &draw_event_time, py::arg("params"), py::arg("cov"), py::arg("rng"));
  m.def("simulate_cohort", &simulate_cohort, py::arg("spec"),
        py::call_guard<py::gil_scoped_release>());

  // ---- reference estimates ----
  auto ref = m.def_submodule("reference", "posterior-mean estimates from a large hip-fracture "
                                          "cohort analysis, centered at age 83.4");
  ref.attr("AGE_CENTER") = reference::kAgeCenter;
  ref.def("competing_risks_estimates", &reference::competing_risks_estimates);
  ref.def("illness_death_estimates", &reference::illness_death_estimates);
  ref.def("estimates", &reference::estimates, py::arg("family"));

  // ---- file I/O and CLI ----
  m.def(
      "read_cohort_csv",
      [](const std::string& path, std::optional<double> age_center) {
        return read_cohort_csv(path, age_center);
      },
      py::arg("path"), py::arg("age_center") = std::nullopt);
  m.def(
      "write_cohort_csv",
      [](const std::string& path, const CohortDataset& data) {
        write_cohort_csv(path, data, {{"artifact", "msbayes 0.1.0"}});
      },
      py::arg("path"), py::arg("data"));
  m.def("read_draws_csv", &read_draws_csv, py::arg("path"));
  m.def(
      "write_draws_csv",
      [](const std::string& path, const PosteriorDraws& draws) {
        write_draws_csv(path, draws, {{"artifact", "msbayes 0.1.0"}});
      },
      py::arg("path"), py::arg("draws"));
  m.def(
      "run_command",
      [](const std::vector<std::string>& args) { return run_command(args); },
      py::arg("args"), "run a CLI subcommand in-process; returns the exit code");

  m.attr("__version__") = "0.1.0";
}
