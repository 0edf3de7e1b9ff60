#include "msbayes/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "msbayes/io.hpp"
#include "msbayes/reference.hpp"
#include "msbayes/simulate.hpp"

namespace msbayes {

namespace {

constexpr const char* kArtifactVersion = "msbayes 0.1.0";

std::vector<Profile> parse_profiles(const std::string& text) {
  std::vector<Profile> profiles;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw std::invalid_argument("profile '" + item + "' must look like w:70 or m:80");
    }
    Profile p;
    const std::string sex = item.substr(0, colon);
    if (sex == "w" || sex == "W") p.woman = true;
    else if (sex == "m" || sex == "M") p.woman = false;
    else throw std::invalid_argument("profile sex must be w or m, found '" + sex + "'");
    try {
      p.age = std::stod(item.substr(colon + 1));
    } catch (...) {
      throw std::invalid_argument("profile age in '" + item + "' is not a number");
    }
    profiles.push_back(p);
  }
  if (profiles.empty()) throw std::invalid_argument("no profiles given");
  return profiles;
}

TimeGrid parse_grid(const std::string& text) {
  double start = 0.0, stop = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::stringstream ss(text);
  if (!(ss >> start >> c1 >> stop >> c2 >> step) || c1 != ':' || c2 != ':') {
    throw std::invalid_argument("grid must look like start:stop:step, found '" + text + "'");
  }
  return TimeGrid::regular(start, stop, step);
}

std::string profile_tag(const Profile& p) {
  std::string tag = p.woman ? "w" : "m";
  const double rounded = std::round(p.age);
  if (std::abs(p.age - rounded) < 1e-9) {
    tag += std::to_string(static_cast<long long>(rounded));
  } else {
    tag += format_fixed(p.age, 1);
  }
  return tag;
}

// flat key=value file: <transition>.<param>=<value> per line, '#' comments
ParameterSet parse_params_file(const std::string& path, ModelFamily family) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open params file " + path);
  std::map<std::string, double> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw CsvError(path + " line " + std::to_string(line_no) + ": expected key=value");
    }
    try {
      kv[line.substr(0, eq)] = std::stod(line.substr(eq + 1));
    } catch (...) {
      throw CsvError(path + " line " + std::to_string(line_no) + ": bad numeric value");
    }
  }
  auto get = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw CsvError(path + ": missing key '" + key + "'");
    return it->second;
  };
  std::vector<TransitionParams> tps;
  for (TransitionLabel label : transition_labels(family)) {
    std::string prefix = to_string(label);
    for (char& ch : prefix) ch = static_cast<char>(std::tolower(ch));
    prefix += ".";
    tps.emplace_back(label, WeibullShapeScale(get(prefix + "alpha"), get(prefix + "lambda")),
                     RegressionCoefficients(get(prefix + "beta_sex"), get(prefix + "beta_age")));
  }
  return ParameterSet(family, std::move(tps));
}

PriorSpec parse_priors_file(const std::string& path, ModelFamily family) {
  std::ifstream in(path);
  if (!in) throw CsvError("cannot open priors file " + path);
  std::string joined, line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (!joined.empty()) joined += "; ";
    joined += line;
  }
  return parse_prior_description(joined, family);
}

std::optional<double> parse_age_center(const std::string& text) {
  if (text == "auto") return std::nullopt;
  try {
    return std::stod(text);
  } catch (...) {
    throw std::invalid_argument("--age-center must be 'auto' or a number, found '" + text + "'");
  }
}

std::string out_path(const std::string& dir, const std::string& name) {
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

Metadata base_metadata(ModelFamily family, const std::string& prior_desc, std::uint64_t seed,
                       const QuadratureConfig* q) {
  Metadata meta;
  meta.emplace_back("artifact", kArtifactVersion);
  meta.emplace_back("family", to_string(family));
  meta.emplace_back("priors", prior_desc.empty() ? "-" : prior_desc);
  meta.emplace_back("seed", std::to_string(seed));
  if (q != nullptr) {
    meta.emplace_back("quadrature", "gauss-legendre nodes=" + std::to_string(q->nodes) +
                                        " subintervals_per_unit=" +
                                        std::to_string(q->subintervals_per_unit) +
                                        " min_subintervals=" + std::to_string(q->min_subintervals));
  } else {
    meta.emplace_back("quadrature", "-");
  }
  meta.emplace_back("rng", Pcg64::algorithm_name());
  return meta;
}

struct FitOptions {
  std::string data_path;
  std::string family_text = "id";
  std::string age_center_text = "auto";
  std::string priors_path;
  ChainConfig config;
  std::string out_dir = ".";

  void attach(CLI::App* cmd, bool with_family = true) {
    cmd->add_option("--data", data_path, "cohort CSV path")->required();
    if (with_family) cmd->add_option("--family", family_text, "model family: cr or id");
    cmd->add_option("--age-center", age_center_text, "'auto' (dataset mean) or a constant");
    cmd->add_option("--chains", config.n_chains, "number of chains");
    cmd->add_option("--iters", config.n_iterations, "iterations per chain");
    cmd->add_option("--burnin", config.n_burnin, "burn-in iterations");
    cmd->add_option("--thin", config.thin, "thinning stride");
    cmd->add_option("--seed", config.seed, "64-bit RNG seed");
    cmd->add_option("--priors", priors_path, "priors file (label=kind(a,b) lines)");
    cmd->add_option("--out", out_dir, "output directory");
  }

  ModelFamily family() const {
    const auto f = model_family_from(family_text);
    if (!f) throw std::invalid_argument("--family must be cr or id, found '" + family_text + "'");
    return *f;
  }
};

struct FitArtifacts {
  PosteriorDraws draws;
  std::vector<ParameterSummary> summary;
  std::optional<DiagnosticsReport> report;
};

FitArtifacts run_fit(ModelFamily family, const CohortDataset& data, const PriorSpec& prior,
                     const ChainConfig& config) {
  FitArtifacts art{sample_posterior(family, data, prior, config), {}, std::nullopt};
  art.summary = summarize_draws(art.draws);
  if (config.n_chains >= 2 && config.n_retained() >= 4) {
    art.report = diagnostics(art.draws);
  }
  return art;
}

std::vector<std::string> write_fit_reports(const FitArtifacts& art, const std::string& out_dir) {
  std::vector<std::string> manifest;
  const Metadata meta = base_metadata(art.draws.family,
                                      describe_prior(art.draws.prior, art.draws.family),
                                      art.draws.config.seed, nullptr);
  const std::string draws_path = out_path(out_dir, "draws.csv");
  write_draws_csv(draws_path, art.draws, meta);
  manifest.push_back(draws_path);

  Metadata summary_meta = meta;
  summary_meta.emplace_back("age_center", format_double(art.draws.age_center));
  const std::string summary_path = out_path(out_dir, "summary.csv");
  write_summary_csv(summary_path, art.summary, summary_meta);
  manifest.push_back(summary_path);

  if (art.report.has_value()) {
    const std::string diag_path = out_path(out_dir, "diagnostics.csv");
    write_diagnostics_csv(diag_path, *art.report, meta);
    manifest.push_back(diag_path);
    const std::string acc_path = out_path(out_dir, "acceptance.csv");
    write_acceptance_csv(acc_path, *art.report, meta);
    manifest.push_back(acc_path);
  }
  return manifest;
}

void print_manifest(const std::vector<std::string>& manifest) {
  for (const auto& path : manifest) std::cout << "wrote " << path << "\n";
}

int cmd_simulate(const std::string& family_text, std::size_t n, std::uint64_t seed,
                 double censor, std::optional<double> accrual, const CovariateModel& covariates,
                 double age_center, const std::string& params_path, const std::string& out_dir) {
  const auto family = model_family_from(family_text);
  if (!family) {
    throw std::invalid_argument("--family must be cr or id, found '" + family_text + "'");
  }
  ParameterSet params =
      params_path.empty() ? reference::estimates(*family) : parse_params_file(params_path, *family);
  SimulationSpec spec(*family, std::move(params), n, seed);
  spec.censor_time = censor;
  spec.accrual_years = accrual;
  spec.covariates = covariates;
  spec.age_center = age_center;

  const CohortDataset data = simulate_cohort(spec);

  Metadata meta = base_metadata(*family, "-", seed, nullptr);
  meta.emplace_back("n_subjects", std::to_string(n));
  meta.emplace_back("censor_time", format_double(censor));
  if (accrual.has_value()) meta.emplace_back("accrual_years", format_double(*accrual));
  meta.emplace_back("age_center", format_double(age_center));
  meta.emplace_back("covariates",
                    "woman_prob=" + format_double(covariates.woman_prob) + " age=normal(" +
                        format_double(covariates.age_mean) + "," + format_double(covariates.age_sd) +
                        ") in [" + format_double(covariates.age_lo) + "," +
                        format_double(covariates.age_hi) + "]");
  for (const TransitionParams& tp : spec.true_params.transitions()) {
    meta.emplace_back("true_" + to_string(tp.label),
                      "alpha=" + format_double(tp.baseline.shape) +
                          " lambda=" + format_double(tp.baseline.scale) +
                          " beta_sex=" + format_double(tp.coeffs.beta_sex) +
                          " beta_age=" + format_double(tp.coeffs.beta_age));
  }
  const std::string path = out_path(out_dir, "cohort.csv");
  write_cohort_csv(path, data, meta);
  print_manifest({path});
  return 0;
}

int cmd_fit(const FitOptions& opts) {
  const ModelFamily family = opts.family();
  std::vector<std::string> warnings;
  const CohortDataset data =
      read_cohort_csv(opts.data_path, parse_age_center(opts.age_center_text), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
  const PriorSpec prior = opts.priors_path.empty() ? PriorSpec::defaults(family)
                                                   : parse_priors_file(opts.priors_path, family);
  const FitArtifacts art = run_fit(family, data, prior, opts.config);
  if (!art.report.has_value()) {
    std::cerr << "warning: diagnostics need >= 2 chains and >= 4 retained draws; skipped\n";
  }
  print_manifest(write_fit_reports(art, opts.out_dir));
  return 0;
}

int cmd_predict(const std::string& draws_path, const std::string& profiles_text, double horizon,
                const std::string& grid_text, int nodes, int curve_draws,
                const std::string& age_center_text, const std::string& out_dir) {
  PosteriorDraws draws = read_draws_csv(draws_path);
  if (age_center_text != "auto") {
    draws.age_center = *parse_age_center(age_center_text);
  }
  const auto profiles = parse_profiles(profiles_text);
  const TimeGrid grid = parse_grid(grid_text);
  QuadratureConfig q;
  q.nodes = nodes;
  q.validate();

  Metadata meta = base_metadata(draws.family, describe_prior(draws.prior, draws.family),
                                draws.config.seed, &q);
  meta.emplace_back("age_center", format_double(draws.age_center));
  meta.emplace_back("band", "pointwise equal-tailed 95% credible interval");
  meta.emplace_back("horizon", format_double(horizon));

  std::vector<std::string> manifest;
  const auto cells = incidence_table(draws, profiles, horizon, q);
  const std::string incidence_path = out_path(out_dir, "incidence.csv");
  write_incidence_csv(incidence_path, cells, meta);
  manifest.push_back(incidence_path);

  std::vector<FunctionalSpec> functionals = {{Functional::CifRefracture, 0.0},
                                             {Functional::CifDeath, 0.0},
                                             {Functional::StayInitial, 0.0},
                                             {Functional::OccupyRefracture, 0.0},
                                             {Functional::DeathAny, 0.0},
                                             {Functional::StayRefracture, 0.0},
                                             {Functional::DeathAfterRefracture, 0.0}};
  Metadata curve_meta = meta;
  curve_meta.emplace_back("curve_draws",
                          curve_draws > 0 ? std::to_string(curve_draws) : std::string("all"));
  for (const Profile& profile : profiles) {
    const CovariateVector cov(profile.woman ? 1.0 : 0.0, profile.age - draws.age_center);
    for (const FunctionalSpec& spec : functionals) {
      if (draws.family == ModelFamily::CompetingRisks &&
          (spec.functional == Functional::OccupyRefracture ||
           spec.functional == Functional::DeathAny ||
           spec.functional == Functional::StayRefracture ||
           spec.functional == Functional::DeathAfterRefracture)) {
        continue;
      }
      const CurveEstimate curve = posterior_curve(draws, spec, cov, grid, q, curve_draws);
      const std::string name =
          "curve_" + to_string(spec.functional) + "_" + profile_tag(profile) + ".csv";
      const std::string path = out_path(out_dir, name);
      write_curve_csv(path, curve, curve_meta);
      manifest.push_back(path);
    }
  }
  print_manifest(manifest);
  return 0;
}

int cmd_decompose(const std::string& draws_path, const std::string& profile_text,
                  const std::string& grid_text, int nodes, int curve_draws,
                  const std::string& out_dir) {
  const PosteriorDraws draws = read_draws_csv(draws_path);
  const auto profiles = parse_profiles(profile_text);
  if (profiles.size() != 1) throw std::invalid_argument("--profile expects a single sex:age");
  const TimeGrid grid = parse_grid(grid_text);
  QuadratureConfig q;
  q.nodes = nodes;
  q.validate();

  const CovariateVector cov(profiles[0].woman ? 1.0 : 0.0, profiles[0].age - draws.age_center);
  const OccupancyDecomposition rows = occupancy_decomposition(draws, cov, grid, q, curve_draws);

  Metadata meta = base_metadata(draws.family, describe_prior(draws.prior, draws.family),
                                draws.config.seed, &q);
  meta.emplace_back("age_center", format_double(draws.age_center));
  meta.emplace_back("profile", profile_tag(profiles[0]));
  meta.emplace_back("curve_draws",
                    curve_draws > 0 ? std::to_string(curve_draws) : std::string("all"));
  const std::string path = out_path(out_dir, "decompose.csv");
  write_decompose_csv(path, rows, meta);
  print_manifest({path});
  return 0;
}

int cmd_compare(const FitOptions& opts) {
  std::vector<std::string> warnings;
  const CohortDataset data =
      read_cohort_csv(opts.data_path, parse_age_center(opts.age_center_text), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  ChainConfig cr_config = opts.config;
  ChainConfig id_config = opts.config;
  id_config.seed = opts.config.seed + 1;  // independent streams for the two fits

  const FitArtifacts cr = run_fit(ModelFamily::CompetingRisks, data,
                                  PriorSpec::defaults(ModelFamily::CompetingRisks), cr_config);
  const FitArtifacts id = run_fit(ModelFamily::IllnessDeath, data,
                                  PriorSpec::defaults(ModelFamily::IllnessDeath), id_config);
  if (!cr.report.has_value() || !id.report.has_value()) {
    throw std::invalid_argument("compare requires >= 2 chains for MCSE estimates");
  }

  std::vector<CompareRow> rows;
  double max_ratio = 0.0;
  for (std::size_t p = 0; p < cr.draws.labels.size(); ++p) {
    CompareRow row;
    row.parameter = cr.draws.labels[p];
    const int ip = id.draws.find(row.parameter);
    row.cr_mean = cr.summary[p].mean;
    row.cr_sd = cr.summary[p].sd;
    row.cr_mcse = cr.report->parameters[p].mcse;
    row.id_mean = id.summary[ip].mean;
    row.id_sd = id.summary[ip].sd;
    row.id_mcse = id.report->parameters[ip].mcse;
    row.abs_diff = std::abs(row.cr_mean - row.id_mean);
    const double combined = std::sqrt(row.cr_mcse * row.cr_mcse + row.id_mcse * row.id_mcse);
    row.diff_over_mcse = combined > 0.0 ? row.abs_diff / combined : 0.0;
    max_ratio = std::max(max_ratio, row.diff_over_mcse);
    rows.push_back(row);
  }

  std::vector<std::string> manifest = write_fit_reports(cr, opts.out_dir + "/cr");
  const auto id_manifest = write_fit_reports(id, opts.out_dir + "/id");
  manifest.insert(manifest.end(), id_manifest.begin(), id_manifest.end());

  Metadata meta = base_metadata(ModelFamily::IllnessDeath,
                                describe_prior(id.draws.prior, ModelFamily::IllnessDeath),
                                opts.config.seed, nullptr);
  meta.emplace_back("age_center", format_double(data.age_center()));
  const std::string compare_path = out_path(opts.out_dir, "compare.csv");
  write_compare_csv(compare_path, rows, meta);
  manifest.push_back(compare_path);
  print_manifest(manifest);
  std::cout << "max shared-parameter |diff|/mcse = " << format_fixed(max_ratio, 3) << "\n";
  return 0;
}

}  // namespace

int run_command(int argc, const char* const* argv) {
  CLI::App app{"Bayesian Weibull multi-state survival models (competing risks / illness-death)"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "",
                 "flat key=value config file (keys are <subcommand>.<flag>, e.g. fit.chains=4); "
                 "explicit flags win");

  int exit_code = 0;

  // simulate
  auto* sim = app.add_subcommand("simulate", "generate a synthetic cohort CSV");
  struct {
    std::string family = "id";
    std::size_t n = 0;
    std::uint64_t seed = 1;
    double censor = 8.0;
    double accrual = 0.0;
    CovariateModel covariates = default_covariate_model();
    double age_center = reference::kAgeCenter;
    std::string params_path;
    std::string out_dir = ".";
  } sim_opts;
  sim->add_option("--n", sim_opts.n, "number of subjects")->required();
  sim->add_option("--family", sim_opts.family, "model family: cr or id");
  sim->add_option("--seed", sim_opts.seed, "64-bit RNG seed");
  sim->add_option("--censor", sim_opts.censor, "administrative censoring horizon (years)");
  sim->add_option("--accrual", sim_opts.accrual,
                  "staggered entry: uniform accrual window (years), 0 disables");
  sim->add_option("--woman-prob", sim_opts.covariates.woman_prob, "P(woman)");
  sim->add_option("--age-mean", sim_opts.covariates.age_mean, "age distribution mean");
  sim->add_option("--age-sd", sim_opts.covariates.age_sd, "age distribution sd");
  sim->add_option("--age-lo", sim_opts.covariates.age_lo, "age truncation lower bound");
  sim->add_option("--age-hi", sim_opts.covariates.age_hi, "age truncation upper bound");
  sim->add_option("--age-center", sim_opts.age_center,
                  "centering constant the true parameters refer to");
  sim->add_option("--params", sim_opts.params_path,
                  "true parameter file (fr.alpha=... lines); default: reference estimates");
  sim->add_option("--out", sim_opts.out_dir, "output directory");
  sim->callback([&]() {
    exit_code = cmd_simulate(sim_opts.family, sim_opts.n, sim_opts.seed, sim_opts.censor,
                             sim_opts.accrual > 0.0 ? std::optional<double>(sim_opts.accrual)
                                                    : std::nullopt,
                             sim_opts.covariates, sim_opts.age_center, sim_opts.params_path,
                             sim_opts.out_dir);
  });

  // fit
  auto* fit = app.add_subcommand("fit", "sample the posterior from a cohort CSV");
  FitOptions fit_opts;
  fit_opts.attach(fit);
  fit->callback([&]() { exit_code = cmd_fit(fit_opts); });

  // predict
  auto* predict = app.add_subcommand("predict", "incidence table and posterior curves");
  struct {
    std::string draws_path;
    std::string profiles = "w:70,w:80,w:90,m:70,m:80,m:90";
    double horizon = 1.0;
    std::string grid = "0:5:0.25";
    int nodes = 64;
    int curve_draws = 1000;
    std::string age_center = "auto";
    std::string out_dir = ".";
  } predict_opts;
  predict->add_option("--draws", predict_opts.draws_path, "draws CSV from fit")->required();
  predict->add_option("--profiles", predict_opts.profiles, "sex:age list, e.g. w:70,m:80");
  predict->add_option("--horizon", predict_opts.horizon, "incidence horizon (years)");
  predict->add_option("--grid", predict_opts.grid, "curve grid start:stop:step");
  predict->add_option("--nodes", predict_opts.nodes, "Gauss-Legendre nodes per subinterval");
  predict->add_option("--curve-draws", predict_opts.curve_draws,
                      "posterior draws used for curves (0 = all)");
  predict->add_option("--age-center", predict_opts.age_center,
                      "override the centering constant stored with the draws");
  predict->add_option("--out", predict_opts.out_dir, "output directory");
  predict->callback([&]() {
    exit_code = cmd_predict(predict_opts.draws_path, predict_opts.profiles, predict_opts.horizon,
                            predict_opts.grid, predict_opts.nodes, predict_opts.curve_draws,
                            predict_opts.age_center, predict_opts.out_dir);
  });

  // decompose
  auto* decompose = app.add_subcommand("decompose", "refracture occupancy split of the CIF");
  struct {
    std::string draws_path;
    std::string profile = "w:80";
    std::string grid = "0:5:0.1";
    int nodes = 64;
    int curve_draws = 1000;
    std::string out_dir = ".";
  } decompose_opts;
  decompose->add_option("--draws", decompose_opts.draws_path, "draws CSV from fit")->required();
  decompose->add_option("--profile", decompose_opts.profile, "sex:age profile");
  decompose->add_option("--grid", decompose_opts.grid, "curve grid start:stop:step");
  decompose->add_option("--nodes", decompose_opts.nodes, "Gauss-Legendre nodes per subinterval");
  decompose->add_option("--curve-draws", decompose_opts.curve_draws,
                        "posterior draws used (0 = all)");
  decompose->add_option("--out", decompose_opts.out_dir, "output directory");
  decompose->callback([&]() {
    exit_code = cmd_decompose(decompose_opts.draws_path, decompose_opts.profile,
                              decompose_opts.grid, decompose_opts.nodes,
                              decompose_opts.curve_draws, decompose_opts.out_dir);
  });

  // compare
  auto* compare = app.add_subcommand(
      "compare", "fit both families on the same data and compare shared parameters");
  FitOptions compare_opts;
  compare_opts.attach(compare, /*with_family=*/false);
  compare->callback([&]() { exit_code = cmd_compare(compare_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const CsvError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::out_of_range& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "unexpected failure: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}

int run_command(const std::vector<std::string>& args) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back("msbayes");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  argv.reserve(storage.size());
  for (const auto& s : storage) argv.push_back(s.c_str());
  return run_command(static_cast<int>(argv.size()), argv.data());
}

}  // namespace msbayes
