#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "msbayes/io.hpp"
#include "msbayes/reference.hpp"
#include "msbayes/simulate.hpp"
#include "support.hpp"

using namespace msbayes;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("msbayes_io_test_" + std::to_string(0) + "_" +
                                        std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int n = 0;
    return n;
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

}  // namespace

TEST_CASE("shortest-exact formatting round-trips") {
  Pcg64 rng(22, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::exp(rng.uniform(-20.0, 5.0)) * (rng.bernoulli(0.5) ? 1.0 : -1.0);
    CHECK(std::stod(format_double(x)) == x);
  }
  CHECK(format_fixed(1.23456789, 6) == "1.234568");
}

TEST_CASE("cohort CSV round-trips the dataset exactly") {
  TempDir dir;
  SimulationSpec spec(ModelFamily::IllnessDeath, reference::illness_death_estimates(), 500, 3);
  const auto data = simulate_cohort(spec);
  const std::string path = dir.file("cohort.csv");
  write_cohort_csv(path, data, {{"artifact", "msbayes test"}});

  const auto loaded = read_cohort_csv(path, data.age_center());
  REQUIRE(loaded.size() == data.size());
  CHECK(loaded.age_center() == data.age_center());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& a = data.records()[i];
    const auto& b = loaded.records()[i];
    CHECK(a.id == b.id);
    CHECK(a.woman == b.woman);
    CHECK(a.age_at_discharge == b.age_at_discharge);
    CHECK(a.t_first == b.t_first);
    CHECK(a.first_outcome == b.first_outcome);
    REQUIRE(a.post_refracture.has_value() == b.post_refracture.has_value());
    if (a.post_refracture.has_value()) {
      CHECK(a.post_refracture->t_second == b.post_refracture->t_second);
      CHECK(a.post_refracture->outcome == b.post_refracture->outcome);
    }
  }
}

TEST_CASE("well-formed three-row file") {
  TempDir dir;
  const std::string path = dir.file("three.csv");
  write_text(path,
             "id,sex,age,t_first,first_outcome,t_second,second_outcome\n"
             "a,W,80,1.5,censored,,\n"
             "b,M,72.5,0.8,death,,\n"
             "c,W,90,0.4,refracture,1.2,death\n");
  const auto data = read_cohort_csv(path, 83.4);
  REQUIRE(data.size() == 3);
  CHECK(data.records()[2].post_refracture->outcome == SecondOutcome::Death);
}

TEST_CASE("malformed rows are reported with line numbers") {
  TempDir dir;
  const std::string path = dir.file("bad.csv");
  write_text(path,
             "id,sex,age,t_first,first_outcome,t_second,second_outcome\n"
             "a,W,80,1.5,censored,,\n"
             "b,M,72.5,0.8,death,2.0,death\n");
  try {
    read_cohort_csv(path, 83.4);
    FAIL("expected CsvError");
  } catch (const CsvError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
  }
}

TEST_CASE("assorted malformed inputs") {
  TempDir dir;
  const std::string path = dir.file("x.csv");

  write_text(path, "id,sex,age\n");
  CHECK_THROWS_AS(read_cohort_csv(path, 83.4), CsvError);

  write_text(path, "");
  CHECK_THROWS_AS(read_cohort_csv(path, 83.4), CsvError);

  write_text(path,
             "id,sex,age,t_first,first_outcome,t_second,second_outcome\n"
             "a,X,80,1.5,censored,,\n");
  CHECK_THROWS_AS(read_cohort_csv(path, 83.4), CsvError);

  write_text(path,
             "id,sex,age,t_first,first_outcome,t_second,second_outcome\n"
             "a,W,eighty,1.5,censored,,\n");
  CHECK_THROWS_AS(read_cohort_csv(path, 83.4), CsvError);

  CHECK_THROWS_AS(read_cohort_csv(dir.file("missing.csv"), 83.4), CsvError);
}

TEST_CASE("empty file with a header yields an empty dataset and a warning") {
  TempDir dir;
  const std::string path = dir.file("empty.csv");
  write_text(path, "id,sex,age,t_first,first_outcome,t_second,second_outcome\n");
  std::vector<std::string> warnings;
  const auto data = read_cohort_csv(path, std::nullopt, &warnings);
  CHECK(data.size() == 0);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("size 0") != std::string::npos);
}

TEST_CASE("structural violations surface as validation errors") {
  TempDir dir;
  const std::string path = dir.file("structural.csv");
  write_text(path,
             "id,sex,age,t_first,first_outcome,t_second,second_outcome\n"
             "a,W,80,0,censored,,\n");
  CHECK_THROWS_AS(read_cohort_csv(path, 83.4), ValidationError);
}

TEST_CASE("draws CSV round-trips values bit-for-bit") {
  TempDir dir;
  Pcg64 rng(33, 0);
  const auto data = test_support::random_dataset(60, rng);
  ChainConfig config;
  config.n_chains = 2;
  config.n_iterations = 200;
  config.n_burnin = 100;
  config.seed = 4;
  const auto draws = sample_posterior(ModelFamily::IllnessDeath, data,
                                      PriorSpec::defaults(ModelFamily::IllnessDeath), config);
  const std::string path = dir.file("draws.csv");
  write_draws_csv(path, draws, {{"artifact", "msbayes test"}});

  const auto loaded = read_draws_csv(path);
  CHECK(loaded.family == draws.family);
  CHECK(loaded.labels == draws.labels);
  CHECK(loaded.n_chains == draws.n_chains);
  CHECK(loaded.n_retained == draws.n_retained);
  CHECK(loaded.age_center == draws.age_center);
  REQUIRE(loaded.values.size() == draws.values.size());
  for (std::size_t i = 0; i < draws.values.size(); ++i) {
    CHECK(loaded.values[i] == draws.values[i]);
  }
  CHECK(describe_prior(loaded.prior, loaded.family) == describe_prior(draws.prior, draws.family));
}

TEST_CASE("prior descriptions parse back") {
  PriorSpec spec = PriorSpec::defaults(ModelFamily::IllnessDeath);
  spec.at(TransitionLabel::FR).shape = spec.at(TransitionLabel::FR).shape.fixed_at(1.0);
  spec.at(TransitionLabel::RD).beta_sex = ParameterPrior::normal(-0.25, 2.5);
  const std::string text = describe_prior(spec, ModelFamily::IllnessDeath);
  const PriorSpec parsed = parse_prior_description(text, ModelFamily::IllnessDeath);
  CHECK(describe_prior(parsed, ModelFamily::IllnessDeath) == text);
  CHECK(parsed.at(TransitionLabel::FR).shape.is_fixed());
  CHECK(parsed.at(TransitionLabel::RD).beta_sex.a == -0.25);

  CHECK_THROWS_AS(parse_prior_description("nonsense", ModelFamily::IllnessDeath), CsvError);
  CHECK_THROWS_AS(parse_prior_description("alpha_XX=gamma(1,1)", ModelFamily::IllnessDeath),
                  CsvError);
}
