#include "msbayes/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace msbayes {

std::string format_double(double x) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double x, int decimals) {
  char buf[64];
  const int n = std::snprintf(buf, sizeof(buf), "%.*f", decimals, x);
  return std::string(buf, buf + n);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else if (c != '\r') {
      current += c;
    }
  }
  fields.push_back(current);
  return fields;
}

std::optional<double> parse_number(const std::string& text) {
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
  return value;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

void write_metadata(std::ofstream& out, const Metadata& metadata) {
  for (const auto& [key, value] : metadata) out << "# " << key << ": " << value << "\n";
}

constexpr const char* kCohortHeader = "id,sex,age,t_first,first_outcome,t_second,second_outcome";

}  // namespace

CohortDataset read_cohort_csv(const std::string& path, std::optional<double> age_center,
                              std::vector<std::string>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path);

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<SubjectRecord> records;
  std::vector<std::string> problems;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] == '#') continue;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!header_seen) {
      if (line != kCohortHeader) {
        throw CsvError(path + " line " + std::to_string(line_no) +
                       ": expected header '" + kCohortHeader + "'");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    auto fail = [&](const std::string& what) {
      problems.push_back("line " + std::to_string(line_no) + ": " + what);
    };
    if (fields.size() != 7) {
      fail("expected 7 columns, found " + std::to_string(fields.size()));
      continue;
    }
    SubjectRecord r;
    r.id = fields[0];
    if (fields[1] == "W" || fields[1] == "w") {
      r.woman = 1.0;
    } else if (fields[1] == "M" || fields[1] == "m") {
      r.woman = 0.0;
    } else {
      fail("sex must be M or W, found '" + fields[1] + "'");
      continue;
    }
    const auto age = parse_number(fields[2]);
    const auto t_first = parse_number(fields[3]);
    if (!age || !t_first) {
      fail("unparseable numeric field");
      continue;
    }
    r.age_at_discharge = *age;
    r.t_first = *t_first;
    const auto outcome = first_outcome_from(fields[4]);
    if (!outcome) {
      fail("first_outcome must be censored|refracture|death, found '" + fields[4] + "'");
      continue;
    }
    r.first_outcome = *outcome;
    const bool has_second = !fields[5].empty() || !fields[6].empty();
    if (has_second) {
      if (r.first_outcome != FirstOutcome::Refracture) {
        fail("t_second/second_outcome present but first_outcome is " + to_string(r.first_outcome));
        continue;
      }
      const auto t_second = parse_number(fields[5]);
      const auto second = second_outcome_from(fields[6]);
      if (!t_second || !second) {
        fail("malformed post-refracture fields");
        continue;
      }
      r.post_refracture = PostRefracture{*t_second, *second};
    }
    records.push_back(std::move(r));
  }

  if (!header_seen) throw CsvError(path + ": missing header row");
  if (!problems.empty()) {
    std::string msg = path + ": " + std::to_string(problems.size()) + " malformed row";
    if (problems.size() != 1) msg += "s";
    const std::size_t shown = std::min<std::size_t>(problems.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) msg += "; " + problems[i];
    if (problems.size() > shown) msg += "; ...";
    throw CsvError(msg);
  }
  if (records.empty()) {
    if (warnings) warnings->push_back(path + ": no data rows, dataset of size 0");
    return CohortDataset({}, age_center.value_or(0.0));
  }
  if (age_center.has_value()) return validate_dataset(std::move(records), *age_center);
  return center_ages(std::move(records));
}

void write_cohort_csv(const std::string& path, const CohortDataset& data,
                      const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << kCohortHeader << "\n";
  for (const SubjectRecord& r : data.records()) {
    out << r.id << ',' << (r.woman == 1.0 ? 'W' : 'M') << ',' << format_double(r.age_at_discharge)
        << ',' << format_double(r.t_first) << ',' << to_string(r.first_outcome) << ',';
    if (r.post_refracture.has_value()) {
      out << format_double(r.post_refracture->t_second) << ','
          << to_string(r.post_refracture->outcome);
    } else {
      out << ',';
    }
    out << "\n";
  }
}

std::string describe_prior(const PriorSpec& prior, ModelFamily family) {
  std::string text;
  for (TransitionLabel label : transition_labels(family)) {
    const TransitionPriors& tp = prior.at(label);
    const ParameterPrior* priors[4] = {&tp.shape, &tp.scale, &tp.beta_sex, &tp.beta_age};
    for (int p = 0; p < 4; ++p) {
      if (!text.empty()) text += "; ";
      text += parameter_label(label, p) + "=" + priors[p]->describe();
    }
  }
  return text;
}

PriorSpec parse_prior_description(const std::string& text, ModelFamily family) {
  PriorSpec spec = PriorSpec::defaults(family);
  std::stringstream ss(text);
  std::string clause;
  while (std::getline(ss, clause, ';')) {
    // trim
    const auto first = clause.find_first_not_of(' ');
    if (first == std::string::npos) continue;
    clause = clause.substr(first);
    const auto eq = clause.find('=');
    const auto open = clause.find('(');
    const auto close = clause.rfind(')');
    if (eq == std::string::npos || open == std::string::npos || close == std::string::npos) {
      throw CsvError("malformed prior clause '" + clause + "'");
    }
    const std::string name = clause.substr(0, eq);
    const std::string kind = clause.substr(eq + 1, open - eq - 1);
    const std::string args = clause.substr(open + 1, close - open - 1);

    const auto underscore = name.rfind('_');
    if (underscore == std::string::npos) throw CsvError("malformed prior name '" + name + "'");
    const auto label = transition_label_from(name.substr(underscore + 1));
    if (!label) throw CsvError("unknown transition in prior name '" + name + "'");
    const std::string param = name.substr(0, underscore);

    TransitionPriors& tp = spec.at(*label);
    ParameterPrior* target = nullptr;
    if (param == "alpha") target = &tp.shape;
    else if (param == "lambda") target = &tp.scale;
    else if (param == "beta_sex") target = &tp.beta_sex;
    else if (param == "beta_age") target = &tp.beta_age;
    else throw CsvError("unknown parameter in prior name '" + name + "'");

    const auto comma = args.find(',');
    if (kind == "fixed") {
      const auto v = parse_number(args);
      if (!v) throw CsvError("malformed fixed value in '" + clause + "'");
      *target = target->fixed_at(*v);
    } else {
      if (comma == std::string::npos) throw CsvError("malformed prior args in '" + clause + "'");
      const auto a = parse_number(args.substr(0, comma));
      const auto b = parse_number(args.substr(comma + 1));
      if (!a || !b) throw CsvError("malformed prior args in '" + clause + "'");
      if (kind == "normal") *target = ParameterPrior::normal(*a, *b);
      else if (kind == "gamma") *target = ParameterPrior::gamma(*a, *b);
      else throw CsvError("unknown prior kind '" + kind + "'");
    }
  }
  return spec;
}

void write_draws_csv(const std::string& path, const PosteriorDraws& draws,
                     const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "# family: " << to_string(draws.family) << "\n";
  out << "# age_center: " << format_double(draws.age_center) << "\n";
  out << "# chains: " << draws.n_chains << "\n";
  out << "# retained: " << draws.n_retained << "\n";
  out << "# iterations: " << draws.config.n_iterations << "\n";
  out << "# burnin: " << draws.config.n_burnin << "\n";
  out << "# thin: " << draws.config.thin << "\n";
  out << "# seed: " << draws.config.seed << "\n";
  out << "# prior: " << describe_prior(draws.prior, draws.family) << "\n";
  out << "chain,iteration";
  for (const auto& label : draws.labels) out << ',' << label;
  out << "\n";
  for (int c = 0; c < draws.n_chains; ++c) {
    for (int i = 0; i < draws.n_retained; ++i) {
      out << c << ',' << i;
      for (int p = 0; p < draws.n_params(); ++p) out << ',' << format_double(draws.value(c, i, p));
      out << "\n";
    }
  }
}

PosteriorDraws read_draws_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CsvError("cannot open " + path);

  PosteriorDraws draws;
  std::optional<ModelFamily> family;
  std::optional<double> age_center;
  std::string prior_text;
  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<double> values;
  int n_params = 0;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(':');
      if (colon == std::string::npos) continue;
      std::string key = line.substr(1, colon - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      std::string value = line.substr(colon + 1);
      value.erase(0, value.find_first_not_of(' '));
      if (key == "family") family = model_family_from(value);
      else if (key == "age_center") age_center = parse_number(value);
      else if (key == "prior") prior_text = value;
      else if (key == "seed") {
        if (auto v = parse_number(value)) draws.config.seed = static_cast<std::uint64_t>(*v);
      } else if (key == "iterations") {
        if (auto v = parse_number(value)) draws.config.n_iterations = static_cast<int>(*v);
      } else if (key == "burnin") {
        if (auto v = parse_number(value)) draws.config.n_burnin = static_cast<int>(*v);
      } else if (key == "thin") {
        if (auto v = parse_number(value)) draws.config.thin = static_cast<int>(*v);
      }
      continue;
    }
    if (!header_seen) {
      const auto fields = split_csv_line(line);
      if (fields.size() < 3 || fields[0] != "chain" || fields[1] != "iteration") {
        throw CsvError(path + " line " + std::to_string(line_no) + ": malformed draws header");
      }
      draws.labels.assign(fields.begin() + 2, fields.end());
      n_params = static_cast<int>(draws.labels.size());
      header_seen = true;
      continue;
    }
    const auto fields = split_csv_line(line);
    if (static_cast<int>(fields.size()) != n_params + 2) {
      throw CsvError(path + " line " + std::to_string(line_no) + ": wrong column count");
    }
    for (int p = 0; p < n_params; ++p) {
      const auto v = parse_number(fields[p + 2]);
      if (!v) {
        throw CsvError(path + " line " + std::to_string(line_no) + ": unparseable value");
      }
      values.push_back(*v);
    }
    const auto chain = parse_number(fields[0]);
    if (!chain) throw CsvError(path + " line " + std::to_string(line_no) + ": bad chain index");
    draws.n_chains = std::max(draws.n_chains, static_cast<int>(*chain) + 1);
  }
  if (!header_seen) throw CsvError(path + ": missing draws header");
  if (!family) throw CsvError(path + ": missing '# family:' metadata");
  if (!age_center) throw CsvError(path + ": missing '# age_center:' metadata");
  draws.family = *family;
  draws.age_center = *age_center;
  draws.values = std::move(values);
  const auto rows = draws.values.size() / n_params;
  if (draws.n_chains < 1 || rows % draws.n_chains != 0) {
    throw CsvError(path + ": draws are not evenly divided across chains");
  }
  draws.n_retained = static_cast<int>(rows / draws.n_chains);
  draws.config.n_chains = draws.n_chains;
  if (!prior_text.empty()) {
    draws.prior = parse_prior_description(prior_text, draws.family);
  } else {
    draws.prior = PriorSpec::defaults(draws.family);
  }
  return draws;
}

void write_summary_csv(const std::string& path, const std::vector<ParameterSummary>& rows,
                       const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "parameter,mean,sd,q2.5,q50,q97.5\n";
  for (const auto& r : rows) {
    out << r.name << ',' << format_fixed(r.mean, 6) << ',' << format_fixed(r.sd, 6) << ','
        << format_fixed(r.q025, 6) << ',' << format_fixed(r.q500, 6) << ','
        << format_fixed(r.q975, 6) << "\n";
  }
}

void write_diagnostics_csv(const std::string& path, const DiagnosticsReport& report,
                           const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "parameter,rhat,ess,mcse,flag\n";
  for (const auto& d : report.parameters) {
    out << d.name << ',';
    if (d.constant) {
      out << ",,," << "constant\n";
    } else {
      out << format_fixed(d.rhat, 6) << ',' << format_fixed(d.ess, 1) << ','
          << format_fixed(d.mcse, 6) << ",ok\n";
    }
  }
}

void write_acceptance_csv(const std::string& path, const DiagnosticsReport& report,
                          const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "chain,block,acceptance_rate\n";
  for (std::size_t c = 0; c < report.acceptance.size(); ++c) {
    for (std::size_t b = 0; b < report.acceptance[c].size(); ++b) {
      const std::string name =
          b < report.block_names.size() ? report.block_names[b] : std::to_string(b);
      out << c << ',' << name << ',' << format_fixed(report.acceptance[c][b], 6) << "\n";
    }
  }
}

void write_incidence_csv(const std::string& path, const std::vector<IncidenceCell>& cells,
                         const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "transition,sex,age,mean_pct,lo2.5_pct,hi97.5_pct\n";
  for (const auto& c : cells) {
    out << to_string(c.transition) << ',' << (c.profile.woman ? 'W' : 'M') << ','
        << format_fixed(c.profile.age, 1) << ',' << format_fixed(c.mean_pct, 6) << ','
        << format_fixed(c.lo_pct, 6) << ',' << format_fixed(c.hi_pct, 6) << "\n";
  }
}

void write_curve_csv(const std::string& path, const CurveEstimate& curve,
                     const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "t,mean,lo2.5,hi97.5\n";
  for (std::size_t i = 0; i < curve.times.size(); ++i) {
    out << format_fixed(curve.times[i], 6) << ',' << format_fixed(curve.mean[i], 6) << ','
        << format_fixed(curve.lower[i], 6) << ',' << format_fixed(curve.upper[i], 6) << "\n";
  }
}

void write_decompose_csv(const std::string& path, const OccupancyDecomposition& rows,
                         const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "t,cif_refracture,occupancy_refracture,dead_after_refracture\n";
  for (std::size_t i = 0; i < rows.times.size(); ++i) {
    out << format_fixed(rows.times[i], 6) << ',' << format_fixed(rows.cif_refracture[i], 6) << ','
        << format_fixed(rows.occupancy_refracture[i], 6) << ','
        << format_fixed(rows.dead_after_refracture[i], 6) << "\n";
  }
}

void write_compare_csv(const std::string& path, const std::vector<CompareRow>& rows,
                       const Metadata& metadata) {
  auto out = open_output(path);
  write_metadata(out, metadata);
  out << "parameter,cr_mean,cr_sd,cr_mcse,id_mean,id_sd,id_mcse,abs_diff,diff_over_mcse\n";
  for (const auto& r : rows) {
    out << r.parameter << ',' << format_fixed(r.cr_mean, 6) << ',' << format_fixed(r.cr_sd, 6)
        << ',' << format_fixed(r.cr_mcse, 6) << ',' << format_fixed(r.id_mean, 6) << ','
        << format_fixed(r.id_sd, 6) << ',' << format_fixed(r.id_mcse, 6) << ','
        << format_fixed(r.abs_diff, 6) << ',' << format_fixed(r.diff_over_mcse, 3) << "\n";
  }
}

}  // namespace msbayes
