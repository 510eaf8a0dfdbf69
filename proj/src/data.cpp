#include "fairfit/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

#include "fairfit/model.hpp"
#include "fairfit/random.hpp"

namespace fairfit {

namespace {

// Per-scenario geometry: x-bands for both groups plus the vertical offset of
// the unwanted targets from the trend.
struct ScenarioGeometry {
  double wanted_lo, wanted_hi;
  double unwanted_lo, unwanted_hi;
  double offset;
};

ScenarioGeometry geometry(Scenario scenario) {
  switch (scenario) {
    case Scenario::Cluster:
      return {-2.0, 2.0, 0.7, 1.5, -12.0};
    case Scenario::Heavy:
      return {-2.0, 2.0, -0.5, 2.0, -12.0};
    case Scenario::Overlap:
      return {-2.0, 2.0, -2.0, 2.0, 0.0};
  }
  throw ConfigError("generate: unknown scenario");
}

double parse_double(const std::string& cell, std::size_t line, const char* column) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end)
    throw ConfigError("load_csv: line " + std::to_string(line) +
                      ": non-numeric " + column + " cell '" + cell + "'");
  if (!std::isfinite(value))
    throw ConfigError("load_csv: line " + std::to_string(line) +
                      ": non-finite " + column + " value");
  return value;
}

}  // namespace

Eigen::Index Dataset::count(Label label) const {
  return static_cast<Eigen::Index>(
      std::count(mask.begin(), mask.end(), label));
}

void Dataset::validate() const {
  if (xs.size() != ys.size() || mask.size() != static_cast<std::size_t>(xs.size()))
    throw ConfigError("Dataset: xs, ys and mask lengths differ");
  if (xs.size() == 0) throw ConfigError("Dataset: empty dataset");
  if (!xs.allFinite() || !ys.allFinite())
    throw ConfigError("Dataset: values must be finite");
}

Scenario scenario_from_string(const std::string& name) {
  if (name == "cluster") return Scenario::Cluster;
  if (name == "heavy") return Scenario::Heavy;
  if (name == "overlap") return Scenario::Overlap;
  throw ConfigError("unknown scenario '" + name +
                    "' (expected cluster, heavy or overlap)");
}

std::string to_string(Scenario scenario) {
  switch (scenario) {
    case Scenario::Cluster:
      return "cluster";
    case Scenario::Heavy:
      return "heavy";
    case Scenario::Overlap:
      return "overlap";
  }
  return "unknown";
}

Eigen::VectorXd ScenarioSpec::default_trend() {
  Eigen::VectorXd c(4);
  c << 0.5, 1.0, -0.8, 0.9;
  return c;
}

ScenarioSpec ScenarioSpec::defaults(Scenario scenario) {
  ScenarioSpec spec;
  spec.name = scenario;
  switch (scenario) {
    case Scenario::Cluster:
      spec.n_wanted = 80;
      spec.n_unwanted = 15;
      break;
    case Scenario::Heavy:
      spec.n_wanted = 80;
      spec.n_unwanted = 60;
      break;
    case Scenario::Overlap:
      spec.n_wanted = 80;
      spec.n_unwanted = 40;
      break;
  }
  return spec;
}

void ScenarioSpec::validate() const {
  if (n_wanted < 1 || n_unwanted < 1)
    throw ConfigError("ScenarioSpec: sample counts must be positive");
  if (!(noise_sd >= 0)) throw ConfigError("ScenarioSpec: noise_sd must be >= 0");
  if (trend.size() == 0 || !trend.allFinite())
    throw ConfigError("ScenarioSpec: trend coefficients must be a non-empty finite vector");
  if (name == Scenario::Heavy && 2 * n_unwanted < n_wanted)
    throw ConfigError(
        "ScenarioSpec: the heavy scenario needs n_unwanted >= n_wanted/2");
}

Dataset generate(const ScenarioSpec& spec) {
  spec.validate();
  const ScenarioGeometry geo = geometry(spec.name);
  const PolynomialModel trend(spec.trend);
  Rng rng(spec.seed);

  const Eigen::Index n = spec.n_wanted + spec.n_unwanted;
  Dataset out;
  out.xs.resize(n);
  out.ys.resize(n);
  out.mask.resize(static_cast<std::size_t>(n));

  for (Eigen::Index i = 0; i < spec.n_wanted; ++i) {
    out.xs[i] = rng.uniform(geo.wanted_lo, geo.wanted_hi);
    out.mask[static_cast<std::size_t>(i)] = Label::Wanted;
  }
  for (Eigen::Index i = spec.n_wanted; i < n; ++i) {
    out.xs[i] = rng.uniform(geo.unwanted_lo, geo.unwanted_hi);
    out.mask[static_cast<std::size_t>(i)] = Label::Unwanted;
  }

  const Eigen::VectorXd trend_values = predict(trend, out.xs);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double offset = (i < spec.n_wanted) ? 0.0 : geo.offset;
    out.ys[i] = trend_values[i] + offset + rng.normal(0.0, spec.noise_sd);
  }
  return out;
}

Dataset normalize_x(const Dataset& dataset) {
  dataset.validate();
  const double lo = dataset.xs.minCoeff();
  const double hi = dataset.xs.maxCoeff();
  if (hi == lo)
    throw ConfigError("normalize_x: constant x column cannot be scaled");
  Dataset out = dataset;
  out.xs = (2.0 * (dataset.xs.array() - lo) / (hi - lo) - 1.0).matrix();
  out.normalization = NormalizationRecord{lo, hi};
  return out;
}

Dataset denormalize_x(const Dataset& dataset) {
  dataset.validate();
  if (!dataset.normalization)
    throw ConfigError("denormalize_x: dataset carries no normalization record");
  const auto [lo, hi] = *dataset.normalization;
  Dataset out = dataset;
  out.xs = (lo + (dataset.xs.array() + 1.0) * (hi - lo) / 2.0).matrix();
  out.normalization.reset();
  return out;
}

Dataset load_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("load_csv: cannot open '" + path + "'");

  std::string line;
  if (!std::getline(in, line))
    throw ConfigError("load_csv: '" + path + "' is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "x,y,label")
    throw ConfigError("load_csv: line 1: expected header 'x,y,label', got '" +
                      line + "'");

  std::vector<double> xs, ys;
  Mask mask;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    const auto first = line.find(',');
    const auto second = first == std::string::npos
                            ? std::string::npos
                            : line.find(',', first + 1);
    if (first == std::string::npos || second == std::string::npos ||
        line.find(',', second + 1) != std::string::npos)
      throw ConfigError("load_csv: line " + std::to_string(line_no) +
                        ": expected 3 comma-separated fields");

    xs.push_back(parse_double(line.substr(0, first), line_no, "x"));
    ys.push_back(
        parse_double(line.substr(first + 1, second - first - 1), line_no, "y"));
    const std::string label = line.substr(second + 1);
    if (label == "wanted")
      mask.push_back(Label::Wanted);
    else if (label == "unwanted")
      mask.push_back(Label::Unwanted);
    else
      throw ConfigError("load_csv: line " + std::to_string(line_no) +
                        ": unknown label '" + label + "'");
  }
  if (xs.empty()) throw ConfigError("load_csv: empty dataset in '" + path + "'");

  Dataset out;
  out.xs = Eigen::Map<const Eigen::VectorXd>(xs.data(),
                                             static_cast<Eigen::Index>(xs.size()));
  out.ys = Eigen::Map<const Eigen::VectorXd>(ys.data(),
                                             static_cast<Eigen::Index>(ys.size()));
  out.mask = std::move(mask);
  return out;
}

void save_csv(const Dataset& dataset, const std::string& path) {
  dataset.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("save_csv: cannot open '" + path + "' for writing");
  out << "x,y,label\n";
  char buffer[64];
  for (Eigen::Index i = 0; i < dataset.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.17g", dataset.xs[i]);
    out << buffer << ',';
    std::snprintf(buffer, sizeof(buffer), "%.17g", dataset.ys[i]);
    out << buffer << ','
        << (dataset.mask[static_cast<std::size_t>(i)] == Label::Wanted
                ? "wanted"
                : "unwanted")
        << '\n';
  }
  if (!out) throw ConfigError("save_csv: write to '" + path + "' failed");
}

}  // namespace fairfit
