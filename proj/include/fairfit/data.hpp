#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

#include "fairfit/common.hpp"

namespace fairfit {

struct NormalizationRecord {
  double x_min = 0.0;
  double x_max = 0.0;
};

struct Dataset {
  Eigen::VectorXd xs;
  Eigen::VectorXd ys;
  Mask mask;
  std::optional<NormalizationRecord> normalization;

  Eigen::Index size() const { return xs.size(); }
  Eigen::Index count(Label label) const;
  void validate() const;  // equal lengths >= 1, all values finite
};

enum class Scenario { Cluster, Heavy, Overlap };

Scenario scenario_from_string(const std::string& name);
std::string to_string(Scenario scenario);

// cluster: wanted samples follow the trend over the full x-band while the
//          unwanted ones form a compact off-trend cluster in a sub-interval.
// heavy:   like cluster but with an unwanted group comparable in size to the
//          wanted one, spread over a wider x-band.
// overlap: unwanted samples interleave with the wanted ones over the same
//          x-range with targets on the trend, so the groups are inseparable.
struct ScenarioSpec {
  Scenario name = Scenario::Cluster;
  Eigen::Index n_wanted = 80;
  Eigen::Index n_unwanted = 15;
  double noise_sd = 0.3;
  std::uint64_t seed = 0;
  Eigen::VectorXd trend = default_trend();  // ground truth for the wanted curve

  static Eigen::VectorXd default_trend();
  static ScenarioSpec defaults(Scenario scenario);
  void validate() const;
};

// Deterministic for a fixed spec (including seed).
Dataset generate(const ScenarioSpec& spec);

// Affine map of x onto [-1, 1]; the inverse restores the raw values from the
// recorded (min, max). normalize_x requires a non-constant x column.
Dataset normalize_x(const Dataset& dataset);
Dataset denormalize_x(const Dataset& dataset);

// CSV schema: header "x,y,label", label in {wanted, unwanted}, '.' decimal
// point, '\n' newlines, UTF-8. Values are printed with 17 significant digits
// so a save/load round trip is value-exact.
Dataset load_csv(const std::string& path);
void save_csv(const Dataset& dataset, const std::string& path);

}  // namespace fairfit
