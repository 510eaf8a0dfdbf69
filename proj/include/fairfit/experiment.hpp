#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "fairfit/data.hpp"
#include "fairfit/metrics.hpp"
#include "fairfit/model.hpp"
#include "fairfit/optim.hpp"

namespace fairfit {

// Post-unlearn acceptance checks evaluated by the run command; a run exits
// with code 1 when any configured threshold is missed.
struct Thresholds {
  std::optional<double> min_r2_wanted_post;
  std::optional<double> min_r2_wanted_gain;  // post minus pre
  std::optional<double> min_exp_r2_unwanted_post;
  std::optional<double> min_fair_r2_post;
};

// Exactly one of scenario / csv_path supplies the dataset.
struct DataSource {
  std::optional<ScenarioSpec> scenario;
  std::optional<std::string> csv_path;
};

struct ExperimentConfig {
  DataSource data;
  Eigen::Index degree = 0;  // required in config files; no sanctioned default
  double sigma = kDefaultSigma;
  bool normalize_inputs = true;
  InitMode init_mode = InitMode::Zeros;
  double init_half_range = 0.5;
  std::uint64_t init_seed = 0;
  TrainConfig learn;    // MSE phase over all data
  TrainConfig unlearn;  // EMSE phase, warm-started
  std::string out_dir = ".";
  bool plot = true;
  double overlap_warn_threshold = 0.5;
  Thresholds thresholds;

  void validate() const;
};

struct ExperimentReport {
  ExperimentConfig config;  // resolved echo
  Dataset dataset;          // as used by both phases (post-normalization)
  PolynomialModel pre_model;
  PolynomialModel post_model;
  TrainTrace learn_trace;
  TrainTrace unlearn_trace;
  MetricsReport pre_metrics;
  MetricsReport post_metrics;
  bool overlap_warning = false;
  std::string started_at;
  std::string finished_at;
};

// learn (MSE, all data) -> evaluate -> unlearn (EMSE, warm start) -> evaluate.
// Both evaluations use the identical dataset and mask.
ExperimentReport run_experiment(const ExperimentConfig& config);

bool thresholds_met(const ExperimentReport& report);

// Config parsing converts JSON type errors into ConfigError; degree and a
// data source are required, everything else falls back to defaults.
ExperimentConfig parse_experiment_config(const nlohmann::json& j);
nlohmann::json config_json(const ExperimentConfig& config);
nlohmann::json metrics_json(const MetricsReport& report);
nlohmann::json report_json(const ExperimentReport& report);

// Writes report.json (plus before.svg / after.svg when plotting is on) into
// out_dir, creating the directory if needed.
void write_report_files(const ExperimentReport& report,
                        const std::string& out_dir);

std::string iso_timestamp_utc();

}  // namespace fairfit
