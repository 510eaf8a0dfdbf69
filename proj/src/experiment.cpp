#include "fairfit/experiment.hpp"

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>

#include "fairfit/svg.hpp"

namespace fairfit {

namespace {

using nlohmann::json;

std::string optimizer_name(Optimizer optimizer) {
  return optimizer == Optimizer::Gd ? "gd" : "adam";
}

Optimizer optimizer_from_string(const std::string& name) {
  if (name == "gd") return Optimizer::Gd;
  if (name == "adam") return Optimizer::Adam;
  throw ConfigError("unknown optimizer '" + name + "' (expected gd or adam)");
}

std::string init_mode_name(InitMode mode) {
  return mode == InitMode::Zeros ? "zeros" : "uniform";
}

InitMode init_mode_from_string(const std::string& name) {
  if (name == "zeros") return InitMode::Zeros;
  if (name == "uniform") return InitMode::Uniform;
  throw ConfigError("unknown init mode '" + name +
                    "' (expected zeros or uniform)");
}

TrainConfig parse_train_config(const json& j) {
  TrainConfig cfg;
  cfg.optimizer =
      optimizer_from_string(j.value("optimizer", optimizer_name(cfg.optimizer)));
  cfg.step_size = j.value("step_size", cfg.step_size);
  cfg.max_iters = j.value("max_iters", cfg.max_iters);
  cfg.grad_tol = j.value("grad_tol", cfg.grad_tol);
  cfg.adam_beta1 = j.value("adam_beta1", cfg.adam_beta1);
  cfg.adam_beta2 = j.value("adam_beta2", cfg.adam_beta2);
  cfg.adam_eps = j.value("adam_eps", cfg.adam_eps);
  cfg.seed = j.value("seed", cfg.seed);
  return cfg;
}

json train_config_json(const TrainConfig& cfg) {
  return {{"optimizer", optimizer_name(cfg.optimizer)},
          {"step_size", cfg.step_size},
          {"max_iters", cfg.max_iters},
          {"grad_tol", cfg.grad_tol},
          {"adam_beta1", cfg.adam_beta1},
          {"adam_beta2", cfg.adam_beta2},
          {"adam_eps", cfg.adam_eps},
          {"seed", cfg.seed}};
}

ScenarioSpec parse_scenario_spec(const json& j) {
  ScenarioSpec spec;
  if (!j.contains("name"))
    throw ConfigError("scenario config needs a 'name' field");
  spec = ScenarioSpec::defaults(scenario_from_string(j.at("name")));
  spec.n_wanted = j.value("n_wanted", spec.n_wanted);
  spec.n_unwanted = j.value("n_unwanted", spec.n_unwanted);
  spec.noise_sd = j.value("noise_sd", spec.noise_sd);
  spec.seed = j.value("seed", spec.seed);
  if (j.contains("trend")) {
    const auto values = j.at("trend").get<std::vector<double>>();
    spec.trend = Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size()));
  }
  return spec;
}

json scenario_spec_json(const ScenarioSpec& spec) {
  return {{"name", to_string(spec.name)},
          {"n_wanted", spec.n_wanted},
          {"n_unwanted", spec.n_unwanted},
          {"noise_sd", spec.noise_sd},
          {"seed", spec.seed},
          {"trend", std::vector<double>(spec.trend.begin(), spec.trend.end())}};
}

json trace_json(const TrainTrace& trace) {
  return {{"loss", trace.loss},
          {"final_grad_norm", trace.final_grad_norm},
          {"iterations_used", trace.iterations_used},
          {"converged", trace.converged}};
}

json model_json(const PolynomialModel& model) {
  return {{"degree", model.degree()},
          {"coefficients",
           std::vector<double>(model.coefficients().begin(),
                               model.coefficients().end())}};
}

json thresholds_json(const Thresholds& t) {
  json j = json::object();
  if (t.min_r2_wanted_post) j["min_r2_wanted_post"] = *t.min_r2_wanted_post;
  if (t.min_r2_wanted_gain) j["min_r2_wanted_gain"] = *t.min_r2_wanted_gain;
  if (t.min_exp_r2_unwanted_post)
    j["min_exp_r2_unwanted_post"] = *t.min_exp_r2_unwanted_post;
  if (t.min_fair_r2_post) j["min_fair_r2_post"] = *t.min_fair_r2_post;
  return j;
}

Thresholds parse_thresholds(const json& j) {
  Thresholds t;
  if (j.contains("min_r2_wanted_post"))
    t.min_r2_wanted_post = j.at("min_r2_wanted_post").get<double>();
  if (j.contains("min_r2_wanted_gain"))
    t.min_r2_wanted_gain = j.at("min_r2_wanted_gain").get<double>();
  if (j.contains("min_exp_r2_unwanted_post"))
    t.min_exp_r2_unwanted_post = j.at("min_exp_r2_unwanted_post").get<double>();
  if (j.contains("min_fair_r2_post"))
    t.min_fair_r2_post = j.at("min_fair_r2_post").get<double>();
  return t;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (data.scenario.has_value() == data.csv_path.has_value())
    throw ConfigError(
        "config: exactly one of data.scenario and data.csv must be set");
  if (data.scenario) data.scenario->validate();
  if (degree < 0) throw ConfigError("config: degree must be >= 0");
  LossSpec::check_sigma(sigma);
  if (init_mode == InitMode::Uniform && !(init_half_range > 0))
    throw ConfigError("config: init.half_range must be > 0");
  learn.validate();
  unlearn.validate();
  if (!(overlap_warn_threshold >= 0 && overlap_warn_threshold <= 1))
    throw ConfigError("config: overlap_warn_threshold must lie in [0, 1]");
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();

  ExperimentReport report;
  report.config = config;
  report.started_at = iso_timestamp_utc();

  Dataset data = config.data.scenario ? generate(*config.data.scenario)
                                      : load_csv(*config.data.csv_path);
  if (config.normalize_inputs) data = normalize_x(data);
  report.dataset = data;

  const PolynomialModel init = init_model(config.degree, config.init_mode,
                                          config.init_seed,
                                          config.init_half_range);
  auto [pre_model, learn_trace] =
      train(init, data.xs, data.ys, data.mask, LossSpec::mse(), config.learn);
  report.pre_model = pre_model;
  report.learn_trace = std::move(learn_trace);
  report.pre_metrics = evaluate(pre_model, data.xs, data.ys, data.mask);

  auto [post_model, unlearn_trace] =
      unlearn(pre_model, data.xs, data.ys, data.mask, config.sigma,
              config.unlearn);
  report.post_model = post_model;
  report.unlearn_trace = std::move(unlearn_trace);
  report.post_metrics = evaluate(post_model, data.xs, data.ys, data.mask);

  report.overlap_warning =
      report.post_metrics.overlap_score > config.overlap_warn_threshold;
  report.finished_at = iso_timestamp_utc();
  return report;
}

bool thresholds_met(const ExperimentReport& report) {
  const Thresholds& t = report.config.thresholds;
  const MetricsReport& pre = report.pre_metrics;
  const MetricsReport& post = report.post_metrics;
  if (t.min_r2_wanted_post && !(post.r2_wanted >= *t.min_r2_wanted_post))
    return false;
  if (t.min_r2_wanted_gain &&
      !(post.r2_wanted - pre.r2_wanted >= *t.min_r2_wanted_gain))
    return false;
  if (t.min_exp_r2_unwanted_post &&
      !(post.exp_r2_unwanted >= *t.min_exp_r2_unwanted_post))
    return false;
  if (t.min_fair_r2_post && !(post.fair_r2 >= *t.min_fair_r2_post))
    return false;
  return true;
}

ExperimentConfig parse_experiment_config(const nlohmann::json& j) {
  try {
    ExperimentConfig cfg;
    if (!j.contains("data"))
      throw ConfigError("config: missing required 'data' section");
    const json& data = j.at("data");
    if (data.contains("scenario"))
      cfg.data.scenario = parse_scenario_spec(data.at("scenario"));
    if (data.contains("csv")) cfg.data.csv_path = data.at("csv").get<std::string>();

    if (!j.contains("degree"))
      throw ConfigError("config: missing required 'degree' field");
    cfg.degree = j.at("degree").get<Eigen::Index>();
    cfg.sigma = j.value("sigma", cfg.sigma);
    cfg.normalize_inputs = j.value("normalize_inputs", cfg.normalize_inputs);
    if (j.contains("init")) {
      const json& init = j.at("init");
      cfg.init_mode =
          init_mode_from_string(init.value("mode", init_mode_name(cfg.init_mode)));
      cfg.init_half_range = init.value("half_range", cfg.init_half_range);
      cfg.init_seed = init.value("seed", cfg.init_seed);
    }
    if (j.contains("learn")) cfg.learn = parse_train_config(j.at("learn"));
    if (j.contains("unlearn")) cfg.unlearn = parse_train_config(j.at("unlearn"));
    cfg.out_dir = j.value("out_dir", cfg.out_dir);
    cfg.plot = j.value("plot", cfg.plot);
    cfg.overlap_warn_threshold =
        j.value("overlap_warn_threshold", cfg.overlap_warn_threshold);
    if (j.contains("thresholds"))
      cfg.thresholds = parse_thresholds(j.at("thresholds"));
    cfg.validate();
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

nlohmann::json config_json(const ExperimentConfig& config) {
  json data = json::object();
  if (config.data.scenario)
    data["scenario"] = scenario_spec_json(*config.data.scenario);
  if (config.data.csv_path) data["csv"] = *config.data.csv_path;
  return {{"data", data},
          {"degree", config.degree},
          {"sigma", config.sigma},
          {"normalize_inputs", config.normalize_inputs},
          {"init",
           {{"mode", init_mode_name(config.init_mode)},
            {"half_range", config.init_half_range},
            {"seed", config.init_seed}}},
          {"learn", train_config_json(config.learn)},
          {"unlearn", train_config_json(config.unlearn)},
          {"out_dir", config.out_dir},
          {"plot", config.plot},
          {"overlap_warn_threshold", config.overlap_warn_threshold},
          {"thresholds", thresholds_json(config.thresholds)}};
}

nlohmann::json metrics_json(const MetricsReport& report) {
  return {{"r2_wanted", report.r2_wanted},
          {"r2_unwanted", report.r2_unwanted},
          {"exp_r2_wanted", report.exp_r2_wanted},
          {"exp_r2_unwanted", report.exp_r2_unwanted},
          {"fair_r2", report.fair_r2},
          {"n_wanted", report.n_wanted},
          {"n_unwanted", report.n_unwanted},
          {"overlap_score", report.overlap_score}};
}

nlohmann::json report_json(const ExperimentReport& report) {
  return {{"config", config_json(report.config)},
          {"pre_metrics", metrics_json(report.pre_metrics)},
          {"post_metrics", metrics_json(report.post_metrics)},
          {"learn_trace", trace_json(report.learn_trace)},
          {"unlearn_trace", trace_json(report.unlearn_trace)},
          {"pre_model", model_json(report.pre_model)},
          {"post_model", model_json(report.post_model)},
          {"overlap_warning", report.overlap_warning},
          {"timestamps",
           {{"started", report.started_at}, {"finished", report.finished_at}}}};
}

void write_report_files(const ExperimentReport& report,
                        const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + out_dir +
                      "': " + ec.message());

  const fs::path dir(out_dir);
  {
    std::ofstream out(dir / "report.json", std::ios::binary);
    if (!out)
      throw ConfigError("cannot open '" + (dir / "report.json").string() +
                        "' for writing");
    out << report_json(report).dump(2) << '\n';
  }
  if (report.config.plot) {
    write_plot(report.dataset, report.pre_model, "Model trained on all data",
               (dir / "before.svg").string());
    write_plot(report.dataset, report.post_model, "Model after unlearning",
               (dir / "after.svg").string());
  }
}

std::string iso_timestamp_utc() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buffer[32];
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace fairfit
