#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fairfit/experiment.hpp"
#include "fairfit/svg.hpp"

namespace {

using fairfit::ConfigError;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitThresholdFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericError = 3;

json load_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
}

fairfit::PolynomialModel model_from_json(const json& j) {
  try {
    const auto values = j.at("coefficients").get<std::vector<double>>();
    return fairfit::PolynomialModel(Eigen::Map<const Eigen::VectorXd>(
        values.data(), static_cast<Eigen::Index>(values.size())));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed model JSON: ") + e.what());
  }
}

struct GenerateArgs {
  std::string scenario;
  std::uint64_t seed = 0;
  Eigen::Index n_wanted = -1;
  Eigen::Index n_unwanted = -1;
  double noise_sd = -1.0;
  std::vector<double> trend;
  std::string out_path;
};

int cmd_generate(const GenerateArgs& args) {
  fairfit::ScenarioSpec spec =
      fairfit::ScenarioSpec::defaults(fairfit::scenario_from_string(args.scenario));
  spec.seed = args.seed;
  if (args.n_wanted >= 0) spec.n_wanted = args.n_wanted;
  if (args.n_unwanted >= 0) spec.n_unwanted = args.n_unwanted;
  if (args.noise_sd >= 0) spec.noise_sd = args.noise_sd;
  if (!args.trend.empty())
    spec.trend = Eigen::Map<const Eigen::VectorXd>(
        args.trend.data(), static_cast<Eigen::Index>(args.trend.size()));
  fairfit::save_csv(fairfit::generate(spec), args.out_path);
  std::cout << "wrote " << args.out_path << " (" << spec.n_wanted << " wanted, "
            << spec.n_unwanted << " unwanted)\n";
  return kExitOk;
}

struct RunArgs {
  std::string config_path;
  std::string out_dir;
  bool no_plot = false;
  bool has_seed = false;
  std::uint64_t seed = 0;
};

int cmd_run(const RunArgs& args) {
  fairfit::ExperimentConfig config =
      fairfit::parse_experiment_config(load_json_file(args.config_path));
  if (!args.out_dir.empty()) config.out_dir = args.out_dir;
  if (args.no_plot) config.plot = false;
  if (args.has_seed) {
    if (!config.data.scenario)
      throw ConfigError("--seed overrides the scenario seed and needs a "
                        "scenario data source");
    config.data.scenario->seed = args.seed;
  }

  const fairfit::ExperimentReport report = fairfit::run_experiment(config);
  fairfit::write_report_files(report, config.out_dir);

  const auto& pre = report.pre_metrics;
  const auto& post = report.post_metrics;
  std::printf("r2_wanted        %+.4f -> %+.4f\n", pre.r2_wanted, post.r2_wanted);
  std::printf("r2_unwanted      %+.4f -> %+.4f\n", pre.r2_unwanted,
              post.r2_unwanted);
  std::printf("exp_r2_unwanted  %.4f -> %.4f\n", pre.exp_r2_unwanted,
              post.exp_r2_unwanted);
  std::printf("fair_r2          %.4f -> %.4f\n", pre.fair_r2, post.fair_r2);
  std::printf("report: %s/report.json\n", config.out_dir.c_str());
  if (report.overlap_warning)
    std::fprintf(stderr,
                 "warning: wanted and unwanted x-distributions overlap "
                 "heavily (score %.3f > %.3f); the independence assumption "
                 "behind fair_r2 is doubtful\n",
                 post.overlap_score, config.overlap_warn_threshold);

  if (!fairfit::thresholds_met(report)) {
    std::fprintf(stderr, "thresholds not met\n");
    return kExitThresholdFailure;
  }
  return kExitOk;
}

// Reports echo whether the run trained in normalized-x space; a model taken
// from a report must see the dataset through the same mapping.
bool report_normalized_inputs(const json& report) {
  return report.value("config", json::object()).value("normalize_inputs", true);
}

struct EvalArgs {
  std::string data_path;
  std::string report_path;
  std::string which = "post";
  std::vector<double> coeffs;
  bool normalize = false;
};

int cmd_eval(const EvalArgs& args) {
  fairfit::Dataset data = fairfit::load_csv(args.data_path);
  fairfit::PolynomialModel model;
  bool normalize = args.normalize;
  if (!args.coeffs.empty()) {
    model = fairfit::PolynomialModel(Eigen::Map<const Eigen::VectorXd>(
        args.coeffs.data(), static_cast<Eigen::Index>(args.coeffs.size())));
  } else if (!args.report_path.empty()) {
    const json report = load_json_file(args.report_path);
    if (args.which != "pre" && args.which != "post")
      throw ConfigError("--which must be 'pre' or 'post'");
    if (!report.contains(args.which + "_model"))
      throw ConfigError("report has no '" + args.which + "_model' entry");
    model = model_from_json(report.at(args.which + "_model"));
    normalize = report_normalized_inputs(report);
  } else {
    throw ConfigError("eval needs either --coeffs or --report");
  }
  if (normalize) data = fairfit::normalize_x(data);
  const fairfit::MetricsReport metrics =
      fairfit::evaluate(model, data.xs, data.ys, data.mask);
  std::cout << fairfit::metrics_json(metrics).dump(2) << '\n';
  return kExitOk;
}

struct PlotArgs {
  std::string data_path;
  std::string report_path;
  std::string out_dir = ".";
};

int cmd_plot(const PlotArgs& args) {
  fairfit::Dataset data = fairfit::load_csv(args.data_path);
  const json report = load_json_file(args.report_path);
  if (!report.contains("pre_model") || !report.contains("post_model"))
    throw ConfigError("report is missing pre_model/post_model entries");
  if (report_normalized_inputs(report)) data = fairfit::normalize_x(data);
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory '" + args.out_dir +
                      "': " + ec.message());
  const std::filesystem::path dir(args.out_dir);
  fairfit::write_plot(data, model_from_json(report.at("pre_model")),
                      "Model trained on all data", (dir / "before.svg").string());
  fairfit::write_plot(data, model_from_json(report.at("post_model")),
                      "Model after unlearning", (dir / "after.svg").string());
  std::cout << "wrote " << (dir / "before.svg").string() << " and "
            << (dir / "after.svg").string() << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "fairfit: polynomial regression with EMSE-based machine unlearning"};
  app.require_subcommand(1);

  GenerateArgs gen_args;
  auto* gen = app.add_subcommand("generate",
                                 "write a synthetic scenario dataset as CSV");
  gen->add_option("--scenario", gen_args.scenario, "cluster, heavy or overlap")
      ->required()
      ->check(CLI::IsMember({"cluster", "heavy", "overlap"}));
  gen->add_option("--seed", gen_args.seed, "generator seed");
  gen->add_option("--n-wanted", gen_args.n_wanted, "wanted sample count");
  gen->add_option("--n-unwanted", gen_args.n_unwanted, "unwanted sample count");
  gen->add_option("--noise-sd", gen_args.noise_sd, "target noise s.d.");
  gen->add_option("--trend", gen_args.trend,
                  "ground-truth coefficients, lowest power first")
      ->delimiter(',');
  gen->add_option("-o,--out", gen_args.out_path, "output CSV path")->required();

  RunArgs run_args;
  auto* run = app.add_subcommand(
      "run", "train on all data, unlearn the unwanted part, evaluate both");
  run->add_option("--config", run_args.config_path, "experiment config JSON")
      ->required();
  run->add_option("--out-dir", run_args.out_dir,
                  "output directory (overrides the config)");
  run->add_flag("--no-plot", run_args.no_plot, "skip SVG output");
  auto* seed_opt =
      run->add_option("--seed", run_args.seed, "override the scenario seed");

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "evaluate a model on a CSV dataset");
  eval->add_option("--data", eval_args.data_path, "dataset CSV")->required();
  eval->add_option("--report", eval_args.report_path,
                   "report.json providing the model");
  eval->add_option("--which", eval_args.which, "pre or post (with --report)");
  eval->add_option("--coeffs", eval_args.coeffs,
                   "explicit coefficients, lowest power first")
      ->delimiter(',');
  eval->add_flag("--normalize", eval_args.normalize,
                 "min-max scale x to [-1, 1] before evaluating (with --coeffs; "
                 "--report takes this from the report's config)");

  PlotArgs plot_args;
  auto* plot = app.add_subcommand(
      "plot", "render before/after SVG plots from a report and a dataset");
  plot->add_option("--data", plot_args.data_path, "dataset CSV")->required();
  plot->add_option("--report", plot_args.report_path, "report.json")->required();
  plot->add_option("--out-dir", plot_args.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    run_args.has_seed = seed_opt->count() > 0;
    if (gen->parsed()) return cmd_generate(gen_args);
    if (run->parsed()) return cmd_run(run_args);
    if (eval->parsed()) return cmd_eval(eval_args);
    if (plot->parsed()) return cmd_plot(plot_args);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfigError;
  } catch (const fairfit::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return kExitNumericError;
  }
  return kExitOk;
}
