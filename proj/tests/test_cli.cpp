#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#ifndef FAIRFIT_CLI_PATH
#error "FAIRFIT_CLI_PATH must point at the built CLI binary"
#endif

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

fs::path work_dir() {
  const auto dir = fs::temp_directory_path() / "fairfit_cli_tests";
  fs::create_directories(dir);
  return dir;
}

CliResult run_cli(const std::string& args) {
  const auto dir = work_dir();
  const auto out_path = dir / "stdout.txt";
  const auto err_path = dir / "stderr.txt";
  const std::string command = std::string(FAIRFIT_CLI_PATH) + " " + args + " >" +
                              out_path.string() + " 2>" + err_path.string();
  const int status = std::system(command.c_str());
  CliResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  return result;
}

json quick_run_config(const std::string& out_dir, int seed) {
  return json{
      {"data",
       {{"scenario",
         {{"name", "cluster"}, {"seed", seed}}}}},
      {"degree", 3},
      {"learn", {{"step_size", 0.05}, {"max_iters", 1500}}},
      {"unlearn", {{"step_size", 0.05}, {"max_iters", 1500}}},
      {"out_dir", out_dir}};
}

}  // namespace

TEST_CASE("generate writes deterministic csv files") {
  const auto dir = work_dir();
  const auto a = dir / "gen_a.csv";
  const auto b = dir / "gen_b.csv";
  CHECK(run_cli("generate --scenario cluster --seed 1 -o " + a.string())
            .exit_code == 0);
  CHECK(run_cli("generate --scenario cluster --seed 1 -o " + b.string())
            .exit_code == 0);
  const std::string text_a = slurp(a);
  CHECK(text_a == slurp(b));
  CHECK(text_a.rfind("x,y,label\n", 0) == 0);
  // defaults: 80 wanted + 15 unwanted + header
  CHECK(std::count(text_a.begin(), text_a.end(), '\n') == 96);
}

TEST_CASE("generate rejects an unknown scenario with a usage message") {
  const CliResult result = run_cli("generate --scenario galaxy -o /tmp/x.csv");
  CHECK(result.exit_code == 2);
  CHECK(result.err.find("--scenario") != std::string::npos);
}

TEST_CASE("run produces a report and honors determinism") {
  const auto dir = work_dir();
  const auto out1 = dir / "run1";
  const auto out2 = dir / "run2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  const auto cfg_path = dir / "run_config.json";
  {
    std::ofstream out(cfg_path);
    out << quick_run_config(out1.string(), 1).dump(2);
  }

  const CliResult first = run_cli("run --config " + cfg_path.string());
  CHECK(first.exit_code == 0);
  CHECK(first.out.find("r2_wanted") != std::string::npos);
  REQUIRE(fs::exists(out1 / "report.json"));
  REQUIRE(fs::exists(out1 / "before.svg"));
  REQUIRE(fs::exists(out1 / "after.svg"));

  const CliResult second =
      run_cli("run --config " + cfg_path.string() + " --out-dir " + out2.string());
  CHECK(second.exit_code == 0);

  json a = json::parse(slurp(out1 / "report.json"));
  json b = json::parse(slurp(out2 / "report.json"));
  a.erase("timestamps");
  b.erase("timestamps");
  // out_dir differs between the two configs by construction
  a.at("config").erase("out_dir");
  b.at("config").erase("out_dir");
  CHECK(a == b);
  CHECK(slurp(out1 / "before.svg") == slurp(out2 / "before.svg"));
  CHECK(slurp(out1 / "after.svg") == slurp(out2 / "after.svg"));
}

TEST_CASE("run exit codes distinguish threshold failures and config errors") {
  const auto dir = work_dir();
  const auto out = dir / "run_threshold";
  fs::remove_all(out);
  json cfg = quick_run_config(out.string(), 2);
  cfg["plot"] = false;
  cfg["thresholds"] = {{"min_fair_r2_post", 0.999999}};  // unattainable
  const auto cfg_path = dir / "threshold_config.json";
  {
    std::ofstream o(cfg_path);
    o << cfg.dump(2);
  }
  const CliResult failed = run_cli("run --config " + cfg_path.string());
  CHECK(failed.exit_code == 1);
  CHECK(failed.err.find("thresholds not met") != std::string::npos);

  const CliResult missing = run_cli("run --config /nonexistent/config.json");
  CHECK(missing.exit_code == 2);

  // numeric blow-up: gd with an absurd step size diverges
  json diverge = quick_run_config((dir / "run_diverge").string(), 3);
  diverge["plot"] = false;
  diverge["learn"] = {{"optimizer", "gd"}, {"step_size", 1e150}, {"max_iters", 50}};
  const auto diverge_path = dir / "diverge_config.json";
  {
    std::ofstream o(diverge_path);
    o << diverge.dump(2);
  }
  const CliResult numeric = run_cli("run --config " + diverge_path.string());
  CHECK(numeric.exit_code == 3);
  CHECK(numeric.err.find("numeric error") != std::string::npos);
}

TEST_CASE("run honors --seed and --no-plot overrides") {
  const auto dir = work_dir();
  const auto out = dir / "run_overrides";
  fs::remove_all(out);
  const auto cfg_path = dir / "override_config.json";
  {
    std::ofstream o(cfg_path);
    o << quick_run_config(out.string(), 7).dump(2);
  }
  const CliResult result = run_cli("run --config " + cfg_path.string() +
                                   " --no-plot --seed 9");
  CHECK(result.exit_code == 0);
  CHECK_FALSE(fs::exists(out / "before.svg"));
  const json report = json::parse(slurp(out / "report.json"));
  CHECK(report.at("config").at("data").at("scenario").at("seed") == 9);
  CHECK(report.at("config").at("plot") == false);
}

TEST_CASE("eval and plot consume a previous run") {
  const auto dir = work_dir();
  const auto out = dir / "run_eval";
  fs::remove_all(out);
  const auto data_path = dir / "eval_data.csv";
  CHECK(run_cli("generate --scenario cluster --seed 4 -o " + data_path.string())
            .exit_code == 0);

  json cfg = quick_run_config(out.string(), 4);
  cfg["plot"] = false;
  const auto cfg_path = dir / "eval_config.json";
  {
    std::ofstream o(cfg_path);
    o << cfg.dump(2);
  }
  REQUIRE(run_cli("run --config " + cfg_path.string()).exit_code == 0);

  const CliResult eval = run_cli("eval --data " + data_path.string() +
                                 " --report " + (out / "report.json").string() +
                                 " --which post");
  CHECK(eval.exit_code == 0);
  const json metrics = json::parse(eval.out);
  CHECK(metrics.contains("fair_r2"));
  CHECK(metrics.contains("overlap_score"));
  // the csv was generated with the identical spec/seed the run used, so the
  // standalone eval must reproduce the report's post metrics
  const json report = json::parse(slurp(out / "report.json"));
  CHECK(std::abs(metrics.at("fair_r2").get<double>() -
                 report.at("post_metrics").at("fair_r2").get<double>()) < 1e-12);
  CHECK(std::abs(metrics.at("r2_wanted").get<double>() -
                 report.at("post_metrics").at("r2_wanted").get<double>()) <
        1e-12);

  const CliResult coeffs =
      run_cli("eval --data " + data_path.string() + " --coeffs 0.5,1.0,-0.8,0.9");
  CHECK(coeffs.exit_code == 0);
  CHECK(json::parse(coeffs.out).contains("r2_wanted"));

  const auto plot_dir = dir / "plots";
  fs::remove_all(plot_dir);
  const CliResult plot = run_cli("plot --data " + data_path.string() +
                                 " --report " + (out / "report.json").string() +
                                 " --out-dir " + plot_dir.string());
  CHECK(plot.exit_code == 0);
  CHECK(fs::exists(plot_dir / "before.svg"));
  CHECK(fs::exists(plot_dir / "after.svg"));

  const CliResult bad_eval = run_cli("eval --data " + data_path.string());
  CHECK(bad_eval.exit_code == 2);
}
