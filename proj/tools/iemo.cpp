// Command-line front end: single runs, replicate experiments, parameter
// sweeps, reports from stored results, and the session service.

#include "iemo/experiment.hpp"
#include "iemo/http_service.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kExitError = 1;
constexpr int kExitAborted = 3;

volatile std::sig_atomic_t g_interrupted = 0;

extern "C" void on_signal(int) { g_interrupted = 1; }

fs::path output_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("IEMO_OUTPUT_DIR"); env != nullptr && *env != '\0') return env;
  return "results";
}

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, sep);) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void report_config_error(const iemo::ConfigError& e) {
  std::cerr << "invalid configuration:\n";
  for (const auto& fe : e.errors()) std::cerr << "  " << fe.field << ": " << fe.message << '\n';
}

int cmd_run(const std::string& config_path, const std::string& out_flag, std::optional<std::uint64_t> seed) {
  iemo::RunConfig config = iemo::config_from_json(read_json(config_path));
  if (seed) config.seed = *seed;
  if (config.oracle == iemo::OracleKind::human) {
    std::cerr << "human-scored runs go through `iemo serve`\n";
    return kExitError;
  }

  // Ctrl-C stops the run at the next generation boundary.
  std::stop_source stop;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  std::jthread watcher([&stop](std::stop_token done) {
    while (!done.stop_requested()) {
      if (g_interrupted) stop.request_stop();
      std::this_thread::sleep_for(std::chrono::milliseconds(50));
    }
  });

  iemo::SimulatedOracle oracle(config.golden, config.noise(), iemo::oracle_seed(config.seed));
  const iemo::RunResult result = iemo::run_single(config, oracle, stop.get_token());
  watcher.request_stop();

  const fs::path dir = output_dir(out_flag);
  fs::create_directories(dir);
  const fs::path file = dir / ("run-" + std::string(iemo::to_string(config.problem.id)) + "-m" +
                               std::to_string(config.problem.m) + "-" + std::string(iemo::to_string(config.algorithm)) +
                               (config.interactive ? "-interactive" : "") + "-seed-" + std::to_string(config.seed) +
                               ".json");
  std::ofstream(file) << iemo::result_to_json(result).dump() << '\n';

  std::cout << "final error " << result.final_error() << " after " << result.trajectory.size() << " generations, "
            << result.consultations << " consultations, " << result.evaluations << " evaluations\n"
            << "wrote " << file.string() << '\n';
  if (result.aborted) {
    std::cerr << "run aborted\n";
    return kExitAborted;
  }
  return 0;
}

int finish_experiment(const iemo::ExperimentPlan& plan, const std::string& out_flag, bool per_run) {
  const auto result = iemo::run_experiment(plan);
  const fs::path dir = output_dir(out_flag);
  iemo::write_experiment(dir, result, per_run);
  iemo::print_summary(std::cout, result.summary);
  std::cout << "wrote " << (dir / "summary.csv").string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interactive decomposition-based multi-objective optimization"};
  app.require_subcommand(1);

  std::string out_flag;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "Run one configuration with the simulated decision maker");
  run->add_option("config", config_path, "JSON run configuration")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Override the configured seed");
  run->add_option("-o,--out", out_flag, "Output directory (default: $IEMO_OUTPUT_DIR or ./results)");

  std::string plan_path;
  std::optional<std::size_t> threads;
  bool no_per_run = false;
  auto* experiment = app.add_subcommand("experiment", "Run a replicate plan and summarize it");
  experiment->add_option("plan", plan_path, "JSON experiment plan")->required()->check(CLI::ExistingFile);
  experiment->add_option("-o,--out", out_flag, "Output directory (default: $IEMO_OUTPUT_DIR or ./results)");
  experiment->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");
  experiment->add_flag("--no-per-run", no_per_run, "Skip the per-run JSON documents");

  std::string param;
  std::string values;
  std::string base_path;
  std::size_t replicates = 21;
  auto* sweep = app.add_subcommand("sweep", "Run one arm per parameter value");
  sweep->add_option("--param", param, "mu, tau, eta or kappa")
      ->required()
      ->check(CLI::IsMember({"mu", "tau", "eta", "kappa"}));
  sweep->add_option("--values", values, "Comma-separated values; mu also accepts 'utopia'")->required();
  sweep->add_option("--config", base_path, "Base JSON run configuration")->check(CLI::ExistingFile);
  sweep->add_option("--replicates", replicates, "Seeds 1..N")->check(CLI::PositiveNumber);
  sweep->add_option("-o,--out", out_flag, "Output directory (default: $IEMO_OUTPUT_DIR or ./results)");
  sweep->add_option("-j,--threads", threads, "Worker threads (0 = all cores)");
  sweep->add_flag("--no-per-run", no_per_run, "Skip the per-run JSON documents");

  std::string report_dir;
  auto* report = app.add_subcommand("report", "Summarize stored results (runs.csv)");
  report->add_option("dir", report_dir, "Results directory (default: $IEMO_OUTPUT_DIR or ./results)");

  auto options = iemo::ServiceOptions{};
  auto* serve = app.add_subcommand("serve", "Start the session service for human scoring");
  std::optional<std::string> host;
  std::optional<int> port;
  serve->add_option("--host", host, "Bind address (default: $IEMO_BIND or 127.0.0.1)");
  serve->add_option("--port", port, "Port (default: $IEMO_PORT or 8080; 0 picks one)")->check(CLI::Range(0, 65535));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return cmd_run(config_path, out_flag, seed);

    if (*experiment) {
      auto plan = iemo::plan_from_json(read_json(plan_path));
      if (threads) plan.threads = *threads;
      return finish_experiment(plan, out_flag, !no_per_run);
    }

    if (*sweep) {
      const iemo::RunConfig base =
          base_path.empty() ? iemo::RunConfig{} : iemo::config_from_json(read_json(base_path));
      auto plan = iemo::sweep_plan(*iemo::parse_sweep_param(param), split(values, ','), base,
                                   iemo::default_seeds(replicates));
      plan.threads = threads.value_or(0);
      return finish_experiment(plan, out_flag, !no_per_run);
    }

    if (*report) {
      const fs::path dir = output_dir(report_dir);
      const auto summary = iemo::summarize(iemo::read_runs(dir / "runs.csv"));
      iemo::write_summary(dir, summary);
      iemo::print_summary(std::cout, summary);
      return 0;
    }

    if (*serve) {
      options = iemo::ServiceOptions::from_env();
      if (host) options.host = *host;
      if (port) options.port = *port;
      iemo::SessionManager sessions;
      iemo::HttpService service(sessions);
      const int bound = service.bind(options.host, options.port);
      std::cout << "listening on http://" << options.host << ':' << bound << std::endl;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::jthread watcher([&service](std::stop_token done) {
        while (!done.stop_requested() && !g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
        service.stop();
      });
      service.listen();
      return 0;
    }
  } catch (const iemo::ConfigError& e) {
    report_config_error(e);
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
