#pragma once

#include "iemo/config.hpp"
#include "iemo/engine.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace iemo {

struct Arm {
  std::string name;
  RunConfig config;  // seed is replaced per replicate
};

struct ExperimentPlan {
  std::vector<Arm> arms;
  std::vector<std::uint64_t> seeds;
  std::size_t threads = 1;  // 0 = hardware concurrency
};

/// Seeds 1..count.
std::vector<std::uint64_t> default_seeds(std::size_t count = 21);

/// Plan document:
///   {"base": {...config...}, "arms": [{"name": "...", "config": {...overrides...}}],
///    "seeds": [..] | "replicates": 21, "threads": 4}
/// Without "arms", the plan compares the base config with its baseline
/// (interactive off). Throws ConfigError.
ExperimentPlan plan_from_json(const nlohmann::json& doc);

/// One replicate's outcome, as stored in runs.csv.
struct RunRow {
  std::string arm;
  std::string problem;
  std::size_t m = 0;
  std::string roi;
  std::string algorithm;
  bool interactive = false;
  std::uint64_t seed = 0;
  double final_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t consultations = 0;
};

struct ArmSummary {
  std::string arm;
  std::string problem;
  std::size_t m = 0;
  std::string roi;
  std::string algorithm;
  bool interactive = false;
  std::vector<std::uint64_t> seeds;  // ascending
  std::vector<double> errors;        // in seed order
  double median = 0.0;
  double iqr = 0.0;
  std::optional<std::string> baseline;  // matching non-interactive arm
  std::optional<double> p_value;        // Wilcoxon against it, paired by seed
};

/// Groups rows by arm (first-appearance order) and pairs every interactive
/// arm with the first baseline arm of the same problem, m, ROI and algorithm.
/// Independent of row order within an arm.
std::vector<ArmSummary> summarize(const std::vector<RunRow>& rows);

struct ExperimentResult {
  std::vector<RunRow> rows;
  std::vector<RunResult> runs;  // parallel to rows
  std::vector<ArmSummary> summary;
};

/// Runs every arm for every seed with the simulated oracle. Replicates may
/// run on several threads; results land in plan order regardless.
ExperimentResult run_experiment(const ExperimentPlan& plan);

enum class SweepParam { mu, tau, eta, kappa };

std::optional<SweepParam> parse_sweep_param(std::string_view name);
std::string_view to_string(SweepParam param);

/// One arm per value on top of `base`. For mu, "utopia" selects the arm that
/// elicits with the golden function itself. Throws ConfigError on bad values.
ExperimentPlan sweep_plan(SweepParam param, const std::vector<std::string>& values, const RunConfig& base,
                          std::vector<std::uint64_t> seeds);

/// Writes runs.csv, summary.csv, summary.json and (with `per_run`) one JSON
/// document per run under runs/<arm>/seed-<n>.json.
void write_experiment(const std::filesystem::path& dir, const ExperimentResult& result, bool per_run = true);

void write_summary(const std::filesystem::path& dir, const std::vector<ArmSummary>& summary);

/// Reads runs.csv back. Throws std::runtime_error on a malformed file.
std::vector<RunRow> read_runs(const std::filesystem::path& csv);

nlohmann::json summary_to_json(const std::vector<ArmSummary>& summary);

/// Fixed-width table for terminals.
void print_summary(std::ostream& out, const std::vector<ArmSummary>& summary);

}  // namespace iemo
