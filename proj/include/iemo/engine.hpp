#pragma once

#include "iemo/config.hpp"
#include "iemo/elicitation.hpp"
#include "iemo/learning.hpp"
#include "iemo/moead.hpp"
#include "iemo/nsga3.hpp"

#include <json.hpp>

#include <memory>
#include <optional>
#include <stop_token>
#include <variant>
#include <vector>

namespace iemo {

struct RunResult {
  RunConfig config;
  Objectives golden;                      // the point the error is measured against
  std::vector<double> trajectory;         // approximation error after each generation
  std::vector<double> value_trend;        // best model value per generation, NaN before the first model
  std::vector<Objectives> final_objectives;
  std::vector<ScoredRecord> records;
  std::size_t evaluations = 0;
  std::size_t consultations = 0;
  bool aborted = false;

  double final_error() const { return trajectory.empty() ? 0.0 : trajectory.back(); }
};

nlohmann::json result_to_json(const RunResult& result);

/// The interactive loop, one generation per step(). Between generations a
/// consultation may run: pick candidates, ask the oracle, refit the value
/// model, migrate the reference set and hand it to the optimizer.
class Engine {
 public:
  /// `oracle` must outlive the engine.
  Engine(RunConfig config, DmOracle& oracle);

  bool done() const { return generation_ >= config_.generations; }

  /// Runs one generation (and its consultation, if due). Lets RunAborted
  /// from the oracle propagate; the engine stays at a consistent boundary.
  void step();

  std::size_t generation() const { return generation_; }
  std::size_t consultations() const { return consultations_; }
  const std::vector<double>& trajectory() const { return trajectory_; }
  const std::vector<ScoredRecord>& records() const { return records_; }
  const RunConfig& config() const { return config_; }

  const Population& population() const;
  const std::vector<Weights>& reference_points() const;
  std::span<const double> ideal() const;

  /// Reference point bound to each population member.
  std::vector<Association> associations() const;

  RunResult result(bool aborted = false) const;

 private:
  void consult();

  RunConfig config_;
  DmOracle& oracle_;
  Rng rng_;
  std::variant<MoeadState, Nsga3State> state_;
  Objectives golden_;
  std::size_t generation_ = 0;
  std::size_t consultations_ = 0;
  std::vector<double> trajectory_;
  std::vector<double> value_trend_;
  std::vector<ScoredRecord> records_;
  std::optional<AvfModel> model_;
};

/// Seed of the oracle's noise stream, kept apart from the optimizer's stream.
std::uint64_t oracle_seed(std::uint64_t run_seed);

/// Runs a whole configuration with its simulated decision maker.
RunResult run_single(const RunConfig& config);

/// Runs with an external oracle. Stops at the next generation boundary once
/// `stop` is requested, or when the oracle throws RunAborted; the partial
/// result is flagged as aborted.
RunResult run_single(const RunConfig& config, DmOracle& oracle, std::stop_token stop = {});

}  // namespace iemo
