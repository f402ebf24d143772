#pragma once

#include "iemo/elicitation.hpp"
#include "iemo/learning.hpp"
#include "iemo/moead.hpp"
#include "iemo/problems.hpp"
#include "iemo/variation.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace iemo {

enum class Algorithm { moead, nsga3 };

std::string_view to_string(Algorithm algorithm);
std::optional<Algorithm> parse_algorithm(std::string_view name);

/// Where elicitation gets its value function from: the learned model, or
/// (for reference experiments) the golden function itself.
enum class ValueSource { learned, golden };

enum class OracleKind { simulated, human };

/// Lattice layout: one layer with `h1` divisions, or two when h2 > 0.
struct LatticeSpec {
  std::size_t h1 = 12;
  std::size_t h2 = 0;

  /// m=3: 12, m=5: 6, m=8 and m=10: (3, 2). Other m: the largest single
  /// layer with at most 300 points.
  static LatticeSpec default_for(std::size_t m);
  std::vector<Weights> build(std::size_t m) const;
};

struct RunConfig {
  ProblemSpec problem = ProblemSpec::make(ProblemId::dtlz2, 3);
  Algorithm algorithm = Algorithm::moead;
  bool interactive = true;
  GoldenSpec golden = GoldenSpec::for_roi(3, Roi::center);
  double kappa = 0.0;
  ConsultationSchedule schedule;
  VariationParams variation;
  MoeadParams moead;
  LatticeSpec lattice;
  double eta = 0.5;
  std::size_t population = 91;
  std::size_t generations = 250;
  std::uint64_t seed = 1;
  KernelShape kernel = KernelShape::literal;
  GuardMode guard = GuardMode::literal;
  ValueSource value_source = ValueSource::learned;
  OracleKind oracle = OracleKind::simulated;

  NoiseSpec noise() const { return NoiseSpec{kappa, generations}; }

  /// Defaults for a problem instance: lattice, population size and
  /// generation budget from the standard tables, mu_first = 2m + 1.
  static RunConfig defaults(ProblemId id, std::size_t m, Algorithm algorithm = Algorithm::moead,
                            Roi roi = Roi::center);
};

/// Generations per problem for m in {3, 5, 8, 10}; other m use the nearest tabulated m.
std::size_t default_generations(ProblemId id, std::size_t m);

/// Population size for a lattice of `references` points: the lattice size for
/// MOEA/D, rounded up to a multiple of 4 for NSGA-III.
std::size_t default_population(Algorithm algorithm, std::size_t references);

struct FieldError {
  std::string field;
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<FieldError> errors);
  const std::vector<FieldError>& errors() const { return errors_; }

 private:
  std::vector<FieldError> errors_;
};

/// Builds a config from a JSON document. Every key is optional; problem and
/// m select the defaults, and any other key overrides them. Throws
/// ConfigError listing every invalid field.
RunConfig config_from_json(const nlohmann::json& doc);

/// Full echo of a config, readable by config_from_json.
nlohmann::json config_to_json(const RunConfig& config);

/// Applies `overrides` (same schema) on top of `base`.
RunConfig apply_overrides(const RunConfig& base, const nlohmann::json& overrides);

}  // namespace iemo
