#pragma once

#include "iemo/core.hpp"

#include <optional>
#include <span>
#include <string_view>

namespace iemo {

enum class ProblemId { dtlz1, dtlz2, dtlz3, dtlz4 };

std::string_view to_string(ProblemId id);
std::optional<ProblemId> parse_problem_id(std::string_view name);

/// A scalable DTLZ instance. n = m + k - 1 with k = 5 (DTLZ1) or 10 (DTLZ2-4).
struct ProblemSpec {
  ProblemId id = ProblemId::dtlz2;
  std::size_t m = 3;
  std::size_t n = 12;
  double alpha = 100.0;  // DTLZ4 bias exponent

  static constexpr std::size_t min_objectives = 2;
  static constexpr std::size_t max_objectives = 15;

  static std::size_t default_distance_variables(ProblemId id);

  /// Standard instance with the conventional k. Throws std::invalid_argument
  /// for m outside [2, 15].
  static ProblemSpec make(ProblemId id, std::size_t m);
};

/// Throws std::invalid_argument for a wrong length or x outside [0,1]^n.
Objectives evaluate(const ProblemSpec& spec, std::span<const double> x);

enum class Roi { center, boundary };

std::string_view to_string(Roi roi);
std::optional<Roi> parse_roi(std::string_view name);

/// The simulated decision maker's hidden Tchebycheff value function.
struct GoldenSpec {
  Weights w_star;
  Objectives z_star;
  Roi roi = Roi::center;

  /// Center: uniform weights. Boundary: (0.7, 0.3/(m-1), ...) favouring f1.
  static GoldenSpec for_roi(std::size_t m, Roi roi);

  /// Throws std::invalid_argument unless all weights are strictly positive.
  static GoldenSpec with_weights(Weights w, Roi roi = Roi::center);
};

/// Point of the Pareto front on the ray f ~ w* from the origin, i.e. the
/// minimizer of psi over the front.
Objectives golden_point(const ProblemSpec& spec, const GoldenSpec& golden);

/// max_i |f_i - z*_i| / w*_i
double psi(std::span<const double> f, const GoldenSpec& golden);

struct NoiseSpec {
  double kappa = 0.0;
  std::size_t t_max = 1;
};

/// psi scaled by a Gaussian factor with mean 1 and standard deviation
/// kappa * (1 - t / t_max). No random draw is made when that deviation is 0.
double psi_noisy(std::span<const double> f, const GoldenSpec& golden, const NoiseSpec& noise,
                 std::size_t t, Rng& rng);

}  // namespace iemo
