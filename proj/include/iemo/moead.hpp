#pragma once

#include "iemo/core.hpp"
#include "iemo/problems.hpp"
#include "iemo/refpoints.hpp"
#include "iemo/variation.hpp"

#include <span>

namespace iemo {

/// Floor applied to weight components inside the Tchebycheff aggregation.
inline constexpr double kWeightFloor = 1e-6;

/// max_i |f_i - z_i| / max(w_i, 1e-6)
double tchebycheff(std::span<const double> f, std::span<const double> w, std::span<const double> z);

struct MoeadParams {
  std::size_t T = 20;     // neighbourhood size
  double delta = 0.1;     // probability of using the whole population as the pool
  std::size_t nr = 2;     // replacements per offspring; 0 means unlimited
};

/// Solution i is bound to reference point i for the whole run.
struct MoeadState {
  ReferenceSet W;
  Population P;
  IdealPoint z;
  MoeadParams params;
  std::size_t gen = 0;
  std::size_t evaluations = 0;  // offspring evaluations only
};

/// Random population in the unit box, one member per reference point.
MoeadState moead_init(const ProblemSpec& problem, std::vector<Weights> points, const MoeadParams& params,
                      Rng& rng);

/// Offers `child` to every subproblem in `pool` (visited in random order);
/// a subproblem takes it only on strict improvement. Returns the number of
/// replacements, at most params.nr.
std::size_t update_subproblems(MoeadState& state, const Solution& child, std::span<const std::size_t> pool,
                               Rng& rng);

/// One pass over all subproblems: mate, vary, evaluate, update the ideal
/// point, replace.
void moead_generation(MoeadState& state, const ProblemSpec& problem, const VariationParams& variation, Rng& rng);

/// Swaps in a new reference set of the same size and rebuilds neighbourhoods.
/// Throws std::invalid_argument on a size mismatch.
void adopt_reference_set(MoeadState& state, std::vector<Weights> points);

}  // namespace iemo
