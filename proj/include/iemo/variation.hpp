#pragma once

#include "iemo/core.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <utility>

namespace iemo {

/// How p_m is applied. per_solution: one gate per offspring, then each
/// variable mutates with probability 1/n. per_variable: every variable
/// mutates independently with probability p_m.
enum class MutationGate { per_solution, per_variable };

std::string_view to_string(MutationGate gate);
std::optional<MutationGate> parse_mutation_gate(std::string_view name);

struct VariationParams {
  double p_c = 1.0;
  double eta_c = 30.0;
  double p_m = 0.9;
  double eta_m = 20.0;
  MutationGate gate = MutationGate::per_solution;
};

/// Simulated binary crossover on [0,1]^n. Children are clamped to the box.
std::pair<Decision, Decision> sbx(std::span<const double> p1, std::span<const double> p2,
                                  const VariationParams& params, Rng& rng);

/// Bounded polynomial mutation on [0,1]^n.
Decision polynomial_mutation(std::span<const double> x, const VariationParams& params, Rng& rng);

double uniform01(Rng& rng);

/// Uniform integer in [0, n).
std::size_t uniform_index(Rng& rng, std::size_t n);

}  // namespace iemo
