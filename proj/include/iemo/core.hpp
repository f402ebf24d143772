#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace iemo {

using Objectives = std::vector<double>;
using Decision = std::vector<double>;
using Weights = std::vector<double>;

/// Random stream shared by every stochastic component. One stream per run.
using Rng = std::mt19937_64;

/// A decision vector in the unit box together with its (single) evaluation.
struct Solution {
  Decision x;
  Objectives f;
};

using Population = std::vector<Solution>;

/// Running coordinate-wise minimum of every objective vector seen so far.
struct IdealPoint {
  std::vector<double> z;

  /// All coordinates at +infinity; the first update adopts f as-is.
  static IdealPoint unset(std::size_t m);
};

/// Pareto dominance under minimization.
/// Throws std::invalid_argument on a length mismatch.
bool dominates(std::span<const double> a, std::span<const double> b);

/// Distance from the golden point to the closest member of the population.
/// Throws std::invalid_argument for an empty population or a length mismatch.
double approximation_error(const Population& population, std::span<const double> golden);

IdealPoint update_ideal(IdealPoint z, std::span<const double> f);

double euclidean_distance(std::span<const double> a, std::span<const double> b);

/// Objective vectors of a population, in member order.
std::vector<Objectives> objectives_of(const Population& population);

}  // namespace iemo
