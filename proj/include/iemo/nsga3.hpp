#pragma once

#include "iemo/core.hpp"
#include "iemo/problems.hpp"
#include "iemo/refpoints.hpp"
#include "iemo/variation.hpp"

#include <span>
#include <vector>

namespace iemo {

/// Non-domination fronts F1, F2, ... as indices into the sorted set,
/// ascending within each front.
struct FrontPartition {
  std::vector<std::vector<std::size_t>> fronts;
};

FrontPartition nondominated_sort(const std::vector<Objectives>& points);

struct Association {
  std::size_t reference = 0;
  double distance = 0.0;  // perpendicular distance to the reference line
};

/// Closest reference line through the origin for f - z. Ties go to the
/// lower reference index.
Association associate(std::span<const double> f, const std::vector<Weights>& W, std::span<const double> z);

/// Batched associate() for many points against one reference set.
std::vector<Association> associate_all(const std::vector<Objectives>& points, const std::vector<Weights>& W,
                                       std::span<const double> z);

struct AssociationTable {
  std::vector<Association> members;      // one per candidate, indexed like the merged set
  std::vector<std::size_t> crowding;     // rho_j: accepted members bound to reference j
};

/// Associates every point and counts crowding over `accepted` only.
AssociationTable build_association_table(const std::vector<Objectives>& points, std::span<const std::size_t> accepted,
                                         const std::vector<Weights>& W, std::span<const double> z);

/// Grows `partial` to `target` members from `last`: repeatedly take the least
/// crowded reference that still has unpicked associates in `last` (ties at
/// random), admit one of its associates at random and bump its crowding.
/// Throws std::invalid_argument unless |partial| < target <= |partial| + |last|.
std::vector<std::size_t> niching_fill(std::span<const std::size_t> partial, std::span<const std::size_t> last,
                                      AssociationTable table, std::size_t target, Rng& rng);

struct Nsga3State {
  ReferenceSet W;
  Population P;
  IdealPoint z;
  std::size_t gen = 0;
  std::size_t evaluations = 0;  // offspring evaluations only
};

/// Random population of `population_size` members in the unit box.
Nsga3State nsga3_init(const ProblemSpec& problem, std::vector<Weights> points, std::size_t population_size, Rng& rng);

/// Environmental selection of `target` survivors from a merged population.
Population nsga3_select(Population merged, std::size_t target, const std::vector<Weights>& W,
                        std::span<const double> z, Rng& rng);

void nsga3_generation(Nsga3State& state, const ProblemSpec& problem, const VariationParams& variation, Rng& rng);

/// Replaces the reference set; the population is untouched.
void adopt_reference_set(Nsga3State& state, std::vector<Weights> points);

}  // namespace iemo
