#pragma once

#include "iemo/core.hpp"
#include "iemo/simd/kernels.hpp"

#include <cstddef>
#include <vector>

namespace iemo {

using Neighborhoods = std::vector<std::vector<std::size_t>>;

/// Weight vectors on the unit simplex plus each vector's T nearest
/// neighbours (itself included). `neighbors` is empty when T = 0.
struct ReferenceSet {
  std::vector<Weights> points;
  Neighborhoods neighbors;
  std::size_t T = 0;
  simd::PointMatrix soa;  // dimension-major copy of `points`

  std::size_t size() const { return points.size(); }

  /// Builds the neighbourhood table for `points`; T is clamped to the size.
  static ReferenceSet with_neighbors(std::vector<Weights> points, std::size_t T);
};

/// Upper bound on lattice sizes accepted by das_dennis.
inline constexpr std::size_t kMaxLatticePoints = 1'000'000;

/// C(H + m - 1, m - 1), or 0 when it exceeds kMaxLatticePoints.
std::size_t lattice_size(std::size_t m, std::size_t H);

/// Simplex lattice with H divisions per axis, in ascending lexicographic order.
/// Throws std::invalid_argument for m < 2, H < 1 or an oversized lattice.
std::vector<Weights> das_dennis(std::size_t m, std::size_t H);

/// Boundary lattice (H1) plus an inner lattice (H2) shrunk towards the
/// centroid by w/2 + 1/(2m). Duplicates are dropped.
std::vector<Weights> two_layer(std::size_t m, std::size_t H1, std::size_t H2);

/// Indices of the T nearest points for every point; ties go to the lower index.
/// Throws std::invalid_argument when T exceeds the number of points.
Neighborhoods build_neighborhoods(const std::vector<Weights>& points, std::size_t T);

/// Greedy max-min spread selection starting from the point nearest the
/// simplex centroid. Ties go to the lower index.
std::vector<std::size_t> select_seed_indices(const std::vector<Weights>& points, std::size_t mu);

}  // namespace iemo
