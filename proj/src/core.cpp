#include "iemo/core.hpp"

#include "iemo/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace iemo {

IdealPoint IdealPoint::unset(std::size_t m) {
  return IdealPoint{std::vector<double>(m, std::numeric_limits<double>::infinity())};
}

bool dominates(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("dominates: objective vectors differ in length");
  bool strictly_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] > b[i]) return false;
    if (a[i] < b[i]) strictly_better = true;
  }
  return strictly_better;
}

double approximation_error(const Population& population, std::span<const double> golden) {
  if (population.empty()) throw std::invalid_argument("approximation_error: empty population");
  for (const auto& s : population) {
    if (s.f.size() != golden.size())
      throw std::invalid_argument("approximation_error: objective vector length mismatch");
  }
  const auto points = simd::PointMatrix::from_rows(objectives_of(population));
  std::vector<double> sq(points.count());
  simd::kernels().squared_distances(golden, points, sq);
  return std::sqrt(*std::min_element(sq.begin(), sq.end()));
}

IdealPoint update_ideal(IdealPoint z, std::span<const double> f) {
  for (std::size_t i = 0; i < z.z.size() && i < f.size(); ++i) z.z[i] = std::min(z.z[i], f[i]);
  return z;
}

double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc = acc + d * d;
  }
  return std::sqrt(acc);
}

std::vector<Objectives> objectives_of(const Population& population) {
  std::vector<Objectives> out;
  out.reserve(population.size());
  for (const auto& s : population) out.push_back(s.f);
  return out;
}

}  // namespace iemo
