#include "iemo/refpoints.hpp"

#include "iemo/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace iemo {

ReferenceSet ReferenceSet::with_neighbors(std::vector<Weights> points, std::size_t T) {
  ReferenceSet set;
  set.T = std::min(T, points.size());
  set.neighbors = set.T > 0 ? build_neighborhoods(points, set.T) : Neighborhoods{};
  set.soa = simd::PointMatrix::from_rows(points);
  set.points = std::move(points);
  return set;
}

std::size_t lattice_size(std::size_t m, std::size_t H) {
  // C(H + m - 1, k) built incrementally; each partial product is an exact binomial.
  const std::size_t k = m - 1;
  std::size_t value = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    const std::size_t num = H + i;
    if (value > std::numeric_limits<std::size_t>::max() / num) return 0;
    value = value * num / i;
    if (value > kMaxLatticePoints) return 0;
  }
  return value;
}

std::vector<Weights> das_dennis(std::size_t m, std::size_t H) {
  if (m < 2) throw std::invalid_argument("das_dennis: m must be at least 2");
  if (H < 1) throw std::invalid_argument("das_dennis: H must be at least 1");
  const std::size_t count = lattice_size(m, H);
  if (count == 0)
    throw std::invalid_argument("das_dennis: lattice for m=" + std::to_string(m) + ", H=" + std::to_string(H) +
                                " exceeds " + std::to_string(kMaxLatticePoints) + " points");

  std::vector<Weights> out;
  out.reserve(count);
  std::vector<std::size_t> parts(m, 0);
  const double h = static_cast<double>(H);

  // Odometer over compositions of H into m parts; the last part takes the rest.
  auto emit = [&] {
    Weights w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = static_cast<double>(parts[i]) / h;
    out.push_back(std::move(w));
  };
  std::size_t used = 0;
  for (;;) {
    parts[m - 1] = H - used;
    emit();
    std::size_t i = m - 1;
    while (i > 0) {
      --i;
      if (used < H) {
        ++parts[i];
        ++used;
        break;
      }
      used -= parts[i];
      parts[i] = 0;
      if (i == 0) return out;
    }
  }
}

std::vector<Weights> two_layer(std::size_t m, std::size_t H1, std::size_t H2) {
  auto out = das_dennis(m, H1);
  const auto inner = das_dennis(m, H2);
  const double shift = 1.0 / (2.0 * static_cast<double>(m));
  const std::size_t outer_count = out.size();
  for (const auto& w : inner) {
    Weights s(m);
    for (std::size_t i = 0; i < m; ++i) s[i] = w[i] / 2.0 + shift;
    const bool duplicate = std::any_of(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(outer_count),
                                       [&](const Weights& o) { return euclidean_distance(o, s) < 1e-12; });
    if (!duplicate) out.push_back(std::move(s));
  }
  return out;
}

Neighborhoods build_neighborhoods(const std::vector<Weights>& points, std::size_t T) {
  const std::size_t n = points.size();
  if (T > n)
    throw std::invalid_argument("build_neighborhoods: T=" + std::to_string(T) + " exceeds " + std::to_string(n) +
                                " points");
  const auto soa = simd::PointMatrix::from_rows(points);
  const auto& k = simd::kernels();
  Neighborhoods table(n);
  std::vector<double> dist(n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) {
    k.squared_distances(points[i], soa, dist);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(T), order.end(),
                      [&](std::size_t a, std::size_t b) { return dist[a] < dist[b] || (dist[a] == dist[b] && a < b); });
    table[i].assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(T));
  }
  return table;
}

std::vector<std::size_t> select_seed_indices(const std::vector<Weights>& points, std::size_t mu) {
  const std::size_t n = points.size();
  mu = std::min(mu, n);
  std::vector<std::size_t> chosen;
  if (mu == 0) return chosen;
  chosen.reserve(mu);

  const std::size_t m = points.front().size();
  const Weights centroid(m, 1.0 / static_cast<double>(m));
  const auto soa = simd::PointMatrix::from_rows(points);
  const auto& k = simd::kernels();

  std::vector<double> nearest(n);
  k.squared_distances(centroid, soa, nearest);
  std::size_t first = 0;
  for (std::size_t j = 1; j < n; ++j) {
    if (nearest[j] < nearest[first]) first = j;
  }
  chosen.push_back(first);

  // nearest[j] tracks the squared distance from j to the chosen set.
  k.squared_distances(points[first], soa, nearest);
  std::vector<double> scratch(n);
  while (chosen.size() < mu) {
    std::size_t best = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (nearest[j] <= 0.0 && std::find(chosen.begin(), chosen.end(), j) != chosen.end()) continue;
      if (best == n || nearest[j] > nearest[best]) best = j;
    }
    chosen.push_back(best);
    k.squared_distances(points[best], soa, scratch);
    for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], scratch[j]);
  }
  return chosen;
}

}  // namespace iemo
