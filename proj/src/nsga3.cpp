#include "iemo/nsga3.hpp"

#include "iemo/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace iemo {

FrontPartition nondominated_sort(const std::vector<Objectives>& points) {
  const std::size_t n = points.size();
  FrontPartition out;
  if (n == 0) return out;

  const auto soa = simd::PointMatrix::from_rows(points);
  const auto& k = simd::kernels();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> dominator_count(n, 0);
  std::vector<std::int8_t> row(n);
  for (std::size_t i = 0; i < n; ++i) {
    k.dominance(points[i], soa, row);
    for (std::size_t j = 0; j < n; ++j) {
      if (row[j] > 0) {
        dominated[i].push_back(j);
      } else if (row[j] < 0) {
        ++dominator_count[i];
      }
    }
  }

  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < n; ++i) {
    if (dominator_count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : current) {
      for (std::size_t j : dominated[i]) {
        if (--dominator_count[j] == 0) next.push_back(j);
      }
    }
    std::sort(next.begin(), next.end());
    out.fronts.push_back(std::move(current));
    current = std::move(next);
  }
  return out;
}

namespace {

simd::PointMatrix unit_directions(const std::vector<Weights>& W) {
  auto soa = simd::PointMatrix::from_rows(W);
  for (std::size_t j = 0; j < soa.count(); ++j) {
    double norm = 0.0;
    for (std::size_t d = 0; d < soa.dim(); ++d) norm += soa.at(d, j) * soa.at(d, j);
    norm = std::sqrt(norm);
    for (std::size_t d = 0; d < soa.dim(); ++d) soa.at(d, j) /= norm;
  }
  return soa;
}

Association closest(std::span<const double> f, std::span<const double> z, const simd::PointMatrix& units,
                    std::vector<double>& translated, std::vector<double>& scratch) {
  for (std::size_t d = 0; d < f.size(); ++d) translated[d] = f[d] - z[d];
  simd::kernels().perpendicular_sq_distances(translated, units, scratch);
  std::size_t best = 0;
  for (std::size_t j = 1; j < units.count(); ++j) {
    if (scratch[j] < scratch[best]) best = j;
  }
  return Association{best, std::sqrt(std::max(scratch[best], 0.0))};
}

}  // namespace

Association associate(std::span<const double> f, const std::vector<Weights>& W, std::span<const double> z) {
  if (W.empty()) throw std::invalid_argument("associate: empty reference set");
  const auto units = unit_directions(W);
  std::vector<double> translated(f.size());
  std::vector<double> scratch(W.size());
  return closest(f, z, units, translated, scratch);
}

std::vector<Association> associate_all(const std::vector<Objectives>& points, const std::vector<Weights>& W,
                                       std::span<const double> z) {
  if (W.empty()) throw std::invalid_argument("associate_all: empty reference set");
  const auto units = unit_directions(W);
  std::vector<double> translated(z.size());
  std::vector<double> scratch(W.size());
  std::vector<Association> out;
  out.reserve(points.size());
  for (const auto& f : points) out.push_back(closest(f, z, units, translated, scratch));
  return out;
}

AssociationTable build_association_table(const std::vector<Objectives>& points, std::span<const std::size_t> accepted,
                                         const std::vector<Weights>& W, std::span<const double> z) {
  AssociationTable table;
  table.members = associate_all(points, W, z);
  table.crowding.assign(W.size(), 0);
  for (std::size_t i : accepted) ++table.crowding[table.members[i].reference];
  return table;
}

std::vector<std::size_t> niching_fill(std::span<const std::size_t> partial, std::span<const std::size_t> last,
                                      AssociationTable table, std::size_t target, Rng& rng) {
  if (!(partial.size() < target && target <= partial.size() + last.size()))
    throw std::invalid_argument("niching_fill: need |partial| < target <= |partial| + |last| (" +
                                std::to_string(partial.size()) + ", " + std::to_string(target) + ", " +
                                std::to_string(last.size()) + ")");

  std::vector<std::size_t> chosen(partial.begin(), partial.end());
  const std::size_t refs = table.crowding.size();
  std::vector<std::vector<std::size_t>> pending(refs);
  for (std::size_t i : last) pending[table.members[i].reference].push_back(i);

  std::vector<std::size_t> ties;
  while (chosen.size() < target) {
    std::size_t least = std::numeric_limits<std::size_t>::max();
    ties.clear();
    for (std::size_t j = 0; j < refs; ++j) {
      if (pending[j].empty()) continue;
      if (table.crowding[j] < least) {
        least = table.crowding[j];
        ties.assign(1, j);
      } else if (table.crowding[j] == least) {
        ties.push_back(j);
      }
    }
    const std::size_t ref = ties.size() == 1 ? ties.front() : ties[uniform_index(rng, ties.size())];
    auto& bucket = pending[ref];
    const std::size_t pick = bucket.size() == 1 ? 0 : uniform_index(rng, bucket.size());
    chosen.push_back(bucket[pick]);
    bucket.erase(bucket.begin() + static_cast<std::ptrdiff_t>(pick));
    ++table.crowding[ref];
  }
  return chosen;
}

Nsga3State nsga3_init(const ProblemSpec& problem, std::vector<Weights> points, std::size_t population_size, Rng& rng) {
  Nsga3State state;
  state.W = ReferenceSet::with_neighbors(std::move(points), 0);
  state.z = IdealPoint::unset(problem.m);
  state.P.reserve(population_size);
  for (std::size_t i = 0; i < population_size; ++i) {
    Solution s;
    s.x.resize(problem.n);
    for (auto& v : s.x) v = uniform01(rng);
    s.f = evaluate(problem, s.x);
    state.z = update_ideal(std::move(state.z), s.f);
    state.P.push_back(std::move(s));
  }
  return state;
}

Population nsga3_select(Population merged, std::size_t target, const std::vector<Weights>& W,
                        std::span<const double> z, Rng& rng) {
  if (merged.size() <= target) return merged;
  const auto objectives = objectives_of(merged);
  const auto partition = nondominated_sort(objectives);

  std::vector<std::size_t> accepted;
  std::span<const std::size_t> last;
  for (const auto& front : partition.fronts) {
    if (accepted.size() + front.size() > target) {
      last = front;
      break;
    }
    accepted.insert(accepted.end(), front.begin(), front.end());
    if (accepted.size() == target) break;
  }

  std::vector<std::size_t> survivors = accepted;
  if (accepted.size() < target) {
    auto table = build_association_table(objectives, accepted, W, z);
    survivors = niching_fill(accepted, last, std::move(table), target, rng);
  }

  Population next;
  next.reserve(target);
  for (std::size_t i : survivors) next.push_back(std::move(merged[i]));
  return next;
}

void nsga3_generation(Nsga3State& state, const ProblemSpec& problem, const VariationParams& variation, Rng& rng) {
  const std::size_t n = state.P.size();
  Population merged = state.P;
  merged.reserve(2 * n);
  std::size_t bred = 0;
  while (bred < n) {
    const std::size_t a = uniform_index(rng, n);
    std::size_t b = a;
    while (n > 1 && b == a) b = uniform_index(rng, n);
    auto children = sbx(state.P[a].x, state.P[b].x, variation, rng);
    for (Decision* child : {&children.first, &children.second}) {
      if (bred == n) break;
      Solution s;
      s.x = polynomial_mutation(*child, variation, rng);
      s.f = evaluate(problem, s.x);
      state.z = update_ideal(std::move(state.z), s.f);
      merged.push_back(std::move(s));
      ++bred;
    }
  }
  state.evaluations += n;
  state.P = nsga3_select(std::move(merged), n, state.W.points, state.z.z, rng);
  ++state.gen;
}

void adopt_reference_set(Nsga3State& state, std::vector<Weights> points) {
  if (points.size() != state.W.size())
    throw std::invalid_argument("adopt_reference_set: expected " + std::to_string(state.W.size()) +
                                " reference points, got " + std::to_string(points.size()));
  state.W = ReferenceSet::with_neighbors(std::move(points), 0);
}

}  // namespace iemo
