#include "iemo/moead.hpp"

#include "iemo/simd/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace iemo {

double tchebycheff(std::span<const double> f, std::span<const double> w, std::span<const double> z) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double wi = w[i] > kWeightFloor ? w[i] : kWeightFloor;
    const double v = std::fabs(f[i] - z[i]) / wi;
    worst = v > worst ? v : worst;
  }
  return worst;
}

namespace {

Decision random_decision(std::size_t n, Rng& rng) {
  Decision x(n);
  for (auto& v : x) v = uniform01(rng);
  return x;
}

}  // namespace

MoeadState moead_init(const ProblemSpec& problem, std::vector<Weights> points, const MoeadParams& params,
                      Rng& rng) {
  MoeadState state;
  state.params = params;
  state.W = ReferenceSet::with_neighbors(std::move(points), params.T);
  state.z = IdealPoint::unset(problem.m);
  state.P.reserve(state.W.size());
  for (std::size_t i = 0; i < state.W.size(); ++i) {
    Solution s;
    s.x = random_decision(problem.n, rng);
    s.f = evaluate(problem, s.x);
    state.z = update_ideal(std::move(state.z), s.f);
    state.P.push_back(std::move(s));
  }
  return state;
}

std::size_t update_subproblems(MoeadState& state, const Solution& child, std::span<const std::size_t> pool,
                               Rng& rng) {
  std::vector<std::size_t> order(pool.begin(), pool.end());
  std::shuffle(order.begin(), order.end(), rng);
  const std::size_t cap = state.params.nr == 0 ? order.size() : state.params.nr;
  // Child aggregation against every subproblem at once; bit-identical to tchebycheff().
  std::vector<double> child_values(state.W.size());
  simd::kernels().tchebycheff(child.f, state.z.z, state.W.soa, kWeightFloor, child_values);
  std::size_t replaced = 0;
  for (std::size_t j : order) {
    if (replaced >= cap) break;
    if (child_values[j] < tchebycheff(state.P[j].f, state.W.points[j], state.z.z)) {
      state.P[j] = child;
      ++replaced;
    }
  }
  return replaced;
}

void moead_generation(MoeadState& state, const ProblemSpec& problem, const VariationParams& variation, Rng& rng) {
  const std::size_t n = state.P.size();
  std::vector<std::size_t> everyone(n);
  std::iota(everyone.begin(), everyone.end(), std::size_t{0});

  for (std::size_t i = 0; i < n; ++i) {
    const bool local = uniform01(rng) >= state.params.delta && state.W.neighbors[i].size() >= 2;
    const std::span<const std::size_t> pool = local ? std::span<const std::size_t>(state.W.neighbors[i])
                                                    : std::span<const std::size_t>(everyone);

    const std::size_t a = pool[uniform_index(rng, pool.size())];
    std::size_t b = a;
    while (b == a) b = pool[uniform_index(rng, pool.size())];

    auto children = sbx(state.P[a].x, state.P[b].x, variation, rng);
    Solution child;
    child.x = polynomial_mutation(children.first, variation, rng);
    child.f = evaluate(problem, child.x);
    ++state.evaluations;
    state.z = update_ideal(std::move(state.z), child.f);

    update_subproblems(state, child, pool, rng);
  }
  ++state.gen;
}

void adopt_reference_set(MoeadState& state, std::vector<Weights> points) {
  if (points.size() != state.W.size())
    throw std::invalid_argument("adopt_reference_set: expected " + std::to_string(state.W.size()) +
                                " reference points, got " + std::to_string(points.size()));
  state.W = ReferenceSet::with_neighbors(std::move(points), state.params.T);
}

}  // namespace iemo
