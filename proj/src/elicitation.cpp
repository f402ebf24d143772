#include "iemo/elicitation.hpp"

#include "iemo/moead.hpp"
#include "iemo/simd/kernels.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace iemo {

std::string_view to_string(GuardMode mode) { return mode == GuardMode::literal ? "literal" : "rescored"; }

std::optional<GuardMode> parse_guard_mode(std::string_view name) {
  if (name == "literal") return GuardMode::literal;
  if (name == "rescored") return GuardMode::rescored;
  return std::nullopt;
}

PromisingSet identify_promising(const Population& population, std::span<const Association> assoc,
                                const ValueFunction& value, std::size_t mu) {
  std::vector<double> scores(population.size());
  for (std::size_t i = 0; i < population.size(); ++i) scores[i] = value(population[i].f);
  std::vector<std::size_t> order(population.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  PromisingSet out;
  const std::size_t top = std::min(mu, order.size());
  for (std::size_t k = 0; k < top; ++k) {
    const std::size_t i = order[k];
    const std::size_t ref = assoc[i].reference;
    if (std::find(out.references.begin(), out.references.end(), ref) != out.references.end()) continue;
    out.references.push_back(ref);
    out.solutions.push_back(i);
    out.objectives.push_back(population[i].f);
  }
  return out;
}

Weights move_point(std::span<const double> w, std::span<const double> target, double eta) {
  Weights out(w.size());
  for (std::size_t j = 0; j < w.size(); ++j) out[j] = w[j] + eta * (target[j] - w[j]);
  return out;
}

BestRecord resolve_best(std::span<const ScoredRecord> last_session, std::span<const std::size_t> candidate_refs,
                        const std::vector<Weights>& W) {
  if (last_session.empty()) throw std::logic_error("resolve_best: no consultation has been completed");
  std::size_t best = 0;
  for (std::size_t i = 1; i < last_session.size(); ++i) {
    if (last_session[i].score < last_session[best].score) best = i;
  }
  BestRecord record;
  record.f = last_session[best].f;
  record.score = last_session[best].score;
  record.reference = candidate_refs[best];
  record.w = W[record.reference];
  return record;
}

std::vector<Weights> elicit(const std::vector<Weights>& W, const PromisingSet& promising, const BestRecord& best,
                            const ValueFunction& value, std::span<const double> z, double eta, GuardMode guard) {
  std::vector<Weights> out = W;
  const std::size_t n = W.size();
  const std::size_t count = promising.references.size();
  if (count == 0) return out;

  std::vector<bool> claimed(n, false);
  for (std::size_t ref : promising.references) claimed[ref] = true;
  std::size_t unclaimed = n - count;
  const std::size_t quota = (n - count + count - 1) / count;
  const double threshold = guard == GuardMode::literal ? tchebycheff(best.f, best.w, z) : best.score;

  const auto soa = simd::PointMatrix::from_rows(W);
  std::vector<double> dist(n);
  std::vector<std::size_t> order(n);

  for (std::size_t u = 0; u < count && unclaimed > 0; ++u) {
    if (!(value(promising.objectives[u]) < threshold)) {
      for (std::size_t j = 0; j < n; ++j) {
        if (!claimed[j]) out[j] = move_point(W[j], best.w, eta);
      }
      break;
    }

    const auto& attractor = W[promising.references[u]];
    simd::kernels().squared_distances(attractor, soa, dist);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });
    std::size_t taken = 0;
    for (std::size_t j : order) {
      if (taken == quota) break;
      if (claimed[j]) continue;
      out[j] = move_point(W[j], attractor, eta);
      claimed[j] = true;
      ++taken;
      --unclaimed;
    }
  }
  return out;
}

}  // namespace iemo
