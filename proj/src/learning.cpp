#include "iemo/learning.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

namespace iemo {

std::string_view to_string(KernelShape shape) { return shape == KernelShape::literal ? "literal" : "squared"; }

std::optional<KernelShape> parse_kernel_shape(std::string_view name) {
  if (name == "literal") return KernelShape::literal;
  if (name == "squared") return KernelShape::squared;
  return std::nullopt;
}

namespace {

double kernel_from_sq(double sq_distance, double sigma, KernelShape shape) {
  const double spread = sigma * sigma;
  const double r = shape == KernelShape::literal ? std::sqrt(sq_distance) : sq_distance;
  return std::exp(-r / spread);
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc = acc + d * d;
  }
  return acc;
}

}  // namespace

double rbf_kernel(std::span<const double> f, std::span<const double> c, double sigma, KernelShape shape) {
  return kernel_from_sq(squared_distance(f, c), sigma, shape);
}

double AvfModel::operator()(std::span<const double> f) const {
  std::vector<double> sq(centers.size());
  simd::kernels().squared_distances(f, soa, sq);
  double value = bias;
  for (std::size_t i = 0; i < centers.size(); ++i) value += weights[i] * kernel_from_sq(sq[i], sigma, shape);
  return value;
}

double avf_score(const AvfModel& model, std::span<const double> f) { return model(f); }

AvfModel train_avf(std::span<const ScoredRecord> records, KernelShape shape) {
  if (records.empty()) throw std::invalid_argument("train_avf: no training records");

  // Ordered map: the fit does not depend on record order.
  std::map<Objectives, std::pair<double, std::size_t>> merged;
  for (const auto& r : records) {
    auto& slot = merged[r.f];
    slot.first += r.score;
    ++slot.second;
  }

  AvfModel model;
  model.shape = shape;
  std::vector<double> targets;
  for (const auto& [f, acc] : merged) {
    model.centers.push_back(f);
    targets.push_back(acc.first / static_cast<double>(acc.second));
  }
  const std::size_t n = model.centers.size();
  model.soa = simd::PointMatrix::from_rows(model.centers);
  model.bias = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(n);

  std::vector<double> pairwise;
  pairwise.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairwise.push_back(std::sqrt(squared_distance(model.centers[i], model.centers[j])));
  }
  if (pairwise.empty()) {
    model.sigma = 1.0;
  } else {
    std::sort(pairwise.begin(), pairwise.end());
    const std::size_t mid = pairwise.size() / 2;
    model.sigma = pairwise.size() % 2 == 1 ? pairwise[mid] : 0.5 * (pairwise[mid - 1] + pairwise[mid]);
  }

  Eigen::MatrixXd gram(n, n);
  Eigen::VectorXd rhs(n);
  for (std::size_t i = 0; i < n; ++i) {
    rhs(static_cast<Eigen::Index>(i)) = targets[i] - model.bias;
    for (std::size_t j = 0; j < n; ++j) {
      const double k = kernel_from_sq(squared_distance(model.centers[i], model.centers[j]), model.sigma, shape);
      gram(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = k + (i == j ? kRidge : 0.0);
    }
  }
  const Eigen::VectorXd w = gram.ldlt().solve(rhs);
  model.weights.assign(w.data(), w.data() + w.size());
  return model;
}

namespace {

double perpendicular_distance(std::span<const double> f, std::span<const double> z, std::span<const double> w) {
  double norm = 0.0;
  for (double v : w) norm += v * v;
  norm = std::sqrt(norm);
  double proj = 0.0;
  for (std::size_t d = 0; d < f.size(); ++d) proj += (f[d] - z[d]) * w[d] / norm;
  double acc = 0.0;
  for (std::size_t d = 0; d < f.size(); ++d) {
    const double r = (f[d] - z[d]) - proj * w[d] / norm;
    acc += r * r;
  }
  return std::sqrt(acc);
}

bool already_present(const Population& pop, const std::vector<std::size_t>& chosen, std::size_t i) {
  return std::any_of(chosen.begin(), chosen.end(), [&](std::size_t c) { return c == i || pop[c].f == pop[i].f; });
}

}  // namespace

std::vector<std::size_t> pick_candidates(const CandidateContext& ctx, const ValueFunction* model,
                                         const ConsultationSchedule& schedule, std::size_t session) {
  const auto& pop = ctx.population;
  const std::size_t mu = schedule.mu_for(session);
  std::vector<std::size_t> chosen;

  if (session <= 1 || model == nullptr) {
    for (std::size_t ref : select_seed_indices(ctx.W, mu)) {
      // Prefer a member already bound to this reference point, closest to its
      // line; otherwise take the closest unchosen member overall.
      std::size_t best = pop.size();
      bool best_bound = false;
      double best_distance = 0.0;
      for (std::size_t i = 0; i < pop.size(); ++i) {
        if (already_present(pop, chosen, i)) continue;
        const bool bound = ctx.assoc[i].reference == ref;
        const double d = perpendicular_distance(pop[i].f, ctx.z, ctx.W[ref]);
        if (best == pop.size() || (bound && !best_bound) || (bound == best_bound && d < best_distance)) {
          best = i;
          best_bound = bound;
          best_distance = d;
        }
      }
      if (best < pop.size()) chosen.push_back(best);
    }
    return chosen;
  }

  std::vector<double> values(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) values[i] = (*model)(pop[i].f);
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  for (std::size_t i : order) {
    if (chosen.size() == mu) break;
    if (!already_present(pop, chosen, i)) chosen.push_back(i);
  }
  return chosen;
}

SimulatedOracle::SimulatedOracle(GoldenSpec golden, NoiseSpec noise, std::uint64_t seed)
    : golden_(std::move(golden)), noise_(noise), rng_(seed) {}

std::vector<double> SimulatedOracle::score(const ConsultationRequest& request) {
  std::vector<double> out;
  out.reserve(request.candidates.size());
  for (const auto& f : request.candidates) out.push_back(psi_noisy(f, golden_, noise_, request.generation, rng_));
  return out;
}

std::vector<double> dm_score(DmOracle& oracle, const ConsultationRequest& request) {
  auto scores = oracle.score(request);
  if (scores.size() != request.candidates.size())
    throw std::runtime_error("dm_score: expected " + std::to_string(request.candidates.size()) + " scores, got " +
                             std::to_string(scores.size()));
  for (double s : scores) {
    if (!std::isfinite(s)) throw std::runtime_error("dm_score: non-finite score");
  }
  return scores;
}

}  // namespace iemo
