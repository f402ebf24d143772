#pragma once

#include "iemo/core.hpp"
#include "iemo/nsga3.hpp"
#include "iemo/problems.hpp"
#include "iemo/simd/kernels.hpp"

#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace iemo {

/// A decision maker's answer for one candidate. Lower scores are better.
struct ScoredRecord {
  Objectives f;
  double score = 0.0;
  std::size_t session = 0;
};

/// Distance term inside the Gaussian. `literal` uses exp(-|f - c| / sigma^2)
/// with the plain Euclidean norm; `squared` uses exp(-|f - c|^2 / sigma^2).
enum class KernelShape { literal, squared };

std::string_view to_string(KernelShape shape);
std::optional<KernelShape> parse_kernel_shape(std::string_view name);

double rbf_kernel(std::span<const double> f, std::span<const double> c, double sigma,
                  KernelShape shape = KernelShape::literal);

/// Gaussian RBF network: bias + sum_i weights[i] * kernel(f, centers[i]).
struct AvfModel {
  std::vector<Objectives> centers;
  double sigma = 1.0;
  std::vector<double> weights;
  double bias = 0.0;
  KernelShape shape = KernelShape::literal;
  simd::PointMatrix soa;  // centers, dimension-major

  double operator()(std::span<const double> f) const;
};

/// Ridge term added to the kernel diagonal.
inline constexpr double kRidge = 1e-8;

/// Interpolating fit: one center per distinct input (exact duplicates are
/// merged to their mean score), sigma = median pairwise center distance
/// (1 for a single center), bias = mean target, weights from
/// (K + 1e-8 I) w = t - bias. Throws std::invalid_argument on empty input.
AvfModel train_avf(std::span<const ScoredRecord> records, KernelShape shape = KernelShape::literal);

double avf_score(const AvfModel& model, std::span<const double> f);

using ValueFunction = std::function<double(std::span<const double>)>;

struct ConsultationSchedule {
  std::size_t tau = 25;
  std::size_t mu_first = 7;
  std::size_t mu_later = 10;

  std::size_t mu_for(std::size_t session) const { return session <= 1 ? mu_first : mu_later; }
  /// Consultations happen after generations tau, 2 tau, ... strictly before the last one.
  bool consults_at(std::size_t generation, std::size_t last_generation) const {
    return tau > 0 && generation % tau == 0 && generation < last_generation;
  }
};

/// What pick_candidates needs from an optimizer: its population, current
/// reference set, each member's associated reference point, and z.
struct CandidateContext {
  const Population& population;
  const std::vector<Weights>& W;
  std::span<const Association> assoc;
  std::span<const double> z;
};

/// Session 1: the solutions bound to 2m+1 well-spread seed reference points.
/// Later sessions: the mu_later members with the lowest value under `model`.
/// Candidates always have pairwise distinct objective vectors.
std::vector<std::size_t> pick_candidates(const CandidateContext& ctx, const ValueFunction* model,
                                         const ConsultationSchedule& schedule, std::size_t session);

struct ConsultationRequest {
  std::size_t session = 0;
  std::size_t generation = 0;
  std::vector<Objectives> candidates;
  std::vector<Objectives> population;  // context for display
};

/// Raised through the engine when a consultation is cancelled.
class RunAborted : public std::runtime_error {
 public:
  RunAborted() : std::runtime_error("run aborted") {}
};

/// Scoring authority. Implementations return one finite score per candidate
/// in candidate order, or throw RunAborted.
class DmOracle {
 public:
  virtual ~DmOracle() = default;
  virtual std::vector<double> score(const ConsultationRequest& request) = 0;
};

/// Scores with the golden value function, optionally with decaying noise.
/// The noise draws come from the oracle's own stream.
class SimulatedOracle final : public DmOracle {
 public:
  SimulatedOracle(GoldenSpec golden, NoiseSpec noise, std::uint64_t seed);
  std::vector<double> score(const ConsultationRequest& request) override;

 private:
  GoldenSpec golden_;
  NoiseSpec noise_;
  Rng rng_;
};

/// Runs the oracle and checks its answer. Throws std::runtime_error for a
/// wrong count or a non-finite score.
std::vector<double> dm_score(DmOracle& oracle, const ConsultationRequest& request);

}  // namespace iemo
