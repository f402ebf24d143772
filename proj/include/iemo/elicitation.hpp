#pragma once

#include "iemo/core.hpp"
#include "iemo/learning.hpp"
#include "iemo/nsga3.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace iemo {

/// Reference points whose associated members score best under the value
/// function, most important first. `solutions[i]` is the best-ranked member
/// bound to `references[i]`.
struct PromisingSet {
  std::vector<std::size_t> references;
  std::vector<std::size_t> solutions;
  std::vector<Objectives> objectives;  // objectives of `solutions[i]`
};

/// Best-scored candidate of the most recent consultation and the reference
/// point it was bound to at that time.
struct BestRecord {
  Objectives f;
  double score = 0.0;
  std::size_t reference = 0;
  Weights w;
};

/// How the step that protects against a misleading value function compares.
/// literal: value(x_U) < g(x_best | w_best, z).
/// rescored: value(x_U) < the decision maker's own score of x_best.
enum class GuardMode { literal, rescored };

std::string_view to_string(GuardMode mode);
std::optional<GuardMode> parse_guard_mode(std::string_view name);

PromisingSet identify_promising(const Population& population, std::span<const Association> assoc,
                                const ValueFunction& value, std::size_t mu);

/// w + eta (target - w), coordinate-wise.
Weights move_point(std::span<const double> w, std::span<const double> target, double eta);

/// Minimum-score record of one consultation (first on ties), paired with the
/// reference point of the candidate. Throws std::logic_error when empty.
BestRecord resolve_best(std::span<const ScoredRecord> last_session, std::span<const std::size_t> candidate_refs,
                        const std::vector<Weights>& W);

/// Migrates the reference set towards the promising points. Promising points
/// never move; each, in rank order, pulls its ceil((N - mu')/mu') nearest
/// unclaimed points by eta. If the guard rejects a promising point, every
/// still-unclaimed point moves towards w_best instead and migration stops.
std::vector<Weights> elicit(const std::vector<Weights>& W, const PromisingSet& promising, const BestRecord& best,
                            const ValueFunction& value, std::span<const double> z, double eta,
                            GuardMode guard = GuardMode::literal);

}  // namespace iemo
