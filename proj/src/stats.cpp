#include "iemo/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace iemo::stats {

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double median(std::span<const double> values) { return quantile(values, 0.5); }

double iqr(std::span<const double> values) { return quantile(values, 0.75) - quantile(values, 0.25); }

namespace {

struct RankedDifferences {
  std::vector<double> ranks;  // average ranks of |d|
  std::vector<bool> positive;
  double tie_term = 0.0;      // sum of t^3 - t over tie groups
};

RankedDifferences rank(std::span<const double> differences) {
  const std::size_t n = differences.size();
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::fabs(differences[a]) < std::fabs(differences[b]); });
  RankedDifferences out;
  out.ranks.resize(n);
  out.positive.resize(n);
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j + 1 < n && std::fabs(differences[order[j + 1]]) == std::fabs(differences[order[i]])) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out.ranks[order[k]] = avg;
    const double t = static_cast<double>(j - i + 1);
    out.tie_term += t * t * t - t;
    i = j + 1;
  }
  for (std::size_t i = 0; i < n; ++i) out.positive[i] = differences[i] > 0.0;
  return out;
}

}  // namespace

double wilcoxon_exact(std::span<const double> differences) {
  const std::size_t n = differences.size();
  if (n == 0) return 1.0;
  const auto r = rank(differences);

  // Doubled ranks are integers even with half-rank ties.
  std::vector<std::size_t> doubled(n);
  std::size_t total = 0;
  std::size_t observed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    doubled[i] = static_cast<std::size_t>(std::lround(2.0 * r.ranks[i]));
    total += doubled[i];
    if (r.positive[i]) observed += doubled[i];
  }

  // counts[s]: sign patterns whose positive doubled ranks sum to s.
  std::vector<double> counts(total + 1, 0.0);
  counts[0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t s = total; s + 1 > doubled[i]; --s) {
      counts[s] += counts[s - doubled[i]];
      if (s == 0) break;
    }
  }

  // Two-sided: |2s - total| >= |2 observed - total|.
  const auto deviation = [&](std::size_t s) {
    const auto a = static_cast<std::int64_t>(2 * s) - static_cast<std::int64_t>(total);
    return a < 0 ? -a : a;
  };
  const auto threshold = deviation(observed);
  double extreme = 0.0;
  double all = 0.0;
  for (std::size_t s = 0; s <= total; ++s) {
    all += counts[s];
    if (deviation(s) >= threshold) extreme += counts[s];
  }
  return std::min(1.0, extreme / all);
}

double wilcoxon_normal(std::span<const double> differences) {
  const std::size_t n = differences.size();
  if (n == 0) return 1.0;
  const auto r = rank(differences);
  double w_plus = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (r.positive[i]) w_plus += r.ranks[i];
  }
  const double nn = static_cast<double>(n);
  const double mean = nn * (nn + 1.0) / 4.0;
  const double variance = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - r.tie_term / 48.0;
  if (variance <= 0.0) return 1.0;
  const double z = std::max(0.0, std::fabs(w_plus - mean) - 0.5) / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("wilcoxon_signed_rank: samples differ in length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (d != 0.0) diffs.push_back(d);
  }
  if (diffs.empty()) return 1.0;
  return diffs.size() <= 12 ? wilcoxon_exact(diffs) : wilcoxon_normal(diffs);
}

}  // namespace iemo::stats
