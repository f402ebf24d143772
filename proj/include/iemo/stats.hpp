#pragma once

#include <span>
#include <vector>

namespace iemo::stats {

/// Sample quantile with linear interpolation between order statistics
/// (position q * (n - 1)). Throws std::invalid_argument on empty input.
double quantile(std::span<const double> values, double q);

double median(std::span<const double> values);

/// Q3 - Q1 under quantile()'s convention.
double iqr(std::span<const double> values);

/// Two-sided Wilcoxon signed-rank p-value for paired samples. Zero
/// differences are dropped; ties share average ranks. Exact null
/// distribution for up to 12 non-zero differences, normal approximation
/// with tie and continuity correction above. All-zero differences give 1.
/// Throws std::invalid_argument when the samples differ in length.
double wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

/// Exact two-sided p-value for the given non-zero differences.
double wilcoxon_exact(std::span<const double> differences);

/// Normal approximation for the given non-zero differences.
double wilcoxon_normal(std::span<const double> differences);

}  // namespace iemo::stats
