#include "iemo/problems.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace iemo {

std::string_view to_string(ProblemId id) {
  switch (id) {
    case ProblemId::dtlz1:
      return "DTLZ1";
    case ProblemId::dtlz2:
      return "DTLZ2";
    case ProblemId::dtlz3:
      return "DTLZ3";
    case ProblemId::dtlz4:
      return "DTLZ4";
  }
  return "?";
}

std::optional<ProblemId> parse_problem_id(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  if (upper == "DTLZ1") return ProblemId::dtlz1;
  if (upper == "DTLZ2") return ProblemId::dtlz2;
  if (upper == "DTLZ3") return ProblemId::dtlz3;
  if (upper == "DTLZ4") return ProblemId::dtlz4;
  return std::nullopt;
}

std::size_t ProblemSpec::default_distance_variables(ProblemId id) {
  return id == ProblemId::dtlz1 ? 5 : 10;
}

ProblemSpec ProblemSpec::make(ProblemId id, std::size_t m) {
  if (m < min_objectives || m > max_objectives)
    throw std::invalid_argument("problem: objective count must be in [2, 15], got " + std::to_string(m));
  return ProblemSpec{id, m, m + default_distance_variables(id) - 1, 100.0};
}

namespace {

double multimodal_g(std::span<const double> xm) {
  double sum = 0.0;
  for (double v : xm) {
    const double t = v - 0.5;
    sum += t * t - std::cos(20.0 * std::numbers::pi * t);
  }
  return 100.0 * (static_cast<double>(xm.size()) + sum);
}

double sphere_g(std::span<const double> xm) {
  double sum = 0.0;
  for (double v : xm) sum += (v - 0.5) * (v - 0.5);
  return sum;
}

Objectives linear_front(std::span<const double> pos, double g, std::size_t m) {
  Objectives f(m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = 0.5 * (1.0 + g);
    for (std::size_t j = 0; j + i + 1 < m; ++j) v *= pos[j];
    if (i > 0) v *= 1.0 - pos[m - i - 1];
    f[i] = v;
  }
  return f;
}

Objectives spherical_front(std::span<const double> pos, double g, std::size_t m) {
  constexpr double half_pi = std::numbers::pi / 2.0;
  Objectives f(m);
  for (std::size_t i = 0; i < m; ++i) {
    double v = 1.0 + g;
    for (std::size_t j = 0; j + i + 1 < m; ++j) v *= std::cos(pos[j] * half_pi);
    if (i > 0) v *= std::sin(pos[m - i - 1] * half_pi);
    f[i] = v;
  }
  return f;
}

}  // namespace

Objectives evaluate(const ProblemSpec& spec, std::span<const double> x) {
  if (x.size() != spec.n)
    throw std::invalid_argument("evaluate: expected " + std::to_string(spec.n) + " variables, got " +
                                std::to_string(x.size()));
  for (double v : x) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("evaluate: variable outside [0,1]");
  }
  const std::size_t m = spec.m;
  const auto pos = x.first(m - 1);
  const auto dist = x.subspan(m - 1);

  switch (spec.id) {
    case ProblemId::dtlz1:
      return linear_front(pos, multimodal_g(dist), m);
    case ProblemId::dtlz2:
      return spherical_front(pos, sphere_g(dist), m);
    case ProblemId::dtlz3:
      return spherical_front(pos, multimodal_g(dist), m);
    case ProblemId::dtlz4: {
      std::vector<double> biased(pos.begin(), pos.end());
      for (auto& v : biased) v = std::pow(v, spec.alpha);
      return spherical_front(biased, sphere_g(dist), m);
    }
  }
  throw std::logic_error("evaluate: unknown problem");
}

std::string_view to_string(Roi roi) { return roi == Roi::center ? "center" : "boundary"; }

std::optional<Roi> parse_roi(std::string_view name) {
  if (name == "center") return Roi::center;
  if (name == "boundary") return Roi::boundary;
  return std::nullopt;
}

GoldenSpec GoldenSpec::for_roi(std::size_t m, Roi roi) {
  Weights w(m, 1.0 / static_cast<double>(m));
  if (roi == Roi::boundary) {
    w.assign(m, 0.3 / static_cast<double>(m - 1));
    w[0] = 0.7;
  }
  return with_weights(std::move(w), roi);
}

GoldenSpec GoldenSpec::with_weights(Weights w, Roi roi) {
  if (w.size() < 2) throw std::invalid_argument("golden: need at least two weights");
  double sum = 0.0;
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("golden: weights must be strictly positive");
    sum += v;
  }
  // Already-normalized input is kept bit-for-bit so config echoes round-trip.
  if (std::fabs(sum - 1.0) > 1e-12) {
    for (auto& v : w) v /= sum;
  }
  GoldenSpec g;
  g.z_star.assign(w.size(), 0.0);
  g.w_star = std::move(w);
  g.roi = roi;
  return g;
}

Objectives golden_point(const ProblemSpec& spec, const GoldenSpec& golden) {
  const auto& w = golden.w_star;
  Objectives f(w.size());
  if (spec.id == ProblemId::dtlz1) {
    double sum = 0.0;
    for (double v : w) sum += v;
    for (std::size_t i = 0; i < w.size(); ++i) f[i] = 0.5 * w[i] / sum;
  } else {
    double norm = 0.0;
    for (double v : w) norm += v * v;
    norm = std::sqrt(norm);
    for (std::size_t i = 0; i < w.size(); ++i) f[i] = w[i] / norm;
  }
  return f;
}

double psi(std::span<const double> f, const GoldenSpec& golden) {
  double worst = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    worst = std::max(worst, std::fabs(f[i] - golden.z_star[i]) / golden.w_star[i]);
  }
  return worst;
}

double psi_noisy(std::span<const double> f, const GoldenSpec& golden, const NoiseSpec& noise,
                 std::size_t t, Rng& rng) {
  const double base = psi(f, golden);
  const double horizon = static_cast<double>(std::max<std::size_t>(noise.t_max, 1));
  const double spread = noise.kappa * (1.0 - static_cast<double>(t) / horizon);
  if (!(spread > 0.0)) return base;
  std::normal_distribution<double> factor(1.0, spread);
  return base * factor(rng);
}

}  // namespace iemo
