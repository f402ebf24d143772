#include "iemo/variation.hpp"

#include <algorithm>
#include <cmath>

namespace iemo {

std::string_view to_string(MutationGate gate) {
  return gate == MutationGate::per_solution ? "per_solution" : "per_variable";
}

std::optional<MutationGate> parse_mutation_gate(std::string_view name) {
  if (name == "per_solution") return MutationGate::per_solution;
  if (name == "per_variable") return MutationGate::per_variable;
  return std::nullopt;
}

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

}  // namespace

std::pair<Decision, Decision> sbx(std::span<const double> p1, std::span<const double> p2,
                                  const VariationParams& params, Rng& rng) {
  Decision c1(p1.begin(), p1.end());
  Decision c2(p2.begin(), p2.end());
  if (uniform01(rng) >= params.p_c) return {c1, c2};

  const double exponent = 1.0 / (params.eta_c + 1.0);
  for (std::size_t i = 0; i < c1.size(); ++i) {
    if (uniform01(rng) >= 0.5) continue;
    const double a = p1[i];
    const double b = p2[i];
    if (std::fabs(a - b) < 1e-14) continue;
    const double u = uniform01(rng);
    const double beta = u <= 0.5 ? std::pow(2.0 * u, exponent) : std::pow(1.0 / (2.0 * (1.0 - u)), exponent);
    c1[i] = clamp01(0.5 * ((1.0 + beta) * a + (1.0 - beta) * b));
    c2[i] = clamp01(0.5 * ((1.0 - beta) * a + (1.0 + beta) * b));
    if (uniform01(rng) < 0.5) std::swap(c1[i], c2[i]);
  }
  return {c1, c2};
}

Decision polynomial_mutation(std::span<const double> x, const VariationParams& params, Rng& rng) {
  Decision y(x.begin(), x.end());
  if (y.empty()) return y;

  double rate = params.p_m;
  if (params.gate == MutationGate::per_solution) {
    if (uniform01(rng) >= params.p_m) return y;
    rate = 1.0 / static_cast<double>(y.size());
  }

  const double power = 1.0 / (params.eta_m + 1.0);
  for (auto& v : y) {
    if (uniform01(rng) >= rate) continue;
    const double d1 = v;        // distance to the lower bound 0
    const double d2 = 1.0 - v;  // distance to the upper bound 1
    const double u = uniform01(rng);
    double dq;
    if (u < 0.5) {
      const double base = 2.0 * u + (1.0 - 2.0 * u) * std::pow(1.0 - d1, params.eta_m + 1.0);
      dq = std::pow(base, power) - 1.0;
    } else {
      const double base = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * std::pow(1.0 - d2, params.eta_m + 1.0);
      dq = 1.0 - std::pow(base, power);
    }
    v = clamp01(v + dq);
  }
  return y;
}

}  // namespace iemo
