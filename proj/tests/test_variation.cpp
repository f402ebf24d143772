#include "iemo/variation.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace iemo;

TEST(Sbx, ChildrenStayInBoxAndPreserveMidpoint) {
  Rng rng(1);
  VariationParams params;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto p1 = oracle::random_vector(8, rng);
    const auto p2 = oracle::random_vector(8, rng);
    const auto [c1, c2] = sbx(p1, p2, params, rng);
    ASSERT_EQ(c1.size(), 8u);
    for (std::size_t i = 0; i < 8; ++i) {
      EXPECT_GE(c1[i], 0.0);
      EXPECT_LE(c1[i], 1.0);
      EXPECT_GE(c2[i], 0.0);
      EXPECT_LE(c2[i], 1.0);
      const bool clamped = c1[i] == 0.0 || c1[i] == 1.0 || c2[i] == 0.0 || c2[i] == 1.0;
      if (!clamped) EXPECT_NEAR(c1[i] + c2[i], p1[i] + p2[i], 1e-12);
    }
  }
}

TEST(Sbx, IdenticalParentsAndZeroRate) {
  Rng rng(2);
  const std::vector<double> p{0.1, 0.2, 0.3};
  auto [c1, c2] = sbx(p, p, VariationParams{}, rng);
  EXPECT_EQ(c1, p);
  EXPECT_EQ(c2, p);
  VariationParams off;
  off.p_c = 0.0;
  const std::vector<double> q{0.9, 0.8, 0.7};
  std::tie(c1, c2) = sbx(p, q, off, rng);
  EXPECT_EQ(c1, p);
  EXPECT_EQ(c2, q);
}

// The spread factor beta = |c1 - c2| / |p1 - p2| has CDF b^(eta+1) / 2 on [0, 1].
TEST(Sbx, SpreadDistributionMonteCarlo) {
  Rng rng(3);
  VariationParams params;
  const std::vector<double> p1{0.4}, p2{0.6};
  int crossed = 0, contracted = 0, tight = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const auto [c1, c2] = sbx(p1, p2, params, rng);
    if (c1[0] == p1[0] && c2[0] == p2[0]) continue;
    ++crossed;
    const double beta = std::fabs(c1[0] - c2[0]) / 0.2;
    if (beta <= 1.0) ++contracted;
    if (beta <= 0.9) ++tight;
  }
  EXPECT_NEAR(static_cast<double>(crossed) / n, 0.5, 0.01);
  EXPECT_NEAR(static_cast<double>(contracted) / crossed, 0.5, 0.01);
  EXPECT_NEAR(static_cast<double>(tight) / crossed, 0.5 * std::pow(0.9, 31.0), 0.004);
}

TEST(Sbx, ChildOrderIsSymmetric) {
  Rng rng(4);
  const std::vector<double> p1{0.2}, p2{0.7};
  int first_low = 0, changed = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto [c1, c2] = sbx(p1, p2, VariationParams{}, rng);
    if (c1[0] == p1[0]) continue;
    ++changed;
    if (c1[0] < c2[0]) ++first_low;
  }
  EXPECT_NEAR(static_cast<double>(first_low) / changed, 0.5, 0.01);
}

TEST(Mutation, StaysInBox) {
  Rng rng(5);
  VariationParams params;
  params.gate = MutationGate::per_variable;
  params.p_m = 1.0;
  for (int trial = 0; trial < 5000; ++trial) {
    auto x = oracle::random_vector(5, rng);
    x[0] = 0.0;
    x[1] = 1.0;
    for (double v : polynomial_mutation(x, params, rng)) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Mutation, GateRatesMonteCarlo) {
  const std::vector<double> x(10, 0.5);
  const int n = 50000;
  {
    Rng rng(6);
    VariationParams params;  // per solution, p_m = 0.9 then 1/n per variable
    double changed = 0;
    for (int i = 0; i < n; ++i) {
      const auto y = polynomial_mutation(x, params, rng);
      for (std::size_t k = 0; k < y.size(); ++k) changed += y[k] != x[k];
    }
    EXPECT_NEAR(changed / n, 0.9, 0.03);
  }
  {
    Rng rng(7);
    VariationParams params;
    params.gate = MutationGate::per_variable;
    params.p_m = 0.3;
    double changed = 0;
    for (int i = 0; i < n; ++i) {
      const auto y = polynomial_mutation(x, params, rng);
      for (std::size_t k = 0; k < y.size(); ++k) changed += y[k] != x[k];
    }
    EXPECT_NEAR(changed / n, 3.0, 0.05);
  }
}

// At the centre of the box the perturbation is symmetric with
// P(|delta| <= d) = 1 - (1 - d)^(eta+1) for d <= 1/2.
TEST(Mutation, PerturbationDistributionMonteCarlo) {
  Rng rng(8);
  VariationParams params;
  params.gate = MutationGate::per_variable;
  params.p_m = 1.0;
  const std::vector<double> x{0.5};
  const int n = 200000;
  double sum = 0;
  int small = 0;
  for (int i = 0; i < n; ++i) {
    const double d = polynomial_mutation(x, params, rng)[0] - 0.5;
    sum += d;
    if (std::fabs(d) <= 0.02) ++small;
  }
  EXPECT_NEAR(sum / n, 0.0, 1e-3);
  EXPECT_NEAR(static_cast<double>(small) / n, 1.0 - std::pow(0.98, 21.0), 0.005);
}

TEST(Variation, GateNames) {
  EXPECT_EQ(parse_mutation_gate(to_string(MutationGate::per_variable)), MutationGate::per_variable);
  EXPECT_FALSE(parse_mutation_gate("sometimes"));
}

TEST(Variation, UniformIndexCoversRange) {
  Rng rng(9);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) ++hits[uniform_index(rng, 7)];
  for (int h : hits) EXPECT_NEAR(h, 10000, 500);
}
