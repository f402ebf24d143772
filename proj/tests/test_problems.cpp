#include "iemo/problems.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

using namespace iemo;

namespace {

// Decision vector with the given position variables and all distance
// variables at 0.5, i.e. on the Pareto front.
std::vector<double> on_front(const ProblemSpec& spec, std::vector<double> pos) {
  pos.resize(spec.n, 0.5);
  return pos;
}

}  // namespace

TEST(Problems, InstanceSizes) {
  EXPECT_EQ(ProblemSpec::make(ProblemId::dtlz1, 3).n, 7u);
  EXPECT_EQ(ProblemSpec::make(ProblemId::dtlz2, 3).n, 12u);
  EXPECT_EQ(ProblemSpec::make(ProblemId::dtlz3, 10).n, 19u);
  EXPECT_EQ(ProblemSpec::make(ProblemId::dtlz4, 5).n, 14u);
  EXPECT_THROW(ProblemSpec::make(ProblemId::dtlz2, 1), std::invalid_argument);
  EXPECT_THROW(ProblemSpec::make(ProblemId::dtlz2, 16), std::invalid_argument);
}

TEST(Problems, NamesRoundTrip) {
  for (auto id : {ProblemId::dtlz1, ProblemId::dtlz2, ProblemId::dtlz3, ProblemId::dtlz4})
    EXPECT_EQ(parse_problem_id(to_string(id)), id);
  EXPECT_EQ(parse_problem_id("dtlz2"), ProblemId::dtlz2);
  EXPECT_FALSE(parse_problem_id("ZDT1"));
  EXPECT_EQ(parse_roi("boundary"), Roi::boundary);
  EXPECT_FALSE(parse_roi("edge"));
}

TEST(Problems, KnownValues) {
  const auto d1 = ProblemSpec::make(ProblemId::dtlz1, 3);
  auto f = evaluate(d1, on_front(d1, {0.5, 0.5}));
  EXPECT_NEAR(f[0], 0.125, 1e-12);
  EXPECT_NEAR(f[1], 0.125, 1e-12);
  EXPECT_NEAR(f[2], 0.25, 1e-12);

  const auto d2 = ProblemSpec::make(ProblemId::dtlz2, 3);
  f = evaluate(d2, on_front(d2, {0.0, 0.0}));
  EXPECT_NEAR(f[0], 1.0, 1e-12);
  EXPECT_NEAR(f[1], 0.0, 1e-12);
  EXPECT_NEAR(f[2], 0.0, 1e-12);

  // g of DTLZ1 at x_M = 0: 100 (k + k * (0.25 - 1)) = 125 for k = 5.
  std::vector<double> x(d1.n, 0.0);
  f = evaluate(d1, x);
  EXPECT_NEAR(f[0] + f[1] + f[2], 0.5 * 126.0, 1e-9);
}

TEST(Problems, FrontShapes) {
  std::mt19937_64 rng(1);
  for (std::size_t m : {2u, 3u, 5u, 8u, 10u}) {
    for (auto id : {ProblemId::dtlz1, ProblemId::dtlz2, ProblemId::dtlz3, ProblemId::dtlz4}) {
      const auto spec = ProblemSpec::make(id, m);
      for (int trial = 0; trial < 50; ++trial) {
        const auto f = evaluate(spec, on_front(spec, oracle::random_vector(m - 1, rng)));
        ASSERT_EQ(f.size(), m);
        for (double v : f) EXPECT_GE(v, -1e-15);
        if (id == ProblemId::dtlz1) {
          EXPECT_NEAR(std::accumulate(f.begin(), f.end(), 0.0), 0.5, 1e-12);
        } else {
          double r2 = 0;
          for (double v : f) r2 += v * v;
          EXPECT_NEAR(r2, 1.0, 1e-12);
        }
      }
    }
  }
}

TEST(Problems, DistanceVariablesOnlyWorsen) {
  std::mt19937_64 rng(2);
  for (auto id : {ProblemId::dtlz1, ProblemId::dtlz2, ProblemId::dtlz3, ProblemId::dtlz4}) {
    const auto spec = ProblemSpec::make(id, 3);
    for (int trial = 0; trial < 100; ++trial) {
      auto x = oracle::random_vector(spec.n, rng);
      const auto f = evaluate(spec, x);
      std::fill(x.begin() + 2, x.end(), 0.5);
      const auto front = evaluate(spec, x);
      for (std::size_t i = 0; i < 3; ++i) EXPECT_GE(f[i], front[i] - 1e-12);
    }
  }
}

TEST(Problems, RejectsBadInput) {
  const auto spec = ProblemSpec::make(ProblemId::dtlz2, 3);
  EXPECT_THROW(evaluate(spec, std::vector<double>(11, 0.5)), std::invalid_argument);
  auto x = std::vector<double>(12, 0.5);
  x[3] = 1.0000001;
  EXPECT_THROW(evaluate(spec, x), std::invalid_argument);
  x[3] = std::nan("");
  EXPECT_THROW(evaluate(spec, x), std::invalid_argument);
}

TEST(Golden, RoiWeights) {
  const auto c = GoldenSpec::for_roi(5, Roi::center);
  for (double w : c.w_star) EXPECT_DOUBLE_EQ(w, 0.2);
  const auto b = GoldenSpec::for_roi(3, Roi::boundary);
  EXPECT_DOUBLE_EQ(b.w_star[0], 0.7);
  EXPECT_DOUBLE_EQ(b.w_star[1], 0.15);
  EXPECT_DOUBLE_EQ(b.w_star[2], 0.15);
  EXPECT_THROW(GoldenSpec::with_weights({0.5, 0.0, 0.5}), std::invalid_argument);
  const auto n = GoldenSpec::with_weights({2.0, 2.0});
  EXPECT_DOUBLE_EQ(n.w_star[0], 0.5);
}

TEST(Golden, PointMatchesDenseFrontSample) {
  std::mt19937_64 rng(21);
  for (auto id : {ProblemId::dtlz1, ProblemId::dtlz2}) {
    const auto spec = ProblemSpec::make(id, 3);
    for (const auto& golden : {GoldenSpec::for_roi(3, Roi::center), GoldenSpec::for_roi(3, Roi::boundary),
                               GoldenSpec::with_weights({0.2, 0.5, 0.3})}) {
      const auto exact = golden_point(spec, golden);
      const auto sampled = oracle::sampled_golden_point(id == ProblemId::dtlz1, golden.w_star, 400000, rng);
      EXPECT_LT(euclidean_distance(exact, sampled), 0.02);
      EXPECT_LE(psi(exact, golden), psi(sampled, golden) + 1e-12);
    }
  }
}

TEST(Golden, PsiExamples) {
  const auto g = GoldenSpec::with_weights({0.5, 0.5});
  EXPECT_DOUBLE_EQ(psi(std::vector{0.25, 0.5}, g), 1.0);
  EXPECT_DOUBLE_EQ(psi(std::vector{0.0, 0.0}, g), 0.0);
}

TEST(Golden, NoiselessDrawsNothing) {
  const auto g = GoldenSpec::for_roi(3, Roi::center);
  Rng a(4), b(4);
  const std::vector<double> f{0.2, 0.3, 0.4};
  EXPECT_EQ(psi_noisy(f, g, NoiseSpec{0.0, 100}, 10, a), psi(f, g));
  EXPECT_EQ(psi_noisy(f, g, NoiseSpec{0.5, 100}, 100, a), psi(f, g));
  EXPECT_EQ(a(), b());
}

TEST(Golden, NoiseMomentsMonteCarlo) {
  const auto g = GoldenSpec::for_roi(3, Roi::center);
  const std::vector<double> f{0.2, 0.3, 0.4};
  const double base = psi(f, g);
  Rng rng(8);
  const NoiseSpec noise{0.4, 100};
  for (std::size_t t : {0u, 50u, 90u}) {
    const double sd = 0.4 * (1.0 - t / 100.0) * base;
    const int n = 100000;
    double sum = 0, sq = 0;
    for (int i = 0; i < n; ++i) {
      const double v = psi_noisy(f, g, noise, t, rng);
      sum += v;
      sq += v * v;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    EXPECT_NEAR(mean, base, 5 * sd / std::sqrt(n));
    EXPECT_NEAR(std::sqrt(var), sd, 0.02 * sd);
  }
}
