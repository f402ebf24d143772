#include "iemo/refpoints.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace iemo;

namespace {

std::size_t binomial(std::size_t n, std::size_t k) {
  double r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return static_cast<std::size_t>(std::llround(r));
}

}  // namespace

TEST(Lattice, Counts) {
  EXPECT_EQ(das_dennis(3, 12).size(), 91u);
  EXPECT_EQ(das_dennis(5, 6).size(), 210u);
  EXPECT_EQ(two_layer(8, 3, 2).size(), 156u);
  EXPECT_EQ(two_layer(10, 3, 2).size(), 275u);
  for (std::size_t m = 2; m <= 7; ++m)
    for (std::size_t H = 1; H <= 8; ++H) EXPECT_EQ(lattice_size(m, H), binomial(H + m - 1, m - 1)) << m << ' ' << H;
}

TEST(Lattice, PointsAreOnTheSimplexGrid) {
  for (std::size_t m : {2u, 3u, 4u, 6u}) {
    const std::size_t H = 7;
    const auto pts = das_dennis(m, H);
    std::set<std::vector<long>> seen;
    for (const auto& w : pts) {
      EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-12);
      std::vector<long> grid;
      for (double v : w) {
        EXPECT_GE(v, 0.0);
        const double scaled = v * static_cast<double>(H);
        EXPECT_NEAR(scaled, std::round(scaled), 1e-9);
        grid.push_back(std::lround(scaled));
      }
      seen.insert(grid);
    }
    EXPECT_EQ(seen.size(), pts.size());
    EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
  }
}

TEST(Lattice, Errors) {
  EXPECT_THROW(das_dennis(1, 4), std::invalid_argument);
  EXPECT_THROW(das_dennis(3, 0), std::invalid_argument);
  EXPECT_THROW(das_dennis(15, 40), std::invalid_argument);
  EXPECT_EQ(lattice_size(15, 40), 0u);
}

TEST(Lattice, TwoLayerInnerPointsAreShrunk) {
  const auto pts = two_layer(8, 3, 2);
  const auto outer = das_dennis(8, 3);
  ASSERT_EQ(outer.size(), 120u);
  for (std::size_t i = 120; i < pts.size(); ++i) {
    EXPECT_NEAR(std::accumulate(pts[i].begin(), pts[i].end(), 0.0), 1.0, 1e-12);
    for (double v : pts[i]) EXPECT_GE(v, 1.0 / 16.0 - 1e-15);
  }
  for (std::size_t i = 0; i < 120; ++i) EXPECT_EQ(pts[i], outer[i]);
}

TEST(Neighborhoods, MatchBruteForce) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t m = 2 + static_cast<std::size_t>(trial) % 4;
    const std::size_t n = 5 + static_cast<std::size_t>(trial) * 3;
    std::vector<Weights> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back(oracle::random_simplex_point(m, rng));
    if (trial % 4 == 0) pts = das_dennis(m, 4);  // lattices have many equal distances
    const std::size_t T = std::min<std::size_t>(pts.size(), 1 + static_cast<std::size_t>(trial) % 20);
    const auto table = build_neighborhoods(pts, T);
    ASSERT_EQ(table.size(), pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      std::vector<std::pair<double, std::size_t>> all;
      for (std::size_t j = 0; j < pts.size(); ++j) {
        double d = 0;
        for (std::size_t k = 0; k < m; ++k) d += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
        all.emplace_back(d, j);
      }
      std::sort(all.begin(), all.end());
      std::vector<std::size_t> expect;
      for (std::size_t k = 0; k < T; ++k) expect.push_back(all[k].second);
      EXPECT_EQ(table[i], expect);
      EXPECT_EQ(table[i].front(), i);
    }
  }
  EXPECT_THROW(build_neighborhoods(das_dennis(3, 2), 7), std::invalid_argument);
}

TEST(SeedSelection, SpreadFromCentroid) {
  const auto pts = das_dennis(3, 12);
  const auto chosen = select_seed_indices(pts, 7);
  ASSERT_EQ(chosen.size(), 7u);
  EXPECT_EQ(std::set<std::size_t>(chosen.begin(), chosen.end()).size(), 7u);
  // (4,4,4)/12 is the lattice centroid.
  EXPECT_EQ(pts[chosen[0]], (Weights{4.0 / 12, 4.0 / 12, 4.0 / 12}));
  // The next three picks are the simplex vertices.
  std::set<Weights> vertices{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  for (std::size_t k = 1; k <= 3; ++k) EXPECT_TRUE(vertices.count(pts[chosen[k]])) << k;
  EXPECT_EQ(select_seed_indices(pts, 500).size(), pts.size());
  EXPECT_TRUE(select_seed_indices(pts, 0).empty());
}

TEST(SeedSelection, GreedyMaxMinOracle) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    std::vector<Weights> pts;
    for (int i = 0; i < 40; ++i) pts.push_back(oracle::random_simplex_point(4, rng));
    const auto chosen = select_seed_indices(pts, 9);
    for (std::size_t k = 1; k < chosen.size(); ++k) {
      auto gap = [&](std::size_t j) {
        double best = INFINITY;
        for (std::size_t c = 0; c < k; ++c) best = std::min(best, euclidean_distance(pts[j], pts[chosen[c]]));
        return best;
      };
      double widest = 0;
      for (std::size_t j = 0; j < pts.size(); ++j) widest = std::max(widest, gap(j));
      EXPECT_NEAR(gap(chosen[k]), widest, 1e-12);
    }
  }
}
