#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "etrack/chist.hpp"
#include "etrack/testing/oracles.hpp"
#include "test_util.hpp"

using namespace etrack;

namespace {

std::size_t nonzero(const std::vector<double>& h) {
  return static_cast<std::size_t>(std::count_if(h.begin(), h.end(), [](double v) { return v != 0.0; }));
}

}  // namespace

TEST(LearnHist, RedOnBlue) {
  Image img = test::solid(40, 40, 0, 0, 1);
  for (std::size_t r = 10; r < 30; ++r)
    for (std::size_t c = 10; c < 30; ++c) {
      img.at(r, c, 0) = 1;
      img.at(r, c, 2) = 0;
    }
  const auto [fg, bg] = learn_hist(img, {10, 10, 20, 20});
  EXPECT_EQ(nonzero(fg), 1u);
  EXPECT_EQ(nonzero(bg), 1u);
  EXPECT_DOUBLE_EQ(fg[color_bin_index(255, 0, 0)], 1.0);
  EXPECT_DOUBLE_EQ(bg[color_bin_index(0, 0, 255)], 1.0);
}

TEST(LearnHist, FullPatchForegroundLeavesEmptyBackground) {
  const auto [fg, bg] = learn_hist(test::random_image(20, 20, 3, 1), {0, 0, 20, 20});
  EXPECT_NEAR(std::accumulate(fg.begin(), fg.end(), 0.0), 1.0, 1e-9);
  EXPECT_EQ(nonzero(bg), 0u);
}

TEST(LearnHist, CountingOracle) {
  const Image img = test::random_byte_image(20, 20, 3, 2);
  const BoundingBox box{4, 5, 10, 12};
  const auto [fg, bg] = learn_hist(img, box, 0.85);
  // Shrunk box: 8.5 x 10.2 about (9, 11) -> x in [4.75, 13.25), y in [5.9, 16.1).
  std::vector<double> f(kNumColorCells, 0.0), b(kNumColorCells, 0.0);
  double nf = 0, nb = 0;
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t c = 0; c < 20; ++c) {
      const double px = c + 0.5, py = r + 0.5;
      const int R = static_cast<int>(std::lround(img.at(r, c, 0) * 255));
      const int G = static_cast<int>(std::lround(img.at(r, c, 1) * 255));
      const int B = static_cast<int>(std::lround(img.at(r, c, 2) * 255));
      const std::size_t k = R / 8 + 32 * (G / 8) + 1024 * (B / 8);
      const bool in_fg = px >= 4.75 && px < 13.25 && py >= 5.9 && py < 16.1;
      const bool in_box = px >= 4 && px < 14 && py >= 5 && py < 17;
      if (in_fg) {
        f[k] += 1;
        ++nf;
      } else if (!in_box) {
        b[k] += 1;
        ++nb;
      }
    }
  EXPECT_EQ(nf, 8.0 * 10.0);
  EXPECT_EQ(nb, 400.0 - 120.0);
  for (std::size_t k = 0; k < kNumColorCells; ++k) {
    EXPECT_DOUBLE_EQ(fg[k], f[k] / nf);
    EXPECT_DOUBLE_EQ(bg[k], b[k] / nb);
  }
}

TEST(LearnHist, EmptyForegroundRejected) {
  EXPECT_THROW(learn_hist(test::random_image(10, 10, 3, 3), {4, 4, 1, 1}), InvalidInput);
}

TEST(HistWeights, SpotValues) {
  const auto w = hist_weights({0.2, 0.3, 0.4, 0.0}, {0.2, 0.1, 0.0, 0.0});
  EXPECT_EQ(w[0], 0.5);
  EXPECT_EQ(w[1], 0.75);
  EXPECT_EQ(w[2], 1.0);
  EXPECT_EQ(w[3], 0.0);
}

TEST(HistWeights, InvariantToJointScaling) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> f(200), b(200), f2(200), b2(200);
  for (std::size_t i = 0; i < 200; ++i) {
    f[i] = u(rng);
    b[i] = i % 7 == 0 ? 0.0 : u(rng);
    f2[i] = f[i] * 4.0;
    b2[i] = b[i] * 4.0;
  }
  const auto w1 = hist_weights(f, b), w2 = hist_weights(f2, b2);
  for (std::size_t i = 0; i < 200; ++i) {
    EXPECT_DOUBLE_EQ(w1[i], w2[i]);
    EXPECT_GE(w1[i], 0.0);
    EXPECT_LE(w1[i], 1.0);
  }
}

TEST(HistogramModel, InterpolateEndpointsAndEmptySide) {
  const auto [f1, b1] = learn_hist(test::random_image(30, 30, 3, 5), {5, 5, 20, 20});
  const auto [f2, b2] = learn_hist(test::random_image(30, 30, 3, 6), {5, 5, 20, 20});
  const HistogramModel a = make_histogram_model(f1, b1), b = make_histogram_model(f2, b2);
  EXPECT_EQ(interpolate(a, b, 0.0).weights, a.weights);
  EXPECT_EQ(interpolate(a, b, 1.0).weights, b.weights);
  const HistogramModel m = interpolate(a, b, 0.04);
  for (std::size_t k = 0; k < kNumColorCells; k += 101) EXPECT_DOUBLE_EQ(m.fg_hist[k], 0.96 * f1[k] + 0.04 * f2[k]);
  EXPECT_NEAR(std::accumulate(m.fg_hist.begin(), m.fg_hist.end(), 0.0), 1.0, 1e-9);
  EXPECT_NEAR(std::accumulate(m.bg_hist.begin(), m.bg_hist.end(), 0.0), 1.0, 1e-9);

  const HistogramModel empty_bg = make_histogram_model(f1, std::vector<double>(kNumColorCells, 0.0));
  EXPECT_EQ(interpolate(empty_bg, b, 0.04).bg_hist, b.bg_hist);
}

TEST(Likelihood, AllZeroWeights) {
  const Grid2D l = likelihood_map(test::random_image(9, 9, 3, 7), std::vector<double>(kNumColorCells, 0.0));
  for (double v : l.values) EXPECT_EQ(v, 0.0);
}

TEST(Likelihood, SingleColorPatchIsConstant) {
  std::vector<double> w(kNumColorCells, 0.0);
  w[color_bin_index(51, 102, 204)] = 0.625;
  const Grid2D l = likelihood_map(test::solid(6, 7, 0.2, 0.4, 0.8), w);
  for (double v : l.values) EXPECT_EQ(v, 0.625);
}

TEST(Likelihood, LookupOracle) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 1);
  std::vector<double> w(kNumColorCells);
  for (double& v : w) v = u(rng);
  const Image img = test::random_byte_image(15, 11, 3, 9);
  const Grid2D l = likelihood_map(img, w);
  const BinIndexMap idx = bin_index_map(img);
  for (std::size_t r = 0; r < 15; ++r)
    for (std::size_t c = 0; c < 11; ++c) EXPECT_EQ(l(r, c), w[idx(r, c)]);
}

TEST(IntegralImage, RecurrenceAndMonotone) {
  std::mt19937_64 rng(10);
  const Grid2D g = oracle::random_grid(7, 9, rng, 0, 1);
  const IntegralImage ii(g);
  const Grid2D& t = ii.table();
  for (std::size_t c = 0; c <= 9; ++c) EXPECT_EQ(t(0, c), 0.0);
  for (std::size_t r = 0; r <= 7; ++r) EXPECT_EQ(t(r, 0), 0.0);
  for (std::size_t r = 1; r <= 7; ++r)
    for (std::size_t c = 1; c <= 9; ++c) {
      EXPECT_GE(t(r, c), t(r - 1, c));
      EXPECT_GE(t(r, c), t(r, c - 1));
    }
  EXPECT_NEAR(ii.window_sum(0, 0, 7, 9), std::accumulate(g.values.begin(), g.values.end(), 0.0), 1e-12);
}

TEST(BoxResponse, OnesAndZeros) {
  for (double v : box_response(Grid2D(12, 10, 1.0), 5, 3).values) EXPECT_DOUBLE_EQ(v, 1.0);
  for (double v : box_response(Grid2D(12, 10, 0.0), 5, 3).values) EXPECT_EQ(v, 0.0);
}

TEST(BoxResponse, BruteForce10x10Box3) {
  std::mt19937_64 rng(11);
  const Grid2D g = oracle::random_grid(10, 10, rng, 0, 1);
  EXPECT_LT(oracle::max_abs_diff(box_response(g, 3, 3).values, oracle::window_means(g, 3, 3).values), 1e-12);
}

TEST(BoxResponse, BoundedByInputRange) {
  std::mt19937_64 rng(12);
  const Grid2D g = oracle::random_grid(20, 17, rng, 0.2, 0.9);
  const auto [lo, hi] = std::minmax_element(g.values.begin(), g.values.end());
  for (double v : box_response(g, 6, 4).values) {
    EXPECT_GE(v, *lo - 1e-15);
    EXPECT_LE(v, *hi + 1e-15);
  }
}

TEST(BoxResponse, OversizedBoxRejected) { EXPECT_THROW(box_response(Grid2D(5, 5), 6, 2), InvalidInput); }
