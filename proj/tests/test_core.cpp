#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "etrack/core.hpp"
#include "etrack/testing/oracles.hpp"
#include "test_util.hpp"

using namespace etrack;

TEST(RectIou, IdenticalBoxes) {
  const BoundingBox a{3, 4, 10, 20};
  EXPECT_DOUBLE_EQ(rect_iou(a, a), 1.0);
}

TEST(RectIou, DisjointBoxes) { EXPECT_EQ(rect_iou({0, 0, 2, 2}, {5, 5, 2, 2}), 0.0); }

TEST(RectIou, HalfOverlap) { EXPECT_DOUBLE_EQ(rect_iou({0, 0, 2, 2}, {1, 0, 2, 2}), 1.0 / 3.0); }

TEST(RectIou, SymmetricAndSelfOne) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> p(-50, 50), s(0.1, 40);
  for (int i = 0; i < 500; ++i) {
    const BoundingBox a{p(rng), p(rng), s(rng), s(rng)}, b{p(rng), p(rng), s(rng), s(rng)};
    EXPECT_EQ(rect_iou(a, b), rect_iou(b, a));
    EXPECT_NEAR(rect_iou(a, a), 1.0, 1e-12);
    const double v = rect_iou(a, b);
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(CenterDistance, Euclidean) { EXPECT_DOUBLE_EQ(center_distance({0, 0, 2, 2}, {3, 4, 2, 2}), 5.0); }

TEST(CropResize, ConstantImageStaysConstant) {
  Image img(20, 30, 3, 0.37);
  const Image out = crop_resize(img, {-5.5, 3.2, 41.7, 12.3}, 17, 9);
  for (double v : out.data) EXPECT_DOUBLE_EQ(v, 0.37);
}

TEST(CropResize, IdentityResampleCopiesPixels) {
  const Image img = test::random_image(12, 15, 3, 1);
  const Image out = crop_resize(img, {3, 2, 8, 7}, 7, 8);
  for (std::size_t r = 0; r < 7; ++r)
    for (std::size_t c = 0; c < 8; ++c)
      for (std::size_t ch = 0; ch < 3; ++ch) EXPECT_DOUBLE_EQ(out.at(r, c, ch), img.at(r + 2, c + 3, ch));
}

TEST(CropResize, PastRightEdgeReplicatesEdgeColumn) {
  Image img(10, 20, 1);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 20; ++c) img.at(r, c) = c / 19.0;
  const BoundingBox region{5, 0, 25, 10};  // 10 px past the right edge
  const Image out = crop_resize(img, region, 10, 25);
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 25; ++c) {
      const double sx = region.x + (c + 0.5) * region.w / 25.0 - 0.5;
      const double sy = region.y + (r + 0.5) * region.h / 10.0 - 0.5;
      EXPECT_NEAR(out.at(r, c), oracle::bilinear_at(img, sy, sx), 1e-15);
    }
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 15; c < 25; ++c) EXPECT_DOUBLE_EQ(out.at(r, c), img.at(r, 19));
}

TEST(CropResize, DownscaleMatchesDirectBilinear) {
  const Image img = test::random_image(40, 50, 3, 2);
  const BoundingBox region{-7.3, 12.1, 61.4, 33.9};
  const Image out = crop_resize(img, region, 23, 31);
  for (std::size_t r = 0; r < 23; ++r)
    for (std::size_t c = 0; c < 31; ++c)
      for (std::size_t ch = 0; ch < 3; ++ch) {
        const double sx = region.x + (c + 0.5) * region.w / 31.0 - 0.5;
        const double sy = region.y + (r + 0.5) * region.h / 23.0 - 0.5;
        EXPECT_NEAR(out.at(r, c, ch), oracle::bilinear_at(img, sy, sx, ch), 1e-14);
      }
}

TEST(CropResize, DegenerateRegionRejected) {
  Image img(10, 10, 1, 0.5);
  EXPECT_THROW(crop_resize(img, {0, 0, 0.5, 5}, 4, 4), InvalidRegion);
  EXPECT_THROW(crop_resize(img, {0, 0, 5, 0.0}, 4, 4), InvalidRegion);
}

TEST(ResampleGrid, MidpointColumn) {
  Grid2D g(2, 2);
  g(0, 1) = 1;
  g(1, 1) = 1;
  const Grid2D out = resample_grid(g, 2, 3);
  ASSERT_EQ(out.rows, 2u);
  ASSERT_EQ(out.cols, 3u);
  for (std::size_t r = 0; r < 2; ++r) {
    EXPECT_DOUBLE_EQ(out(r, 0), 0.0);
    EXPECT_DOUBLE_EQ(out(r, 1), 0.5);
    EXPECT_DOUBLE_EQ(out(r, 2), 1.0);
  }
}

TEST(ResampleGrid, IdentityWhenSameSize) {
  std::mt19937_64 rng(3);
  const Grid2D g = oracle::random_grid(6, 7, rng);
  EXPECT_EQ(resample_grid(g, 6, 7).values, g.values);
}

TEST(ResampleGrid, ConstantStaysConstant) {
  const Grid2D out = resample_grid(Grid2D(5, 3, -2.25), 11, 8);
  for (double v : out.values) EXPECT_DOUBLE_EQ(v, -2.25);
}

TEST(ResampleGrid, UpsampleMatchesDirectBilinear) {
  std::mt19937_64 rng(4);
  const Grid2D g = oracle::random_grid(5, 5, rng);
  const Image img = test::grid_as_image(g);
  const Grid2D out = resample_grid(g, 10, 10);
  double worst = 0.0;
  for (std::size_t r = 0; r < 10; ++r)
    for (std::size_t c = 0; c < 10; ++c)
      worst = std::max(worst, std::abs(out(r, c) - oracle::bilinear_at(img, (r + 0.5) * 0.5 - 0.5, (c + 0.5) * 0.5 - 0.5)));
  EXPECT_LT(worst, 1e-12);
}

TEST(ResampleGrid, FiniteForFiniteInput) {
  std::mt19937_64 rng(6);
  const Grid2D g = oracle::random_grid(37, 37, rng, -1e6, 1e6);
  for (double v : resample_grid(g, 150, 150).values) EXPECT_TRUE(std::isfinite(v));
}

TEST(ClampBox, KeepsInsideAndMinimumSide) {
  const BoundingBox b = clamp_box({-10, 95, 2, 300}, 100, 120);
  EXPECT_GE(b.x, 0.0);
  EXPECT_GE(b.y, 0.0);
  EXPECT_LE(b.x + b.w, 100.0);
  EXPECT_LE(b.y + b.h, 120.0);
  EXPECT_GE(b.w, 4.0);
  EXPECT_GE(b.h, 4.0);
}

TEST(Luminance, Weights) {
  Image img(1, 1, 3);
  img.data = {1.0, 0.0, 0.0};
  EXPECT_DOUBLE_EQ(luminance(img)(0, 0), 0.299);
  img.data = {0.0, 1.0, 0.0};
  EXPECT_DOUBLE_EQ(luminance(img)(0, 0), 0.587);
  img.data = {0.0, 0.0, 1.0};
  EXPECT_DOUBLE_EQ(luminance(img)(0, 0), 0.114);
}

TEST(ToByte, RoundTripsEveryCode) {
  for (int b = 0; b < 256; ++b) EXPECT_EQ(to_byte(b / 255.0), b);
  EXPECT_EQ(to_byte(-0.3), 0);
  EXPECT_EQ(to_byte(1.7), 255);
}
