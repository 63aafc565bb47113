#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "etrack/bench/scenarios.hpp"
#include "etrack/tracker.hpp"
#include "test_util.hpp"

using namespace etrack;

namespace {

// Smooth random texture so small translations stay well correlated.
Image textured_frame(std::size_t h, std::size_t w, std::uint64_t seed, double ox = 0.0, double oy = 0.0) {
  const bench::detail::ValueNoise n1{seed, 9.0}, n2{seed + 1, 5.0}, n3{seed + 2, 13.0};
  Image img(h, w, 3);
  for (std::size_t r = 0; r < h; ++r)
    for (std::size_t c = 0; c < w; ++c) {
      const double x = c - ox, y = r - oy;
      img.at(r, c, 0) = n1(x, y);
      img.at(r, c, 1) = n2(x, y);
      img.at(r, c, 2) = n3(x, y);
    }
  return img;
}

PeakHistories full_histories(double mean) {
  PeakHistories h(10);
  for (int i = 0; i < 10; ++i) {
    h.q.push(mean);
    h.t.push(mean);
    h.s.push(mean);
  }
  return h;
}

}  // namespace

TEST(Config, PaperDefaults) {
  const TrackerConfig c;
  EXPECT_EQ(c.search_scale, 2.0);
  EXPECT_EQ(c.patch_size, 150u);
  EXPECT_EQ(c.cell, 4u);
  EXPECT_EQ(c.hist_bins, 32u);
  EXPECT_EQ(c.fg_shrink, 0.85);
  EXPECT_EQ(c.lambda, 0.001);
  EXPECT_EQ(c.label_sigma_factor, 1.0 / 16.0);
  EXPECT_EQ(c.eta_t, 0.02);
  EXPECT_EQ(c.eta_s, 0.04);
  EXPECT_EQ(c.gamma_q, 0.5);
  EXPECT_EQ(c.gamma_t, 0.7);
  EXPECT_EQ(c.gamma_s, 0.5);
  EXPECT_EQ(c.history_len, 10u);
  EXPECT_EQ(c.num_scales, 33u);
  EXPECT_EQ(c.scale_step, 1.02);
  EXPECT_EQ(c.scale_sigma, 1.5);
  EXPECT_EQ(c.eta_scale, 0.02);
  EXPECT_NO_THROW(c.validate());
}

TEST(Config, ParseOverridesAndComments) {
  std::istringstream in("# comment\neta_t = 0.05\n\n gamma_t=0.8  # trailing\nuse_cn = false\ngamma_s = inf\n");
  const TrackerConfig c = parse_config(in);
  EXPECT_EQ(c.eta_t, 0.05);
  EXPECT_EQ(c.gamma_t, 0.8);
  EXPECT_FALSE(c.use_cn);
  EXPECT_TRUE(std::isinf(c.gamma_s));
  EXPECT_EQ(c.eta_s, 0.04);
}

TEST(Config, UnknownKeyNamed) {
  std::istringstream in("eta_t = 0.05\nbogus_key = 3\n");
  try {
    parse_config(in);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus_key"), std::string::npos);
  }
}

TEST(Config, InvalidValuesRejected) {
  std::istringstream rate("eta_t = 1.5\n");
  EXPECT_THROW(parse_config(rate), ConfigError);
  std::istringstream gamma("gamma_q = 0\n");
  EXPECT_THROW(parse_config(gamma), ConfigError);
  std::istringstream junk("eta_t = fast\n");
  EXPECT_THROW(parse_config(junk), ConfigError);
  std::istringstream none("use_gray = false\nuse_hog = false\nuse_cn = false\nuse_ch = false\n");
  EXPECT_THROW(parse_config(none), ConfigError);
}

TEST(Config, FormatRoundTrip) {
  TrackerConfig c;
  c.eta_t = 0.03;
  c.use_hog = false;
  c.weight_ch = 2.0;
  std::istringstream in(format_config(c));
  const TrackerConfig back = parse_config(in);
  EXPECT_EQ(back.eta_t, 0.03);
  EXPECT_FALSE(back.use_hog);
  EXPECT_EQ(back.weight_ch, 2.0);
  EXPECT_EQ(format_config(back), format_config(c));
}

TEST(Config, FeatureList) {
  TrackerConfig c;
  apply_feature_list(c, "hog, ch");
  EXPECT_FALSE(c.use_gray);
  EXPECT_TRUE(c.use_hog);
  EXPECT_FALSE(c.use_cn);
  EXPECT_TRUE(c.use_ch);
  EXPECT_THROW(apply_feature_list(c, "hog,sift"), ConfigError);
  EXPECT_THROW(apply_feature_list(c, ""), ConfigError);
}

TEST(PeakHistory, BoundedFifo) {
  PeakHistory h(3);
  for (double v : {1.0, 2.0, 3.0, 4.0, 5.0}) h.push(v);
  EXPECT_EQ(h.size(), 3u);
  EXPECT_DOUBLE_EQ(h.mean(), 4.0);
}

TEST(ShouldUpdate, WarmUpAlwaysUpdates) {
  EXPECT_TRUE(should_update(PeakHistories(10), {0.0, 0.0, 0.0}, {}));
  PeakHistories h(10);
  for (int i = 0; i < 9; ++i) h.q.push(100.0), h.t.push(100.0), h.s.push(100.0);
  EXPECT_TRUE(should_update(h, {0.1, 0.1, 0.1}, {}));
}

TEST(ShouldUpdate, PaperThresholdExamples) {
  const PeakHistories h = full_histories(1.0);
  const Gammas g{0.5, 0.7, 0.5};
  EXPECT_TRUE(should_update(h, {0.6, 0.8, 0.6}, g));
  EXPECT_FALSE(should_update(h, {0.6, 0.69, 0.6}, g));
  EXPECT_FALSE(should_update(h, {0.6, 0.7, 0.6}, g));
  EXPECT_FALSE(should_update(h, {0.5, 0.8, 0.6}, g));
  EXPECT_FALSE(should_update(h, {0.6, 0.8, 0.4}, g));
}

TEST(ShouldUpdate, InactiveCriterionIgnored) {
  const PeakHistories h = full_histories(1.0);
  EXPECT_TRUE(should_update(h, {0.6, 0.8, 0.0}, {}, {true, true, false}));
}

TEST(ShouldUpdate, InfiniteGammaNeverUpdates) {
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_FALSE(should_update(PeakHistories(10), {1, 1, 1}, {inf, 0.7, 0.5}));
}

TEST(ShouldUpdate, RaisingGammaNeverFlipsFalseToTrue) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int k = 0; k < 2000; ++k) {
    PeakHistories h(10);
    for (int i = 0; i < 10; ++i) h.q.push(u(rng)), h.t.push(u(rng)), h.s.push(u(rng));
    const Peaks p{u(rng), u(rng), u(rng)};
    const Gammas g{u(rng), u(rng), u(rng)};
    if (should_update(h, p, g)) continue;
    const Gammas g2{g.q + u(rng), g.t + u(rng), g.s + u(rng)};
    EXPECT_FALSE(should_update(h, p, g2));
  }
}

TEST(Tracker, SearchRegionGeometry) {
  TrackerConfig c;
  const BoundingBox r = detail::search_region({10, 20, 50, 40}, c);
  EXPECT_DOUBLE_EQ(r.w, 100.0);
  EXPECT_DOUBLE_EQ(r.h, 80.0);
  EXPECT_DOUBLE_EQ(r.center().x, 35.0);
  EXPECT_DOUBLE_EQ(r.center().y, 40.0);
  const BoundingBox t = detail::target_in_patch(c);
  EXPECT_DOUBLE_EQ(t.w, 75.0);
  EXPECT_DOUBLE_EQ(t.center().x, 75.0);
}

TEST(Tracker, InitTrainsEnabledModels) {
  const Image f = textured_frame(160, 200, 3);
  const TrackerState st = init(f, {70, 50, 50, 40}, TrackerConfig{});
  for (const auto& flt : st.models.filters) {
    ASSERT_TRUE(flt.has_value());
    EXPECT_EQ(flt->rows, 37u);
  }
  EXPECT_EQ(st.models.filters[1]->channels(), 9u);
  EXPECT_EQ(st.models.filters[2]->channels(), 11u);
  EXPECT_TRUE(st.models.hist.has_value());
  EXPECT_TRUE(st.models.scale.has_value());
  EXPECT_EQ(st.histories.q.size(), 0u);
}

TEST(Tracker, GrayInputDisablesColorModels) {
  Image gray(120, 120, 1);
  const Image rgb = textured_frame(120, 120, 4);
  for (std::size_t i = 0; i < gray.data.size(); ++i) gray.data[i] = rgb.data[3 * i];
  TrackerState st = init(gray, {40, 40, 40, 40}, TrackerConfig{});
  EXPECT_FALSE(st.cfg.use_cn);
  EXPECT_FALSE(st.cfg.use_ch);
  EXPECT_FALSE(st.models.filters[2].has_value());
  EXPECT_FALSE(st.models.hist.has_value());
  EXPECT_NO_THROW(step(st, gray));

  TrackerConfig only_color;
  apply_feature_list(only_color, "cn,ch");
  EXPECT_THROW(init(gray, {40, 40, 40, 40}, only_color), ConfigError);
}

TEST(Tracker, AllFeaturesOffRejected) {
  TrackerConfig c;
  c.use_gray = c.use_hog = c.use_cn = c.use_ch = false;
  EXPECT_THROW(init(textured_frame(80, 80, 5), {20, 20, 30, 30}, c), ConfigError);
}

TEST(Tracker, BadBoxRejected) {
  const Image f = textured_frame(80, 80, 6);
  EXPECT_THROW(init(f, {70, 20, 30, 30}, TrackerConfig{}), InvalidInput);
  EXPECT_THROW(init(f, {20, 20, 0, 30}, TrackerConfig{}), InvalidInput);
}

TEST(Tracker, FrameSizeChangeRejected) {
  TrackerState st = init(textured_frame(100, 100, 7), {30, 30, 40, 40}, TrackerConfig{});
  EXPECT_THROW(step(st, textured_frame(100, 101, 7)), InvalidInput);
}

TEST(Tracker, SelfDetectionOnFirstFrame) {
  const Image f = textured_frame(160, 200, 8);
  const BoundingBox box{70, 50, 50, 40};
  TrackerState st = init(f, box, TrackerConfig{});
  const FrameResult r = step(st, f);
  const double cell_px = 4.0 * 100.0 / 150.0;
  EXPECT_LE(center_distance(r.box, box), cell_px);
}

TEST(Tracker, StaticSceneDoesNotDrift) {
  const Image f = textured_frame(160, 200, 9);
  const BoundingBox box{75, 55, 48, 44};
  TrackerState st = init(f, box, TrackerConfig{});
  for (int i = 0; i < 50; ++i) {
    const FrameResult r = step(st, f);
    EXPECT_LE(center_distance(r.box, box), 1.0) << "step " << i;
    EXPECT_TRUE(std::isfinite(r.peaks.q) && std::isfinite(r.peaks.t) && std::isfinite(r.peaks.s));
  }
}

TEST(Tracker, FollowsTranslation) {
  const BoundingBox box{75, 55, 48, 44};
  TrackerState st = init(textured_frame(160, 200, 10), box, TrackerConfig{});
  const FrameResult r = step(st, textured_frame(160, 200, 10, 6.0, 4.0));
  EXPECT_NEAR(r.box.center().x - box.center().x, 6.0, 1.0);
  EXPECT_NEAR(r.box.center().y - box.center().y, 4.0, 1.0);
}

TEST(Tracker, BoxStaysInsideFrame) {
  TrackerState st = init(textured_frame(90, 90, 11), {2, 2, 30, 30}, TrackerConfig{});
  for (int i = 0; i < 8; ++i) {
    const FrameResult r = step(st, textured_frame(90, 90, 11, -4.0 * (i + 1), -4.0 * (i + 1)));
    EXPECT_GE(r.box.x, 0.0);
    EXPECT_GE(r.box.y, 0.0);
    EXPECT_LE(r.box.x + r.box.w, 90.0);
    EXPECT_LE(r.box.y + r.box.h, 90.0);
    EXPECT_GE(r.box.w, 4.0);
    EXPECT_GE(r.box.h, 4.0);
  }
}

TEST(Tracker, Deterministic) {
  const auto seq = bench::gen_synthetic(bench::scenarios::translation(12));
  auto run = [&] {
    TrackerState st = init(seq.frame(0), seq.groundtruth[0], TrackerConfig{});
    std::vector<BoundingBox> out;
    for (std::size_t i = 1; i < seq.size(); ++i) out.push_back(step(st, seq.frame(i)).box);
    return out;
  };
  EXPECT_EQ(run(), run());
}

TEST(Tracker, HistoriesAppendEveryFrameAndStayBounded) {
  const Image f = textured_frame(100, 100, 12);
  TrackerConfig c;
  c.gamma_q = std::numeric_limits<double>::infinity();
  TrackerState st = init(f, {30, 30, 40, 40}, c);
  for (int i = 0; i < 14; ++i) {
    const FrameResult r = step(st, f);
    EXPECT_FALSE(r.updated);
    EXPECT_EQ(st.histories.q.size(), std::min<std::size_t>(i + 1, 10));
  }
}

TEST(Tracker, NeverUpdatingKeepsFirstFrameModels) {
  const auto seq = bench::gen_synthetic(bench::scenarios::translation(8));
  TrackerConfig c;
  const double inf = std::numeric_limits<double>::infinity();
  c.gamma_q = c.gamma_t = c.gamma_s = inf;
  TrackerState st = init(seq.frame(0), seq.groundtruth[0], c);
  const ModelSet first = st.models;
  for (std::size_t i = 1; i < seq.size(); ++i) step(st, seq.frame(i));
  for (std::size_t m = 0; m < 3; ++m) {
    EXPECT_EQ(st.models.filters[m]->denominator.values, first.filters[m]->denominator.values);
    EXPECT_EQ(st.models.filters[m]->numerator[0].values, first.filters[m]->numerator[0].values);
  }
  EXPECT_EQ(st.models.hist->weights, first.hist->weights);
  EXPECT_EQ(st.models.scale->numerator, first.scale->numerator);
}

TEST(Tracker, UpdateEndpoints) {
  const auto seq = bench::gen_synthetic(bench::scenarios::translation(3));
  TrackerState st = init(seq.frame(0), seq.groundtruth[0], TrackerConfig{});
  const ModelSet fresh = detail::learn_models(st, seq.frame(1), seq.groundtruth[1]);

  TrackerConfig zero = st.cfg;
  zero.eta_t = zero.eta_s = zero.eta_scale = 0.0;
  TrackerState a = st;
  update_models(a, fresh, zero);
  EXPECT_EQ(a.models.filters[1]->numerator[3].values, st.models.filters[1]->numerator[3].values);
  EXPECT_EQ(a.models.hist->weights, st.models.hist->weights);
  EXPECT_EQ(a.models.scale->denominator, st.models.scale->denominator);

  TrackerConfig one = st.cfg;
  one.eta_t = one.eta_s = one.eta_scale = 1.0;
  TrackerState b = st;
  update_models(b, fresh, one);
  EXPECT_EQ(b.models.filters[1]->numerator[3].values, fresh.filters[1]->numerator[3].values);
  EXPECT_EQ(b.models.hist->weights, fresh.hist->weights);
  EXPECT_EQ(b.models.scale->denominator, fresh.scale->denominator);
}

TEST(Tracker, SingleFeatureFusionIsThatFeaturesMap) {
  const auto seq = bench::gen_synthetic(bench::scenarios::translation(3));
  for (const char* feat : {"gray", "hog", "cn", "ch"}) {
    TrackerConfig c;
    apply_feature_list(c, feat);
    TrackerState st = init(seq.frame(0), seq.groundtruth[0], c);
    st.keep_maps = true;
    const FrameResult r = step(st, seq.frame(1));
    ASSERT_TRUE(r.maps.has_value());
    ASSERT_EQ(r.maps->normalized.size(), 1u);
    EXPECT_EQ(r.maps->fused.grid.values, r.maps->normalized[0].grid.values) << feat;
    EXPECT_EQ(r.maps->fused.grid.rows, 150u);
  }
}

TEST(Tracker, WrapperRequiresInit) {
  Tracker t;
  EXPECT_FALSE(t.initialized());
  EXPECT_THROW(t.update(textured_frame(50, 50, 13)), InvalidInput);
  t.init(textured_frame(80, 80, 13), {20, 20, 30, 30});
  EXPECT_TRUE(t.initialized());
  EXPECT_NO_THROW(t.update(textured_frame(80, 80, 13)));
}
