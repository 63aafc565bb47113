#pragma once

// The complete tracking loop: search-region crop, three correlation filters
// (gray, HOG, Color Names), the color-histogram model, relative-entropy fusion,
// scale estimation and the reliability-gated model update.

#include <array>
#include <cmath>
#include <deque>
#include <limits>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "etrack/chist.hpp"
#include "etrack/config.hpp"
#include "etrack/dcf.hpp"
#include "etrack/features.hpp"
#include "etrack/fusion.hpp"
#include "etrack/scale.hpp"

namespace etrack {

enum class Model : std::size_t { kGray = 0, kHog = 1, kCn = 2, kCh = 3 };
inline constexpr std::array<const char*, 4> kModelNames = {"gray", "hog", "cn", "ch"};

/// Fixed-capacity FIFO of recent peak values.
class PeakHistory {
 public:
  explicit PeakHistory(std::size_t capacity = 10) : capacity_(capacity) {}

  void push(double v) {
    values_.push_back(v);
    while (values_.size() > capacity_) values_.pop_front();
  }
  std::size_t size() const { return values_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool full() const { return values_.size() >= capacity_; }
  double mean() const {
    if (values_.empty()) return 0.0;
    return std::accumulate(values_.begin(), values_.end(), 0.0) / static_cast<double>(values_.size());
  }

 private:
  std::size_t capacity_;
  std::deque<double> values_;
};

/// Peak values of the fused map, the mean template response and the histogram response.
struct Peaks {
  double q = 0.0;
  double t = 0.0;
  double s = 0.0;
};

struct Gammas {
  double q = 0.5;
  double t = 0.7;
  double s = 0.5;
};

struct PeakHistories {
  PeakHistory q, t, s;
  explicit PeakHistories(std::size_t len = 10) : q(len), t(len), s(len) {}
};

/// Criteria that do not exist for the enabled model set (no template filter, no
/// histogram) are skipped.
struct ActiveCriteria {
  bool q = true;
  bool t = true;
  bool s = true;
};

/// True iff every active criterion c passes: its history is still warming up, or
/// peak_c > gamma_c * mean(history_c). An infinite gamma disables updates outright.
inline bool should_update(const PeakHistories& h, const Peaks& p, const Gammas& g, ActiveCriteria active = {}) {
  auto pass = [](const PeakHistory& hist, double peak, double gamma) {
    if (std::isinf(gamma)) return false;
    if (!hist.full()) return true;
    return peak > gamma * hist.mean();
  };
  return (!active.q || pass(h.q, p.q, g.q)) && (!active.t || pass(h.t, p.t, g.t)) &&
         (!active.s || pass(h.s, p.s, g.s));
}

/// Per-frame diagnostic maps, filled when TrackerState::keep_maps is set.
struct FrameMaps {
  std::vector<Model> models;
  std::vector<Grid2D> responses;            // raw model responses (cell or pixel grid)
  std::vector<ProbabilityMap> normalized;   // on the fusion grid
  ProbabilityMap fused;
};

struct FrameResult {
  BoundingBox box;
  Peaks peaks;
  bool updated = false;
  std::optional<FrameMaps> maps;
};

/// Everything one update or initialization learns from a frame.
struct ModelSet {
  std::array<std::optional<CorrelationFilter>, 3> filters;  // gray, hog, cn
  std::optional<HistogramModel> hist;
  std::optional<ScaleFilter> scale;
};

struct TrackerState {
  TrackerConfig cfg;
  std::shared_ptr<const ColorNamesTable> cn_table;
  std::size_t frame_w = 0, frame_h = 0, frame_channels = 0;

  BoundingBox box;
  ModelSet models;
  PeakHistories histories;
  std::size_t frame_index = 0;
  bool keep_maps = false;

  // Fixed per-run geometry.
  std::size_t grid = 0;  // cells per side of the template grid
  Grid2D window;
  GaussianLabel label;
};

// ---------------------------------------------------------------------------

namespace detail {

inline bool model_on(const TrackerConfig& c, Model m) {
  switch (m) {
    case Model::kGray: return c.use_gray;
    case Model::kHog: return c.use_hog;
    case Model::kCn: return c.use_cn;
    case Model::kCh: return c.use_ch;
  }
  return false;
}

inline double model_weight(const TrackerConfig& c, Model m) {
  switch (m) {
    case Model::kGray: return c.weight_gray;
    case Model::kHog: return c.weight_hog;
    case Model::kCn: return c.weight_cn;
    case Model::kCh: return c.weight_ch;
  }
  return 0.0;
}

inline bool any_template(const TrackerConfig& c) { return c.use_gray || c.use_hog || c.use_cn; }

inline BoundingBox search_region(const BoundingBox& box, const TrackerConfig& c) {
  return BoundingBox::from_center(box.center(), box.w * c.search_scale, box.h * c.search_scale);
}

// Target box in search-patch pixels.
inline BoundingBox target_in_patch(const TrackerConfig& c) {
  const double p = static_cast<double>(c.patch_size);
  const double side = p / c.search_scale;
  return BoundingBox::from_center({0.5 * p, 0.5 * p}, side, side);
}

inline FeatureMap template_features(const TrackerState& st, Model m, const Image& patch) {
  FeatureMap f;
  switch (m) {
    case Model::kGray: f = extract_gray(patch, st.cfg.cell); break;
    case Model::kHog: f = extract_hog(patch, st.cfg.cell, 9); break;
    case Model::kCn: f = extract_cn(patch, *st.cn_table, st.cfg.cell); break;
    case Model::kCh: throw InvalidInput("template_features: histogram model has no template");
  }
  apply_window(f, st.window);
  return f;
}

inline void check_frame(const TrackerState& st, const Image& frame) {
  if (frame.width != st.frame_w || frame.height != st.frame_h || frame.channels != st.frame_channels)
    throw InvalidInput("frame size or channel count changed mid-sequence");
}

inline ModelSet learn_models(const TrackerState& st, const Image& frame, const BoundingBox& box) {
  const TrackerConfig& c = st.cfg;
  ModelSet out;
  const Image patch = crop_resize(frame, search_region(box, c), c.patch_size, c.patch_size);
  for (Model m : {Model::kGray, Model::kHog, Model::kCn})
    if (model_on(c, m))
      out.filters[static_cast<std::size_t>(m)] = train_filter(template_features(st, m, patch), st.label, c.lambda);
  if (c.use_ch) {
    auto [fg, bg] = learn_hist(patch, target_in_patch(c), c.fg_shrink, c.hist_bins);
    out.hist = make_histogram_model(std::move(fg), std::move(bg));
  }
  if (c.use_scale) {
    const ScaleParams sp = c.scale_params();
    out.scale = train_scale(build_scale_samples(frame, box.center(), box.w, box.h, sp), sp.sigma, sp.lambda);
  }
  return out;
}

}  // namespace detail

/// Interpolates every model in `st` toward `fresh` with the configured rates.
inline void update_models(TrackerState& st, const ModelSet& fresh, const TrackerConfig& cfg) {
  const FilterBlend blend = cfg.blend_quotient ? FilterBlend::kQuotient : FilterBlend::kSeparate;
  for (std::size_t i = 0; i < st.models.filters.size(); ++i)
    if (st.models.filters[i] && fresh.filters[i])
      st.models.filters[i] = interpolate(*st.models.filters[i], *fresh.filters[i], cfg.eta_t, blend);
  if (st.models.hist && fresh.hist) st.models.hist = interpolate(*st.models.hist, *fresh.hist, cfg.eta_s);
  if (st.models.scale && fresh.scale) st.models.scale = interpolate(*st.models.scale, *fresh.scale, cfg.eta_scale);
}

/// Trains every enabled model on the first frame. Color models are switched off
/// for single-channel input.
inline TrackerState init(const Image& frame, const BoundingBox& box, TrackerConfig cfg,
                         std::shared_ptr<const ColorNamesTable> cn_table = nullptr) {
  if (frame.empty() || (frame.channels != 1 && frame.channels != 3))
    throw InvalidInput("init: frame must be a non-empty gray or RGB image");
  if (!frame.is_rgb()) cfg.use_cn = cfg.use_ch = false;
  cfg.validate();
  const double fw = static_cast<double>(frame.width), fh = static_cast<double>(frame.height);
  if (!box.is_valid() || box.w < 1.0 || box.h < 1.0 || box.x < 0.0 || box.y < 0.0 || box.x + box.w > fw ||
      box.y + box.h > fh)
    throw InvalidInput("init: box is degenerate or outside the frame");
  if (cfg.use_cn && !cn_table) {
    static const auto fallback = std::make_shared<const ColorNamesTable>(ColorNamesTable::fallback());
    cn_table = fallback;
  }

  TrackerState st;
  st.cfg = cfg;
  st.cn_table = std::move(cn_table);
  st.frame_w = frame.width;
  st.frame_h = frame.height;
  st.frame_channels = frame.channels;
  st.box = clamp_box(box, fw, fh);
  st.histories = PeakHistories(cfg.history_len);
  st.grid = cfg.patch_size / cfg.cell;
  st.window = hann2d(st.grid, st.grid);
  const double target_cells = static_cast<double>(cfg.patch_size) / (cfg.search_scale * static_cast<double>(cfg.cell));
  st.label = make_label(st.grid, st.grid, target_cells, target_cells, cfg.label_sigma_factor);
  st.models = detail::learn_models(st, frame, st.box);
  return st;
}

/// One tracking step on the next frame.
inline FrameResult step(TrackerState& st, const Image& frame) {
  detail::check_frame(st, frame);
  const TrackerConfig& c = st.cfg;
  const auto P = c.patch_size;
  const BoundingBox region = detail::search_region(st.box, c);
  const Image patch = crop_resize(frame, region, P, P);

  std::vector<Model> used;
  std::vector<Grid2D> responses;
  std::vector<ProbabilityMap> probs;
  std::vector<double> weights;
  Grid2D template_sum;
  std::size_t n_template = 0;

  for (Model m : {Model::kGray, Model::kHog, Model::kCn}) {
    const auto& f = st.models.filters[static_cast<std::size_t>(m)];
    if (!f) continue;
    Grid2D r = detect(*f, detail::template_features(st, m, patch));
    if (n_template++ == 0) template_sum = r;
    else
      for (std::size_t i = 0; i < r.size(); ++i) template_sum.values[i] += r.values[i];
    probs.push_back(to_prob(resample_grid(r, P, P)));
    weights.push_back(detail::model_weight(c, m));
    used.push_back(m);
    responses.push_back(std::move(r));
  }

  Peaks peaks;
  if (n_template > 0) {
    for (double& v : template_sum.values) v /= static_cast<double>(n_template);
    peaks.t = max_value(template_sum);
  }
  if (st.models.hist) {
    const BoundingBox tgt = detail::target_in_patch(c);
    const auto bh = static_cast<std::size_t>(std::clamp(std::lround(tgt.h), 1L, static_cast<long>(P)));
    const auto bw = static_cast<std::size_t>(std::clamp(std::lround(tgt.w), 1L, static_cast<long>(P)));
    Grid2D r = box_response(likelihood_map(patch, st.models.hist->weights, c.hist_bins), bh, bw);
    peaks.s = max_value(r);
    probs.push_back(to_prob(r));
    weights.push_back(detail::model_weight(c, Model::kCh));
    used.push_back(Model::kCh);
    responses.push_back(std::move(r));
  }

  ProbabilityMap q = fuse(probs, weights);
  peaks.q = max_value(q.grid);
  const GridIndex pk = peak(q);

  // Index (P-1)/2 is the zero-displacement position on the fusion grid.
  const double half = 0.5 * static_cast<double>(P) - 0.5;
  const double dx = (static_cast<double>(pk.col) - half) * region.w / static_cast<double>(P);
  const double dy = (static_cast<double>(pk.row) - half) * region.h / static_cast<double>(P);
  const double fw = static_cast<double>(st.frame_w), fh = static_cast<double>(st.frame_h);
  const Point2 ctr = st.box.center();
  BoundingBox box = clamp_box(BoundingBox::from_center({ctr.x + dx, ctr.y + dy}, st.box.w, st.box.h), fw, fh);

  if (st.models.scale) {
    const ScaleParams sp = c.scale_params();
    const double mult = detect_scale(*st.models.scale, build_scale_samples(frame, box.center(), box.w, box.h, sp), sp);
    box = apply_scale(box, mult, fw, fh);
  }

  const Gammas g{c.gamma_q, c.gamma_t, c.gamma_s};
  const ActiveCriteria active{true, n_template > 0, st.models.hist.has_value()};
  const bool upd = should_update(st.histories, peaks, g, active);

  st.box = box;
  if (upd) update_models(st, detail::learn_models(st, frame, box), c);
  st.histories.q.push(peaks.q);
  if (active.t) st.histories.t.push(peaks.t);
  if (active.s) st.histories.s.push(peaks.s);
  ++st.frame_index;

  FrameResult res{box, peaks, upd, std::nullopt};
  if (st.keep_maps) res.maps = FrameMaps{std::move(used), std::move(responses), std::move(probs), std::move(q)};
  return res;
}

/// Convenience wrapper owning a TrackerState.
class Tracker {
 public:
  explicit Tracker(TrackerConfig cfg = {}, std::shared_ptr<const ColorNamesTable> cn_table = nullptr)
      : cfg_(std::move(cfg)), table_(std::move(cn_table)) {}

  void init(const Image& frame, const BoundingBox& box) { state_ = etrack::init(frame, box, cfg_, table_); }
  FrameResult update(const Image& frame) {
    if (!state_) throw InvalidInput("Tracker::update called before init");
    return etrack::step(*state_, frame);
  }
  bool initialized() const { return state_.has_value(); }
  const TrackerState& state() const { return *state_; }
  TrackerState& state() { return *state_; }

 private:
  TrackerConfig cfg_;
  std::shared_ptr<const ColorNamesTable> table_;
  std::optional<TrackerState> state_;
};

}  // namespace etrack
