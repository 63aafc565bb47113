#pragma once

// Color-histogram statistical model: per-bin foreground/background ratio weights
// and a dense box-mean response evaluated through an integral image.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "etrack/core.hpp"
#include "etrack/features.hpp"

namespace etrack {

struct HistogramModel {
  std::vector<double> fg_hist;
  std::vector<double> bg_hist;
  std::vector<double> weights;

  bool empty() const { return weights.empty(); }
};

namespace detail {

inline bool pixel_in_box(std::size_t r, std::size_t c, const BoundingBox& b) {
  const double py = static_cast<double>(r) + 0.5, px = static_cast<double>(c) + 0.5;
  return px >= b.x && px < b.x + b.w && py >= b.y && py < b.y + b.h;
}

inline void normalize(std::vector<double>& h) {
  double s = 0.0;
  for (double v : h) s += v;
  if (s > 0.0)
    for (double& v : h) v /= s;
}

}  // namespace detail

/// Foreground = `fg` shrunk about its center by `shrink`; background = every patch
/// pixel outside the unshrunk `fg`. A pixel belongs to a box when its center does.
inline std::pair<std::vector<double>, std::vector<double>> learn_hist(const Image& patch, const BoundingBox& fg,
                                                                      double shrink = 0.85,
                                                                      std::size_t bins = kColorBins) {
  if (!patch.is_rgb()) throw InvalidInput("learn_hist: RGB patch required");
  const BoundingBox inner = BoundingBox::from_center(fg.center(), fg.w * shrink, fg.h * shrink);
  if (inner.w < 1.0 || inner.h < 1.0) throw InvalidInput("learn_hist: empty foreground region");

  const std::size_t n = bins * bins * bins;
  std::vector<double> fgh(n, 0.0), bgh(n, 0.0);
  std::size_t fg_count = 0;
  for (std::size_t r = 0; r < patch.height; ++r)
    for (std::size_t c = 0; c < patch.width; ++c) {
      const std::uint32_t k = pixel_bin_index(patch, r, c, bins);
      if (detail::pixel_in_box(r, c, inner)) {
        fgh[k] += 1.0;
        ++fg_count;
      } else if (!detail::pixel_in_box(r, c, fg)) {
        bgh[k] += 1.0;
      }
    }
  if (fg_count == 0) throw InvalidInput("learn_hist: foreground contains no pixel centers");
  detail::normalize(fgh);
  detail::normalize(bgh);
  return {std::move(fgh), std::move(bgh)};
}

/// weights[k] = fg[k] / (fg[k] + bg[k]), or 0 for bins seen in neither region.
inline std::vector<double> hist_weights(const std::vector<double>& fg, const std::vector<double>& bg) {
  if (fg.size() != bg.size()) throw InvalidInput("hist_weights: histogram sizes differ");
  std::vector<double> w(fg.size(), 0.0);
  // Extended precision so the ratio is rounded once, e.g. (0.3, 0.1) -> 0.75 exactly.
  for (std::size_t k = 0; k < fg.size(); ++k) {
    const long double s = static_cast<long double>(fg[k]) + static_cast<long double>(bg[k]);
    if (s > 0.0L) w[k] = static_cast<double>(static_cast<long double>(fg[k]) / s);
  }
  return w;
}

inline HistogramModel make_histogram_model(std::vector<double> fg, std::vector<double> bg) {
  HistogramModel m;
  m.weights = hist_weights(fg, bg);
  m.fg_hist = std::move(fg);
  m.bg_hist = std::move(bg);
  return m;
}

/// Blends histograms with rate eta and recomputes the weights. An all-zero side
/// (e.g. an empty background) is replaced rather than blended.
inline HistogramModel interpolate(const HistogramModel& old, const HistogramModel& fresh, double eta) {
  auto blend = [eta](const std::vector<double>& a, const std::vector<double>& b) {
    const bool a_zero = std::all_of(a.begin(), a.end(), [](double v) { return v == 0.0; });
    const bool b_zero = std::all_of(b.begin(), b.end(), [](double v) { return v == 0.0; });
    if (a_zero) return b;
    if (b_zero) return a;
    std::vector<double> out(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) out[k] = (1.0 - eta) * a[k] + eta * b[k];
    return out;
  };
  if (old.fg_hist.size() != fresh.fg_hist.size()) throw InvalidInput("interpolate: histogram sizes differ");
  return make_histogram_model(blend(old.fg_hist, fresh.fg_hist), blend(old.bg_hist, fresh.bg_hist));
}

/// Per-pixel object likelihood: the weight of the pixel's color bin.
inline Grid2D likelihood_map(const Image& patch, const std::vector<double>& weights, std::size_t bins = kColorBins) {
  if (!patch.is_rgb()) throw InvalidInput("likelihood_map: RGB patch required");
  if (weights.size() != bins * bins * bins) throw InvalidInput("likelihood_map: weight table size mismatch");
  Grid2D out(patch.height, patch.width);
  for (std::size_t r = 0; r < patch.height; ++r)
    for (std::size_t c = 0; c < patch.width; ++c) out(r, c) = weights[pixel_bin_index(patch, r, c, bins)];
  return out;
}

/// Summed-area table with a zero first row/column: at(i+1, j+1) = sum of src[0..i][0..j].
class IntegralImage {
 public:
  explicit IntegralImage(const Grid2D& src) : sums_(src.rows + 1, src.cols + 1) {
    for (std::size_t i = 0; i < src.rows; ++i)
      for (std::size_t j = 0; j < src.cols; ++j)
        sums_(i + 1, j + 1) = src(i, j) + sums_(i + 1, j) + sums_(i, j + 1) - sums_(i, j);
  }

  // Sum over rows [r0, r1) x cols [c0, c1).
  double window_sum(std::size_t r0, std::size_t c0, std::size_t r1, std::size_t c1) const {
    return sums_(r1, c1) - sums_(r0, c1) - sums_(r1, c0) + sums_(r0, c0);
  }

  const Grid2D& table() const { return sums_; }

 private:
  Grid2D sums_;
};

/// Mean of `likelihood` over the box_h x box_w window centered on each cell
/// (rows m - box_h/2 .. m - box_h/2 + box_h - 1); windows are clipped at the
/// border and averaged over the clipped area.
inline Grid2D box_response(const Grid2D& likelihood, std::size_t box_h, std::size_t box_w) {
  if (box_h < 1 || box_w < 1) throw InvalidInput("box_response: box must be >= 1");
  if (box_h > likelihood.rows || box_w > likelihood.cols) throw InvalidInput("box_response: box larger than map");
  const IntegralImage ii(likelihood);
  const auto rows = static_cast<std::ptrdiff_t>(likelihood.rows);
  const auto cols = static_cast<std::ptrdiff_t>(likelihood.cols);
  const auto hh = static_cast<std::ptrdiff_t>(box_h), hw = static_cast<std::ptrdiff_t>(box_w);

  Grid2D out(likelihood.rows, likelihood.cols);
  for (std::ptrdiff_t m = 0; m < rows; ++m) {
    const std::ptrdiff_t r0 = std::max<std::ptrdiff_t>(0, m - hh / 2);
    const std::ptrdiff_t r1 = std::min(rows, m - hh / 2 + hh);
    for (std::ptrdiff_t n = 0; n < cols; ++n) {
      const std::ptrdiff_t c0 = std::max<std::ptrdiff_t>(0, n - hw / 2);
      const std::ptrdiff_t c1 = std::min(cols, n - hw / 2 + hw);
      const double area = static_cast<double>((r1 - r0) * (c1 - c0));
      out(static_cast<std::size_t>(m), static_cast<std::size_t>(n)) =
          ii.window_sum(static_cast<std::size_t>(r0), static_cast<std::size_t>(c0), static_cast<std::size_t>(r1),
                        static_cast<std::size_t>(c1)) /
          area;
    }
  }
  return out;
}

}  // namespace etrack
